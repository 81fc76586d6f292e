use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Var, VarSet};
use crate::error::{Error, FieldError, Result};
use crate::field::{FieldDescriptor, FieldElem, GaloisSigns};

/// Point assignment used by evaluation.
pub type Point = BTreeMap<Var, FieldElem>;

/// Sparse polynomial over a [`FieldElem`] coefficient field, keyed by graded-lex monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: FieldDescriptor,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MultiPoly {
    pub fn zero(field: FieldDescriptor) -> Self {
        MultiPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::constant(FieldElem::one(field))
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(field: FieldDescriptor, n: i64) -> Self {
        Self::constant(FieldElem::from_int(field, n))
    }

    pub fn var(field: FieldDescriptor, v: Var) -> Self {
        Self::term(FieldElem::one(field), Monomial::var(v))
    }

    pub fn term(c: FieldElem, m: Monomial) -> Self {
        let mut p = Self::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(field: FieldDescriptor, terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub(crate) fn from_map_unchecked(field: FieldDescriptor, terms: BTreeMap<Monomial, FieldElem>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        MultiPoly { field, terms }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(FieldElem::zero(self.field)),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&FieldElem> {
        self.terms.get(m)
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    /// Leading term under plain lex.
    pub fn leading_lex(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_lex(b.0))
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map_or(0, |(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            s.extend(m.iter().map(|(v, _)| v));
        }
        s
    }

    pub fn add_term(&mut self, m: Monomial, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &FieldElem) {
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(-c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() -= c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.sub_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        if c.is_one() {
            return self.clone();
        }
        MultiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> MultiPoly {
        if q.is_zero() {
            return Self::zero(self.field);
        }
        MultiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.scale(q))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        if m.is_one() {
            return self.clone();
        }
        MultiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        MultiPoly {
            field: self.field,
            terms: self.terms.iter().map(|(k, d)| (k.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        if other.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_term(m, c);
        }
        if self.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_term(m, c);
        }
        if self.len() * other.len() < 16 {
            return self.mul_rational(other);
        }
        self.mul_integral(other)
    }

    fn mul_rational(&self, other: &MultiPoly) -> MultiPoly {
        let mut acc: HashMap<Monomial, FieldElem> =
            HashMap::with_capacity(self.len().max(other.len()) * 2);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                acc.entry(m1.mul(m2))
                    .or_insert_with(|| FieldElem::zero(self.field))
                    .add_mul(c1, c2);
            }
        }
        MultiPoly {
            field: self.field,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Coefficients scaled by the lcm of all coordinate denominators.
    fn integral(&self) -> (BigInt, Vec<(&Monomial, Vec<BigInt>)>) {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            for q in c.coords() {
                if !q.is_zero() && !q.denom().is_one() {
                    l = l.lcm(q.denom());
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let ints = c
                    .coords()
                    .iter()
                    .map(|q| {
                        if q.denom() == &l {
                            q.numer().clone()
                        } else {
                            q.numer() * (&l / q.denom())
                        }
                    })
                    .collect();
                (m, ints)
            })
            .collect();
        (l, terms)
    }

    // Products of rationals with unrelated denominators pay a gcd per operation; clearing
    // denominators first leaves one reduction per output coordinate.
    fn mul_integral(&self, other: &MultiPoly) -> MultiPoly {
        let f = self.field;
        let width = f.degree();
        let squares: Vec<BigInt> = (0..width).map(|m| BigInt::from(f.basis_square(m))).collect();
        let (la, a) = self.integral();
        let (lb, b) = other.integral();
        let mut acc: HashMap<Monomial, Vec<BigInt>> = HashMap::with_capacity(a.len() * b.len());
        for (m1, c1) in &a {
            for (m2, c2) in &b {
                let slot = acc
                    .entry(m1.mul(m2))
                    .or_insert_with(|| vec![BigInt::zero(); width]);
                for (i, x) in c1.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in c2.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let t = x * y;
                        let sq = &squares[i & j];
                        if sq.is_one() {
                            slot[i ^ j] += t;
                        } else {
                            slot[i ^ j] += t * sq;
                        }
                    }
                }
            }
        }
        let den = la * lb;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.iter().any(|x| !x.is_zero()))
            .map(|(m, c)| {
                let coords = c.into_iter().map(|x| BigRational::new(x, den.clone())).collect();
                (m, FieldElem::from_coords(f, coords).expect("width matches"))
            })
            .collect();
        MultiPoly { field: f, terms }
    }

    pub fn square(&self) -> MultiPoly {
        self.mul(self)
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn galois(&self, s: GaloisSigns) -> MultiPoly {
        if s.is_identity() {
            return self.clone();
        }
        MultiPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.galois(s)))
                .collect(),
        }
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let mut out = Self::zero(self.field);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let (rest, _) = m.without(v);
            let nm = rest.mul(&Monomial::var_pow(v, e - 1));
            out.terms
                .insert(nm, c.scale(&BigRational::from_integer(e.into())));
        }
        out
    }

    pub fn eval(&self, point: &Point) -> Result<FieldElem> {
        let mut powers: HashMap<(Var, u32), FieldElem> = HashMap::new();
        let mut acc = FieldElem::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = point
                    .get(&v)
                    .ok_or_else(|| Error::Unassigned(format!("#{}", v.0)))?;
                if x.field() != self.field {
                    return Err(FieldError::DescriptorMismatch(self.field, x.field()).into());
                }
                let p = powers.entry((v, e)).or_insert_with(|| x.pow(e));
                t = &t * p;
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Scale so the graded-lex leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inverse().ok()?;
        if d.len() == 1 {
            let mut q = Self::zero(self.field);
            for (m, c) in &self.terms {
                q.terms.insert(m.div(&lm)?, c * &lc_inv);
            }
            return Some(q);
        }
        let mut r = self.clone();
        let mut q = Self::zero(self.field);
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            if qm.degree() + d.total_degree() > m.degree() {
                return None;
            }
            let qc = &c * &lc_inv;
            for (dm, dc) in &d.terms {
                r.sub_term(dm.mul(&qm), &(dc * &qc));
            }
            debug_assert!(r.coeff(&m).is_none());
            q.terms.insert(qm, qc);
        }
        Some(q)
    }

    /// Componentwise minimum of all exponents.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MultiPoly> {
        if m.is_one() {
            return Some(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(MultiPoly {
            field: self.field,
            terms,
        })
    }

    /// Group terms by the exponent of `v`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            out.entry(e)
                .or_insert_with(|| Self::zero(self.field))
                .terms
                .insert(rest, c.clone());
        }
        out
    }

    pub fn lift(&self, field: FieldDescriptor) -> std::result::Result<MultiPoly, FieldError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.lift(field)?);
        }
        Ok(MultiPoly { field, terms })
    }

    pub fn display<'a>(&'a self, vars: &'a VarSet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})*{:?}", c, m)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    vars: &'a VarSet,
}

pub(crate) fn fmt_monomial(m: &Monomial, vars: &VarSet) -> String {
    let parts: Vec<String> = m
        .iter()
        .map(|(v, e)| {
            if e == 1 {
                vars.name(v).to_string()
            } else {
                format!("{}^{}", vars.name(v), e)
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let single = self.poly.len() == 1;
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            // pull the sign out of single-coordinate coefficients
            let nonzero: Vec<usize> = (0..c.coords().len())
                .filter(|&i| !c.coords()[i].is_zero())
                .collect();
            let (neg, body) = if nonzero.len() == 1 && c.coords()[nonzero[0]].is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let coeff = body.to_string();
            let compound = nonzero.len() > 1;
            if m.is_one() {
                if compound && !single {
                    write!(f, "({})", coeff)?;
                } else {
                    f.write_str(&coeff)?;
                }
            } else if body.is_one() {
                f.write_str(&fmt_monomial(m, self.vars))?;
            } else if compound {
                write!(f, "({})*{}", coeff, fmt_monomial(m, self.vars))?;
            } else {
                write!(f, "{}*{}", coeff, fmt_monomial(m, self.vars))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::RATIONALS
    }

    fn x() -> MultiPoly {
        MultiPoly::var(q(), Var(0))
    }

    fn y() -> MultiPoly {
        MultiPoly::var(q(), Var(1))
    }

    fn c(n: i64) -> MultiPoly {
        MultiPoly::from_int(q(), n)
    }

    #[test]
    fn arithmetic() {
        let p = x().add(&c(1));
        let sq = p.square();
        assert_eq!(sq, x().square().add(&x().scale(&FieldElem::from_int(q(), 2))).add(&c(1)));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.pow(3).len(), 4);
    }

    #[test]
    fn exact_division() {
        let a = x().square().sub(&c(1));
        let b = x().sub(&c(1));
        assert_eq!(a.div_exact(&b), Some(x().add(&c(1))));
        assert_eq!(a.div_exact(&x()), None);
        let f = x().add(&y()).square().mul(&x());
        assert_eq!(f.div_exact(&x().add(&y())), Some(x().add(&y()).mul(&x())));
    }

    #[test]
    fn derivative_and_eval() {
        let p = x().pow(3).mul(&y()).add(&c(5));
        let d = p.derivative(Var(0));
        assert_eq!(d, x().square().mul(&y()).scale(&FieldElem::from_int(q(), 3)));
        let mut pt = Point::new();
        pt.insert(Var(0), FieldElem::from_int(q(), 2));
        pt.insert(Var(1), FieldElem::from_int(q(), 3));
        assert_eq!(p.eval(&pt).unwrap(), FieldElem::from_int(q(), 29));
    }

    #[test]
    fn render() {
        let vs = VarSet::from_names(&["x", "y"]);
        let p = x().square().sub(&x().mul(&y()).scale(&FieldElem::from_int(q(), 3))).sub(&c(1));
        assert_eq!(p.display(&vs).to_string(), "x^2 - 3*x*y - 1");
        let f = FieldDescriptor::new(&[-1]).unwrap();
        let i = FieldElem::basis(f, 1);
        let one = FieldElem::one(f);
        let p = MultiPoly::term(&one + &i, Monomial::var(Var(0))).add(&MultiPoly::constant(&one - &i));
        assert_eq!(p.display(&vs).to_string(), "(1 + sqrt(-1))*x + (1 - sqrt(-1))");
        let p = MultiPoly::term(-&i, Monomial::var(Var(1)));
        assert_eq!(p.display(&vs).to_string(), "-sqrt(-1)*y");
    }
}
