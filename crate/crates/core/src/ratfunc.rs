//! Reduced fractions of sparse polynomials.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElem, GaloisSigns};
use crate::poly::gcd::gcd_cofactors;
use crate::poly::{MultiPoly, Point, Var, VarSet};

/// Variable map used by [`RatFunc::substitute`]; unmapped variables stay fixed.
pub type Substitution = BTreeMap<Var, RatFunc>;

/// `num / den` with `gcd(num, den) = 1` and `den` monic under graded-lex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn zero(field: FieldDescriptor) -> Self {
        Self::from_poly(MultiPoly::zero(field))
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::from_poly(MultiPoly::one(field))
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(field: FieldDescriptor, n: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(field, n))
    }

    pub fn var(field: FieldDescriptor, v: Var) -> Self {
        Self::from_poly(MultiPoly::var(field, v))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.field());
        }
        if den.is_constant() {
            return Self::coprime(num, den);
        }
        let (_, n, d) = gcd_cofactors(&num, &den);
        Self::coprime(n, d)
    }

    /// Normalize the denominator's leading coefficient; inputs must already be coprime.
    fn coprime(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let inv = lc.inverse().expect("nonzero");
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    /// Recompute the canonical form from scratch.
    pub fn canonicalize(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn field(&self) -> FieldDescriptor {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Number of stored terms in numerator and denominator.
    pub fn size(&self) -> (usize, usize) {
        (self.num.len(), self.den.len())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn as_var(&self) -> Option<Var> {
        if !self.den.is_one() || self.num.len() != 1 {
            return None;
        }
        let (m, c) = self.num.leading()?;
        if !c.is_one() || m.degree() != 1 {
            return None;
        }
        m.iter().next().map(|(v, _)| v)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return Self::coprime(self.num.mul(&other.den).add(&other.num), other.den.clone());
        }
        if other.den.is_one() {
            return Self::coprime(other.num.mul(&self.den).add(&self.num), self.den.clone());
        }
        let (g, b1, d1) = gcd_cofactors(&self.den, &other.den);
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero(self.field());
        }
        if g.is_one() {
            return Self::coprime(num, b1.mul(&other.den));
        }
        let (_, n, g1) = gcd_cofactors(&num, &g);
        Self::coprime(n, b1.mul(&d1).mul(&g1))
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        let (a, d) = if other.den.is_one() || self.num.is_constant() {
            (self.num.clone(), other.den.clone())
        } else {
            let (_, a, d) = gcd_cofactors(&self.num, &other.den);
            (a, d)
        };
        let (c, b) = if self.den.is_one() || other.num.is_constant() {
            (other.num.clone(), self.den.clone())
        } else {
            let (_, c, b) = gcd_cofactors(&other.num, &self.den);
            (c, b)
        };
        Self::coprime(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        if k < 0 {
            if self.is_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            return self.inv()?.pow(-k);
        }
        let k = k as u32;
        Ok(RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        })
    }

    pub fn scale(&self, c: &FieldElem) -> RatFunc {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Conjugate every coefficient.
    pub fn galois(&self, s: GaloisSigns) -> RatFunc {
        if s.is_identity() {
            return self.clone();
        }
        // conjugation keeps the leading coefficient 1
        RatFunc {
            num: self.num.galois(s),
            den: self.den.galois(s),
        }
    }

    pub fn lift(&self, field: FieldDescriptor) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.lift(field)?,
            den: self.den.lift(field)?,
        })
    }

    /// Compose with a variable map.
    pub fn substitute(&self, m: &Substitution) -> Result<RatFunc> {
        let live: BTreeMap<Var, &RatFunc> = m
            .iter()
            .filter(|(v, f)| f.as_var() != Some(**v))
            .map(|(v, f)| (*v, f))
            .collect();
        let vars = self.vars();
        if !live.keys().any(|v| vars.contains(v)) {
            return Ok(self.clone());
        }
        let mut cache = PowCache::default();
        let (a, da) = subst_numerator(&self.num, &live, &mut cache);
        let (b, db) = subst_numerator(&self.den, &live, &mut cache);
        if b.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        // f(m) = a / b * prod d_v^(db_v - da_v)
        let mut num = a;
        let mut den = b;
        for (v, img) in &live {
            let ea = da.get(v).copied().unwrap_or(0) as i64;
            let eb = db.get(v).copied().unwrap_or(0) as i64;
            if img.den.is_one() || ea == eb {
                continue;
            }
            if eb > ea {
                num = num.mul(&img.den.pow((eb - ea) as u32));
            } else {
                den = den.mul(&img.den.pow((ea - eb) as u32));
            }
        }
        Ok(Self::reduce(num, den))
    }

    pub fn differentiate(&self, v: Var) -> RatFunc {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::reduce(num, self.den.square())
    }

    /// Value of `d/dv` at `point` by the quotient rule, without forming the derivative.
    pub fn partial_at(&self, v: Var, point: &Point) -> Result<FieldElem> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let dn = self.num.derivative(v).eval(point)?;
        if self.den.is_constant() {
            return Ok(&dn * &d.inverse()?);
        }
        let n = self.num.eval(point)?;
        let dd = self.den.derivative(v).eval(point)?;
        let top = &(&dn * &d) - &(&n * &dd);
        Ok(&top * &(&d * &d).inverse()?)
    }

    pub fn eval(&self, point: &Point) -> Result<FieldElem> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let n = self.num.eval(point)?;
        Ok(&n * &d.inverse()?)
    }

    /// Authoritative equality: `f.num * g.den - g.num * f.den == 0`.
    pub fn eq_exact(&self, other: &RatFunc) -> bool {
        if self == other {
            return true;
        }
        if self.den == other.den {
            return false;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn display<'a>(&'a self, vars: &'a VarSet) -> RatDisplay<'a> {
        RatDisplay { f: self, vars }
    }
}

#[derive(Default)]
struct PowCache {
    nd: HashMap<(Var, u32, u32), MultiPoly>,
}

impl PowCache {
    /// `num^k * den^(total - k)` for the image of `v`.
    fn get(&mut self, v: Var, img: &RatFunc, k: u32, total: u32) -> MultiPoly {
        if let Some(p) = self.nd.get(&(v, k, total)) {
            return p.clone();
        }
        let p = if img.den.is_one() {
            self.num_pow(v, img, k)
        } else {
            let a = self.num_pow(v, img, k);
            let b = self.den_pow(v, img, total - k);
            a.mul(&b)
        };
        self.nd.insert((v, k, total), p.clone());
        p
    }

    fn num_pow(&mut self, v: Var, img: &RatFunc, k: u32) -> MultiPoly {
        // key with total = u32::MAX marks a bare numerator power
        self.pow_of(v, u32::MAX, k, &img.num)
    }

    fn den_pow(&mut self, v: Var, img: &RatFunc, k: u32) -> MultiPoly {
        self.pow_of(v, u32::MAX - 1, k, &img.den)
    }

    fn pow_of(&mut self, v: Var, tag: u32, k: u32, base: &MultiPoly) -> MultiPoly {
        if k == 0 {
            return MultiPoly::one(base.field());
        }
        if k == 1 {
            return base.clone();
        }
        if let Some(p) = self.nd.get(&(v, k, tag)) {
            return p.clone();
        }
        let half = self.pow_of(v, tag, k / 2, base);
        let mut p = half.square();
        if k % 2 == 1 {
            p = p.mul(base);
        }
        self.nd.insert((v, k, tag), p.clone());
        p
    }
}

/// Numerator of `p(m)` over the common denominator `prod d_v^(deg_v p)`; also returns the degrees.
fn subst_numerator(
    p: &MultiPoly,
    m: &BTreeMap<Var, &RatFunc>,
    cache: &mut PowCache,
) -> (MultiPoly, BTreeMap<Var, u32>) {
    let vars = p.vars();
    let order: Vec<Var> = m.keys().copied().filter(|v| vars.contains(v)).collect();
    let degs: BTreeMap<Var, u32> = order.iter().map(|&v| (v, p.degree_in(v))).collect();
    let out = subst_rec(p, &order, 0, &degs, m, cache);
    (out, degs)
}

fn subst_rec(
    p: &MultiPoly,
    order: &[Var],
    i: usize,
    degs: &BTreeMap<Var, u32>,
    m: &BTreeMap<Var, &RatFunc>,
    cache: &mut PowCache,
) -> MultiPoly {
    if i == order.len() || p.is_zero() {
        return p.clone();
    }
    let v = order[i];
    let total = degs[&v];
    let img = m[&v];
    let mut acc = MultiPoly::zero(p.field());
    for (k, pk) in p.coefficients_in(v) {
        let inner = subst_rec(&pk, order, i + 1, degs, m, cache);
        if inner.is_zero() {
            continue;
        }
        let factor = cache.get(v, img, k, total);
        acc = acc.add(&inner.mul(&factor));
    }
    acc
}

pub struct RatDisplay<'a> {
    f: &'a RatFunc,
    vars: &'a VarSet,
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.f.num.display(self.vars).to_string();
        if self.f.den.is_one() {
            return out.write_str(&num);
        }
        let den = self.f.den.display(self.vars).to_string();
        let num_atomic = !num.contains([' ', '*', '/']) && !num.starts_with('-');
        let den_atomic = !den.contains([' ', '*', '/', '^']);
        match (num_atomic, den_atomic) {
            (true, true) => write!(out, "{}/{}", num, den),
            (true, false) => write!(out, "{}/({})", num, den),
            (false, true) => write!(out, "({})/{}", num, den),
            (false, false) => write!(out, "({})/({})", num, den),
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

/// Random rational in `[-bound, bound]` with denominator at most `bound`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: u64) -> BigRational {
    let b = bound.max(1) as i64;
    let n = rng.gen_range(-b..=b);
    let d = rng.gen_range(1..=b);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_point<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldDescriptor,
    vars: impl IntoIterator<Item = Var>,
    bound: u64,
) -> Point {
    vars.into_iter()
        .map(|v| (v, FieldElem::from_rational(field, random_rational(rng, bound))))
        .collect()
}

/// Retries per trial before a trial is skipped because every sampled point was a pole.
pub const POLE_RETRIES: usize = 20;

/// Schwartz-Zippel comparison; `false` is definitive.
pub fn probable_eq<R: Rng + ?Sized>(f: &RatFunc, g: &RatFunc, trials: usize, bound: u64, rng: &mut R) -> bool {
    let mut vars = f.vars();
    vars.extend(g.vars());
    let field = f.field();
    for _ in 0..trials.max(1) {
        for _ in 0..POLE_RETRIES {
            let pt = random_point(rng, field, vars.iter().copied(), bound);
            match (f.eval(&pt), g.eval(&pt)) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        return false;
                    }
                    break;
                }
                _ => continue,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> FieldDescriptor {
        FieldDescriptor::RATIONALS
    }

    fn v(i: u32) -> RatFunc {
        RatFunc::var(q(), Var(i))
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::from_int(q(), n)
    }

    #[test]
    fn reduce_quotient() {
        let x = v(0);
        let f = x.pow(2).unwrap().sub(&c(1)).div(&x.sub(&c(1))).unwrap();
        assert_eq!(f, x.add(&c(1)));
        assert!(f.eq_exact(&x.add(&c(1))));
        assert!(!x.eq_exact(&x.add(&c(1))));
        assert!(f.add(&f.neg()).is_zero());
    }

    #[test]
    fn involution_substitution() {
        let x = v(0);
        let t = v(1);
        let f = c(1).sub(&x).div(&c(1).add(&x)).unwrap();
        let img = c(1).sub(&t).div(&c(1).add(&t)).unwrap();
        let m: Substitution = [(Var(0), img)].into_iter().collect();
        assert_eq!(f.substitute(&m).unwrap(), t);
        let inv: Substitution = [(Var(0), x.inv().unwrap())].into_iter().collect();
        assert_eq!(x.substitute(&inv).unwrap().substitute(&inv).unwrap(), x);
    }

    #[test]
    fn vanishing_denominator() {
        let x = v(0);
        let y = v(1);
        let f = c(1).div(&x.sub(&y)).unwrap();
        let m: Substitution = [(Var(0), y.clone())].into_iter().collect();
        assert_eq!(f.substitute(&m), Err(Error::DenominatorVanishes));
    }

    #[test]
    fn derivatives() {
        let x = v(0);
        assert_eq!(x.pow(2).unwrap().differentiate(Var(0)), x.scale(&FieldElem::from_int(q(), 2)));
        assert_eq!(
            x.inv().unwrap().differentiate(Var(0)),
            x.pow(-2).unwrap().neg()
        );
        let z = v(1).div(&v(2)).unwrap();
        assert_eq!(z.differentiate(Var(1)), v(2).inv().unwrap());
    }

    #[test]
    fn evaluation() {
        let f = v(0).div(&v(1)).unwrap();
        let mut pt = Point::new();
        pt.insert(Var(0), FieldElem::from_int(q(), 1));
        pt.insert(Var(1), FieldElem::from_int(q(), 2));
        assert_eq!(
            f.eval(&pt).unwrap(),
            FieldElem::from_rational(q(), BigRational::new(1.into(), 2.into()))
        );
        let g = v(0).inv().unwrap();
        let mut z = Point::new();
        z.insert(Var(0), FieldElem::zero(q()));
        assert_eq!(g.eval(&z), Err(Error::PoleAtPoint));
    }

    #[test]
    fn probabilistic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = v(0);
        assert!(!probable_eq(&x, &x.add(&c(1)), 20, 100, &mut rng));
        let a = x.add(&c(1)).pow(2).unwrap();
        let b = x.pow(2).unwrap().add(&x.scale(&FieldElem::from_int(q(), 2))).add(&c(1));
        assert!(probable_eq(&a, &b, 20, 100, &mut rng));
    }

    #[test]
    fn render() {
        let vs = VarSet::from_names(&["x", "y"]);
        let f = v(0).add(&c(1)).div(&v(0).mul(&v(1))).unwrap();
        assert_eq!(f.display(&vs).to_string(), "(x + 1)/(x*y)");
        let g = c(-1).div(&v(1)).unwrap();
        assert_eq!(g.display(&vs).to_string(), "(-1)/y");
    }

    #[test]
    fn canonical_denominator() {
        let x = v(0);
        let f = c(3).div(&x.scale(&FieldElem::from_int(q(), 2)).add(&c(4))).unwrap();
        assert!(f.den().leading().unwrap().1.is_one());
        assert_eq!(f.canonicalize(), f);
    }
}
