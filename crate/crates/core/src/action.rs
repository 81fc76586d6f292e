//! Automorphisms of coefficient-extended rational function fields.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElem, GaloisSigns};
use crate::matgroup::{close, RatMatrix, DEFAULT_CAP};
use crate::poly::{Monomial, MultiPoly, Point, Var, VarSet};
use crate::ratfunc::{random_point, RatFunc, Substitution};

pub const ORDER_CAP: usize = 64;

/// How a matrix acts on the variable list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `x_j -> sum_i a_ij x_i`.
    Column,
    /// `x_i -> sum_j a_ij x_j`. Gives an anti-homomorphism; kept as a negative control.
    Row,
}

/// Galois action on coefficients followed by a variable substitution.
///
/// Unmapped variables are fixed. Identity entries are dropped so that equal
/// automorphisms compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldAutomorphism {
    field: FieldDescriptor,
    signs: GaloisSigns,
    subst: Substitution,
}

impl FieldAutomorphism {
    pub fn identity(field: FieldDescriptor) -> Self {
        FieldAutomorphism {
            field,
            signs: GaloisSigns::IDENTITY,
            subst: Substitution::new(),
        }
    }

    pub fn new(field: FieldDescriptor, signs: GaloisSigns, subst: Substitution) -> Result<Self> {
        debug_assert!(signs.fits(&field));
        let mut out = Substitution::new();
        for (v, f) in subst {
            let f = if f.field() == field { f } else { f.lift(field)? };
            if f.as_var() != Some(v) {
                out.insert(v, f);
            }
        }
        Ok(FieldAutomorphism {
            field,
            signs,
            subst: out,
        })
    }

    pub fn from_matrix(m: &RatMatrix, vars: &[Var], field: FieldDescriptor) -> Result<Self> {
        Self::from_matrix_with(m, vars, field, Convention::Column)
    }

    pub fn from_matrix_with(
        m: &RatMatrix,
        vars: &[Var],
        field: FieldDescriptor,
        conv: Convention,
    ) -> Result<Self> {
        if m.dim() != vars.len() {
            return Err(Error::Dimension {
                expected: vars.len(),
                got: m.dim(),
            });
        }
        if m.det().is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut subst = Substitution::new();
        for (j, &xj) in vars.iter().enumerate() {
            let mut p = MultiPoly::zero(field);
            for (i, &xi) in vars.iter().enumerate() {
                let a = match conv {
                    Convention::Column => m.get(i, j),
                    Convention::Row => m.get(j, i),
                };
                if !a.is_zero() {
                    p.add_term(Monomial::var(xi), &FieldElem::from_rational(field, a.clone()));
                }
            }
            subst.insert(xj, RatFunc::from_poly(p));
        }
        Self::new(field, GaloisSigns::IDENTITY, subst)
    }

    /// `x_j -> b_j * prod_i x_i^(a_ij)`.
    pub fn monomial(exps: &[Vec<i64>], coeffs: &[FieldElem], vars: &[Var]) -> Result<Self> {
        let n = vars.len();
        if exps.len() != n || coeffs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: exps.len().max(coeffs.len()),
            });
        }
        let rows = exps
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        got: r.len(),
                    });
                }
                Ok(r.iter().map(|&e| BigRational::from_integer(BigInt::from(e))).collect())
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        let det = RatMatrix::from_rows(rows)?.det();
        if det.abs() != BigRational::one() {
            return Err(Error::NotUnimodular);
        }
        if coeffs.iter().any(FieldElem::is_zero) {
            return Err(Error::ZeroCoefficient);
        }
        let field = coeffs.first().map_or(FieldDescriptor::RATIONALS, FieldElem::field);
        let mut subst = Substitution::new();
        for (j, &xj) in vars.iter().enumerate() {
            let mut up = Vec::new();
            let mut down = Vec::new();
            for (i, &xi) in vars.iter().enumerate() {
                let e = exps[i][j];
                if e > 0 {
                    up.push((xi, e as u32));
                } else if e < 0 {
                    down.push((xi, (-e) as u32));
                }
            }
            let num = MultiPoly::term(coeffs[j].clone(), Monomial::from_pairs(up));
            let den = MultiPoly::term(FieldElem::one(field), Monomial::from_pairs(down));
            subst.insert(xj, RatFunc::new(num, den)?);
        }
        Self::new(field, GaloisSigns::IDENTITY, subst)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn signs(&self) -> GaloisSigns {
        self.signs
    }

    /// Non-identity part of the substitution.
    pub fn substitution(&self) -> &Substitution {
        &self.subst
    }

    /// Image of a single variable.
    pub fn image(&self, v: Var) -> RatFunc {
        self.subst
            .get(&v)
            .cloned()
            .unwrap_or_else(|| RatFunc::var(self.field, v))
    }

    pub fn apply(&self, f: &RatFunc) -> Result<RatFunc> {
        let f = if f.field() == self.field {
            f.galois(self.signs)
        } else {
            f.lift(self.field)?.galois(self.signs)
        };
        f.substitute(&self.subst)
    }

    /// `apply(compose(a, b), f) == apply(a, apply(b, f))`.
    pub fn compose(&self, other: &FieldAutomorphism) -> Result<FieldAutomorphism> {
        let mut subst = Substitution::new();
        for (v, img) in &other.subst {
            subst.insert(*v, self.apply(img)?);
        }
        for (v, img) in &self.subst {
            subst.entry(*v).or_insert_with(|| img.clone());
        }
        Self::new(self.field, self.signs.compose(&other.signs), subst)
    }

    pub fn is_identity(&self) -> bool {
        self.signs.is_identity() && self.subst.is_empty()
    }

    /// Least `k >= 1` with `self^k` the identity.
    pub fn order_of(&self, cap: usize) -> Result<usize> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = self.compose(&acc)?;
        }
        Err(Error::OrderExceedsCap(cap))
    }

    pub fn is_invariant(&self, f: &RatFunc) -> Result<bool> {
        Ok(self.apply(f)?.eq_exact(f))
    }

    pub fn display(&self, vars: &VarSet) -> String {
        let mut parts = Vec::new();
        for (i, d) in self.field.radicands().iter().enumerate() {
            if self.signs.sign_of(i) < 0 {
                parts.push(format!("sqrt({d}) -> -sqrt({d})"));
            }
        }
        for (v, f) in &self.subst {
            parts.push(format!("{} -> {}", vars.name(*v), f.display(vars)));
        }
        if parts.is_empty() {
            "identity".to_string()
        } else {
            parts.join(", ")
        }
    }
}

impl std::fmt::Debug for FieldAutomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldAutomorphism")
            .field("signs", &self.signs)
            .field("subst", &self.subst)
            .finish()
    }
}

pub fn is_invariant_all(gens: &[FieldAutomorphism], f: &RatFunc) -> Result<bool> {
    for g in gens {
        if !g.is_invariant(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `from_matrix(g * h) == compose(from_matrix(g), from_matrix(h))` for
/// every generator `g` and every element `h` of the closure.
pub fn check_representation(ms: &[RatMatrix], conv: Convention) -> Result<bool> {
    let Some(first) = ms.first() else {
        return Ok(true);
    };
    let field = FieldDescriptor::RATIONALS;
    let vars: Vec<Var> = (0..first.dim() as u32).map(Var).collect();
    let group = close(ms, DEFAULT_CAP)?;
    let autos = group
        .elements()
        .iter()
        .map(|m| FieldAutomorphism::from_matrix_with(m, &vars, field, conv))
        .collect::<Result<Vec<_>>>()?;
    for g in ms {
        let ag = FieldAutomorphism::from_matrix_with(g, &vars, field, conv)?;
        for (h, ah) in group.elements().iter().zip(&autos) {
            let lhs = FieldAutomorphism::from_matrix_with(&g.mul(h)?, &vars, field, conv)?;
            if lhs != ag.compose(ah)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rank of the Jacobian of `fs` with respect to `vars` at `point`.
pub fn jacobian_rank_at(fs: &[RatFunc], vars: &[Var], point: &Point) -> Result<usize> {
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs {
        let row = vars
            .iter()
            .map(|&v| f.partial_at(v, point))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    rank(rows)
}

fn rank(mut rows: Vec<Vec<FieldElem>>) -> Result<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse()?;
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].try_mul(&inv)?;
            for k in c..ncols {
                let t = f.try_mul(&rows[r][k])?;
                rows[i][k] -= &t;
            }
        }
        r += 1;
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    /// Full rank at the recorded point.
    Certified(Point),
    /// No sampled point gave full rank. Not evidence of dependence.
    Inconclusive,
}

pub const INDEPENDENCE_BOUND: u64 = 1000;
pub const INDEPENDENCE_RETRIES: usize = 50;

/// Samples rational points until the Jacobian has rank `fs.len()`.
pub fn certify_independence<R: Rng + ?Sized>(fs: &[RatFunc], rng: &mut R) -> Independence {
    let Some(first) = fs.first() else {
        return Independence::Certified(Point::new());
    };
    let field = first.field();
    let vars: Vec<Var> = fs
        .iter()
        .flat_map(|f| f.vars())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if vars.len() < fs.len() {
        return Independence::Inconclusive;
    }
    for _ in 0..INDEPENDENCE_RETRIES {
        let pt = random_point(rng, field, vars.iter().copied(), INDEPENDENCE_BOUND);
        if let Ok(k) = jacobian_rank_at(fs, &vars, &pt) {
            if k == fs.len() {
                return Independence::Certified(pt);
            }
        }
    }
    Independence::Inconclusive
}

/// Finite group of automorphisms obtained by closing named generators.
#[derive(Clone, Debug)]
pub struct ActionGroup {
    generators: Vec<(String, FieldAutomorphism)>,
    elements: Vec<FieldAutomorphism>,
}

impl ActionGroup {
    pub fn close(generators: Vec<(String, FieldAutomorphism)>, cap: usize) -> Result<Self> {
        let field = generators
            .first()
            .map_or(FieldDescriptor::RATIONALS, |(_, g)| g.field());
        let id = FieldAutomorphism::identity(field);
        let mut seen = HashSet::new();
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id);
        while let Some(x) = queue.pop_front() {
            for (_, g) in &generators {
                let y = x.compose(g)?;
                if seen.contains(&y) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge(cap));
                }
                seen.insert(y.clone());
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
        Ok(ActionGroup {
            generators,
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = &FieldAutomorphism> {
        self.generators.iter().map(|(_, g)| g)
    }

    pub fn generator(&self, name: &str) -> Option<&FieldAutomorphism> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn elements(&self) -> &[FieldAutomorphism] {
        &self.elements
    }

    pub fn is_invariant(&self, f: &RatFunc) -> Result<bool> {
        for g in self.generators() {
            if !g.is_invariant(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct AffineInvariant {
    pub value: RatFunc,
    /// Whether `value` is fixed by every supplied map.
    pub invariant: bool,
}

/// Product of the distinct images of `top` under `maps`, falling back to their
/// sum when the product is not fixed. Each map must send `top` to
/// `a * top + b` with `a`, `b` free of `top`. No degree minimality.
pub fn affine_orbit_invariant(maps: &[FieldAutomorphism], top: Var) -> Result<AffineInvariant> {
    let field = maps.first().map_or(FieldDescriptor::RATIONALS, FieldAutomorphism::field);
    let x = RatFunc::var(field, top);
    let mut images: Vec<RatFunc> = Vec::new();
    for m in maps {
        let img = m.image(top);
        let a = img.differentiate(top);
        let b = img.sub(&a.mul(&x));
        if a.is_zero() || a.vars().contains(&top) || b.vars().contains(&top) {
            return Err(Error::NotAffineAction);
        }
        if !images.iter().any(|i| i.eq_exact(&img)) {
            images.push(img);
        }
    }
    if images.is_empty() {
        images.push(x);
    }
    let product = images.iter().skip(1).fold(images[0].clone(), |acc, f| acc.mul(f));
    if is_invariant_all(maps, &product)? {
        return Ok(AffineInvariant {
            value: product,
            invariant: true,
        });
    }
    let sum = images.iter().skip(1).fold(images[0].clone(), |acc, f| acc.add(f));
    if sum.vars().contains(&top) && is_invariant_all(maps, &sum)? {
        return Ok(AffineInvariant {
            value: sum,
            invariant: true,
        });
    }
    Ok(AffineInvariant {
        value: product,
        invariant: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{group_generators, matrix};

    fn xs() -> (VarSet, Vec<Var>) {
        let vs = VarSet::from_names(&["x1", "x2", "x3", "x4"]);
        let v = vs.vars().collect();
        (vs, v)
    }

    #[test]
    fn sigma_image() {
        let (vs, v) = xs();
        let a = FieldAutomorphism::from_matrix(&matrix("sigma").unwrap(), &v, FieldDescriptor::RATIONALS).unwrap();
        assert_eq!(
            a.image(v[0]).display(&vs).to_string(),
            "-1/2*x1 - 1/2*x2 - 1/2*x3 - 1/2*x4"
        );
    }

    #[test]
    fn lambda1_order() {
        let (_, v) = xs();
        let a = FieldAutomorphism::from_matrix(&matrix("lambda1").unwrap(), &v, FieldDescriptor::RATIONALS).unwrap();
        assert_eq!(a.order_of(ORDER_CAP).unwrap(), 4);
        let id = FieldAutomorphism::identity(FieldDescriptor::RATIONALS);
        assert_eq!(a.compose(&id).unwrap(), a);
        assert_eq!(id.compose(&a).unwrap(), a);
    }

    #[test]
    fn representation_holds_for_column_convention() {
        for g in ["Q8", "4.33.3"] {
            let gens = group_generators(g).unwrap();
            assert!(check_representation(&gens, Convention::Column).unwrap(), "{g}");
            assert!(!check_representation(&gens, Convention::Row).unwrap(), "{g}");
        }
    }

    #[test]
    fn action_group_matches_matrix_group() {
        let (_, v) = xs();
        let gens: Vec<_> = group_generators("4.33.6")
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                (
                    format!("g{i}"),
                    FieldAutomorphism::from_matrix(m, &v, FieldDescriptor::RATIONALS).unwrap(),
                )
            })
            .collect();
        assert_eq!(ActionGroup::close(gens, 1000).unwrap().order(), 48);
    }
}
