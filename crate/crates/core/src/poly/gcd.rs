//! Multivariate gcd over the coefficient field.
//!
//! The main route is modular: every radicand gets a square root modulo word-size primes, the
//! `2^k` embeddings of the field are combined with a signed Hadamard transform, and images from
//! several primes are lifted by CRT and rational reconstruction. The lifted gcd is accepted only
//! after exact multiplication reproduces both inputs, so the result never depends on luck.
//! Recursive subresultant PRS is kept as a fallback and as a cross-check.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::zp::{self, gcd_zp, PointGen, ZPoly};
use super::{Monomial, MultiPoly, Var};
use crate::field::{FieldDescriptor, FieldElem};

const MAX_PRIMES: usize = 48;

/// Gcd normalized to a monic graded-lex leading coefficient.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    gcd_cofactors(a, b).0
}

/// `(g, a/g, b/g)` with `g` monic under graded-lex (zero only if both inputs are zero).
pub fn gcd_cofactors(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly, MultiPoly) {
    let f = a.field();
    if a.is_zero() && b.is_zero() {
        return (MultiPoly::zero(f), MultiPoly::zero(f), MultiPoly::zero(f));
    }
    if a.is_zero() {
        let g = b.monic();
        let lc = b.leading().unwrap().1.clone();
        return (g, MultiPoly::zero(f), MultiPoly::constant(lc));
    }
    if b.is_zero() {
        let g = a.monic();
        let lc = a.leading().unwrap().1.clone();
        return (g, MultiPoly::constant(lc), MultiPoly::zero(f));
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).unwrap();
    let b1 = b.div_monomial(&mb).unwrap();
    let ra = ma.div(&mg).unwrap();
    let rb = mb.div(&mg).unwrap();

    let (g, ca, cb) = primitive_gcd(&a1, &b1);
    // normalize so g is monic under graded-lex
    let mono = MultiPoly::term(FieldElem::one(f), mg);
    let g = g.mul(&mono);
    let lc = g.leading().unwrap().1.clone();
    let inv = lc.inverse().expect("nonzero");
    (
        g.scale(&inv),
        ca.mul_monomial(&ra).scale(&lc),
        cb.mul_monomial(&rb).scale(&lc),
    )
}

/// Gcd of inputs without monomial content; cofactors exact but not normalized.
fn primitive_gcd(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly, MultiPoly) {
    let f = a.field();
    let one = MultiPoly::one(f);
    if a.is_constant() || b.is_constant() {
        return (one, a.clone(), b.clone());
    }
    let va = a.vars();
    let vb = b.vars();
    if va.is_disjoint(&vb) {
        return (one, a.clone(), b.clone());
    }
    if a == b {
        return (a.clone(), one.clone(), one);
    }
    if let Some(r) = modular_gcd(a, b) {
        return r;
    }
    let g = subresultant_gcd(a, b);
    let ca = a.div_exact(&g).expect("gcd divides");
    let cb = b.div_exact(&g).expect("gcd divides");
    (g, ca, cb)
}

struct Layout {
    vars: Vec<Var>,
}

impl Layout {
    fn dense(&self, m: &Monomial) -> Vec<u32> {
        self.vars.iter().map(|&v| m.exp(v)).collect()
    }

    fn sparse(&self, e: &[u32]) -> Monomial {
        Monomial::from_pairs(self.vars.iter().zip(e).map(|(&v, &x)| (v, x)))
    }
}

fn rat_mod(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&pb).to_u64()?;
    Some(zp::mulm(n, zp::invm(d, p), p))
}

/// Image of `a` under the embedding that sends `sqrt(d_i)` to `(+/-) roots[i]`.
fn image(a: &MultiPoly, lay: &Layout, basis_vals: &[u64], p: u64) -> Option<ZPoly> {
    let mut z = ZPoly::zero(lay.vars.len());
    for (m, c) in a.terms() {
        let mut v = 0u64;
        for (mask, q) in c.coords().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            v = zp::addm(v, zp::mulm(rat_mod(q, p)?, basis_vals[mask], p), p);
        }
        if v != 0 {
            z.terms.insert(lay.dense(m), v);
        }
    }
    Some(z)
}

fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    if !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Per-monomial coordinate residues for one polynomial.
type Residues = BTreeMap<Vec<u32>, Vec<BigInt>>;

fn crt_merge(acc: &mut Residues, modulus: &BigInt, new: &BTreeMap<Vec<u32>, Vec<u64>>, p: u64, width: usize) {
    let pb = BigInt::from(p);
    // inverse of modulus mod p
    let mm = modulus.mod_floor(&pb).to_u64().unwrap();
    let minv = BigInt::from(zp::invm(mm, p));
    let keys: BTreeSet<Vec<u32>> = acc.keys().chain(new.keys()).cloned().collect();
    let zero_u = vec![0u64; width];
    for k in keys {
        let cur = acc.entry(k.clone()).or_insert_with(|| vec![BigInt::zero(); width]);
        let nv = new.get(&k).unwrap_or(&zero_u);
        for (c, &r) in cur.iter_mut().zip(nv) {
            // x = c + modulus * ((r - c) * minv mod p)
            let diff = (BigInt::from(r) - &*c).mod_floor(&pb);
            let t = (diff * &minv).mod_floor(&pb);
            *c = &*c + modulus * t;
        }
    }
}

fn reconstruct(res: &Residues, modulus: &BigInt, lay: &Layout, field: FieldDescriptor) -> Option<MultiPoly> {
    let mut terms = BTreeMap::new();
    for (e, coords) in res {
        let mut qs = Vec::with_capacity(coords.len());
        for c in coords {
            qs.push(rational_reconstruct(c, modulus)?);
        }
        let fe = FieldElem::from_coords(field, qs).ok()?;
        if !fe.is_zero() {
            terms.insert(lay.sparse(e), fe);
        }
    }
    Some(MultiPoly::from_map_unchecked(field, terms))
}

/// Modular gcd with exact certificate; `None` when the prime budget is exhausted.
pub fn modular_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<(MultiPoly, MultiPoly, MultiPoly)> {
    let field = a.field();
    let k = field.rank();
    let width = field.degree();
    let vars: Vec<Var> = a.vars().union(&b.vars()).copied().collect();
    let lay = Layout { vars };
    let lm_a = lay.dense(a.leading_lex()?.0);
    let lm_b = lay.dense(b.leading_lex()?.0);

    let mut modulus = BigInt::one();
    let mut acc: [Residues; 3] = Default::default();
    let mut acc_lm: Option<Vec<u32>> = None;
    let mut rng = PointGen::new(0x9e37_79b9_7f4a_7c15);
    let mut used = 0usize;

    'primes: for &p in zp::primes() {
        if used >= MAX_PRIMES {
            break;
        }
        let mut roots = Vec::with_capacity(k);
        for &d in field.radicands() {
            let dm = (d as i128).rem_euclid(p as i128) as u64;
            if dm == 0 {
                continue 'primes;
            }
            match zp::sqrt_mod(dm, p) {
                Some(r) => roots.push(r),
                None => continue 'primes,
            }
        }
        used += 1;
        let mut imgs: Vec<[ZPoly; 3]> = Vec::with_capacity(width);
        for emb in 0..width {
            // values of the basis elements under this embedding
            let basis_vals: Vec<u64> = (0..width)
                .map(|mask| {
                    let mut v = 1u64;
                    for (i, &r) in roots.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            let ri = if emb & (1 << i) != 0 { p - r } else { r };
                            v = zp::mulm(v, ri, p);
                        }
                    }
                    v
                })
                .collect();
            let Some(fa) = image(a, &lay, &basis_vals, p) else { continue 'primes };
            let Some(fb) = image(b, &lay, &basis_vals, p) else { continue 'primes };
            if fa.lm() != Some(&lm_a) || fb.lm() != Some(&lm_b) {
                continue 'primes;
            }
            let Some(g) = gcd_zp(&fa, &fb, p, &mut rng) else { continue 'primes };
            if g.is_constant() {
                return Some((MultiPoly::one(field), a.clone(), b.clone()));
            }
            let ca = fa.div_exact(&g, p)?;
            let cb = fb.div_exact(&g, p)?;
            imgs.push([g, ca, cb]);
        }
        let lm = imgs[0][0].lm().cloned()?;
        if imgs.iter().any(|t| t[0].lm() != Some(&lm)) {
            continue;
        }
        match &acc_lm {
            Some(old) if lm > *old => continue,
            Some(old) if lm < *old => {
                acc = Default::default();
                modulus = BigInt::one();
                acc_lm = Some(lm);
            }
            None => acc_lm = Some(lm),
            _ => {}
        }
        // invert the embeddings: v_S = 2^-k * sum_e (-1)^{|S & e|} img_e, then divide by prod r_i
        let inv2k = zp::invm(zp::powm(2, k as u64, p), p);
        let basis_inv: Vec<u64> = (0..width)
            .map(|mask| {
                let mut v = 1u64;
                for (i, &r) in roots.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        v = zp::mulm(v, r, p);
                    }
                }
                zp::invm(v, p)
            })
            .collect();
        for slot in 0..3 {
            let mut keys: BTreeSet<&Vec<u32>> = BTreeSet::new();
            for t in &imgs {
                keys.extend(t[slot].terms.keys());
            }
            let mut coords: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
            for key in keys {
                let mut v = vec![0u64; width];
                for (mask, out) in v.iter_mut().enumerate() {
                    let mut s = 0u64;
                    for (emb, t) in imgs.iter().enumerate() {
                        let x = t[slot].terms.get(key).copied().unwrap_or(0);
                        if (mask & emb).count_ones() % 2 == 1 {
                            s = zp::subm(s, x, p);
                        } else {
                            s = zp::addm(s, x, p);
                        }
                    }
                    *out = zp::mulm(zp::mulm(s, inv2k, p), basis_inv[mask], p);
                }
                coords.insert(key.clone(), v);
            }
            crt_merge(&mut acc[slot], &modulus, &coords, p, width);
        }
        modulus *= p;

        let Some(g) = reconstruct(&acc[0], &modulus, &lay, field) else { continue };
        let Some(ca) = reconstruct(&acc[1], &modulus, &lay, field) else { continue };
        let Some(cb) = reconstruct(&acc[2], &modulus, &lay, field) else { continue };
        if g.mul(&ca) == *a && g.mul(&cb) == *b {
            return Some((g, ca, cb));
        }
    }
    None
}

fn univariate_view(a: &MultiPoly, v: Var) -> Vec<MultiPoly> {
    let by = a.coefficients_in(v);
    let deg = by.keys().next_back().copied().unwrap_or(0) as usize;
    let mut out = vec![MultiPoly::zero(a.field()); deg + 1];
    for (e, c) in by {
        out[e as usize] = c;
    }
    out
}

fn from_view(coeffs: &[MultiPoly], v: Var, field: FieldDescriptor) -> MultiPoly {
    let mut out = MultiPoly::zero(field);
    for (e, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&c.mul_monomial(&Monomial::var_pow(v, e as u32)));
        }
    }
    out
}

fn trim(v: &mut Vec<MultiPoly>) {
    while v.len() > 1 && v.last().is_some_and(MultiPoly::is_zero) {
        v.pop();
    }
}

fn is_zero_view(v: &[MultiPoly]) -> bool {
    v.iter().all(MultiPoly::is_zero)
}

/// Pseudo-remainder of `a` by `b` in the main variable.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !is_zero_view(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bc) in b.iter().enumerate() {
            let idx = dr - db + j;
            r[idx] = r[idx].sub(&bc.mul(&lr));
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn view_content(v: &[MultiPoly]) -> MultiPoly {
    let mut g = MultiPoly::zero(v[0].field());
    for c in v {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.clone() } else { subresultant_gcd(&g, c) };
        if g.is_constant() {
            break;
        }
    }
    g
}

fn view_div(v: &[MultiPoly], d: &MultiPoly) -> Vec<MultiPoly> {
    v.iter().map(|c| c.div_exact(d).expect("exact")).collect()
}

/// Recursive subresultant PRS gcd, monic under graded-lex.
pub fn subresultant_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let f = a.field();
    let Some(&v) = a.vars().union(&b.vars()).max() else {
        return MultiPoly::one(f);
    };
    let mut av = univariate_view(a, v);
    let mut bv = univariate_view(b, v);
    if av.len() < bv.len() {
        std::mem::swap(&mut av, &mut bv);
    }
    let ca = view_content(&av);
    let cb = view_content(&bv);
    let cont = subresultant_gcd(&ca, &cb);
    let mut a1 = view_div(&av, &ca);
    let mut b1 = view_div(&bv, &cb);
    if b1.len() == 1 {
        return cont.monic();
    }
    let mut g = MultiPoly::one(f);
    let mut h = MultiPoly::one(f);
    loop {
        let delta = (a1.len() - b1.len()) as u32;
        let r = prem(&a1, &b1);
        if is_zero_view(&r) {
            break;
        }
        if r.len() == 1 {
            return cont.monic();
        }
        let divisor = g.mul(&h.pow(delta));
        let r: Vec<MultiPoly> = r.iter().map(|c| c.div_exact(&divisor).expect("prs")).collect();
        a1 = std::mem::replace(&mut b1, r);
        g = a1.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("prs")
        };
    }
    let c = view_content(&b1);
    let prim = view_div(&b1, &c);
    from_view(&prim, v, f).mul(&cont).monic()
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
    fn simple() {
        let a = x().square().sub(&c(1));
        let b = x().sub(&c(1));
        assert_eq!(gcd(&a, &b), b);
        assert_eq!(subresultant_gcd(&a, &b), b);
        assert_eq!(gcd(&a, &MultiPoly::zero(q())), a);
    }

    #[test]
    fn bivariate() {
        let s = x().add(&y());
        let a = s.square().mul(&x());
        let b = s.mul(&y());
        assert_eq!(gcd(&a, &b), s);
        assert_eq!(subresultant_gcd(&a, &b), s);
        let (g, ca, cb) = gcd_cofactors(&a, &b);
        assert_eq!(g.mul(&ca), a);
        assert_eq!(g.mul(&cb), b);
    }

    #[test]
    fn rational_coefficients() {
        let half = FieldElem::from_rational(q(), BigRational::new(1.into(), 2.into()));
        let g = x().scale(&half).add(&y().pow(2)).add(&c(7));
        let a = g.mul(&x().sub(&y().scale(&FieldElem::from_int(q(), 3))));
        let b = g.mul(&x().mul(&y()).add(&c(-11)));
        assert_eq!(gcd(&a, &b), g.monic());
        assert_eq!(subresultant_gcd(&a, &b), g.monic());
    }

    #[test]
    fn biquadratic_coefficients() {
        let f = FieldDescriptor::new(&[-1, 3]).unwrap();
        let x = MultiPoly::var(f, Var(0));
        let y = MultiPoly::var(f, Var(1));
        let i = FieldElem::basis(f, 1);
        let r3 = FieldElem::basis(f, 2);
        let g = x.sub(&y.scale(&i)).add(&MultiPoly::constant(r3.clone()));
        let a = g.mul(&x.add(&y.scale(&r3)));
        let b = g.mul(&x.square().sub(&MultiPoly::constant(&i * &r3)));
        let expect = g.monic();
        assert_eq!(gcd(&a, &b), expect);
        assert_eq!(subresultant_gcd(&a, &b), expect);
        // conjugate factors are coprime
        let gc = g.galois(crate::field::GaloisSigns::from_flips(1));
        assert!(gcd(&g, &gc).is_one());
    }
}
