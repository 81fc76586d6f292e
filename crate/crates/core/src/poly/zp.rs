//! Polynomials over `F_p` for word-size primes below `2^31`, and Brown's dense recursive gcd.

use std::collections::BTreeMap;
use std::sync::OnceLock;

#[inline]
pub(crate) fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

#[inline]
pub(crate) fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powm(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending primes just below `2^31`.
pub(crate) fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut v = Vec::new();
        let mut n = (1u64 << 31) - 1;
        while v.len() < 256 {
            if is_prime(n) {
                v.push(n);
            }
            n -= 2;
        }
        v
    })
}

/// Square root of `a` modulo an odd prime, if `a` is a residue.
pub(crate) fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powm(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powm(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powm(z, q, p);
    let mut t = powm(a, q, p);
    let mut r = powm(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt, p);
            i += 1;
        }
        let b = powm(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b, p);
        t = mulm(t, c, p);
        r = mulm(r, b, p);
    }
    Some(r)
}

/// Dense univariate polynomial, low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct UPoly(pub Vec<u64>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: u64) -> Self {
        let mut u = UPoly(vec![c]);
        u.trim();
        u
    }

    pub fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u64, p: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| addm(mulm(acc, x, p), c, p))
    }

    pub fn scale(&self, c: u64, p: u64) -> UPoly {
        let mut u = UPoly(self.0.iter().map(|&a| mulm(a, c, p)).collect());
        u.trim();
        u
    }

    pub fn add(&self, o: &UPoly, p: u64) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![0; n];
        for (i, x) in v.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = o.0.get(i).copied().unwrap_or(0);
            *x = addm(a, b, p);
        }
        let mut u = UPoly(v);
        u.trim();
        u
    }

    pub fn mul(&self, o: &UPoly, p: u64) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] = addm(v[i + j], mulm(a, b, p), p);
            }
        }
        let mut u = UPoly(v);
        u.trim();
        u
    }

    pub fn divrem(&self, d: &UPoly, p: u64) -> (UPoly, UPoly) {
        assert!(!d.is_zero());
        if self.0.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.0.clone();
        let dl = d.0.len();
        let inv = invm(d.lc(), p);
        let mut q = vec![0u64; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + dl - 1], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.0.iter().enumerate() {
                r[k + j] = subm(r[k + j], mulm(c, b, p), p);
            }
        }
        r.truncate(dl - 1);
        let mut q = UPoly(q);
        let mut r = UPoly(r);
        q.trim();
        r.trim();
        (q, r)
    }

    pub fn monic(&self, p: u64) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invm(self.lc(), p), p)
    }

    pub fn gcd(&self, o: &UPoly, p: u64) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }
}

/// Sparse multivariate polynomial with dense exponent vectors; `BTreeMap` order is lex with
/// variable 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, u64>,
}

impl ZPoly {
    pub fn zero(n: usize) -> Self {
        ZPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: u64) -> Self {
        let mut z = Self::zero(n);
        if c != 0 {
            z.terms.insert(vec![0; n], c);
        }
        z
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0)))
    }

    pub fn lm(&self) -> Option<&Vec<u32>> {
        self.terms.keys().next_back()
    }

    pub fn lc(&self) -> u64 {
        self.terms.values().next_back().copied().unwrap_or(0)
    }

    pub fn monic(&self, p: u64) -> ZPoly {
        let lc = self.lc();
        if lc == 0 || lc == 1 {
            return self.clone();
        }
        let inv = invm(lc, p);
        ZPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), mulm(c, inv, p))).collect(),
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: u64, p: u64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = addm(*o.get(), c, p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn mul(&self, o: &ZPoly, p: u64) -> ZPoly {
        let mut acc: std::collections::HashMap<Vec<u32>, u64> = std::collections::HashMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(0);
                *slot = addm(*slot, mulm(c1, c2, p), p);
            }
        }
        ZPoly {
            n: self.n,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    /// Exact division under lex; `None` if a nonzero remainder appears.
    pub fn div_exact(&self, d: &ZPoly, p: u64) -> Option<ZPoly> {
        let (dlm, dlc) = {
            let (e, c) = d.terms.iter().next_back()?;
            (e.clone(), *c)
        };
        let inv = invm(dlc, p);
        let mut r = self.clone();
        let mut q = ZPoly::zero(self.n);
        while let Some((e, c)) = r.terms.iter().next_back().map(|(e, &c)| (e.clone(), c)) {
            if e.iter().zip(&dlm).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&dlm).map(|(a, b)| a - b).collect();
            let qc = mulm(c, inv, p);
            for (de, &dc) in &d.terms {
                let t: Vec<u32> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                r.add_term(t, p - mulm(dc, qc, p), p);
            }
            q.terms.insert(qe, qc);
        }
        Some(q)
    }

    /// Group by the first `n - 1` exponents, yielding univariate coefficients in the last variable.
    fn to_rec(&self) -> BTreeMap<Vec<u32>, UPoly> {
        let last = self.n - 1;
        let mut out: BTreeMap<Vec<u32>, UPoly> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let key = e[..last].to_vec();
            let k = e[last] as usize;
            let u = out.entry(key).or_insert_with(UPoly::zero);
            if u.0.len() <= k {
                u.0.resize(k + 1, 0);
            }
            u.0[k] = c;
        }
        out
    }

    fn from_rec(n: usize, rec: &BTreeMap<Vec<u32>, UPoly>) -> ZPoly {
        let mut z = ZPoly::zero(n);
        for (key, u) in rec {
            for (k, &c) in u.0.iter().enumerate() {
                if c != 0 {
                    let mut e = key.clone();
                    e.push(k as u32);
                    z.terms.insert(e, c);
                }
            }
        }
        z
    }

    fn eval_last(rec: &BTreeMap<Vec<u32>, UPoly>, n: usize, x: u64, p: u64) -> ZPoly {
        let mut z = ZPoly::zero(n - 1);
        for (key, u) in rec {
            let v = u.eval(x, p);
            if v != 0 {
                z.terms.insert(key.clone(), v);
            }
        }
        z
    }

    fn from_upoly_last(n: usize, u: &UPoly) -> ZPoly {
        let mut z = ZPoly::zero(n);
        for (k, &c) in u.0.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[n - 1] = k as u32;
                z.terms.insert(e, c);
            }
        }
        z
    }
}

fn rec_content(rec: &BTreeMap<Vec<u32>, UPoly>, p: u64) -> UPoly {
    let mut g = UPoly::zero();
    for u in rec.values() {
        g = if g.is_zero() { u.monic(p) } else { g.gcd(u, p) };
        if g.deg() == 0 {
            break;
        }
    }
    g
}

fn rec_div(rec: &BTreeMap<Vec<u32>, UPoly>, c: &UPoly, p: u64) -> BTreeMap<Vec<u32>, UPoly> {
    if c.deg() == 0 && c.lc() == 1 {
        return rec.clone();
    }
    rec.iter()
        .map(|(k, u)| {
            let (q, r) = u.divrem(c, p);
            debug_assert!(r.is_zero());
            (k.clone(), q)
        })
        .collect()
}

fn rec_deg_last(rec: &BTreeMap<Vec<u32>, UPoly>) -> usize {
    rec.values().map(UPoly::deg).max().unwrap_or(0)
}

/// Small xorshift generator for evaluation points.
pub(crate) struct PointGen(u64);

impl PointGen {
    pub fn new(seed: u64) -> Self {
        PointGen(seed | 1)
    }

    pub fn next(&mut self, p: u64) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        1 + self.0 % (p - 1)
    }
}

/// Monic (under lex) gcd over `F_p`. `None` only if the evaluation budget runs out.
pub(crate) fn gcd_zp(a: &ZPoly, b: &ZPoly, p: u64, rng: &mut PointGen) -> Option<ZPoly> {
    let n = a.n;
    if a.is_zero() {
        return Some(b.monic(p));
    }
    if b.is_zero() {
        return Some(a.monic(p));
    }
    if a.is_constant() || b.is_constant() {
        return Some(ZPoly::constant(n, 1));
    }
    if n == 1 {
        let ua = ZPoly::to_rec(a).remove(&Vec::new()).unwrap_or_else(UPoly::zero);
        let ub = ZPoly::to_rec(b).remove(&Vec::new()).unwrap_or_else(UPoly::zero);
        return Some(ZPoly::from_upoly_last(1, &ua.gcd(&ub, p)));
    }
    let ra = a.to_rec();
    let rb = b.to_rec();
    let ca = rec_content(&ra, p);
    let cb = rec_content(&rb, p);
    let c = ca.gcd(&cb, p);
    let ra = rec_div(&ra, &ca, p);
    let rb = rec_div(&rb, &cb, p);
    let la = ra.values().next_back()?.clone();
    let lb = rb.values().next_back()?.clone();
    let gam = la.gcd(&lb, p);
    let bound = gam.deg() + rec_deg_last(&ra).min(rec_deg_last(&rb));

    let ap = ZPoly::from_rec(n, &ra);
    let bp = ZPoly::from_rec(n, &rb);

    let mut h: Option<BTreeMap<Vec<u32>, UPoly>> = None;
    let mut lm_h: Vec<u32> = Vec::new();
    let mut q = UPoly::constant(1);
    let mut fails = 0usize;
    loop {
        if fails > 4 * bound + 64 {
            return None;
        }
        let beta = rng.next(p);
        if la.eval(beta, p) == 0 || lb.eval(beta, p) == 0 || q.eval(beta, p) == 0 {
            fails += 1;
            continue;
        }
        let ab = ZPoly::eval_last(&ra, n, beta, p);
        let bb = ZPoly::eval_last(&rb, n, beta, p);
        let g = gcd_zp(&ab, &bb, p, rng)?;
        if g.is_constant() {
            return Some(ZPoly::from_upoly_last(n, &c).monic(p));
        }
        let lm = g.lm()?.clone();
        let gb = gam.eval(beta, p);
        let g: BTreeMap<Vec<u32>, u64> = g.terms.iter().map(|(e, &v)| (e.clone(), mulm(v, gb, p))).collect();
        let restart = match &h {
            None => true,
            Some(_) => lm < lm_h,
        };
        if restart {
            h = Some(
                g.into_iter()
                    .map(|(e, v)| (e, UPoly::constant(v)))
                    .collect(),
            );
            lm_h = lm;
            q = UPoly(vec![p - beta, 1]);
            continue;
        }
        if lm > lm_h {
            fails += 1;
            continue;
        }
        // Newton step: H += q * (g - H(beta)) / q(beta)
        let hh = h.as_mut().unwrap();
        let qinv = invm(q.eval(beta, p), p);
        let mut changed = false;
        let mut keys: Vec<Vec<u32>> = hh.keys().cloned().collect();
        for k in g.keys() {
            if !hh.contains_key(k) {
                keys.push(k.clone());
            }
        }
        for k in keys {
            let hv = hh.get(&k).map_or(0, |u| u.eval(beta, p));
            let gv = g.get(&k).copied().unwrap_or(0);
            let delta = mulm(subm(gv, hv, p), qinv, p);
            if delta == 0 {
                continue;
            }
            changed = true;
            let corr = q.scale(delta, p);
            let slot = hh.entry(k.clone()).or_insert_with(UPoly::zero);
            *slot = slot.add(&corr, p);
            if slot.is_zero() {
                hh.remove(&k);
            }
        }
        q = q.mul(&UPoly(vec![p - beta, 1]), p);
        if !changed || q.deg() > bound {
            let cont = rec_content(hh, p);
            let prim = ZPoly::from_rec(n, &rec_div(hh, &cont, p));
            if ap.div_exact(&prim, p).is_some() && bp.div_exact(&prim, p).is_some() {
                let cz = ZPoly::from_upoly_last(n, &c);
                return Some(prim.mul(&cz, p).monic(p));
            }
            if q.deg() > bound {
                h = None;
                fails += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 2147483647;

    fn zp(n: usize, terms: &[(&[u32], u64)]) -> ZPoly {
        let mut z = ZPoly::zero(n);
        for (e, c) in terms {
            z.add_term(e.to_vec(), *c, P);
        }
        z
    }

    #[test]
    fn prime_list() {
        let ps = primes();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn tonelli() {
        for p in primes().iter().take(20) {
            for a in [2u64, 3, p - 1, p - 3, 5] {
                if let Some(r) = sqrt_mod(a, *p) {
                    assert_eq!(mulm(r, r, *p), a % p);
                }
            }
        }
    }

    #[test]
    fn univariate_gcd() {
        // (x-1)(x-2) and (x-1)(x+5)
        let a = UPoly(vec![2, P - 3, 1]);
        let b = UPoly(vec![P - 5, 4, 1]);
        assert_eq!(a.gcd(&b, P), UPoly(vec![P - 1, 1]));
    }

    #[test]
    fn bivariate_gcd() {
        // g = x + y + 1, a = g*(x - y), b = g*(x*y + 3)
        let g = zp(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], 1)]);
        let f1 = zp(2, &[(&[1, 0], 1), (&[0, 1], P - 1)]);
        let f2 = zp(2, &[(&[1, 1], 1), (&[0, 0], 3)]);
        let a = g.mul(&f1, P);
        let b = g.mul(&f2, P);
        let mut rng = PointGen::new(7);
        assert_eq!(gcd_zp(&a, &b, P, &mut rng).unwrap(), g);
    }

    #[test]
    fn trivariate_gcd_with_content() {
        // g = (z + 2) * (x*z + y^2), content z+2 in the last variable
        let c = zp(3, &[(&[0, 0, 1], 1), (&[0, 0, 0], 2)]);
        let g0 = zp(3, &[(&[1, 0, 1], 1), (&[0, 2, 0], 1)]);
        let g = c.mul(&g0, P);
        let f1 = zp(3, &[(&[2, 0, 0], 1), (&[0, 1, 1], 5)]);
        let f2 = zp(3, &[(&[0, 0, 3], 1), (&[1, 1, 0], 1), (&[0, 0, 0], 9)]);
        let mut rng = PointGen::new(11);
        let r = gcd_zp(&g.mul(&f1, P), &g.mul(&f2, P), P, &mut rng).unwrap();
        assert_eq!(r, g.monic(P));
    }
}
