use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Index of a variable inside a [`VarSet`](super::VarSet).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u32);

/// Sparse exponent vector: `(var, exp)` pairs sorted by variable, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[(u32, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut m = Self::default();
        if e > 0 {
            m.exps.push((v.0, e));
            m.deg = e;
        }
        m
    }

    /// Build from arbitrary pairs; repeated variables are merged and zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut v: Vec<(u32, u32)> = pairs.into_iter().map(|(a, e)| (a.0, e)).collect();
        v.sort_unstable();
        let mut exps: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        for (a, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == a => last.1 += e,
                _ => exps.push((a, e)),
            }
        }
        exps.retain(|p| p.1 > 0);
        let deg = exps.iter().map(|p| p.1).sum();
        Monomial { deg, exps }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exp(&self, v: Var) -> u32 {
        match self.exps.binary_search_by_key(&v.0, |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (Var(v), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.exps.is_empty() {
            return self.clone();
        }
        if self.exps.is_empty() {
            return other.clone();
        }
        let mut exps = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    /// `self / other` if every exponent stays nonnegative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.deg > self.deg {
            return None;
        }
        let mut exps = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let f = other.exps[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    exps.push((v, e - f));
                }
                j += 1;
            } else {
                exps.push((v, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial {
            deg: self.deg - other.deg,
            exps,
        })
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.iter().filter_map(|(v, e)| {
            let f = other.exp(v);
            (f > 0).then(|| (v, e.min(f)))
        }))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            deg: self.deg * k,
            exps: if k == 0 {
                SmallVec::new()
            } else {
                self.exps.iter().map(|&(v, e)| (v, e * k)).collect()
            },
        }
    }

    /// Drop variable `v`, returning the removed exponent.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        let e = self.exp(v);
        if e == 0 {
            return (self.clone(), 0);
        }
        let exps = self.exps.iter().copied().filter(|p| p.0 != v.0).collect();
        (
            Monomial {
                deg: self.deg - e,
                exps,
            },
            e,
        )
    }

    /// Lexicographic comparison with lower-indexed variables more significant.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        for k in 0..a.len().min(b.len()) {
            let (va, ea) = a[k];
            let (vb, eb) = b[k];
            if va != vb {
                return if va < vb {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        a.len().cmp(&b.len())
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.cmp_lex(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("v{}", v)
                } else {
                    format!("v{}^{}", v, e)
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().map(|&(v, e)| (Var(v), e)))
    }

    #[test]
    fn grlex() {
        assert!(m(&[(0, 2)]) > m(&[(0, 1), (1, 1)]));
        assert!(m(&[(0, 1), (1, 1)]) > m(&[(1, 2)]));
        assert!(m(&[(1, 3)]) > m(&[(0, 2)]));
        assert!(m(&[(0, 1)]) > m(&[(1, 1)]));
        assert!(m(&[]) < m(&[(5, 1)]));
    }

    #[test]
    fn mul_div() {
        let a = m(&[(0, 2), (2, 1)]);
        let b = m(&[(1, 1), (2, 3)]);
        let c = a.mul(&b);
        assert_eq!(c, m(&[(0, 2), (1, 1), (2, 4)]));
        assert_eq!(c.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(c.degree(), 7);
        assert_eq!(a.gcd(&b), m(&[(2, 1)]));
    }
}
