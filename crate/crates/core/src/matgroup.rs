//! Exact rational matrices and breadth-first closure of finite matrix groups.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::fmt_rational;

pub const DEFAULT_CAP: usize = 10_000;

/// Square matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(RatMatrix { n, entries })
    }

    /// Integer rows divided by a common denominator.
    pub fn from_int_rows<const N: usize>(rows: [[i64; N]; N], denom: i64) -> Self {
        let d = BigInt::from(denom);
        RatMatrix {
            n: N,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| BigRational::new(BigInt::from(x), d.clone())))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigRational]> {
        self.entries.chunks(self.n)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(Error::NotInvertible)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].recip();
            for j in 0..n {
                a[col * n + j] *= &p;
                inv[col * n + j] *= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    let t = &f * &a[col * n + j];
                    a[r * n + j] -= t;
                    let t = &f * &inv[col * n + j];
                    inv[r * n + j] -= t;
                }
            }
        }
        Ok(RatMatrix { n, entries: inv })
    }

    pub fn det(&self) -> BigRational {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &p;
                for j in col..n {
                    let t = &f * &a[col * n + j];
                    a[r * n + j] -= t;
                }
            }
        }
        det
    }

    pub fn pow(&self, k: i64) -> Result<RatMatrix> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.n);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Integer entries, if every entry is integral.
    pub fn as_integer(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.rows()
            .map(|r| {
                r.iter()
                    .map(|x| x.is_integer().then(|| x.numer().to_i64()).flatten())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(fmt_rational).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `t * m * t^-1`.
pub fn conjugate(t: &RatMatrix, m: &RatMatrix) -> Result<RatMatrix> {
    t.mul(m)?.mul(&t.inverse()?)
}

/// Least `k >= 1` with `m^k = I`.
pub fn matrix_order(m: &RatMatrix, cap: usize) -> Result<usize> {
    if m.det().is_zero() {
        return Err(Error::NotInvertible);
    }
    let mut acc = m.clone();
    for k in 1..=cap {
        if acc.is_identity() {
            return Ok(k);
        }
        acc = acc.mul(m)?;
    }
    Err(Error::OrderExceedsCap(cap))
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    generators: Vec<RatMatrix>,
    elements: Vec<RatMatrix>,
    index: HashSet<RatMatrix>,
}

/// Breadth-first closure of `gens` under right multiplication.
pub fn close(gens: &[RatMatrix], cap: usize) -> Result<MatrixGroup> {
    let n = gens.first().map_or(0, RatMatrix::dim);
    for g in gens {
        if g.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: g.dim(),
            });
        }
        if g.det().is_zero() {
            return Err(Error::NotInvertible);
        }
    }
    let id = RatMatrix::identity(n);
    let mut index = HashSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(id.clone());
    elements.push(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g)?;
            if index.contains(&y) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::GroupTooLarge(cap));
            }
            index.insert(y.clone());
            elements.push(y.clone());
            queue.push_back(y);
        }
    }
    Ok(MatrixGroup {
        generators: gens.to_vec(),
        elements,
        index,
    })
}

impl MatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[RatMatrix] {
        &self.generators
    }

    /// Elements in discovery order, identity first.
    pub fn elements(&self) -> &[RatMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.index.contains(m)
    }

    /// Element order to multiplicity.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for e in &self.elements {
            let k = matrix_order(e, self.order()).expect("finite group element");
            *h.entry(k).or_insert(0) += 1;
        }
        h
    }

    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|e| other.contains(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = RatMatrix::from_int_rows([[2, 1], [1, 1]], 1);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(m.det(), BigRational::one());
        let s = RatMatrix::from_int_rows([[1, 2], [2, 4]], 1);
        assert_eq!(s.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn cyclic_closure() {
        let r = RatMatrix::from_int_rows([[0, -1], [1, 0]], 1);
        let g = close(&[r.clone()], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(matrix_order(&r, 10).unwrap(), 4);
        assert_eq!(matrix_order(&RatMatrix::identity(2), 10).unwrap(), 1);
        let h = g.order_histogram();
        assert_eq!(h.values().sum::<usize>(), 4);
    }

    #[test]
    fn infinite_order_hits_cap() {
        let m = RatMatrix::from_int_rows([[1, 1], [0, 1]], 1);
        assert_eq!(matrix_order(&m, 50), Err(Error::OrderExceedsCap(50)));
        assert_eq!(close(&[m], 100).unwrap_err(), Error::GroupTooLarge(100));
    }

    #[test]
    fn render() {
        let m = RatMatrix::from_int_rows([[1, -1], [0, 1]], 2);
        assert_eq!(m.to_string(), "[[1/2,-1/2],[0,1/2]]");
    }
}
