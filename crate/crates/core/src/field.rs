//! Exact arithmetic in `Q`, `Q(sqrt d1)` and `Q(sqrt d1, sqrt d2)`.
//!
//! An element is a coordinate vector over the radical basis
//! `{ prod_{i in S} sqrt(d_i) : S subset of radicands }`, indexed by the bitmask of `S`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FieldError;

pub const MAX_RADICANDS: usize = 2;

/// Ordered list of up to two squarefree radicands.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    radicands: [i64; MAX_RADICANDS],
    len: u8,
}

impl FieldDescriptor {
    pub const RATIONALS: FieldDescriptor = FieldDescriptor {
        radicands: [0; MAX_RADICANDS],
        len: 0,
    };

    pub fn new(radicands: &[i64]) -> Result<Self, FieldError> {
        if radicands.len() > MAX_RADICANDS {
            return Err(FieldError::TooManyRadicands(radicands.len()));
        }
        for (i, &d) in radicands.iter().enumerate() {
            if d == 0 || d == 1 || !is_squarefree(d) {
                return Err(FieldError::BadRadicand(d));
            }
            if radicands[..i].contains(&d) {
                return Err(FieldError::BadRadicand(d));
            }
        }
        // no nonempty subset may multiply to a square
        for mask in 1usize..(1 << radicands.len()) {
            let p: i128 = subset_product(radicands, mask);
            if p > 0 && is_square_i128(p) {
                return Err(FieldError::DependentRadicands(radicands.to_vec()));
            }
        }
        let mut r = [0; MAX_RADICANDS];
        r[..radicands.len()].copy_from_slice(radicands);
        Ok(FieldDescriptor {
            radicands: r,
            len: radicands.len() as u8,
        })
    }

    pub fn radicands(&self) -> &[i64] {
        &self.radicands[..self.len as usize]
    }

    pub fn rank(&self) -> usize {
        self.len as usize
    }

    /// Extension degree over `Q`, also the coordinate count.
    pub fn degree(&self) -> usize {
        1 << self.len
    }

    /// Square of the basis element indexed by `mask`.
    pub fn basis_square(&self, mask: usize) -> i128 {
        subset_product(self.radicands(), mask)
    }

    fn basis_label(&self, mask: usize) -> String {
        let mut parts = Vec::new();
        for (i, d) in self.radicands().iter().enumerate() {
            if mask & (1 << i) != 0 {
                parts.push(format!("sqrt({})", d));
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{:?}", self.radicands())
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "Q");
        }
        let r: Vec<String> = self
            .radicands()
            .iter()
            .map(|d| format!("sqrt({})", d))
            .collect();
        write!(f, "Q({})", r.join(", "))
    }
}

fn subset_product(radicands: &[i64], mask: usize) -> i128 {
    let mut p: i128 = 1;
    for (i, &d) in radicands.iter().enumerate() {
        if mask & (1 << i) != 0 {
            p *= d as i128;
        }
    }
    p
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        if n % k == 0 {
            n /= k;
        }
        k += 1;
    }
    true
}

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = BigInt::from(n).sqrt();
    &r * &r == BigInt::from(n)
}

/// Galois action as a bitmask: bit `i` set flips the sign of `sqrt(d_i)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaloisSigns {
    flips: u8,
}

impl GaloisSigns {
    pub const IDENTITY: GaloisSigns = GaloisSigns { flips: 0 };

    pub fn from_flips(flips: u8) -> Self {
        GaloisSigns { flips }
    }

    /// Build from `(radicand, sign)` pairs; radicands not listed keep sign `+1`.
    pub fn from_pairs(field: &FieldDescriptor, pairs: &[(i64, i8)]) -> Result<Self, FieldError> {
        let mut flips = 0u8;
        for &(d, s) in pairs {
            let idx = field
                .radicands()
                .iter()
                .position(|&r| r == d)
                .ok_or(FieldError::UnknownRadicand(d))?;
            match s {
                1 => {}
                -1 => flips |= 1 << idx,
                _ => return Err(FieldError::BadSign(s)),
            }
        }
        Ok(GaloisSigns { flips })
    }

    pub fn flips(&self) -> u8 {
        self.flips
    }

    pub fn is_identity(&self) -> bool {
        self.flips == 0
    }

    pub fn sign_of(&self, index: usize) -> i8 {
        if self.flips & (1 << index) != 0 {
            -1
        } else {
            1
        }
    }

    /// Coordinatewise sign product.
    pub fn compose(&self, other: &GaloisSigns) -> GaloisSigns {
        GaloisSigns {
            flips: self.flips ^ other.flips,
        }
    }

    /// Sign picked up by the basis element `mask`.
    #[inline]
    pub fn basis_sign(&self, mask: usize) -> bool {
        (self.flips as usize & mask).count_ones() % 2 == 1
    }

    pub fn fits(&self, field: &FieldDescriptor) -> bool {
        (self.flips as usize) >> field.rank() == 0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: FieldDescriptor,
    coords: Vec<BigRational>,
}

impl FieldElem {
    pub fn zero(field: FieldDescriptor) -> Self {
        FieldElem {
            field,
            coords: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: FieldDescriptor, q: BigRational) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = q;
        e
    }

    pub fn from_int(field: FieldDescriptor, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn from_coords(field: FieldDescriptor, coords: Vec<BigRational>) -> Result<Self, FieldError> {
        if coords.len() != field.degree() {
            return Err(FieldError::CoordCount {
                expected: field.degree(),
                got: coords.len(),
            });
        }
        Ok(FieldElem { field, coords })
    }

    /// The basis element indexed by `mask`.
    pub fn basis(field: FieldDescriptor, mask: usize) -> Self {
        let mut e = Self::zero(field);
        e.coords[mask] = BigRational::one();
        e
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.coords[0]
    }

    /// Rewrite in a larger field that contains every radicand of `self`.
    pub fn lift(&self, target: FieldDescriptor) -> Result<Self, FieldError> {
        if target == self.field {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.field.rank());
        for d in self.field.radicands() {
            let i = target
                .radicands()
                .iter()
                .position(|r| r == d)
                .ok_or(FieldError::DescriptorMismatch(self.field, target))?;
            map.push(i);
        }
        let mut out = Self::zero(target);
        for (mask, c) in self.coords.iter().enumerate() {
            let mut m = 0;
            for (i, &j) in map.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    m |= 1 << j;
                }
            }
            out.coords[m] = c.clone();
        }
        Ok(out)
    }

    fn check(&self, other: &FieldElem) -> Result<(), FieldError> {
        if self.field != other.field {
            Err(FieldError::DescriptorMismatch(self.field, other.field))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check(other)?;
        Ok(self * &other.inverse()?)
    }

    pub fn scale(&self, q: &BigRational) -> FieldElem {
        FieldElem {
            field: self.field,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn galois(&self, s: GaloisSigns) -> FieldElem {
        if s.is_identity() {
            return self.clone();
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(m, c)| if s.basis_sign(m) { -c } else { c.clone() })
            .collect();
        FieldElem {
            field: self.field,
            coords,
        }
    }

    /// Inverse via the product of all nontrivial conjugates, which leaves a rational norm.
    pub fn inverse(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.field, self.coords[0].recip()));
        }
        let mut acc = Self::one(self.field);
        for flips in 1..(1u8 << self.field.rank()) {
            acc = &acc * &self.galois(GaloisSigns::from_flips(flips));
        }
        let norm = (self * &acc).coords[0].clone();
        Ok(acc.scale(&norm.recip()))
    }

    pub fn pow(&self, mut k: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self += a * b` without a temporary element.
    pub fn add_mul(&mut self, a: &FieldElem, b: &FieldElem) {
        let f = self.field;
        if f.len == 0 {
            self.coords[0] += &a.coords[0] * &b.coords[0];
            return;
        }
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let sq = f.basis_square(i & j);
                let t = x * y;
                if sq == 1 {
                    self.coords[i ^ j] += t;
                } else {
                    self.coords[i ^ j] += t * BigInt::from(sq);
                }
            }
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (mask, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mask == 0 {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&self.field.basis_label(mask));
            } else {
                out.push_str(&fmt_rational(&a));
                out.push('*');
                out.push_str(&self.field.basis_label(mask));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Element squaring to `d`, if `d` is a radicand-subset product times a rational square.
pub fn sqrt_symbol(d: i64, field: FieldDescriptor) -> Result<FieldElem, FieldError> {
    if d == 0 {
        return Ok(FieldElem::zero(field));
    }
    for mask in 0..field.degree() {
        let p = field.basis_square(mask);
        if d as i128 % p != 0 {
            continue;
        }
        // d = p * c^2 with c = sqrt(d*p)/|p|
        let dp = BigInt::from(d) * BigInt::from(p);
        if dp.is_negative() {
            continue;
        }
        let r = dp.sqrt();
        if &r * &r != dp {
            continue;
        }
        let c = BigRational::new(r, BigInt::from(p).abs());
        let mut e = FieldElem::zero(field);
        e.coords[mask] = c;
        return Ok(e);
    }
    Err(FieldError::NotRepresentable(d, field))
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        debug_assert_eq!(self.field, rhs.field);
        FieldElem {
            field: self.field,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        debug_assert_eq!(self.field, rhs.field);
        FieldElem {
            field: self.field,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        debug_assert_eq!(self.field, rhs.field);
        let mut out = FieldElem::zero(self.field);
        out.add_mul(self, rhs);
        out
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            field: self.field,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(mut self) -> FieldElem {
        for c in &mut self.coords {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &FieldElem) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn descriptor_validation() {
        assert!(FieldDescriptor::new(&[-1, 3]).is_ok());
        assert!(FieldDescriptor::new(&[4]).is_err());
        assert!(FieldDescriptor::new(&[1]).is_err());
        assert!(FieldDescriptor::new(&[2, 8 / 4]).is_err());
        assert!(FieldDescriptor::new(&[-1, -1]).is_err());
        assert!(FieldDescriptor::new(&[-1, 2, 3]).is_err());
        // -3 * -1 = 3 is not a square, but 3 * 3 would be
        assert!(FieldDescriptor::new(&[-3, -1]).is_ok());
    }

    #[test]
    fn i_squared() {
        let f = FieldDescriptor::new(&[-1]).unwrap();
        let i = FieldElem::basis(f, 1);
        assert_eq!(&i * &i, FieldElem::from_int(f, -1));
    }

    #[test]
    fn mixed_basis_product() {
        let f = FieldDescriptor::new(&[-1, 3]).unwrap();
        let i = FieldElem::basis(f, 1);
        let r3 = FieldElem::basis(f, 2);
        let p = &i * &r3;
        assert_eq!(p, FieldElem::basis(f, 3));
        assert_eq!(&p * &p, FieldElem::from_int(f, -3));
    }

    #[test]
    fn zeta_cubed() {
        let f = FieldDescriptor::new(&[-1, 3]).unwrap();
        let s = sqrt_symbol(-3, f).unwrap();
        let zeta = (&FieldElem::from_int(f, -1) + &s).scale(&q(1, 2));
        assert!(zeta.pow(3).is_one());
        assert!(!zeta.is_one());
    }

    #[test]
    fn sqrt_symbols() {
        let f = FieldDescriptor::new(&[-1, 3]).unwrap();
        assert_eq!(sqrt_symbol(-3, f).unwrap(), FieldElem::basis(f, 3));
        assert!(matches!(
            sqrt_symbol(5, f),
            Err(FieldError::NotRepresentable(5, _))
        ));
        let s12 = sqrt_symbol(12, f).unwrap();
        assert_eq!(&s12 * &s12, FieldElem::from_int(f, 12));
        let s4 = sqrt_symbol(-4, f).unwrap();
        assert_eq!(&s4 * &s4, FieldElem::from_int(f, -4));
        let g = FieldDescriptor::new(&[-1, 2]).unwrap();
        assert_eq!(sqrt_symbol(-2, g).unwrap(), FieldElem::basis(g, 3));
    }

    #[test]
    fn galois_examples() {
        let f = FieldDescriptor::new(&[-1]).unwrap();
        let e = FieldElem::from_coords(f, vec![q(3, 1), q(2, 1)]).unwrap();
        let s = GaloisSigns::from_pairs(&f, &[(-1, -1)]).unwrap();
        assert_eq!(
            e.galois(s),
            FieldElem::from_coords(f, vec![q(3, 1), q(-2, 1)]).unwrap()
        );
        let g = FieldDescriptor::new(&[-1, 2]).unwrap();
        let r = sqrt_symbol(-2, g).unwrap();
        let s = GaloisSigns::from_pairs(&g, &[(-1, -1), (2, 1)]).unwrap();
        assert_eq!(r.galois(s), -&r);
        let seven = FieldElem::from_int(g, 7);
        assert_eq!(seven.galois(GaloisSigns::from_flips(3)), seven);
    }

    #[test]
    fn inverse_biquadratic() {
        let f = FieldDescriptor::new(&[-1, 3]).unwrap();
        let e = FieldElem::from_coords(f, vec![q(1, 2), q(-3, 1), q(2, 7), q(5, 1)]).unwrap();
        let inv = e.inverse().unwrap();
        assert!((&e * &inv).is_one());
        assert!(matches!(
            FieldElem::zero(f).inverse(),
            Err(FieldError::DivisionByZero)
        ));
    }

    #[test]
    fn mismatch() {
        let f = FieldDescriptor::new(&[-1]).unwrap();
        let g = FieldDescriptor::new(&[2]).unwrap();
        let a = FieldElem::one(f);
        let b = FieldElem::one(g);
        assert!(matches!(
            a.try_add(&b),
            Err(FieldError::DescriptorMismatch(..))
        ));
    }

    #[test]
    fn rendering() {
        let f = FieldDescriptor::new(&[-1, 3]).unwrap();
        let e = FieldElem::from_coords(f, vec![q(1, 2), q(-1, 1), q(0, 1), q(3, 4)]).unwrap();
        assert_eq!(e.to_string(), "1/2 - sqrt(-1) + 3/4*sqrt(-1)*sqrt(3)");
        assert_eq!(FieldElem::zero(f).to_string(), "0");
        assert_eq!((-FieldElem::basis(f, 2)).to_string(), "-sqrt(3)");
    }

    #[test]
    fn lift_into_bigger_field() {
        let small = FieldDescriptor::new(&[3]).unwrap();
        let big = FieldDescriptor::new(&[-1, 3]).unwrap();
        let e = FieldElem::basis(small, 1).lift(big).unwrap();
        assert_eq!(e, FieldElem::basis(big, 2));
    }
}
