//! Sparse multivariate polynomials over the coefficient field.

pub mod gcd;
mod monomial;
mod multipoly;
mod varset;
pub(crate) mod zp;

pub use monomial::{Monomial, Var};
pub use multipoly::{MultiPoly, Point, PolyDisplay};
pub use varset::VarSet;
