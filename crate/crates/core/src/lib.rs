//! Exact algebra for verifying finite group actions on rational function fields.

pub mod action;
pub mod catalog;
pub mod error;
pub mod field;
pub mod matgroup;
pub mod poly;
pub mod ratfunc;

pub use action::{ActionGroup, Convention, FieldAutomorphism};
pub use error::{Error, FieldError, Result};
pub use field::{sqrt_symbol, FieldDescriptor, FieldElem, GaloisSigns};
pub use poly::{Monomial, MultiPoly, Point, Var, VarSet};
pub use matgroup::{close, conjugate, matrix_order, MatrixGroup, RatMatrix};
pub use ratfunc::{probable_eq, RatFunc, Substitution};
