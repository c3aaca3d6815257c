//! Exact rational arithmetic, sparse multivariate polynomials and exact
//! linear algebra.

pub mod error;
pub mod json;
pub mod linsys;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod random;
pub mod scalar;

pub use error::{AlgError, Result};
pub use matrix::{LinSolution, PolyMatrix, QMatrix};
pub use poly::{context, Ctx, Monomial, Poly};
pub use scalar::Scalar;
