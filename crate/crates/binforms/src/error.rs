use exactalg::AlgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("not bihomogeneous of bidegree ({n},{m})")]
    NotBihomogeneous { n: u32, m: u32 },
    #[error("cannot infer the bidegree of the zero form")]
    ZeroBidegree,
    #[error("pairing order ({p1},{p2}) out of range for bidegrees {left:?} and {right:?}")]
    OrderOutOfRange { p1: u32, p2: u32, left: (u32, u32), right: (u32, u32) },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("action does not preserve the subspace")]
    NotPreserved,
    #[error("basis is not a weight basis")]
    NotWeightBasis,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Alg(#[from] AlgError),
}

pub type Result<T> = std::result::Result<T, FormError>;
