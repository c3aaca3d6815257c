use binforms::FormError;
use exactalg::AlgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpencerError {
    #[error("basis is not closed under commutators")]
    NotClosed,
    #[error("matrices of inconsistent size")]
    Shape,
    #[error("input is not alternating")]
    NotAlternating,
    #[error("torsion lies outside the solvable subspace")]
    Inconsistent,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

pub type Result<T> = std::result::Result<T, SpencerError>;
