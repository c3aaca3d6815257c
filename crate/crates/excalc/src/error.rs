use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalcError {
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("form-valued expression has stray bidegree {0:?}")]
    StrayBidegree((u32, u32)),
    #[error("ideal generator {0} is not a constant-coefficient 1-form")]
    BadIdealGenerator(usize),
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error(transparent)]
    Form(#[from] binforms::FormError),
    #[error(transparent)]
    Alg(#[from] exactalg::AlgError),
}

pub type Result<T> = std::result::Result<T, CalcError>;
