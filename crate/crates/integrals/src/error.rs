use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntegralError {
    #[error("point file: {0}")]
    Point(String),
    #[error("no point off the singular locus after {0} attempts")]
    Retries(usize),
    #[error(transparent)]
    Calc(#[from] excalc::CalcError),
    #[error(transparent)]
    Form(#[from] binforms::FormError),
    #[error(transparent)]
    Alg(#[from] exactalg::AlgError),
}

pub type Result<T> = std::result::Result<T, IntegralError>;
