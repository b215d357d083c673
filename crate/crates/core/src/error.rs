use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero polynomial has no leading polynomial")]
    ZeroPolynomial,
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("variable x{index} is not defined at this point (only {available} matrices)")]
    VariableOutOfRange { index: usize, available: usize },
    #[error("generator list is empty or all zero")]
    EmptyGenerators,
    #[error("degree {requested} is below the ideal's degree bound {bound}")]
    DegreeTooSmall { requested: usize, bound: usize },
    #[error("semidefinite feasibility undecided: {0}")]
    Undecided(String),
    #[error("factorization degree cap {cap} exceeded (degree {degree})")]
    DegreeCapExceeded { cap: usize, degree: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
