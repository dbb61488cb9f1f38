use thiserror::Error;

/// Errors raised by the arithmetic, matrix and interpolation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime greater than 2")]
    NotPrime(u64),
    #[error("residue {value} is not reduced modulo {p}")]
    ResidueOutOfRange { value: u64, p: u64 },
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("operands live over different fields ({0} vs {1})")]
    FieldMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero row has no s-degree")]
    ZeroRow,
    #[error("singular matrix")]
    Singular,
    #[error("matrix is not in shifted weak Popov form")]
    NotWeakPopov,
    #[error("invalid Jordan block: {0}")]
    InvalidJordan(String),
    #[error("base case does not linearize (sigma {sigma} < m {m})")]
    BaseCaseDoesNotLinearize { sigma: usize, m: usize },
    #[error("inconsistent minimal degree")]
    InconsistentMinimalDegree,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
