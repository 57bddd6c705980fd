use thiserror::Error;

/// Errors raised by the interpolation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("invalid signature matrix: {0}")]
    InvalidSignature(String),
    #[error("sequence is not a J-Potapov sequence")]
    NotPotapov,
    #[error("sequence is not strict")]
    NotStrict,
    #[error("parameter is not contractive (norm {0})")]
    NotContractive(f64),
    #[error("Potapov-Ginzburg transform is singular")]
    SingularPg,
    #[error("polynomial degree {degree} exceeds formal degree {formal}")]
    DegreeExceeded { degree: usize, formal: usize },
    #[error("invalid elementary factor data: {0}")]
    InvalidFactorData(String),
    #[error("denominator is singular at the origin")]
    SingularAtOrigin,
    #[error("invalid Schur parameter: {0}")]
    InvalidParam(String),
    #[error("every boundary sample hit a denominator zero")]
    AllSamplesSingular,
    #[error("denominator is singular at the evaluation point")]
    SingularDenominator,
    #[error("point lies outside the common holomorphy set")]
    OutsideCommonDomain,
    #[error("ball semi-radius is singular")]
    SingularRadius,
    #[error("ball transfer matrix is singular")]
    SingularTransfer,
    #[error("singular matrix")]
    Singular,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
