use alloc::string::String;

/// Errors raised by the norm engines and their inputs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Schatten exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix data has {found} entries, expected {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("matrix dimensions must be positive")]
    EmptyShape,
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("empty coefficient list")]
    Empty,
    #[error("index 0 is not a basis index; indices start at 1")]
    ZeroIndex,
    #[error("support of size {size} exceeds the enumeration cap {cap}")]
    SupportTooLarge { size: usize, cap: usize },
    #[error("theta must lie strictly between 0 and 1, got {0}")]
    InvalidTheta(f64),
    #[error("p = {p} is outside the admissible range for {variant}")]
    ExponentOutOfRange { p: f64, variant: &'static str },
    #[error("engine requires 1x1 (scalar) coefficients")]
    NotScalar,
    #[error("engine requires square coefficient matrices")]
    NotSquare,
    #[error("supports overlap")]
    OverlappingSupports,
    #[error("phase {0} is not unimodular")]
    NonUnimodular(f64),
    #[error("groups must partition the coefficient indices")]
    InvalidGroups,
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
