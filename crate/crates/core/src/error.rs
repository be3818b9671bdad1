use num_bigint::BigInt;

/// Errors shared by every module of the crate.
///
/// `Parse` is the only variant produced while reading input text; everything
/// else is a domain error on values that parsed fine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("negative radicand {0}: complex values are not supported")]
    NegativeRadicand(BigInt),

    #[error("value is rational; use the rational expansion for it")]
    RationalInput,

    #[error("malformed digit sequence near position {0}: inner digits must be nonnegative and the tail must denote a finite, genuinely periodic value")]
    MalformedDigits(usize),

    #[error("expected {expected}, found {found}")]
    WrongClass {
        expected: &'static str,
        found: &'static str,
    },

    #[error("path target {0} is negative; growth along the reflected path is identical, expand the negated value instead")]
    NegativePath(String),

    #[error("matrix must have determinant 1, found {0}")]
    NotUnimodular(BigInt),

    #[error("{0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
