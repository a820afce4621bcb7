use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order must be positive")]
    ZeroOrder,

    #[error("scalars belong to different fields: order {left} vs order {right}")]
    FieldMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("alphabet mismatch: {left} letters vs {right} letters")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("letter index {letter} outside an alphabet of {size} letters")]
    LetterOutOfRange { letter: usize, size: usize },

    #[error("weight {weight} exceeds the configured cap {cap}")]
    WeightCapExceeded { weight: usize, cap: usize },

    #[error("substitution image for letter {letter} has a nonzero constant term")]
    ConstantImage { letter: usize },

    #[error("substitution needs {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },

    #[error("element has a nonzero constant term")]
    NonzeroConstant,

    #[error("element is not a Lie polynomial (weight {weight} fails the Dynkin test)")]
    NotLie { weight: usize },

    #[error("word of length {length} is not divisible by the trace order {order}")]
    LengthNotDivisible { length: usize, order: u32 },

    #[error("derivation component of weight {weight} is not divisible by the order {order}")]
    WeightNotDivisible { weight: usize, order: u32 },

    #[error("trace order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
