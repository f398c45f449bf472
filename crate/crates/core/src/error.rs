use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible variable specs: {0}")]
    IncompatibleSpec(String),
    #[error("invalid variable spec: {0}")]
    InvalidSpec(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("hbar exponent {exp} below floor {floor}")]
    HbarFloor { exp: i32, floor: i32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constant term not of the form ±r² with r rational: {0}")]
    UnsupportedSqrt(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution is not graded-admissible: {0}")]
    NotGradedAdmissible(String),
    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("relation not applicable: {0}")]
    Inapplicable(String),
    #[error("insufficient coefficients: need {needed}, have {have}")]
    InsufficientCoefficients { needed: usize, have: usize },
    #[error("level {level} outside the allowed range (bound {bound})")]
    LevelOverflow { level: i32, bound: i32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
