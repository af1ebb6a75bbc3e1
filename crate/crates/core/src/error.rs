use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("alphabet size {0} is not supported (expected 2..=255)")]
    InvalidAlphabet(usize),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u8, right: u8 },

    #[error("letter {letter} is outside the alphabet 1..={n}")]
    LetterOutOfRange { letter: usize, n: u8 },

    #[error("normal form would need {projected} terms, budget is {budget}")]
    ExpansionBudgetExceeded { projected: u128, budget: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix index ({i}, {j}) is invalid for dimension {dim}")]
    InvalidIndex { i: usize, j: usize, dim: usize },

    #[error("a a* is not a scalar multiple of the unit")]
    NonScalarKernel,

    #[error("1 + a a* is not invertible")]
    SingularKernel,

    #[error("not a projection")]
    NotAProjection,

    #[error("projection is trivial (0 or the unit)")]
    TrivialProjection,

    #[error("not a unitary")]
    NotUnitary,

    #[error("not an involution")]
    NotAnInvolution,

    #[error("v v* is not the unit")]
    NotCoIsometry,

    #[error("entry ({i}, {j}) does not lie in the corner e11 A e11")]
    NotInCorner { i: usize, j: usize },

    #[error("element does not lie in the reduced algebra r A r")]
    NotInReducedAlgebra,

    #[error("element has terms outside degree zero")]
    NotDegreeZero,

    #[error("no order up to {max} verified (v^m != 1)")]
    OrderNotVerified { max: u32 },

    #[error("parts {first} and {second} are not orthogonal")]
    NotOrthogonal { first: usize, second: usize },

    #[error("not a frame: {0}")]
    InvalidFrame(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generator s{index} is out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: u8 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}
