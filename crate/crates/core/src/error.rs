use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("index 0 at byte {pos}: leaf indices start at 1")]
    ZeroIndex { pos: usize },

    #[error("duplicate leaf index x{index}")]
    DuplicateIndex { index: u32 },

    #[error("leaf indices are not exactly 1..{arity}")]
    NotAWord { arity: usize },

    #[error("{0} is not in L")]
    NotInL(String),

    #[error("expected a bracket, found leaf {0}")]
    ExpectedBracket(String),

    #[error("substitution position {position} is out of range 1..={arity}")]
    PositionOutOfRange { position: usize, arity: usize },

    #[error("n = {n} exceeds the configured limit of {limit}")]
    ResourceLimit { n: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("no matrix assigned to leaf x{0}")]
    MissingAssignment(u32),

    #[error("integer overflow during matrix evaluation")]
    Overflow,

    #[error("requested {0} digits; at least 20 are required")]
    Precision(u32),

    #[error("unknown render format {0:?}")]
    UnknownFormat(String),
}
