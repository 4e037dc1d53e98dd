use thiserror::Error;

pub type Result<T, E = NvError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NvError {
    #[error("invalid signature: n={n}, k={k} (need n >= 1 and 2 <= k <= 10)")]
    InvalidSignature { n: usize, k: usize },
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("invalid digit {digit:?} for alphabet size {k}")]
    InvalidDigit { digit: char, k: u8 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("code is not joinless")]
    NotJoinless,
    #[error("code is not a maximal joinless code")]
    NotMaximal,
    #[error("tuple {0} is not an element of the code")]
    ElementNotInCode(String),
    #[error("axis {axis} out of range 1..={n}")]
    BadAxis { axis: usize, n: usize },
    #[error("not every child of {0} along axis {1} is in the code")]
    ChildrenMissing(String, usize),
    #[error("{0} has no initial factor in the domain code")]
    NotBelowDomain(String),
    #[error("operation requires {expected}, got n={n}, k={k}")]
    WrongDimension { expected: &'static str, n: usize, k: u8 },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed bit string at offset {0}")]
    MalformedBits(usize),
    #[error("bad indices: {0}")]
    BadIndices(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("circuit is not strictly layered")]
    NotStrict,
    #[error("invalid slice: {0}")]
    InvalidSlice(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for NvError {
    fn from(e: std::io::Error) -> Self {
        NvError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for NvError {
    fn from(e: serde_json::Error) -> Self {
        NvError::Parse(e.to_string())
    }
}
