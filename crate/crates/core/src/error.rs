use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("edge {edge} appears {count} times (expected 2)")]
    EdgeMultiplicity { edge: u64, count: usize },

    #[error("inconsistent component cycles: {0}")]
    ComponentCycle(String),

    #[error(
        "components {i} and {j} cross {count} times; an odd count cannot come from closed curves"
    )]
    OddInterCrossings { i: usize, j: usize, count: usize },

    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },

    #[error("length mismatch for {what}: expected {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("linking matrix is not symmetric at ({i}, {j}): {a} != {b}")]
    Asymmetric { i: usize, j: usize, a: i64, b: i64 },

    #[error("coupling level k must be nonzero")]
    ZeroLevel,

    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u64, u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("component {0} is a surgery component; this operation needs observed components only")]
    SurgeryComponent(usize),

    #[error("component {0} is not a surgery component")]
    NotSurgery(usize),

    #[error("component {0} is linked to other components")]
    NotIsolated(usize),

    #[error("component {0} has framing {1}, expected +1 or -1")]
    NotUnitFramed(usize, i64),

    #[error("handle slide needs two distinct components (got {0} twice)")]
    SelfSlide(usize),

    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i64),

    #[error("the surgery normalization Gauss sum vanishes at this level")]
    DenominatorZero,

    #[error("oracle would sum {terms} terms, above the cap {cap}")]
    TermLimit { terms: u128, cap: u128 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("genus mismatch: expected {expected}, got {got}")]
    GenusMismatch { expected: u32, got: u32 },

    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_sign(sign: i64) -> Result<i64> {
    match sign {
        1 | -1 => Ok(sign),
        s => Err(Error::BadSign(s)),
    }
}
