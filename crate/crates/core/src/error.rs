use thiserror::Error;

/// Errors produced by construction, generation, and estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight {value} at position {index} is negative beyond tolerance")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weight at position {index} is not finite")]
    NonFiniteWeight { index: usize },

    #[error("weight vector has no mass to normalize")]
    ZeroMass,

    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("tuple must contain at least one symbol")]
    EmptyTuple,

    #[error("sequence must contain at least one symbol")]
    EmptySequence,

    #[error("sampling net must contain at least one item")]
    EmptyNet,

    #[error("regularity must contain at least one measure")]
    EmptyRegularity,

    #[error("measures {i} and {j} coincide; a point-set regularity must list distinct measures")]
    DuplicatePoint { i: usize, j: usize },

    #[error("alphabet has {size} symbols; event enumeration supports at most {max}")]
    AlphabetTooLarge { size: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stream yields {have} trajectory points but the estimator needs at least {need}")]
    TooFewPoints { have: usize, need: usize },

    #[error(
        "target regularity is disconnected: consecutive prefix measures of a single sequence \
         move by at most 1/(n+1), so its limit set is connected; realize the target as a net, \
         mark it convex, or declare the listed points as a path"
    )]
    DisconnectedTarget,

    #[error("the regularities coincide; no separating function exists")]
    IdenticalRegularities,

    #[error("tuple lengths must be nondecreasing along the net (item {index})")]
    DecreasingLengths { index: usize },

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
