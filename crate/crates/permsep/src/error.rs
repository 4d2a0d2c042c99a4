use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("subsystem list must name at least one party")]
    NoParties,

    #[error("subsystem dimension must be at least 1, got {0}")]
    BadDimension(usize),

    #[error("party {party} out of range 1..={count}")]
    PartyOutOfRange { party: usize, count: usize },

    #[error("entry buffer holds {got} values, expected {expected}")]
    EntryCountMismatch { got: usize, expected: usize },

    #[error("permutation map {map:?} is not a bijection on 0..{}", .map.len())]
    NotABijection { map: Vec<usize> },

    #[error("a slot layout needs an even, nonzero number of positions, got {0}")]
    OddSlotCount(usize),

    #[error("permutation acts on {got} slot positions, layout has {expected}")]
    SlotCountMismatch { got: usize, expected: usize },

    #[error("factor position {pos} out of range 1..={limit}")]
    FactorOutOfRange { pos: usize, limit: usize },

    #[error("operation requires {expected} parties, state has {got}")]
    WrongPartyCount { expected: usize, got: usize },

    #[error("parties must be distinct, got {0} twice")]
    RepeatedParty(usize),

    #[error("transposed party {l} must be one of the swapped pair ({j},{k})")]
    TransposeOutsidePair { l: usize, j: usize, k: usize },

    #[error("operation needs a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix shapes {a_rows}x{a_cols} and {b_rows}x{b_cols} do not chain")]
    ProductShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },

    #[error("state invariant violated: {what} = {measured:.6e}, allowed {allowed:.1e}")]
    InvariantViolation {
        what: &'static str,
        measured: f64,
        allowed: f64,
    },

    #[error("invalid state specification: {0}")]
    InvalidStateSpec(String),

    #[error("state file malformed: {0}")]
    MalformedStateFile(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("spectral grouping needs at least 3 samples, got {0}")]
    TooFewSamples(usize),

    #[error("singular value iteration failed to converge after {0} sweeps")]
    SvdNoConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
