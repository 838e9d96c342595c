use thiserror::Error;

/// Whether an element missing from a saturation is known to be outside `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absence {
    /// The saturation reached its fixpoint, so the element is not in `M`.
    Proven,
    /// A resource limit stopped the saturation early; the element may still be in `M`.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is outside the universe: {0}")]
    OutOfUniverse(String),

    #[error("cannot compare elements of different universes ({left} vs {right})")]
    MixedUniverse { left: String, right: String },

    #[error("operation `{op}` expects {expected} argument(s), got {got}")]
    ArityMismatch { op: String, expected: usize, got: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("the base set must not be empty")]
    EmptyBase,

    #[error("operation `{op}` failed: {reason}")]
    Evaluation { op: String, reason: String },

    #[error("element {element} is not in M ({})", match .absence {
        Absence::Proven => "proven absent",
        Absence::Unknown => "unknown, saturation stopped at a limit",
    })]
    NotInM { element: String, absence: Absence },

    #[error("description would have {length} entries, above the limit of {limit}")]
    DescriptionTooLong { length: u128, limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("universe has {size} elements; subset enumeration is capped at {cap}")]
    UniverseTooLarge { size: usize, cap: usize },

    #[error("no subset of the universe contains the base and is closed")]
    NoClosedSuperset,

    #[error("saturation did not reach a fixpoint (stopped: {0})")]
    NotFixpoint(String),

    #[error("generator {generator} is not a unit modulo {modulus}")]
    NotAUnit { generator: u64, modulus: u64 },

    #[error("invalid recurrence: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bad alphabet: {0}")]
    BadAlphabet(String),

    #[error("cannot parse element `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
