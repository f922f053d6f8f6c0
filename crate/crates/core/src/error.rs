use alloc::string::String;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown alternative index {0}")]
    UnknownAlternative(usize),
    #[error("unknown alternative `{0}`")]
    UnknownName(String),
    #[error("duplicate alternative `{0}`")]
    DuplicateName(String),
    #[error("empty alternative name")]
    EmptyName,
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid voting rule: {0}")]
    InvalidRule(String),
    #[error("ball exceeds {limit} elements")]
    BallTooLarge { limit: usize },
    #[error("malformed flow network: {0}")]
    MalformedNetwork(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("invalid (3,B2)-SAT input: {0}")]
    Sat(String),
    #[error("gadget construction failed: {0}")]
    Gadget(String),
    #[error("invalid margin target: {0}")]
    Wmg(String),
    #[error("internal error: {0}")]
    Internal(String),
}
