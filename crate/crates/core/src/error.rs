use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library. `code()` gives the short tag the CLI
/// prints in its `ERROR <code>: <message>` line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("tuple repeats element {0}")]
    DuplicateEntry(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("arity {0} is outside the supported range 1..=8")]
    ArityTooLarge(usize),
    #[error("group closure exceeds {0} elements")]
    GroupClosure(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("induced structures on the shared part disagree: {0}")]
    SharedMismatch(String),
    #[error("universes overlap outside the amalgamation base: {0}")]
    OverlapNotA(String),
    #[error("search over {size} elements exceeds the configured bound {bound}")]
    SearchBoundExceeded { size: usize, bound: usize },
    #[error("dimension functions differ on {{{}}}: {left} vs {right}", witness.join(","))]
    DimMismatch {
        witness: Vec<String>,
        left: i64,
        right: i64,
    },
    #[error("base set is not self-sufficient")]
    NotStrongBase,
    #[error("structure {0} is not in the class")]
    NotInClass(String),
    #[error("structure has no collisions")]
    NoCollision,
    #[error("lifted type failed verification: {0}")]
    LiftVerificationFailed(String),
    #[error("tuple length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("group is not a subgroup of the target group")]
    NotSubgroup,
    #[error("group is not a proper subgroup of the target group")]
    NotProperSubgroup,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition violated: {0}")]
    PostconditionFailed(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateEntry(_) => "duplicate-entry",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::UnknownElement(_) => "unknown-element",
            Error::InvalidPermutation(_) => "invalid-permutation",
            Error::ArityTooLarge(_) => "arity",
            Error::GroupClosure(_) => "group-closure",
            Error::Parse { .. } => "parse",
            Error::SharedMismatch(_) => "shared-mismatch",
            Error::OverlapNotA(_) => "overlap",
            Error::SearchBoundExceeded { .. } => "search-bound",
            Error::DimMismatch { .. } => "dim-mismatch",
            Error::NotStrongBase => "not-strong",
            Error::NotInClass(_) => "not-in-class",
            Error::NoCollision => "no-collision",
            Error::LiftVerificationFailed(_) => "lift",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::NotSubgroup => "not-subgroup",
            Error::NotProperSubgroup => "not-proper-subgroup",
            Error::PreconditionFailed(_) => "precondition",
            Error::PostconditionFailed(_) => "postcondition",
        }
    }
}
