use alloc::string::String;

/// Everything that can go wrong while building or observing coinductive values.
///
/// Labels, states and sorts are carried in their `Debug` rendering so the
/// error type stays independent of the label and state types in use.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("label {label} expects {expected} children, got {found}")]
    ArityMismatch {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("children have ragged depths: expected {expected}, found {found}")]
    RaggedDepth { expected: usize, found: usize },
    #[error("the depth-0 tree has no stage below it")]
    CannotTruncateUnit,
    #[error("cannot truncate a depth-{depth} tree to depth {requested}")]
    DepthTooLarge { requested: usize, depth: usize },
    #[error("operation needs a finite label enumeration")]
    NeedsFiniteLabels,
    #[error("enumeration would exceed the size bound of {bound} trees")]
    SizeBoundExceeded { bound: usize },
    #[error("label {label} is not in the signature")]
    UnknownLabel { label: String },
    #[error("label {label} is listed twice")]
    DuplicateLabel { label: String },
    #[error("unknown state {state}")]
    UnknownState { state: String },
    #[error("state {state} is listed twice")]
    DuplicateState { state: String },
    #[error("cone legs do not commute at stage {stage} for apex {apex}")]
    ConeLawViolation { stage: usize, apex: String },
    #[error("label drifted at stage {stage}: expected {expected}, found {found}")]
    LabelDrift {
        stage: usize,
        expected: String,
        found: String,
    },
    #[error("depth {requested} exceeds the configured bound {bound}")]
    DepthBoundExceeded { requested: usize, bound: usize },
    #[error("candidate is not a coalgebra morphism: state {state} fails at stage {stage}")]
    NotAMorphism { state: String, stage: usize },
    #[error("operation needs a finite state enumeration")]
    NeedsFiniteStates,
    #[error("invalid bisimulation witness: {reason}")]
    InvalidWitness { reason: String },
    #[error("pair ({left}, {right}) is not in the witness relation")]
    PairNotRelated { left: String, right: String },
    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: String, found: String },
    #[error("unknown sort {sort}")]
    UnknownSort { sort: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn show<T: core::fmt::Debug + ?Sized>(value: &T) -> String {
    alloc::format!("{value:?}")
}
