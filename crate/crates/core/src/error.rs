use alloc::string::String;

use thiserror::Error;

use crate::split::Split;
use crate::subset::Subset;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The ground set must have between 1 and [`crate::subset::MAX_N`] elements.
    #[error("ground set size {0} is out of range")]
    GroundSetSize(usize),
    /// `k` is outside the range allowed by the operation.
    #[error("k = {k} is out of range for n = {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("rank {rank} is out of range for C({n}, {k})")]
    RankOutOfRange { rank: usize, k: usize, n: usize },
    #[error("malformed subset: {0}")]
    MalformedSubset(String),
    #[error("element {element} is not in the ground set {{1..{n}}}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// Two objects live on different hypersimplices.
    #[error("mismatched dimensions: ({k1}, {n1}) vs ({k2}, {n2})")]
    DimensionMismatch { k1: usize, n1: usize, k2: usize, n2: usize },
    #[error("subset {0} does not define a split of the hypersimplex")]
    NotSplitDefining(Subset),
    #[error("split {0} is trivial")]
    TrivialSplit(Split),
    #[error("operation requires k = 2, got k = {0}")]
    RequiresKTwo(usize),
    #[error("n = {n} is too small for k = {k} (need n >= {required})")]
    GroundSetTooSmall { n: usize, k: usize, required: usize },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("Newick parse error at byte {position}: {message}")]
    Newick { position: usize, message: String },
    #[error("splits {0} and {1} are not compatible")]
    IncompatibleSplits(Split, Split),
    #[error("trivial split of element {0} is missing")]
    MissingTrivialSplit(usize),
    #[error("weight of split {0} is not positive")]
    NonPositiveWeight(Split),
    #[error("weight range is empty or not strictly positive")]
    EmptyRange,
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}
