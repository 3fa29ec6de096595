use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("k must be at least 2, got {0}")]
    TooFewCovers(usize),
    #[error("instance needs at least one area")]
    NoAreas,
    #[error("instance needs at least one subset")]
    NoSubsets,
    #[error("subset {subset} references area {area}, but there are only {num_areas} areas")]
    AreaOutOfRange {
        subset: usize,
        area: u32,
        num_areas: usize,
    },
    #[error("subset {subset} lists area {area} more than once")]
    DuplicateArea { subset: usize, area: u32 },
    #[error("requested {requested} edges but only {possible} subset-area pairs exist")]
    TooManyEdges { requested: u64, possible: u64 },
    #[error("partition has {got} assignments, instance has {expected} subsets")]
    PartitionLength { expected: usize, got: usize },
    #[error("partition built for k = {got}, instance has k = {expected}")]
    PartitionCovers { expected: usize, got: usize },
    #[error("subset {subset} assigned to cover {cover}, outside 0..{k}")]
    CoverOutOfRange { subset: usize, cover: u32, k: usize },
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("set {set} is not a 4-element subset of the ground set: {reason}")]
    InvalidSplittingSet { set: usize, reason: &'static str },
    #[error("invalid deployment: {0}")]
    InvalidDeployment(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("report invariant violated: {0}")]
    ReportInvariant(String),
}
