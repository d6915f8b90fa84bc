use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dataset needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("points need at least one feature")]
    NoFeatures,
    #[error("point {point} has {found} features, expected {expected}")]
    RaggedPoint {
        point: usize,
        found: usize,
        expected: usize,
    },
    #[error("non-finite value at point {point}, feature {feature}")]
    NonFiniteValue { point: usize, feature: usize },
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("dataset has no labels")]
    MissingLabels,
    #[error("invalid synthetic dataset spec: {0}")]
    InvalidSynthSpec(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("non-finite distance between points {i} and {j}")]
    NonFiniteDistance { i: usize, j: usize },
    #[error("item {item} outside universe of {universe} items")]
    ItemOutOfRange { item: usize, universe: usize },
    #[error("duplicate item {item} in transaction {transaction}")]
    DuplicateItem { transaction: usize, item: usize },
    #[error("transaction database is empty")]
    EmptyDatabase,
    #[error("set over universe {found} used where universe {expected} is required")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("min_support {min_support} exceeds {n} transactions")]
    MinSupportTooLarge { min_support: usize, n: usize },
    #[error("duplicate cluster {0:?}")]
    DuplicateCluster(alloc::vec::Vec<usize>),
    #[error("hierarchy does not contain the full point set")]
    MissingRoot,
    #[error("purity of an empty cluster is undefined")]
    EmptyCluster,
    #[error("partition is invalid: {0}")]
    InvalidPartition(String),
    #[error("no same-class pairs: every class is a singleton")]
    NoSameClassPairs,
    #[error("lca needs two distinct points, got {0} twice")]
    SamePoint(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
