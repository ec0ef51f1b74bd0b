use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("degenerate labels: at least two distinct classes are required")]
    DegenerateLabels,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("insufficient examples for k folds: class `{class}` has {count} examples, k = {k}")]
    InsufficientExamples { class: String, count: usize, k: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("undefined correlation: zero variance")]
    UndefinedCorrelation,
    #[error("empty input")]
    EmptyInput,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("model `{0}`: {1}")]
    Model(String, String),
}
