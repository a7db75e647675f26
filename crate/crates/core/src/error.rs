use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown classifier `{0}`")]
    UnknownClassifier(String),

    #[error("missing response from classifier `{classifier}` on item `{item}`")]
    MissingResponse { item: String, classifier: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("operation requires a truth split, but the sketch has none")]
    NoTruthSplit,

    #[error("sketch is not consistent: {}", .0.join("; "))]
    InvalidSketch(Vec<String>),

    #[error("enumeration budget exceeded: {size} split combinations (budget {budget})")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },

    #[error("unmapped label `{label}` at row {row}")]
    UnmappedLabel { label: String, row: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
