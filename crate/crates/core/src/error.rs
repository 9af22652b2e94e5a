use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient ring mismatch")]
    RingMismatch,

    #[error("generator u[{row},{col}] is outside rank {n}")]
    GeneratorOutOfRange { row: usize, col: usize, n: usize },

    #[error("rewrite completion is inconsistent: {0}")]
    CompletionInconsistency(String),

    #[error("reduction step budget of {0} exceeded")]
    StepBudgetExceeded(u64),

    #[error("reduction invariant violated: {0}")]
    Reduction(String),

    #[error("minor size mismatch: {rows} rows removed but {cols} columns")]
    MinorSizeMismatch { rows: usize, cols: usize },

    #[error("invalid precondition: {0}")]
    Precondition(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("word is not composable: {0}")]
    NotComposable(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid web description: {0}")]
    Web(String),
}

pub type Result<T> = std::result::Result<T, Error>;
