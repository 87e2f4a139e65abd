use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probabilities sum to {got}, expected exactly 1")]
    SumNotOne { got: String },
    #[error("outcome arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("duplicate outcome {0}")]
    DuplicateOutcome(String),
    #[error("probability must be strictly positive (got {0})")]
    NonPositiveProbability(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("variable set must be nonempty")]
    EmptySet,
    #[error("conditioning event has zero probability")]
    ZeroProbabilityEvent,
    #[error("symbol {symbol} out of range for width {width}")]
    SymbolOutOfRange { symbol: String, width: u32 },
    #[error("invalid partition: {0}")]
    PartitionInvalid(String),
    #[error("unknown builtin distribution {0}")]
    UnknownName(String),
    #[error("variable sets must be disjoint")]
    OverlappingSets,
    #[error("support size {got} exceeds limit {limit}")]
    SupportTooLarge { got: usize, limit: usize },
    #[error("optimization diverged: {0}")]
    OptimizationDiverged(String),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error("linear program infeasible")]
    LpInfeasible,
    #[error("negative order parameter {0}")]
    NegativeOrder(f64),
    #[error("invalid diffusion map: {0}")]
    MapInvalid(String),
    #[error("search exhausted without finding a table")]
    SearchExhausted,
    #[error("search budget exceeded ({0} nodes)")]
    SearchBudgetExceeded(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
