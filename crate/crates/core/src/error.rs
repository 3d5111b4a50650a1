use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSynthSpec(String),

    #[error("time {t} outside curve support [0, {span}]")]
    OutOfSupport { t: f64, span: f64 },

    #[error("frequency band [{lo}, {hi}] is invalid or outside the grid")]
    InvalidBand { lo: f64, hi: f64 },

    #[error("empty frequency band [{lo}, {hi}]")]
    EmptyBand { lo: f64, hi: f64 },

    #[error("spectrum is identically zero: no risk signal")]
    NoRiskSignal,

    #[error("grid evaluation needs {required} segment evaluations, budget is {budget}")]
    WorkBudgetExceeded { required: u64, budget: u64 },

    #[error("invalid grid spec: {0}")]
    InvalidGrid(String),

    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
