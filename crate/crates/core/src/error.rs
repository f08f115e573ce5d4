use chrono::NaiveDate;
use thiserror::Error;

/// Errors produced by series ingestion, validation, and the statistical tests.
#[derive(Debug, Error)]
pub enum EmhError {
    #[error("column `{0}` not found in CSV header")]
    MissingColumn(String),
    #[error("row {row}: cannot parse {field} `{value}`")]
    BadCell {
        row: usize,
        field: &'static str,
        value: String,
    },
    #[error("row {row}: duplicate date {date}")]
    DuplicateDate { row: usize, date: NaiveDate },
    #[error("series `{label}` has {n} usable observations, need at least {min}")]
    TooShort { label: String, n: usize, min: usize },
    #[error("close {value} at {date} is not strictly positive")]
    NonPositiveClose { date: NaiveDate, value: f64 },
    #[error("synthetic close {value} at {date} must be nonzero and finite")]
    InvalidSyntheticClose { date: NaiveDate, value: f64 },
    #[error("dates are not strictly increasing at index {index}")]
    UnorderedDates { index: usize },
    #[error("lag {lag} out of range for {n} values")]
    LagOutOfRange { lag: usize, n: usize },
    #[error("no price changes left after zero handling")]
    EmptySigns,
    #[error("degenerate sign distribution (pos={n_pos}, neg={n_neg}); runs test undefined")]
    DegenerateSigns { n_pos: usize, n_neg: usize },
    #[error("null standard deviation of runs is zero")]
    ZeroSigma,
    #[error("series is constant; autocorrelation undefined")]
    ConstantSeries,
    #[error("large-sample standard error requires n >= 50, got {n}")]
    SampleTooSmall { n: usize },
    #[error("at least one lag is required")]
    NoLagsRequested,
    #[error("standard error must be positive")]
    NonPositiveSe,
    #[error("series of {n} values is too short for {lags} autoregressive lags")]
    SeriesTooShortForLags { n: usize, lags: usize },
    #[error("design matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },
    #[error("no residual degrees of freedom")]
    NoDegreesOfFreedom,
    #[error("invalid simulation spec: {0}")]
    InvalidSimulationSpec(String),
    #[error("non-finite input {0}")]
    NonFiniteInput(f64),
    #[error("degrees of freedom must be at least 1")]
    InvalidDegreesOfFreedom,
    #[error("correlogram has no points")]
    EmptyCorrelogram,
    #[error("invalid date format `{0}`")]
    InvalidDateFormat(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, EmhError>;
