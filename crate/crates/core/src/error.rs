use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive price at trading day {day}")]
    NonPositivePrice { day: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("series has no valid rows")]
    EmptySeries,

    #[error("column `{0}` not present in header")]
    UnknownColumn(String),

    #[error("dates are not strictly increasing at record {0}")]
    UnorderedDates(usize),

    #[error("invalid ingest configuration: {0}")]
    InvalidConfig(String),

    #[error("all x values are identical")]
    DegenerateX,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("fewer than two records with positive volume")]
    NoVolumeData,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),

    #[error("step {step}: 1000 consecutive draws drove the price non-positive")]
    PathRejectionLimit { step: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by unreadable or invalid input data, as
    /// opposed to failures inside an estimator.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedRow { .. }
                | Error::DuplicateDate(_)
                | Error::EmptySeries
                | Error::UnknownColumn(_)
                | Error::UnorderedDates(_)
                | Error::InvalidConfig(_)
                | Error::InvalidParams(_)
                | Error::Io(_)
                | Error::Csv(_)
        )
    }
}
