use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Domain(String),

    #[error(
        "catastrophic cancellation: lost {lost_bits:.1} bits, budget {budget_bits:.1}; \
         retry with a wider precision"
    )]
    Cancellation { lost_bits: f64, budget_bits: f64 },

    #[error("precision failure: {0}")]
    Precision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when a wider precision might fix the failure.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Cancellation { .. } | Error::Precision(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
