use thiserror::Error;

/// Errors produced by the bound computations and the code laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("channel {0} is not supported by this operation")]
    UnsupportedChannel(&'static str),

    /// An exhaustive enumeration would exceed its configured budget.
    #[error("enumeration budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget { what: &'static str, needed: u128, limit: u128 },

    /// A bisection could not find a sign change below the bracket cap.
    #[error("bracket exhausted: {0}")]
    BracketExhausted(String),

    /// A bound whose hypothesis fails for the given parameters.
    #[error("bound not applicable: {0}")]
    Inapplicable(String),

    #[error("rank deficient generator: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Shorthand for returning a domain error when `cond` fails.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
