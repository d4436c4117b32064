use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),

    #[error("degenerate triangle: twice-area {twice_area:e} below threshold {threshold:e}")]
    DegenerateTriangle { twice_area: f64, threshold: f64 },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The function does not change sign over the bracket.
    #[error("no sign change on [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("curve is not closed inside the domain")]
    OpenCurve,

    #[error("column at x = {x} crosses the curve more than {max} times")]
    TooManyRoots { x: f64, max: usize },

    #[error("adaptive integration did not converge (estimate {estimate}, error {error:e})")]
    NotConverged { estimate: f64, error: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
