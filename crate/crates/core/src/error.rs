use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the requested operation.
    #[error("{0}")]
    Domain(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The requested tolerance was not reached. `best` holds the last estimate.
    #[error("quadrature tolerance {tol:e} not reached: error estimate {error:e} after {segments} segments")]
    Quadrature {
        tol: f64,
        error: f64,
        segments: usize,
        best: Vec<f64>,
    },
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
