use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A curve or lemma instance violates a structural invariant.
    #[error("{0}")]
    Validation(String),

    /// Curve specification text could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A quadrature did not meet its tolerance within the node budget.
    #[error("{op}: tolerance not reached (estimate {estimate:e}, error bound {error_bound:e})")]
    Budget {
        op: &'static str,
        estimate: f64,
        error_bound: f64,
    },

    #[error("locus empty: all polynomials are identical")]
    LocusEmpty,

    /// Predictor-corrector continuation lost the level curve.
    #[error("continuation failed on branch ({}, {}) after last good point {last_good}", pair.0, pair.1)]
    Continuation { pair: (usize, usize), last_good: Complex64 },

    #[error("asymptotics not reached on branch ({}, {}); increase r_max ({detail})", pair.0, pair.1)]
    Asymptotics { pair: (usize, usize), detail: String },

    /// Precondition of a harness or check was not met by the caller's input.
    #[error("input error: {0}")]
    Input(String),

    /// Green kernel evaluated at its pole.
    #[error("Green kernel pole at z = zeta = {0}")]
    Pole(Complex64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
