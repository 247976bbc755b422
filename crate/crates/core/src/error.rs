use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("zero Fourier mode does not vanish (|u^(0)| = {value:e}, threshold {threshold:e})")]
    NonZeroMean { value: f64, threshold: f64 },

    #[error("exponent must lie in [1, inf], got {0}")]
    InvalidExponent(f64),

    #[error("oscillatory query rejected: {0}")]
    InvalidQuery(String),

    #[error("quadrature failed to reach {target:e} within {panels} panels (estimate {estimate:e})")]
    QuadratureBudget {
        target: f64,
        estimate: f64,
        panels: usize,
    },

    #[error("time grids are misaligned: {0}")]
    Misaligned(String),

    #[error("horizon {horizon} violates the truncation rule at t = {t}: residual mass ratio {ratio:e}")]
    HorizonRule { t: f64, horizon: f64, ratio: f64 },

    #[error("step size {dt} exceeds the stability bound {bound}")]
    Cfl { dt: f64, bound: f64 },

    #[error("instability at t = {t}: {reason}")]
    Instability { t: f64, reason: String },

    #[error("trace too short: {0}")]
    TraceTooShort(String),

    #[error("manifest errors:\n{}", .0.join("\n"))]
    Manifest(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
