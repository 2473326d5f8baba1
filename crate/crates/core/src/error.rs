use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a state needs at least one mode")]
    NoModes,

    #[error("mode {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode {0} listed more than once")]
    RepeatedMode(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("covariance matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),

    #[error("state violates the uncertainty relation (smallest symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("matrix is not symplectic (residual {0:e})")]
    NotSymplectic(f64),

    #[error("invalid Bogoliubov pair: unitarity residual {unitarity:e}, symmetry residual {symmetry:e}")]
    InvalidBogoliubov { unitarity: f64, symmetry: f64 },

    #[error("Bloch-Messiah reduction failed: {0}")]
    Reduction(String),

    #[error("cannot remove every mode of a state")]
    EmptyResult,

    #[error("unknown cluster node {0}")]
    UnknownNode(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

pub(crate) fn ensure_in_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value < min || value > max {
        return Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(value)
}
