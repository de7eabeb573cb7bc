use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid representation (n = {n}, m = {m}): need n >= 2 and m >= 1")]
    InvalidRepresentation { n: usize, m: usize },

    #[error("kernels are only defined for m = 1 and m = 2 (got m = {0})")]
    UnsupportedRepresentation(usize),

    #[error("{0}")]
    Domain(String),

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{name} = {value} lies outside [{lo}, {hi}]")]
    AngleOutOfRange {
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error(
        "kernel difference is ill-conditioned at theta = {theta:?}, phi = {phi:?} \
         (smallest |eigenvalue| {min_abs_eigenvalue:e}, condition number {condition:e})"
    )]
    Conditioning {
        theta: Vec<f64>,
        phi: Vec<f64>,
        min_abs_eigenvalue: f64,
        condition: f64,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
