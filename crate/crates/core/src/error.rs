use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bidegree mismatch: {0}")]
    Bidegree(String),

    #[error("kernel |z|^(2s) z^{p} zbar^{q} is not integrable: {reason}")]
    NonIntegrable { p: i32, q: i32, reason: String },

    #[error("quadrature did not reach tolerance {tol:e}: estimate {estimate}, error bound {err:e}")]
    Tolerance { tol: f64, estimate: String, err: f64 },

    #[error("node budget exceeded: requested {requested}, budget {budget}")]
    Budget { requested: u64, budget: u64 },

    #[error("lambda lies on pole hyperplane {hyperplane} (distance {distance:e})")]
    OnPole { hyperplane: String, distance: f64 },

    #[error("invalid cutoff: {0}")]
    Cutoff(String),

    #[error("invalid path or sample set: {0}")]
    Path(String),

    #[error("sequence did not converge: {0}")]
    NonConvergent(String),

    #[error("lemma hypothesis violated at coordinate z{index}: {detail}")]
    Hypothesis { index: usize, detail: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
