use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} unsupported (expected 1..=4)")]
    BadDimension(usize),

    #[error("cluster cutoff {j} retains no eigenvalue for dimension {n}")]
    EmptyBasis { n: usize, j: usize },

    #[error("quadrature size {m} below the de-aliasing floor {floor} (need M ≥ 2·d_max+1)")]
    QuadratureTooCoarse { m: usize, floor: usize },

    #[error("grid of {points} points exceeds the memory budget of {budget}")]
    BudgetExceeded { points: usize, budget: usize },

    #[error("fields built on different bases (n/J/M {lhs:?} vs {rhs:?})")]
    BasisMismatch {
        lhs: (usize, usize, usize),
        rhs: (usize, usize, usize),
    },

    #[error("oscillator kernel is singular at τ = {0} (multiple of π/2)")]
    KernelSingular(f64),

    #[error("lens transform undefined at |τ| ≥ π/4 (got τ = {0})")]
    LensEndpoint(f64),

    #[error("{0}")]
    InvalidConfig(String),

    #[error("trajectory flagged invalid: {0}")]
    InvalidTrajectory(String),

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
