use thiserror::Error;

/// Errors raised by the allocation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The BS energy budget cannot be met even by the cheapest profile.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("singular system (reciprocal condition {rcond:e})")]
    SingularSystem { rcond: f64 },

    /// Brute-force oracles refuse inputs above their test-scale guard.
    #[error("instance too large for exhaustive search: {0}")]
    Scale(String),
}

pub type Result<T> = std::result::Result<T, Error>;
