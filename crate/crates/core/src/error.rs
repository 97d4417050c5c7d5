use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector has a non-real entry in a real space")]
    NotReal,
    #[error("zero vector has no support functional")]
    ZeroVector,
    #[error("point is not on the unit sphere (norm {norm})")]
    NotOnSphere { norm: f64 },
    #[error("point lies outside the open unit ball (norm {norm})")]
    OutsideBall { norm: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is singular or too ill-conditioned (condition {cond:e})")]
    Singular { cond: f64 },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("coefficient matrix is not unitary (defect {defect:e})")]
    NonUnitary { defect: f64 },
    #[error("a norm needed as an upper bound is only available as a lower bound: {0}")]
    InexactNorm(String),
    #[error("vector is not a maximal tripotent")]
    NotMaximalTripotent,
    #[error("boundary hypothesis not met: {0}")]
    BoundaryHypothesis(String),
    #[error("mesh exhausted before a radius could be certified")]
    MeshExhausted,
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
