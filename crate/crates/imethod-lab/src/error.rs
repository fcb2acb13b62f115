use thiserror::Error;

/// Crate-wide error type. Variants are grouped by the layer that raises them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid: {0}")]
    Grid(String),

    #[error("multiplier: {0}")]
    Multiplier(String),

    #[error("dynamics: {0}")]
    Dynamics(String),

    #[error("field became non-finite at t = {t}: first bad index {index}")]
    NonFinite { t: f64, index: usize },

    #[error("interval [{0}, {1}] not covered by trajectory snapshots")]
    Interval(f64, f64),

    #[error("functional: {0}")]
    Functional(String),

    #[error("check: {0}")]
    Check(String),

    #[error("cannot partition: a single snapshot interval already exceeds the threshold {0}")]
    Partition(f64),

    #[error("config: {0}")]
    Config(String),

    #[error("checkpoint: bad magic (expected \"NLSF\")")]
    CheckpointBadMagic,

    #[error("checkpoint: unsupported version {0} (expected 1)")]
    CheckpointVersion(u32),

    #[error("checkpoint: truncated payload (expected {expected} bytes, found {found})")]
    CheckpointTruncated { expected: usize, found: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
