use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "matrix too large: source dimension {source_dim}, target dimension {target_dim}, cap {cap}"
    )]
    SizeCap {
        source_dim: String,
        target_dim: String,
        cap: u64,
    },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error(
        "finite differences have not stabilized: order-{order} difference is nonzero at m = {at_m}"
    )]
    NotStabilized { order: usize, at_m: i64 },

    #[error("need at least {needed} consecutive points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("series is not sampled at consecutive m (gap after m = {0})")]
    NonConsecutive(i64),

    #[error("no feasible m in the requested range")]
    EmptyRange,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
