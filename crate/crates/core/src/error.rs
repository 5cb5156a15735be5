use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Param { name: &'static str, reason: String },

    #[error("node {node} out of range (graph has {n} nodes)")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("duplicate target {0}")]
    DuplicateTarget(usize),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("degree distributions have different kinds ({0:?} vs {1:?})")]
    KindMismatch(crate::metrics::DegreeKind, crate::metrics::DegreeKind),

    #[error("degree distribution is empty")]
    EmptyDistribution,

    #[error("total in-degree is zero")]
    NoCitations,

    #[error("parameter grid is empty")]
    EmptyGrid,

    #[error("value {observed} is outside the attainable range ({lo}, {hi}) at t = {t}")]
    Unattainable { observed: f64, lo: f64, hi: f64, t: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{path}: {msg}")]
    Data { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Param { name, reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code: 2 for usage and parameter problems, 3 for bad input
    /// data, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Param { .. }
            | Error::EmptyGrid
            | Error::Unattainable { .. }
            | Error::KindMismatch(..) => 2,
            Error::Parse { .. } | Error::Data { .. } | Error::EmptyGraph | Error::NoCitations => 3,
            _ => 1,
        }
    }
}
