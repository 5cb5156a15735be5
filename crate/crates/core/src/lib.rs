//! Simulation, analysis and fitting of growing directed citation networks.
//!
//! Models live in [`models`], closed-form predictions in [`meanfield`],
//! measurements in [`metrics`], parameter estimation in [`fitting`] and
//! edge-list input/output in [`ingest`]. The `reforcite` binary wraps all of
//! them; see [`cli`].

pub mod cli;
pub mod error;
pub mod fitting;
pub mod graph;
pub mod ingest;
pub mod meanfield;
pub mod metrics;
pub mod models;

pub use error::{Error, Result};
pub use graph::{EvolvingDigraph, NodeId, SnapshotSchedule};
pub use models::{ModelKind, ModelParams};
