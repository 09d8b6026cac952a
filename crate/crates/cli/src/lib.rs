//! Benchmark harness around `sapgm-core`: manifests, multistart runs,
//! front metrics and performance profiles.

pub mod error;
pub mod formats;
pub mod manifest;
pub mod report;
pub mod runner;

pub use error::{HarnessError, Result};
pub use manifest::{RunManifest, SolverKind};
pub use runner::{execute, write_artifacts, RunArtifacts, Summary};
