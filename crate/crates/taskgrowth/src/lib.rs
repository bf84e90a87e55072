//! Standard-library companion to `taskgrowth-core`: JSON configuration,
//! CSV/JSON/SVG outputs, run manifests, parallel sweeps and the
//! `taskgrowth` command-line front end.
//!
//! Exit codes of the binary: 2 for configuration or input parse failures,
//! 3 for model-domain errors, 4 for a non-finite state during a simulation,
//! 5 when too few converged rows are available for surrogate analysis.

pub mod cli;
pub mod config;
pub mod error;
pub mod manifest;
pub mod pipeline;
pub mod shock;
pub mod svg;
pub mod tables;

pub use config::Config;
pub use error::{Error, Result};
