//! Experiment driver for the block-catching workbench: configuration, run
//! layout, file formats and the evolve, analyze, robustness and report
//! commands.

pub mod analyze;
pub mod config;
pub mod error;
pub mod evolve;
pub mod formats;
pub mod layout;
pub mod report;
pub mod robustness;
pub mod stats;

pub use config::ExperimentConfig;
pub use error::{LabError, Result};
