//! Config-driven orchestration: stages from data preparation through
//! training, backtesting, comparison, statistics and the ablation, with a
//! manifest tying artifacts to the config digest that produced them.
//! Identical configs and seeds reproduce bit-identical reports.

pub mod config;
pub mod manifest;
pub mod report;
pub mod stages;

pub use config::{DataKind, ExperimentConfig, Seeds, StatsSection, SyntheticConfig};
pub use manifest::{RunManifest, StageRecord};
pub use report::{emit_report, validate_report, AblationReport, RunReport};
pub use stages::{run_stage, Stage};
