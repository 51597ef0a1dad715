//! Modular multi-agent RL portfolio management engine.
//!
//! Two tiers of agents: per-asset signal modules (value-based traders that
//! label each day buy/close/skip) feed a portfolio allocator module (a
//! policy-gradient agent emitting reallocation weights). Around them sit
//! data ingestion and synthesis, online portfolio-selection baselines,
//! performance/stability metrics, a statistical test battery, and a
//! config-driven pipeline runnable end-to-end on CSV or synthetic markets.

pub mod error;
pub mod metrics;
pub mod baselines;
pub mod data;
pub mod eam;
pub mod nncore;
pub mod pipeline;
pub mod sam;

pub use error::{Error, Result};
