//! Strategic agent module: stacks per-asset signal frames into the 3-D
//! state the allocator observes, runs the portfolio accounting (drift,
//! costs, risk penalty), trains the allocation policy with a clipped
//! surrogate objective, and backtests it.

pub mod account;
pub mod backtest;
pub mod policy;
pub mod ppo;
pub mod state;

pub use account::{
    drift_weights, relative_price_vector, risk_penalty, sam_reward, transaction_cost, LedgerRow,
    PortfolioLedger, RewardParts,
};
pub use backtest::{backtest, backtest_with_policy, AllocationContext, AllocationPolicy};
pub use policy::{build_actor, build_critic, policy_forward, value_forward, PolicySample};
pub use ppo::{advantage_estimates, ppo_update, train_sam, GaeResult, PpoBatch, PpoDiagnostics, TrainedSam, UpdateLog};
pub use state::{check_frames_aligned, stack_profound_state, ProfoundState, FEATURES};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Network shape knobs for the allocator's policy/value networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamNetConfig {
    pub channels: usize,
}

impl Default for SamNetConfig {
    fn default() -> Self {
        SamNetConfig { channels: 16 }
    }
}

/// Hyperparameters of the allocator agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamHyperparams {
    pub commission: f64,
    pub risk_discount: f64,
    pub clip_epsilon: f64,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub epochs: usize,
    pub rollout_length: usize,
    pub minibatch: usize,
    /// Policy-head noise while collecting rollouts; evaluation runs at 0.
    pub sigma_train: f64,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub window: usize,
    pub updates: usize,
    pub net: SamNetConfig,
}

impl Default for SamHyperparams {
    fn default() -> Self {
        SamHyperparams {
            commission: 0.0025,
            risk_discount: 0.001,
            clip_epsilon: 0.2,
            gamma: 0.99,
            gae_lambda: 0.95,
            epochs: 4,
            rollout_length: 256,
            minibatch: 64,
            sigma_train: 0.1,
            actor_lr: 3e-4,
            critic_lr: 1e-3,
            window: 50,
            updates: 60,
            net: SamNetConfig::default(),
        }
    }
}

impl SamHyperparams {
    pub fn validate(&self) -> Result<()> {
        if self.commission < 0.0 || self.risk_discount < 0.0 {
            return Err(Error::Config(
                "allocator commission and risk discount must be >= 0".into(),
            ));
        }
        if !(self.clip_epsilon > 0.0 && self.clip_epsilon < 1.0) {
            return Err(Error::Config("clip epsilon must be in (0, 1)".into()));
        }
        if self.sigma_train < 0.0 {
            return Err(Error::Config("sigma_train must be >= 0".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) || !(0.0..=1.0).contains(&self.gae_lambda) {
            return Err(Error::Config("gamma in (0,1] and lambda in [0,1] required".into()));
        }
        if self.window < 3 {
            return Err(Error::Config("allocator window must be at least 3".into()));
        }
        if self.rollout_length == 0 || self.minibatch == 0 || self.epochs == 0 {
            return Err(Error::Config(
                "rollout length, minibatch and epochs must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Checks a weight vector lies on the probability simplex.
pub fn assert_simplex(weights: &[f64], tolerance: f64) -> Result<()> {
    if weights.iter().any(|w| *w < -tolerance) {
        return Err(Error::Accounting(format!(
            "negative allocation weight in {weights:?}"
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::Accounting(format!(
            "allocation weights sum to {sum}, not 1"
        )));
    }
    Ok(())
}
