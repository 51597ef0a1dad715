//! Evolving agent module: a per-asset trading environment, an extended
//! value-based trainer (dueling, double, two-step targets), transfer-learned
//! initialization, and signal-comprised frame generation for the allocator.

mod env;
mod replay;
mod signals;
mod train;

pub use env::{EamEnv, EamState, PositionLedger};
pub use replay::{ReplayBuffer, Transition, TwoStepComposer};
pub use signals::{generate_signals, position_report, PositionReport, SignalComprisedFrame};
pub use train::{
    act_epsilon_greedy, dqn_targets, q_regression_gradients, q_values, train_eam, EpisodeLog,
    TrainedEam,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::nncore::{residual_conv_block, Conv1d, Dense, DuelingHead, Layer, NetInput, NetworkGraph, Tensor};
use crate::error::{Error, Result};

/// The per-day trading signal. Index order matters: greedy tie-breaks pick
/// the lowest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TradeAction {
    Buy,
    Close,
    Skip,
}

impl TradeAction {
    pub const COUNT: usize = 3;

    pub fn from_index(i: usize) -> TradeAction {
        match i {
            0 => TradeAction::Buy,
            1 => TradeAction::Close,
            _ => TradeAction::Skip,
        }
    }

    pub fn index(self) -> usize {
        match self {
            TradeAction::Buy => 0,
            TradeAction::Close => 1,
            TradeAction::Skip => 2,
        }
    }

    /// Channel encoding: buy 1, close -1, skip 0.
    pub fn signal_value(self) -> f64 {
        match self {
            TradeAction::Buy => 1.0,
            TradeAction::Close => -1.0,
            TradeAction::Skip => 0.0,
        }
    }
}

/// Network shape knobs for the signal agent. The published family is a 1-D
/// convolution residual network; depth and widths are defaults, not dogma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EamNetConfig {
    pub conv_channels: usize,
    pub conv_kernel: usize,
    pub res_blocks: usize,
    pub res_kernel: usize,
    pub dense_width: usize,
}

impl Default for EamNetConfig {
    fn default() -> Self {
        EamNetConfig {
            conv_channels: 32,
            conv_kernel: 5,
            res_blocks: 2,
            res_kernel: 3,
            dense_width: 128,
        }
    }
}

/// Training hyperparameters for one signal agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EamHyperparams {
    pub gamma: f64,
    /// Per-side commission rate charged at open and at close.
    pub commission: f64,
    /// Reward multiplier applied to returns and commissions.
    pub reward_scale: f64,
    /// Rolling window length n (days the agent sees).
    pub window: usize,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_decay_steps: usize,
    pub target_sync_interval: usize,
    pub buffer_capacity: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub episode_length: usize,
    pub episodes: usize,
    pub net: EamNetConfig,
}

impl Default for EamHyperparams {
    fn default() -> Self {
        EamHyperparams {
            gamma: 0.99,
            commission: 0.0025,
            reward_scale: 100.0,
            window: 50,
            epsilon_start: 1.0,
            epsilon_end: 0.02,
            epsilon_decay_steps: 20_000,
            target_sync_interval: 1_000,
            buffer_capacity: 100_000,
            batch_size: 64,
            learning_rate: 1e-3,
            episode_length: 250,
            episodes: 120,
            net: EamNetConfig::default(),
        }
    }
}

impl EamHyperparams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Config("eam gamma must be in (0, 1]".into()));
        }
        if self.commission < 0.0 {
            return Err(Error::Config("eam commission must be >= 0".into()));
        }
        for eps in [self.epsilon_start, self.epsilon_end] {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::Config("eam epsilon must be in [0, 1]".into()));
            }
        }
        if self.window < self.net.conv_kernel {
            return Err(Error::Config(
                "eam window must be at least the conv kernel size".into(),
            ));
        }
        if self.batch_size == 0 || self.episode_length == 0 {
            return Err(Error::Config("eam batch size and episode length must be positive".into()));
        }
        Ok(())
    }
}

/// Builds the signal agent's network: conv stem over the price window,
/// residual blocks, then the sentiment/position auxiliary features join the
/// flattened trunk before the dense layer and dueling head.
pub fn build_eam_network(
    window: usize,
    cfg: &EamNetConfig,
    rng: &mut impl Rng,
) -> Result<NetworkGraph> {
    if window < cfg.conv_kernel {
        return Err(Error::Config(format!(
            "window {} shorter than conv kernel {}",
            window, cfg.conv_kernel
        )));
    }
    let conv_out_len = window - cfg.conv_kernel + 1;
    let mut layers = vec![
        Layer::Conv1d(Conv1d::new(5, cfg.conv_channels, cfg.conv_kernel, 1, 0, rng)),
        Layer::Relu,
    ];
    for _ in 0..cfg.res_blocks {
        layers.push(residual_conv_block(cfg.conv_channels, cfg.res_kernel, rng)?);
    }
    layers.push(Layer::Flatten);
    layers.push(Layer::ConcatAux);
    let aux_len = 2 * window + 2;
    layers.push(Layer::Dense(Dense::new(
        cfg.conv_channels * conv_out_len + aux_len,
        cfg.dense_width,
        rng,
    )));
    layers.push(Layer::Relu);
    layers.push(Layer::Dueling(DuelingHead::new(
        cfg.dense_width,
        TradeAction::COUNT,
        rng,
    )));
    Ok(NetworkGraph::new(layers))
}

/// Converts an environment state into the network input: the price window is
/// the convolutional main path, sentiment plus position flags ride along as
/// the auxiliary vector.
pub fn state_to_input(state: &EamState) -> NetInput {
    let n = state.window_len;
    let mut aux = Vec::with_capacity(2 * n + 2);
    aux.extend_from_slice(state.sentiment_window.data());
    aux.push(if state.position_open { 1.0 } else { 0.0 });
    aux.push(state.bars_held as f64 / n as f64);
    NetInput::with_aux(state.price_window.clone(), Tensor::from_vec(aux))
}
