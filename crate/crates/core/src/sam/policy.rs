//! Allocator policy and value networks. Both share the same per-asset
//! convolutional scoring idea with weights shared across assets; the critic
//! keeps its own trunk and fuses the per-asset scores into one state value.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::state::{ProfoundState, FEATURES};
use crate::error::{Error, Result};
use crate::nncore::{
    gaussian_log_prob, softmax, AllocationHead, Dense, Layer, NetInput, NetworkGraph,
};

/// Policy network: profound state in, one score per asset (cash included) out.
pub fn build_actor(window: usize, channels: usize, rng: &mut impl Rng) -> Result<NetworkGraph> {
    Ok(NetworkGraph::new(vec![Layer::Allocation(
        AllocationHead::new(FEATURES, window, channels, rng)?,
    )]))
}

/// Value network: a separate per-asset trunk whose scores feed a dense
/// fusion layer emitting the scalar state value.
pub fn build_critic(
    window: usize,
    channels: usize,
    assets_with_cash: usize,
    rng: &mut impl Rng,
) -> Result<NetworkGraph> {
    Ok(NetworkGraph::new(vec![
        Layer::Allocation(AllocationHead::new(FEATURES, window, channels, rng)?),
        Layer::Dense(Dense::new(assets_with_cash, 1, rng)),
    ]))
}

/// One policy evaluation: scores, the (possibly noisy) sample, the softmax
/// weights, and the sample's log-probability when noise is on.
#[derive(Debug, Clone)]
pub struct PolicySample {
    pub scores: Vec<f64>,
    pub sample: Vec<f64>,
    pub weights: Vec<f64>,
    pub log_prob: Option<f64>,
}

/// Evaluates the policy on a state. With `sigma` zero the sample equals the
/// scores and the output is deterministic; with positive `sigma` each score
/// gets independent Gaussian noise and the log-probability of the draw is
/// returned for the surrogate objective.
pub fn policy_forward(
    actor: &NetworkGraph,
    state: &ProfoundState,
    sigma: f64,
    rng: &mut impl Rng,
) -> Result<PolicySample> {
    if sigma < 0.0 {
        return Err(Error::Validation("sigma must be >= 0".into()));
    }
    let pass = actor.forward(&NetInput::plain(state.0.clone()))?;
    let scores = pass.output.data().to_vec();
    let (sample, log_prob) = if sigma > 0.0 {
        let sample: Vec<f64> = scores
            .iter()
            .map(|mu| {
                let z: f64 = StandardNormal.sample(rng);
                mu + sigma * z
            })
            .collect();
        let lp = gaussian_log_prob(&sample, &scores, sigma)?;
        (sample, Some(lp))
    } else {
        (scores.clone(), None)
    };
    let weights = softmax(&sample);
    Ok(PolicySample {
        scores,
        sample,
        weights,
        log_prob,
    })
}

/// Evaluates the critic on a state.
pub fn value_forward(critic: &NetworkGraph, state: &ProfoundState) -> Result<f64> {
    let pass = critic.forward(&NetInput::plain(state.0.clone()))?;
    Ok(pass.output.data()[0])
}
