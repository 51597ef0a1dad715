//! Allocator training: generalized advantage estimation, the clipped
//! surrogate update, and the rollout loop over signal-comprised frames.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::account::{drift_weights, relative_price_vector, risk_penalty, sam_reward};
use super::policy::{build_actor, build_critic, policy_forward, value_forward};
use super::state::{check_frames_aligned, stack_profound_state, ProfoundState};
use super::SamHyperparams;
use crate::eam::SignalComprisedFrame;
use crate::error::{Error, Result};
use crate::nncore::{
    gaussian_log_prob, gaussian_log_prob_grad_mu, AdamState, Gradients, NetInput, NetworkGraph,
    Tensor,
};

/// Reward applied when a period wipes the book out; the episode terminates.
const CATASTROPHIC_REWARD: f64 = -10.0;

/// Advantage estimates and critic targets for one rollout.
#[derive(Debug, Clone)]
pub struct GaeResult {
    /// Batch-normalized advantages (zero mean, unit variance).
    pub advantages: Vec<f64>,
    /// Raw generalized advantage estimates.
    pub raw_advantages: Vec<f64>,
    /// Critic regression targets: raw advantage plus state value.
    pub returns: Vec<f64>,
}

/// Generalized advantage estimation over a rollout. `values` holds the
/// critic's estimates for every state plus the bootstrap value of the state
/// after the last step; `terminals[t]` cuts the recursion (no bootstrap
/// across episode ends).
pub fn advantage_estimates(
    rewards: &[f64],
    values: &[f64],
    terminals: &[bool],
    gamma: f64,
    lambda: f64,
) -> Result<GaeResult> {
    let t_len = rewards.len();
    if values.len() != t_len + 1 || terminals.len() != t_len {
        return Err(Error::ShapeMismatch(format!(
            "advantage estimation over {} rewards needs {} values and {} terminal flags",
            t_len,
            t_len + 1,
            t_len
        )));
    }
    let mut raw = vec![0.0; t_len];
    let mut carry = 0.0;
    for t in (0..t_len).rev() {
        let nonterminal = if terminals[t] { 0.0 } else { 1.0 };
        let delta = rewards[t] + gamma * values[t + 1] * nonterminal - values[t];
        carry = delta + gamma * lambda * nonterminal * carry;
        raw[t] = carry;
    }
    let returns: Vec<f64> = raw.iter().zip(values).map(|(a, v)| a + v).collect();
    let mean = raw.iter().sum::<f64>() / t_len as f64;
    let var = raw.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / t_len as f64;
    let std = var.sqrt();
    let advantages = if std > 0.0 {
        raw.iter().map(|a| (a - mean) / (std + 1e-8)).collect()
    } else {
        vec![0.0; t_len]
    };
    Ok(GaeResult {
        advantages,
        raw_advantages: raw,
        returns,
    })
}

/// One collected rollout, ready for updates.
#[derive(Debug, Clone)]
pub struct PpoBatch {
    pub states: Vec<ProfoundState>,
    /// The noisy score draws x_t behind each action.
    pub samples: Vec<Vec<f64>>,
    pub log_probs: Vec<f64>,
    pub rewards: Vec<f64>,
    pub terminals: Vec<bool>,
    pub sigma: f64,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PpoDiagnostics {
    pub actor_loss: f64,
    pub value_loss: f64,
    pub clip_fraction: f64,
    pub approx_kl: f64,
}

/// Clipped-surrogate gradients for a set of samples. Returns the mean
/// negative surrogate (the loss being minimized), its gradients, and the
/// fraction of ratios outside the clip band.
pub fn surrogate_gradients(
    actor: &NetworkGraph,
    batch: &PpoBatch,
    indices: &[usize],
    clip_epsilon: f64,
) -> Result<(f64, Gradients, f64, f64)> {
    if batch.sigma <= 0.0 {
        return Err(Error::Validation(
            "surrogate update requires a batch collected with sigma > 0".into(),
        ));
    }
    let mut grads = Gradients::zeros_like(actor);
    let mut loss = 0.0;
    let mut clipped_count = 0usize;
    let mut kl_sum = 0.0;
    let scale = 1.0 / indices.len() as f64;
    for &i in indices {
        let pass = actor.forward(&NetInput::plain(batch.states[i].0.clone()))?;
        let mu = pass.output.data();
        let logp_new = gaussian_log_prob(&batch.samples[i], mu, batch.sigma)?;
        let ratio = (logp_new - batch.log_probs[i]).exp();
        kl_sum += batch.log_probs[i] - logp_new;
        let adv = batch.advantages[i];
        let unclipped = ratio * adv;
        let clipped = ratio.clamp(1.0 - clip_epsilon, 1.0 + clip_epsilon) * adv;
        loss -= unclipped.min(clipped) * scale;
        if (ratio - 1.0).abs() > clip_epsilon {
            clipped_count += 1;
        }
        // The min gates the gradient: when the clipped branch is strictly
        // smaller the ratio sits outside the band and its clamp has zero
        // derivative, so nothing flows.
        if unclipped <= clipped {
            let dlogp_dmu = gaussian_log_prob_grad_mu(&batch.samples[i], mu, batch.sigma);
            let coeff = -scale * ratio * adv;
            let out_grad: Vec<f64> = dlogp_dmu.iter().map(|g| coeff * g).collect();
            let (g, _) = actor.backward(&pass, &Tensor::from_vec(out_grad))?;
            grads.add_assign(&g);
        }
    }
    Ok((
        loss,
        grads,
        clipped_count as f64 / indices.len() as f64,
        kl_sum * scale,
    ))
}

fn value_gradients(
    critic: &NetworkGraph,
    batch: &PpoBatch,
    indices: &[usize],
) -> Result<(f64, Gradients)> {
    let mut grads = Gradients::zeros_like(critic);
    let mut loss = 0.0;
    let scale = 1.0 / indices.len() as f64;
    for &i in indices {
        let pass = critic.forward(&NetInput::plain(batch.states[i].0.clone()))?;
        let v = pass.output.data()[0];
        let err = v - batch.returns[i];
        loss += err * err * scale;
        let (g, _) = critic.backward(&pass, &Tensor::from_vec(vec![2.0 * err * scale]))?;
        grads.add_assign(&g);
    }
    Ok((loss, grads))
}

/// Several epochs of minibatch updates on one rollout. The actor maximizes
/// the clipped surrogate; the critic regresses the return targets.
#[allow(clippy::too_many_arguments)]
pub fn ppo_update(
    batch: &PpoBatch,
    actor: &mut NetworkGraph,
    critic: &mut NetworkGraph,
    actor_opt: &mut AdamState,
    critic_opt: &mut AdamState,
    clip_epsilon: f64,
    epochs: usize,
    minibatch: usize,
    rng: &mut impl Rng,
) -> Result<PpoDiagnostics> {
    let n = batch.states.len();
    if n == 0 {
        return Err(Error::InsufficientData("empty rollout".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut diag = PpoDiagnostics::default();
    for _ in 0..epochs {
        order.shuffle(rng);
        for chunk in order.chunks(minibatch.min(n)) {
            let (aloss, agrads, clip_frac, kl) =
                surrogate_gradients(actor, batch, chunk, clip_epsilon)?;
            if !aloss.is_finite() {
                return Err(Error::Divergence("non-finite surrogate loss".into()));
            }
            actor_opt.apply(actor, &agrads)?;
            let (vloss, vgrads) = value_gradients(critic, batch, chunk)?;
            if !vloss.is_finite() {
                return Err(Error::Divergence("non-finite value loss".into()));
            }
            critic_opt.apply(critic, &vgrads)?;
            diag = PpoDiagnostics {
                actor_loss: aloss,
                value_loss: vloss,
                clip_fraction: clip_frac,
                approx_kl: kl,
            };
        }
    }
    Ok(diag)
}

/// Rollout environment over aligned frames: allocate at the open of each
/// period using the window ending the previous day, earn the risk-adjusted
/// log-return, drift the weights. Runs episodes end-to-end over the data and
/// restarts from the beginning when exhausted.
struct TrainEnv<'a> {
    frames: &'a [SignalComprisedFrame],
    window: usize,
    commission: f64,
    risk_discount: f64,
    /// ys[i] is the relative price vector of period i+1.
    ys: Vec<Vec<f64>>,
    t: usize,
    weights: Vec<f64>,
}

impl<'a> TrainEnv<'a> {
    fn new(frames: &'a [SignalComprisedFrame], hp: &SamHyperparams) -> Result<Self> {
        check_frames_aligned(frames)?;
        let len = frames[0].len();
        if len < hp.window + 2 {
            return Err(Error::InsufficientData(format!(
                "{} days are too few for a window of {}",
                len, hp.window
            )));
        }
        let mut ys = Vec::with_capacity(len - 1);
        for t in 1..len {
            let prev: Vec<f64> = frames.iter().map(|f| f.close[t - 1]).collect();
            let curr: Vec<f64> = frames.iter().map(|f| f.close[t]).collect();
            ys.push(relative_price_vector(&prev, &curr)?);
        }
        let mut env = TrainEnv {
            frames,
            window: hp.window,
            commission: hp.commission,
            risk_discount: hp.risk_discount,
            ys,
            t: 0,
            weights: Vec::new(),
        };
        env.reset();
        Ok(env)
    }

    fn reset(&mut self) {
        self.t = self.window;
        let m_star = self.frames.len() + 1;
        self.weights = vec![0.0; m_star];
        self.weights[0] = 1.0;
    }

    fn observe(&self) -> Result<ProfoundState> {
        stack_profound_state(self.frames, self.t - 1, self.window)
    }

    /// Executes the allocation for the current period. Returns the
    /// risk-adjusted reward and whether the episode ended.
    fn step(&mut self, action: &[f64]) -> (f64, bool) {
        let y = &self.ys[self.t - 1];
        let risk_window = &self.ys[self.t - self.window..self.t];
        let risk = risk_penalty(risk_window).expect("non-empty risk window");
        match sam_reward(
            action,
            y,
            &self.weights,
            self.commission,
            self.risk_discount,
            risk,
        ) {
            Ok(parts) => {
                self.weights = drift_weights(action, y);
                self.t += 1;
                let done = self.t >= self.frames[0].len();
                if done {
                    self.reset();
                }
                (parts.risk_adjusted, done)
            }
            Err(_) => {
                // Book wiped out: large negative terminal reward, restart.
                self.reset();
                (CATASTROPHIC_REWARD, true)
            }
        }
    }
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateLog {
    pub update: usize,
    pub mean_reward: f64,
    pub clip_fraction: f64,
    pub value_loss: f64,
    pub approx_kl: f64,
}

pub struct TrainedSam {
    pub actor: NetworkGraph,
    pub critic: NetworkGraph,
    pub log: Vec<UpdateLog>,
}

/// Trains the allocator on aligned frames. Deterministic under `seed`.
pub fn train_sam(
    frames: &[SignalComprisedFrame],
    hp: &SamHyperparams,
    seed: u64,
) -> Result<TrainedSam> {
    hp.validate()?;
    if hp.sigma_train <= 0.0 {
        return Err(Error::Config(
            "training requires sigma_train > 0 for a well-defined likelihood ratio".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m_star = frames.len() + 1;
    let mut actor = build_actor(hp.window, hp.net.channels, &mut rng)?;
    let mut critic = build_critic(hp.window, hp.net.channels, m_star, &mut rng)?;
    let mut actor_opt = AdamState::new(&actor, hp.actor_lr);
    let mut critic_opt = AdamState::new(&critic, hp.critic_lr);
    let mut env = TrainEnv::new(frames, hp)?;
    let mut log = Vec::with_capacity(hp.updates);

    for update in 0..hp.updates {
        let mut states = Vec::with_capacity(hp.rollout_length);
        let mut samples = Vec::with_capacity(hp.rollout_length);
        let mut log_probs = Vec::with_capacity(hp.rollout_length);
        let mut rewards = Vec::with_capacity(hp.rollout_length);
        let mut terminals = Vec::with_capacity(hp.rollout_length);
        let mut values = Vec::with_capacity(hp.rollout_length + 1);
        for _ in 0..hp.rollout_length {
            let state = env.observe()?;
            let sample = policy_forward(&actor, &state, hp.sigma_train, &mut rng)?;
            values.push(value_forward(&critic, &state)?);
            let (reward, done) = env.step(&sample.weights);
            states.push(state);
            samples.push(sample.sample);
            log_probs.push(sample.log_prob.expect("sigma > 0"));
            rewards.push(reward);
            terminals.push(done);
        }
        // Bootstrap value of the state after the last step.
        values.push(value_forward(&critic, &env.observe()?)?);
        let gae = advantage_estimates(&rewards, &values, &terminals, hp.gamma, hp.gae_lambda)?;
        let batch = PpoBatch {
            states,
            samples,
            log_probs,
            rewards: rewards.clone(),
            terminals,
            sigma: hp.sigma_train,
            advantages: gae.advantages,
            returns: gae.returns,
        };
        let diag = ppo_update(
            &batch,
            &mut actor,
            &mut critic,
            &mut actor_opt,
            &mut critic_opt,
            hp.clip_epsilon,
            hp.epochs,
            hp.minibatch,
            &mut rng,
        )?;
        log.push(UpdateLog {
            update,
            mean_reward: rewards.iter().sum::<f64>() / rewards.len() as f64,
            clip_fraction: diag.clip_fraction,
            value_loss: diag.value_loss,
            approx_kl: diag.approx_kl,
        });
    }
    Ok(TrainedSam { actor, critic, log })
}
