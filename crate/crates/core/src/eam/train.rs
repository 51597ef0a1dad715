//! Value-agent training: double targets over two-step transitions,
//! epsilon-greedy exploration, and the per-asset training loop with
//! optional transfer initialization from a donor checkpoint.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::env::EamEnv;
use super::replay::{ReplayBuffer, Transition, TwoStepComposer};
use super::{build_eam_network, state_to_input, EamHyperparams, TradeAction};
use crate::data::AssetSeries;
use crate::error::{Error, Result};
use crate::nncore::{AdamState, Checkpoint, Gradients, NetInput, NetworkGraph, Tensor};

/// Action values for one state.
pub fn q_values(graph: &NetworkGraph, input: &NetInput) -> Result<[f64; 3]> {
    let pass = graph.forward(input)?;
    let out = pass.output.data();
    if out.len() != TradeAction::COUNT {
        return Err(Error::ShapeMismatch(format!(
            "expected {} action values, got {}",
            TradeAction::COUNT,
            out.len()
        )));
    }
    Ok([out[0], out[1], out[2]])
}

/// Epsilon-greedy choice: uniform with probability epsilon, otherwise the
/// argmax with lowest-index tie-break.
pub fn act_epsilon_greedy(q: &[f64; 3], epsilon: f64, rng: &mut impl Rng) -> TradeAction {
    debug_assert!((0.0..=1.0).contains(&epsilon));
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        return TradeAction::from_index(rng.random_range(0..TradeAction::COUNT));
    }
    TradeAction::from_index(greedy_index(q))
}

pub fn greedy_index(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in q.iter().enumerate().skip(1) {
        if *v > q[best] {
            best = i;
        }
    }
    best
}

/// Regression targets for a batch of two-step transitions: the action for
/// the bootstrap is chosen by the online network and evaluated by the target
/// network; terminal transitions keep only their accumulated reward.
pub fn dqn_targets(
    batch: &[&Transition],
    online: &NetworkGraph,
    target: &NetworkGraph,
    gamma: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(batch.len());
    for tr in batch {
        if tr.terminal {
            out.push(tr.reward);
            continue;
        }
        let q_online = online.forward(&tr.next_state)?;
        let chosen = greedy_index(q_online.output.data());
        let q_target = target.forward(&tr.next_state)?;
        let bootstrap = q_target.output.data()[chosen];
        out.push(tr.reward + gamma.powi(tr.steps as i32) * bootstrap);
    }
    Ok(out)
}

/// One squared-error regression step of the online network toward `targets`.
/// Returns the mean loss and accumulated gradients.
pub fn q_regression_gradients(
    online: &NetworkGraph,
    batch: &[&Transition],
    targets: &[f64],
) -> Result<(f64, Gradients)> {
    let mut grads = Gradients::zeros_like(online);
    let mut loss = 0.0;
    let scale = 1.0 / batch.len() as f64;
    for (tr, &y) in batch.iter().zip(targets) {
        let pass = online.forward(&tr.state)?;
        let q = pass.output.data()[tr.action];
        let err = q - y;
        loss += err * err * scale;
        let mut out_grad = Tensor::zeros(pass.output.shape().to_vec());
        out_grad.data_mut()[tr.action] = 2.0 * err * scale;
        let (g, _) = online.backward(&pass, &out_grad)?;
        grads.add_assign(&g);
    }
    Ok((loss, grads))
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub episode: usize,
    pub steps: usize,
    pub total_reward: f64,
    pub mean_loss: f64,
}

/// A trained signal agent with its training history.
pub struct TrainedEam {
    pub graph: NetworkGraph,
    pub log: Vec<EpisodeLog>,
    pub optimizer: AdamState,
}

fn epsilon_at(hp: &EamHyperparams, step: usize) -> f64 {
    let frac = (step as f64 / hp.epsilon_decay_steps.max(1) as f64).min(1.0);
    hp.epsilon_start + (hp.epsilon_end - hp.epsilon_start) * frac
}

/// Trains one signal agent on one (normalized) series. Transfer
/// initialization copies the donor's parameters exactly before fine-tuning;
/// optimizer state always starts fresh. Deterministic under `seed`.
pub fn train_eam(
    series: &AssetSeries,
    hp: &EamHyperparams,
    transfer_from: Option<&Checkpoint>,
    seed: u64,
) -> Result<TrainedEam> {
    hp.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut online = build_eam_network(hp.window, &hp.net, &mut rng)?;
    if let Some(donor) = transfer_from {
        crate::nncore::checkpoint::apply(donor, &mut online)?;
    }
    let mut target = online.clone();
    let mut adam = AdamState::new(&online, hp.learning_rate);
    let mut buffer = ReplayBuffer::new(hp.buffer_capacity);
    let mut env = EamEnv::new(
        series,
        hp.window,
        hp.episode_length,
        hp.commission,
        hp.reward_scale,
    )?;
    let mut composer = TwoStepComposer::new(hp.gamma);
    let mut log = Vec::with_capacity(hp.episodes);
    let mut global_step = 0usize;

    for episode in 0..hp.episodes {
        let mut state = env.reset(&mut rng);
        composer.clear();
        let mut total_reward = 0.0;
        let mut loss_sum = 0.0;
        let mut loss_count = 0usize;
        let mut steps = 0usize;
        loop {
            let input = state_to_input(&state);
            let q = q_values(&online, &input)?;
            let action = act_epsilon_greedy(&q, epsilon_at(hp, global_step), &mut rng);
            let (next_state, reward, done) = env.step(action);
            total_reward += reward;
            steps += 1;
            global_step += 1;
            let next_input = state_to_input(&next_state);
            for tr in composer.push(input, action.index(), reward, &next_input, done) {
                buffer.push(tr);
            }
            state = next_state;

            if buffer.len() >= hp.batch_size {
                let batch = buffer.sample(&mut rng, hp.batch_size);
                let targets = dqn_targets(&batch, &online, &target, hp.gamma)?;
                let (loss, grads) = q_regression_gradients(&online, &batch, &targets)?;
                if !loss.is_finite() {
                    return Err(Error::Divergence(format!(
                        "{}: non-finite loss at step {global_step} (episode {episode})",
                        series.symbol
                    )));
                }
                adam.apply(&mut online, &grads)?;
                loss_sum += loss;
                loss_count += 1;
            }
            if global_step % hp.target_sync_interval == 0 {
                target.copy_params_from(&online)?;
            }
            if done {
                break;
            }
        }
        log.push(EpisodeLog {
            episode,
            steps,
            total_reward,
            mean_loss: if loss_count > 0 {
                loss_sum / loss_count as f64
            } else {
                0.0
            },
        });
    }
    Ok(TrainedEam {
        graph: online,
        log,
        optimizer: adam,
    })
}
