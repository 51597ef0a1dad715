//! Transition storage: two-step reward composition and a uniform ring
//! replay buffer.

use rand::Rng;

use crate::nncore::NetInput;

/// A stored transition. `reward` aggregates two discounted steps (or one,
/// when the episode ended first), and `next_state` is the state two steps
/// ahead, so bootstrap targets discount by gamma squared.
#[derive(Debug, Clone)]
pub struct Transition {
    pub state: NetInput,
    pub action: usize,
    pub reward: f64,
    pub next_state: NetInput,
    pub terminal: bool,
    /// How many environment steps the reward spans (1 or 2).
    pub steps: usize,
}

/// Rolls consecutive (state, action, reward) steps into two-step
/// transitions.
pub struct TwoStepComposer {
    gamma: f64,
    pending: Vec<(NetInput, usize, f64)>,
}

impl TwoStepComposer {
    pub fn new(gamma: f64) -> Self {
        TwoStepComposer {
            gamma,
            pending: Vec::with_capacity(2),
        }
    }

    pub fn clear(&mut self) {
        self.pending.clear();
    }

    /// Feeds one environment step; returns the transitions completed by it.
    pub fn push(
        &mut self,
        state: NetInput,
        action: usize,
        reward: f64,
        next_state: &NetInput,
        done: bool,
    ) -> Vec<Transition> {
        let mut out = Vec::new();
        self.pending.push((state, action, reward));
        if self.pending.len() == 2 {
            let (s0, a0, r0) = self.pending.remove(0);
            let r1 = self.pending[0].2;
            out.push(Transition {
                state: s0,
                action: a0,
                reward: r0 + self.gamma * r1,
                next_state: next_state.clone(),
                terminal: done,
                steps: 2,
            });
        }
        if done {
            if let Some((s0, a0, r0)) = self.pending.pop() {
                out.push(Transition {
                    state: s0,
                    action: a0,
                    reward: r0,
                    next_state: next_state.clone(),
                    terminal: true,
                    steps: 1,
                });
            }
            self.pending.clear();
        }
        out
    }
}

/// Fixed-capacity ring of transitions with uniform without-replacement
/// batch sampling.
pub struct ReplayBuffer {
    buf: Vec<Transition>,
    capacity: usize,
    write_pos: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        ReplayBuffer {
            buf: Vec::new(),
            capacity: capacity.max(1),
            write_pos: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn push(&mut self, transition: Transition) {
        if self.buf.len() < self.capacity {
            self.buf.push(transition);
        } else {
            self.buf[self.write_pos] = transition;
        }
        self.write_pos = (self.write_pos + 1) % self.capacity;
    }

    /// Uniform sample of `batch` distinct transitions.
    pub fn sample(&self, rng: &mut impl Rng, batch: usize) -> Vec<&Transition> {
        debug_assert!(batch <= self.buf.len());
        rand::seq::index::sample(rng, self.buf.len(), batch)
            .iter()
            .map(|i| &self.buf[i])
            .collect()
    }
}
