//! Deterministic backtest: one shared accounting loop that any allocation
//! policy plugs into, so the trained allocator and every baseline compound
//! value through exactly the same cost/drift/return path.

use rand::SeedableRng;

use super::account::{
    drift_weights, relative_price_vector, risk_penalty, sam_reward, LedgerRow, PortfolioLedger,
};
use super::policy::policy_forward;
use super::state::{check_frames_aligned, stack_profound_state, ProfoundState};
use super::assert_simplex;
use crate::eam::SignalComprisedFrame;
use crate::error::{Error, Result};
use crate::nncore::NetworkGraph;

/// What a policy sees when asked for the next allocation.
pub struct AllocationContext<'a> {
    /// Observation window ending the day before the period starts.
    pub state: &'a ProfoundState,
    /// Post-drift holdings entering the period.
    pub prev_weights: &'a [f64],
    /// Relative price vectors of all completed periods (no lookahead).
    pub y_history: &'a [Vec<f64>],
    /// Day index of the period being allocated.
    pub period: usize,
    pub assets_with_cash: usize,
}

/// A per-period allocation rule over assets plus cash.
pub trait AllocationPolicy {
    fn name(&self) -> String;
    fn allocate(&mut self, ctx: &AllocationContext) -> Result<Vec<f64>>;
    /// Whether the book starts already invested at the first allocation
    /// (no initial purchase cost) instead of all-cash.
    fn starts_invested(&self) -> bool {
        false
    }
}

/// Runs the shared accounting loop for any policy.
pub fn backtest_with_policy(
    policy: &mut dyn AllocationPolicy,
    frames: &[SignalComprisedFrame],
    window: usize,
    initial_value: f64,
    commission: f64,
    risk_discount: f64,
) -> Result<PortfolioLedger> {
    check_frames_aligned(frames)?;
    let len = frames[0].len();
    if len < window + 2 {
        return Err(Error::InsufficientData(format!(
            "{len} days are too few for a window of {window}"
        )));
    }
    let m_star = frames.len() + 1;
    let mut ys = Vec::with_capacity(len - 1);
    for t in 1..len {
        let prev: Vec<f64> = frames.iter().map(|f| f.close[t - 1]).collect();
        let curr: Vec<f64> = frames.iter().map(|f| f.close[t]).collect();
        ys.push(relative_price_vector(&prev, &curr)?);
    }

    let mut columns = vec!["cash".to_string()];
    columns.extend(frames.iter().map(|f| f.symbol.clone()));
    let mut weights = vec![0.0; m_star];
    weights[0] = 1.0;
    let mut value = initial_value;
    let mut rows = Vec::with_capacity(len - window);
    let mut first = true;

    for t in window..len {
        let state = stack_profound_state(frames, t - 1, window)?;
        let action = {
            let ctx = AllocationContext {
                state: &state,
                prev_weights: &weights,
                y_history: &ys[..t - 1],
                period: t,
                assets_with_cash: m_star,
            };
            policy.allocate(&ctx)?
        };
        if action.len() != m_star {
            return Err(Error::ShapeMismatch(format!(
                "policy {} returned {} weights for {} slots",
                policy.name(),
                action.len(),
                m_star
            )));
        }
        assert_simplex(&action, 1e-9)?;
        if first && policy.starts_invested() {
            weights.copy_from_slice(&action);
        }
        first = false;

        let y = &ys[t - 1];
        let risk = risk_penalty(&ys[t - window..t])?;
        let parts = sam_reward(&action, y, &weights, commission, risk_discount, risk)?;
        weights = drift_weights(&action, y);
        value *= parts.log_return.exp();
        rows.push(LedgerRow {
            date: frames[0].dates[t],
            action_weights: action,
            post_drift_weights: weights.clone(),
            cost: parts.cost,
            log_return: parts.log_return,
            risk_adjusted: parts.risk_adjusted,
            value,
        });
    }
    Ok(PortfolioLedger {
        strategy: policy.name(),
        columns,
        initial_value,
        rows,
    })
}

/// The trained allocator as a policy: deterministic scores, no noise.
pub struct ActorPolicy<'a> {
    pub actor: &'a NetworkGraph,
    pub label: String,
}

impl AllocationPolicy for ActorPolicy<'_> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn allocate(&mut self, ctx: &AllocationContext) -> Result<Vec<f64>> {
        // sigma = 0: the rng is never touched.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        Ok(policy_forward(self.actor, ctx.state, 0.0, &mut rng)?.weights)
    }
}

/// Backtests a trained allocator over the frames.
pub fn backtest(
    actor: &NetworkGraph,
    frames: &[SignalComprisedFrame],
    window: usize,
    initial_value: f64,
    commission: f64,
    risk_discount: f64,
) -> Result<PortfolioLedger> {
    let mut policy = ActorPolicy {
        actor,
        label: "mspm".to_string(),
    };
    backtest_with_policy(
        &mut policy,
        frames,
        window,
        initial_value,
        commission,
        risk_discount,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    pub(crate) fn frames_from_closes(paths: &[Vec<f64>]) -> Vec<SignalComprisedFrame> {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        paths
            .iter()
            .enumerate()
            .map(|(a, closes)| SignalComprisedFrame {
                symbol: format!("A{a}"),
                dates: (0..closes.len())
                    .map(|i| start + chrono::Duration::days(i as i64))
                    .collect(),
                open: closes.clone(),
                high: closes.clone(),
                low: closes.clone(),
                close: closes.clone(),
                volume: vec![1.0; closes.len()],
                signal: vec![0.0; closes.len()],
            })
            .collect()
    }

    struct FixedPolicy {
        weights: Vec<f64>,
        invested: bool,
    }

    impl AllocationPolicy for FixedPolicy {
        fn name(&self) -> String {
            "fixed".into()
        }
        fn allocate(&mut self, _ctx: &AllocationContext) -> Result<Vec<f64>> {
            Ok(self.weights.clone())
        }
        fn starts_invested(&self) -> bool {
            self.invested
        }
    }

    #[test]
    fn all_cash_policy_preserves_value_exactly() {
        let closes: Vec<f64> = (0..30).map(|i| 1.0 + 0.02 * ((i as f64) * 0.9).sin()).collect();
        let frames = frames_from_closes(&[closes]);
        let mut policy = FixedPolicy {
            weights: vec![1.0, 0.0],
            invested: false,
        };
        let ledger =
            backtest_with_policy(&mut policy, &frames, 5, 10_000.0, 0.0025, 0.001).unwrap();
        assert_eq!(ledger.terminal_value(), 10_000.0);
        assert!(ledger.rows.iter().all(|r| r.log_return == 0.0 && r.cost == 0.0));
    }

    #[test]
    fn single_asset_policy_matches_compounding_oracle() {
        let closes: Vec<f64> = (0..25)
            .map(|i| 1.013f64.powi(i as i32) * (1.0 + 0.004 * ((i as f64).cos())))
            .collect();
        let frames = frames_from_closes(&[closes.clone()]);
        let window = 4;
        let beta = 0.0025;
        let mut policy = FixedPolicy {
            weights: vec![0.0, 1.0],
            invested: false,
        };
        let ledger =
            backtest_with_policy(&mut policy, &frames, window, 10_000.0, beta, 0.0).unwrap();

        // Hand-rolled oracle: first period pays the full switch out of cash,
        // later periods ride the asset with no rebalancing cost.
        let mut p = 10_000.0;
        for t in window..closes.len() {
            let y = closes[t] / closes[t - 1];
            let cost = if t == window { 2.0 * beta } else { 0.0 };
            p *= y - cost;
        }
        assert!(
            (ledger.terminal_value() - p).abs() < 1e-10 * p,
            "{} vs {p}",
            ledger.terminal_value()
        );
    }

    #[test]
    fn ledger_recursion_holds_at_every_step() {
        let a: Vec<f64> = (0..40).map(|i| 1.0 + 0.03 * ((i as f64) * 0.7).sin()).collect();
        let b: Vec<f64> = (0..40).map(|i| 1.0 + 0.02 * ((i as f64) * 1.3).cos()).collect();
        let frames = frames_from_closes(&[a, b]);
        let mut policy = FixedPolicy {
            weights: vec![0.2, 0.5, 0.3],
            invested: true,
        };
        let ledger =
            backtest_with_policy(&mut policy, &frames, 6, 10_000.0, 0.0025, 0.001).unwrap();
        ledger.check_recursion(1e-12).unwrap();
        // Explicitly: p_t = p_0 * exp(sum of log returns so far).
        let mut acc = 0.0;
        for row in &ledger.rows {
            acc += row.log_return;
            assert!((row.value - 10_000.0 * acc.exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn invested_start_skips_the_initial_purchase_cost() {
        let closes: Vec<f64> = (0..20).map(|i| 1.0 + 0.01 * i as f64).collect();
        let frames = frames_from_closes(&[closes]);
        let mut policy = FixedPolicy {
            weights: vec![0.5, 0.5],
            invested: true,
        };
        let ledger =
            backtest_with_policy(&mut policy, &frames, 4, 10_000.0, 0.0025, 0.0).unwrap();
        assert_eq!(ledger.rows[0].cost, 0.0);
    }
}
