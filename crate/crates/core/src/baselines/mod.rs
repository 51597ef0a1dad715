//! Online portfolio-selection baselines over the shared backtest
//! accounting: uniform constant rebalancing, buy-and-hold, exponential
//! gradient, and follow-the-regularized-leader over log-wealth. All of them
//! allocate across the risky assets only, with the cash slot held at zero.

use serde::{Deserialize, Serialize};

use crate::eam::SignalComprisedFrame;
use crate::error::{Error, Result};
use crate::sam::{
    backtest_with_policy, drift_weights, AllocationContext, AllocationPolicy, PortfolioLedger,
};

/// Which baseline, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaselineSpec {
    Crp,
    Bah,
    Eg {
        learning_rate: f64,
    },
    Ftrl {
        regularization: f64,
    },
}

impl BaselineSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineSpec::Crp => "crp",
            BaselineSpec::Bah => "bah",
            BaselineSpec::Eg { .. } => "eg",
            BaselineSpec::Ftrl { .. } => "ftrl",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BaselineSpec::Eg { learning_rate } if *learning_rate <= 0.0 => Err(Error::Config(
                "exponential-gradient learning rate must be > 0".into(),
            )),
            BaselineSpec::Ftrl { regularization } if *regularization < 0.0 => Err(Error::Config(
                "ftrl regularization must be >= 0".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Uniform weights over the risky assets, cash zero.
pub fn crp_weights(assets_with_cash: usize) -> Vec<f64> {
    let risky = assets_with_cash - 1;
    let mut w = vec![0.0; assets_with_cash];
    for slot in w.iter_mut().skip(1) {
        *slot = 1.0 / risky as f64;
    }
    w
}

/// Buy-and-hold weight path: the initial allocation drifts with prices and
/// is never rebalanced.
pub fn bah_weights(initial: &[f64], y_sequence: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(y_sequence.len() + 1);
    let mut w = initial.to_vec();
    out.push(w.clone());
    for y in y_sequence {
        w = drift_weights(&w, y);
        out.push(w.clone());
    }
    out
}

/// Multiplicative exponential-gradient update from the drifted holdings:
/// each weight scales with exp(eta * y_i / (w . y)), renormalized.
pub fn eg_update(weights: &[f64], y: &[f64], learning_rate: f64) -> Vec<f64> {
    debug_assert_eq!(weights.len(), y.len());
    let wy: f64 = weights.iter().zip(y).map(|(w, yi)| w * yi).sum();
    let mut next: Vec<f64> = weights
        .iter()
        .zip(y)
        .map(|(w, yi)| w * (learning_rate * yi / wy).exp())
        .collect();
    let total: f64 = next.iter().sum();
    for w in next.iter_mut() {
        *w /= total;
    }
    next
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite weights"));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Follow-the-regularized-leader over the observed relative prices:
/// maximizes sum_s ln(a . y_s) - (regularization/2) * |a|^2 over the simplex
/// by projected gradient ascent. Errors if the iteration cap is hit before
/// the improvement tolerance.
pub fn ftrl_update(
    y_history: &[Vec<f64>],
    regularization: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<Vec<f64>> {
    let first = y_history
        .first()
        .ok_or_else(|| Error::InsufficientData("ftrl needs at least one observed period".into()))?;
    let n = first.len();
    let objective = |a: &[f64]| -> f64 {
        let mut obj = 0.0;
        for y in y_history {
            let ay: f64 = a.iter().zip(y).map(|(ai, yi)| ai * yi).sum();
            obj += ay.ln();
        }
        obj - 0.5 * regularization * a.iter().map(|ai| ai * ai).sum::<f64>()
    };
    let gradient = |a: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; n];
        for y in y_history {
            let ay: f64 = a.iter().zip(y).map(|(ai, yi)| ai * yi).sum();
            for (gi, yi) in g.iter_mut().zip(y) {
                *gi += yi / ay;
            }
        }
        for (gi, ai) in g.iter_mut().zip(a) {
            *gi -= regularization * ai;
        }
        g
    };

    let mut a = vec![1.0 / n as f64; n];
    let mut obj = objective(&a);
    let mut step = 1.0 / (y_history.len() as f64).max(1.0);
    for _ in 0..max_iterations {
        let g = gradient(&a);
        let mut candidate_step = step;
        // Backtracking: shrink until the projected step improves.
        loop {
            let trial: Vec<f64> = a
                .iter()
                .zip(&g)
                .map(|(ai, gi)| ai + candidate_step * gi)
                .collect();
            let trial = project_simplex(&trial);
            let trial_obj = objective(&trial);
            if trial_obj >= obj {
                let moved: f64 = trial
                    .iter()
                    .zip(&a)
                    .map(|(x, y)| (x - y).abs())
                    .sum();
                let improved = trial_obj - obj;
                a = trial;
                obj = trial_obj;
                step = candidate_step * 1.5;
                if improved < tolerance && moved < tolerance {
                    return Ok(a);
                }
                break;
            }
            candidate_step *= 0.5;
            if candidate_step < 1e-18 {
                // No ascent direction left: converged at a vertex.
                return Ok(a);
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "ftrl projected gradient ascent did not converge within {max_iterations} iterations"
    )))
}

/// Embeds a risky-assets-only vector into the full cash-first slot layout.
fn with_cash_slot(risky: &[f64]) -> Vec<f64> {
    let mut w = Vec::with_capacity(risky.len() + 1);
    w.push(0.0);
    w.extend_from_slice(risky);
    w
}

fn strip_cash(full: &[f64]) -> Vec<f64> {
    full[1..].to_vec()
}

struct BaselinePolicy {
    spec: BaselineSpec,
    first_call: bool,
}

impl AllocationPolicy for BaselinePolicy {
    fn name(&self) -> String {
        self.spec.name().to_string()
    }

    fn starts_invested(&self) -> bool {
        true
    }

    fn allocate(&mut self, ctx: &AllocationContext) -> Result<Vec<f64>> {
        let m_star = ctx.assets_with_cash;
        let first = std::mem::take(&mut self.first_call);
        match self.spec {
            BaselineSpec::Crp => Ok(crp_weights(m_star)),
            BaselineSpec::Bah => {
                // Buy uniformly once, then hold whatever the book drifted
                // into: no trades, no cost.
                if first {
                    Ok(crp_weights(m_star))
                } else {
                    Ok(ctx.prev_weights.to_vec())
                }
            }
            BaselineSpec::Eg { learning_rate } => {
                if first {
                    return Ok(crp_weights(m_star));
                }
                let base = strip_cash(ctx.prev_weights);
                let y_last = strip_cash(ctx.y_history.last().expect("past periods exist"));
                Ok(with_cash_slot(&eg_update(&base, &y_last, learning_rate)))
            }
            BaselineSpec::Ftrl { regularization } => {
                if ctx.y_history.is_empty() {
                    return Ok(crp_weights(m_star));
                }
                let risky_history: Vec<Vec<f64>> =
                    ctx.y_history.iter().map(|y| strip_cash(y)).collect();
                let a = ftrl_update(&risky_history, regularization, 1e-8, 10_000)?;
                Ok(with_cash_slot(&a))
            }
        }
    }
}

/// Runs a baseline through the identical accounting path as the allocator's
/// backtest, policy swapped.
pub fn run_baseline(
    spec: BaselineSpec,
    frames: &[SignalComprisedFrame],
    window: usize,
    initial_value: f64,
    commission: f64,
    risk_discount: f64,
) -> Result<PortfolioLedger> {
    spec.validate()?;
    if frames.is_empty() {
        return Err(Error::InsufficientData("baseline needs at least one asset".into()));
    }
    let mut policy = BaselinePolicy {
        spec,
        first_call: true,
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
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frames_from_closes(paths: &[Vec<f64>]) -> Vec<SignalComprisedFrame> {
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

    #[test]
    fn crp_weights_are_uniform_over_risky_assets() {
        let w = crp_weights(4);
        assert_eq!(w[0], 0.0);
        for wi in &w[1..] {
            assert!((wi - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(crp_weights(2), vec![0.0, 1.0]);
    }

    #[test]
    fn bah_weights_stay_constant_on_flat_prices() {
        let initial = [0.5, 0.5];
        let ys = vec![vec![1.0, 1.0]; 5];
        let path = bah_weights(&initial, &ys);
        for w in &path {
            assert!((w[0] - 0.5).abs() < 1e-15);
            assert!((w[1] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn bah_weights_drift_when_an_asset_doubles() {
        let path = bah_weights(&[0.5, 0.5], &[vec![1.0, 2.0]]);
        assert!((path[1][0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((path[1][1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eg_with_zero_learning_rate_keeps_weights() {
        let w = [0.3, 0.7];
        let next = eg_update(&w, &[1.2, 0.9], 0.0);
        for (a, b) in w.iter().zip(&next) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn eg_with_uniform_prices_keeps_weights() {
        let w = [0.25, 0.35, 0.4];
        let next = eg_update(&w, &[1.1, 1.1, 1.1], 0.5);
        for (a, b) in w.iter().zip(&next) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eg_matches_the_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.random_range(2..6);
            let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = w.iter().sum();
            for wi in w.iter_mut() {
                *wi /= total;
            }
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(0.7..1.4)).collect();
            let eta = rng.random_range(0.01..0.4);
            let got = eg_update(&w, &y, eta);
            let wy: f64 = w.iter().zip(&y).map(|(a, b)| a * b).sum();
            let raw: Vec<f64> = w
                .iter()
                .zip(&y)
                .map(|(wi, yi)| wi * (eta * yi / wy).exp())
                .collect();
            let z: f64 = raw.iter().sum();
            for (g, r) in got.iter().zip(&raw) {
                assert!((g - r / z).abs() < 1e-12);
            }
            assert!((got.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_projection_is_a_simplex_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.random_range(2..7);
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let p = project_simplex(&v);
            assert!(p.iter().all(|x| *x >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ftrl_concentrates_on_a_dominating_asset() {
        // Asset 1 always returns 2% while asset 2 loses 1%: with no
        // regularization the leader weight goes to one.
        let ys: Vec<Vec<f64>> = (0..200).map(|_| vec![1.02, 0.99]).collect();
        let a = ftrl_update(&ys, 0.0, 1e-8, 10_000).unwrap();
        assert!(a[0] > 0.999, "{a:?}");
    }

    #[test]
    fn ftrl_with_identical_assets_stays_uniform() {
        let ys: Vec<Vec<f64>> = (0..50).map(|_| vec![1.01, 1.01, 1.01]).collect();
        let a = ftrl_update(&ys, 0.1, 1e-8, 10_000).unwrap();
        for ai in &a {
            assert!((ai - 1.0 / 3.0).abs() < 1e-6, "{a:?}");
        }
    }

    #[test]
    fn ftrl_with_heavy_regularization_stays_near_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let ys: Vec<Vec<f64>> = (0..60)
            .map(|_| vec![rng.random_range(0.9..1.15), rng.random_range(0.9..1.15), rng.random_range(0.9..1.15)])
            .collect();
        let a = ftrl_update(&ys, 1e6, 1e-10, 20_000).unwrap();
        for ai in &a {
            assert!((ai - 1.0 / 3.0).abs() < 1e-3, "{a:?}");
        }
    }

    #[test]
    fn ftrl_matches_grid_search_on_two_assets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ys: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![rng.random_range(0.9..1.1), rng.random_range(0.9..1.1)])
            .collect();
        let reg = 0.05;
        let a = ftrl_update(&ys, reg, 1e-8, 10_000).unwrap();
        let objective = |w0: f64| -> f64 {
            let w = [w0, 1.0 - w0];
            let mut obj = 0.0;
            for y in &ys {
                obj += (w[0] * y[0] + w[1] * y[1]).ln();
            }
            obj - 0.5 * reg * (w[0] * w[0] + w[1] * w[1])
        };
        let mut best = f64::NEG_INFINITY;
        for k in 0..=100 {
            best = best.max(objective(k as f64 / 100.0));
        }
        let got = objective(a[0]);
        assert!(best - got < 1e-4, "grid {best} vs solver {got}");
    }

    #[test]
    fn crp_on_flat_market_loses_nothing() {
        let frames = frames_from_closes(&[vec![1.0; 30], vec![1.0; 30]]);
        let ledger = run_baseline(BaselineSpec::Crp, &frames, 5, 10_000.0, 0.0025, 0.0).unwrap();
        assert!((ledger.terminal_value() - 10_000.0).abs() < 1e-9);
        assert!(ledger.rows.iter().all(|r| r.cost.abs() < 1e-15));
    }

    #[test]
    fn bah_ledger_matches_the_closed_form() {
        let a: Vec<f64> = (0..40).map(|i| 1.0 + 0.03 * ((i as f64) * 0.8).sin()).collect();
        let b: Vec<f64> = (0..40).map(|i| (1.0f64 + 0.004).powi(i as i32)).collect();
        let frames = frames_from_closes(&[a.clone(), b.clone()]);
        let window = 6;
        let ledger = run_baseline(BaselineSpec::Bah, &frames, window, 10_000.0, 0.0025, 0.0).unwrap();
        // Closed form: initial uniform allocation held to the end.
        let t0 = window - 1; // entry prices are the closes the first period starts from
        let last = a.len() - 1;
        let expected = 10_000.0 * (0.5 * a[last] / a[t0] + 0.5 * b[last] / b[t0]);
        assert!(
            (ledger.terminal_value() - expected).abs() < 1e-8,
            "{} vs {expected}",
            ledger.terminal_value()
        );
    }

    #[test]
    fn bah_pays_no_cost_after_the_first_period() {
        let a: Vec<f64> = (0..30).map(|i| 1.0 + 0.02 * ((i as f64) * 1.1).cos()).collect();
        let frames = frames_from_closes(&[a]);
        let ledger = run_baseline(BaselineSpec::Bah, &frames, 5, 10_000.0, 0.0025, 0.0).unwrap();
        for row in &ledger.rows {
            assert!(row.cost.abs() < 1e-15);
        }
    }

    #[test]
    fn all_baselines_emit_simplex_weights_and_share_the_cost_model() {
        let a: Vec<f64> = (0..35).map(|i| 1.0 + 0.05 * ((i as f64) * 0.6).sin()).collect();
        let b: Vec<f64> = (0..35).map(|i| 1.0 + 0.04 * ((i as f64) * 0.9).cos()).collect();
        let frames = frames_from_closes(&[a, b]);
        for spec in [
            BaselineSpec::Crp,
            BaselineSpec::Bah,
            BaselineSpec::Eg { learning_rate: 0.1 },
            BaselineSpec::Ftrl { regularization: 0.05 },
        ] {
            let ledger = run_baseline(spec, &frames, 5, 10_000.0, 0.0025, 0.0).unwrap();
            ledger.check_recursion(1e-12).unwrap();
            for row in &ledger.rows {
                assert!(row.action_weights.iter().all(|w| *w >= -1e-12));
                assert!((row.action_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(row.cost <= 2.0 * 0.0025 + 1e-12);
            }
        }
    }
}
