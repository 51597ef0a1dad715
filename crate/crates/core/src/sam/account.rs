//! Portfolio accounting primitives: relative prices, weight drift,
//! proportional transaction costs, the rolling risk penalty, the per-period
//! reward pair, and the ledger that ties them together.

use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative price vector for one period: unit for cash, close-to-close
/// ratio for every asset.
pub fn relative_price_vector(prev_closes: &[f64], closes: &[f64]) -> Result<Vec<f64>> {
    if prev_closes.len() != closes.len() {
        return Err(Error::ShapeMismatch(format!(
            "relative prices need matching lengths, got {} and {}",
            prev_closes.len(),
            closes.len()
        )));
    }
    let mut y = Vec::with_capacity(closes.len() + 1);
    y.push(1.0);
    for (p, c) in prev_closes.iter().zip(closes) {
        if *p <= 0.0 || *c <= 0.0 {
            return Err(Error::Validation("non-positive close price".into()));
        }
        y.push(c / p);
    }
    Ok(y)
}

/// Weights after intra-period price drift: w = (y ⊙ a) / (y · a).
pub fn drift_weights(action: &[f64], y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(action.len(), y.len());
    let denom: f64 = action.iter().zip(y).map(|(a, yi)| a * yi).sum();
    action.iter().zip(y).map(|(a, yi)| a * yi / denom).collect()
}

/// Proportional rebalancing cost between the drifted holdings and the new
/// target: commission * L1 distance. Bounded by twice the commission.
pub fn transaction_cost(action: &[f64], prev_weights: &[f64], commission: f64) -> f64 {
    debug_assert_eq!(action.len(), prev_weights.len());
    commission
        * action
            .iter()
            .zip(prev_weights)
            .map(|(a, w)| (a - w).abs())
            .sum::<f64>()
}

/// Mean total squared deviation of the relative price vectors from their
/// per-asset window means: the volatility penalty for one period.
pub fn risk_penalty(y_window: &[Vec<f64>]) -> Result<f64> {
    let n = y_window.len();
    if n == 0 {
        return Err(Error::InsufficientData("risk penalty needs history".into()));
    }
    let dims = y_window[0].len();
    if y_window.iter().any(|y| y.len() != dims) {
        return Err(Error::ShapeMismatch("ragged relative-price history".into()));
    }
    let mut means = vec![0.0; dims];
    for y in y_window {
        for (m, v) in means.iter_mut().zip(y) {
            *m += v;
        }
    }
    for m in means.iter_mut() {
        *m /= n as f64;
    }
    let mut total = 0.0;
    for y in y_window {
        for (m, v) in means.iter().zip(y) {
            let d = v - m;
            total += d * d;
        }
    }
    Ok(total / n as f64)
}

/// The per-period reward pair: the risk-adjusted log-return the agent
/// optimizes and the risk-unadjusted log-return the ledger compounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardParts {
    pub risk_adjusted: f64,
    pub log_return: f64,
    pub cost: f64,
    pub gross_return: f64,
}

/// Computes both rewards for one period. The log arguments must stay
/// positive; a non-positive argument means the portfolio value was wiped
/// out within a single period and is reported as an error.
pub fn sam_reward(
    action: &[f64],
    y: &[f64],
    prev_weights: &[f64],
    commission: f64,
    risk_discount: f64,
    risk: f64,
) -> Result<RewardParts> {
    let gross: f64 = action.iter().zip(y).map(|(a, yi)| a * yi).sum();
    let cost = transaction_cost(action, prev_weights, commission);
    let unadjusted = gross - cost;
    if unadjusted <= 0.0 {
        return Err(Error::Accounting(format!(
            "log-return argument {unadjusted} is non-positive (catastrophic loss)"
        )));
    }
    let adjusted = unadjusted - risk_discount * risk;
    if adjusted <= 0.0 {
        return Err(Error::Accounting(format!(
            "risk-adjusted log argument {adjusted} is non-positive (catastrophic loss)"
        )));
    }
    Ok(RewardParts {
        risk_adjusted: adjusted.ln(),
        log_return: unadjusted.ln(),
        cost,
        gross_return: gross,
    })
}

/// One backtest period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub date: NaiveDate,
    /// Target allocation a_t chosen at the start of the period.
    pub action_weights: Vec<f64>,
    /// Holdings after intra-period drift.
    pub post_drift_weights: Vec<f64>,
    pub cost: f64,
    pub log_return: f64,
    pub risk_adjusted: f64,
    pub value: f64,
}

/// The full account of one backtest: value path, weights and trade log.
/// Invariant: value[t] = value[t-1] * exp(log_return[t]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioLedger {
    pub strategy: String,
    /// Cash first, then asset symbols in frame order.
    pub columns: Vec<String>,
    pub initial_value: f64,
    pub rows: Vec<LedgerRow>,
}

impl PortfolioLedger {
    pub fn returns(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.log_return).collect()
    }

    pub fn risk_adjusted_returns(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.risk_adjusted).collect()
    }

    /// Value path including the initial value.
    pub fn values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.rows.len() + 1);
        v.push(self.initial_value);
        v.extend(self.rows.iter().map(|r| r.value));
        v
    }

    pub fn terminal_value(&self) -> f64 {
        self.rows.last().map(|r| r.value).unwrap_or(self.initial_value)
    }

    /// Verifies the multiplicative value recursion at every step.
    pub fn check_recursion(&self, tolerance: f64) -> Result<()> {
        let mut value = self.initial_value;
        for (i, row) in self.rows.iter().enumerate() {
            value *= row.log_return.exp();
            if (value - row.value).abs() > tolerance * value.abs().max(1.0) {
                return Err(Error::Accounting(format!(
                    "value recursion violated at row {i}: {} vs {}",
                    row.value, value
                )));
            }
        }
        Ok(())
    }

    /// Reads a ledger back from its CSV form.
    pub fn read_csv(path: &Path) -> Result<PortfolioLedger> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Validation(format!("cannot open {}: {e}", path.display())))?;
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Validation(format!("{e}")))?
            .iter()
            .map(|h| h.to_string())
            .collect();
        let weight_cols: Vec<String> = headers
            .iter()
            .filter(|h| h.starts_with("w_"))
            .map(|h| h[2..].to_string())
            .collect();
        if weight_cols.is_empty() || headers.first().map(String::as_str) != Some("date") {
            return Err(Error::Validation(format!(
                "{} is not a ledger csv",
                path.display()
            )));
        }
        let m_star = weight_cols.len();
        let mut strategy = String::new();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Validation(format!("{e}")))?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let bad_row = |msg: String| Error::CsvRow {
                path: path.to_path_buf(),
                line,
                msg,
            };
            if record.len() != 2 + m_star + 4 {
                return Err(bad_row(format!("expected {} fields", 2 + m_star + 4)));
            }
            let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
                .map_err(|_| bad_row(format!("unparseable date {:?}", &record[0])))?;
            strategy = record[1].to_string();
            let num = |i: usize| -> Result<f64> {
                record[i]
                    .parse::<f64>()
                    .map_err(|_| bad_row(format!("unparseable number {:?}", &record[i])))
            };
            let mut action_weights = Vec::with_capacity(m_star);
            for i in 0..m_star {
                action_weights.push(num(2 + i)?);
            }
            let cost = num(2 + m_star)?;
            let log_return = num(3 + m_star)?;
            let risk_adjusted = num(4 + m_star)?;
            let value = num(5 + m_star)?;
            rows.push(LedgerRow {
                date,
                action_weights,
                post_drift_weights: Vec::new(),
                cost,
                log_return,
                risk_adjusted,
                value,
            });
        }
        if rows.is_empty() {
            return Err(Error::InsufficientData(format!(
                "{} holds no ledger rows",
                path.display()
            )));
        }
        // Recover the initial value from the first row's recursion.
        let initial_value = rows[0].value / rows[0].log_return.exp();
        Ok(PortfolioLedger {
            strategy,
            columns: weight_cols,
            initial_value,
            rows,
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("date,strategy");
        for c in &self.columns {
            write!(out, ",w_{c}").expect("string write");
        }
        out.push_str(",cost,R_t,r_star_t,p_t\n");
        for row in &self.rows {
            write!(out, "{},{}", row.date, self.strategy).expect("string write");
            for w in &row.action_weights {
                write!(out, ",{w}").expect("string write");
            }
            writeln!(
                out,
                ",{},{},{},{}",
                row.cost, row.log_return, row.risk_adjusted, row.value
            )
            .expect("string write");
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}
