//! Performance metrics over daily log-return series (DRR, ARR, Sortino,
//! max drawdown), rolling stability series (SMA, RstdDRR), and the
//! statistical test battery used to compare strategies.
//!
//! Percentage conventions: the literal mean-of-gross-returns and terminal
//! value ratios are exposed as `*_raw`; the reported percentages are the
//! net forms (raw - 1) * 100, which is what the headline numbers use.

#[cfg(test)]
mod reference_fixtures;
pub mod stats;

pub use stats::{
    levene, mann_whitney_u, shapiro_wilk, stability_protocol, LeveneResult, MannWhitneyResult,
    ShapiroWilkResult, StabilityTestReport, StabilityVerdict, Tail,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Daily rate of return: mean gross daily return, net percentage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drr {
    pub pct: f64,
    /// Mean of exp(R_t), the literal formula value.
    pub raw: f64,
}

pub fn drr(returns: &[f64]) -> Result<Drr> {
    if returns.is_empty() {
        return Err(Error::InsufficientData("drr needs at least one return".into()));
    }
    let raw = returns.iter().map(|r| r.exp()).sum::<f64>() / returns.len() as f64;
    Ok(Drr {
        pct: (raw - 1.0) * 100.0,
        raw,
    })
}

/// Accumulated rate of return and the terminal portfolio value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arr {
    pub pct: f64,
    /// Terminal-to-initial value ratio, the literal formula value.
    pub raw: f64,
    pub terminal_value: f64,
}

pub fn arr(returns: &[f64], initial_value: f64) -> Result<Arr> {
    if returns.is_empty() {
        return Err(Error::InsufficientData("arr needs at least one return".into()));
    }
    let total: f64 = returns.iter().sum();
    let terminal_value = initial_value * total.exp();
    let raw = terminal_value / initial_value;
    Ok(Arr {
        pct: (raw - 1.0) * 100.0,
        raw,
        terminal_value,
    })
}

/// Sortino ratio: net mean daily return over downside deviation, with the
/// risk-free rate conventionally zero. The downside deviation is the
/// population standard deviation of the negative returns; a series without
/// negative returns (or with zero downside variance) has no defined ratio.
pub fn sortino(returns: &[f64], risk_free: f64) -> Result<f64> {
    if returns.is_empty() {
        return Err(Error::InsufficientData("sortino needs at least one return".into()));
    }
    let mean_gross = returns.iter().map(|r| r.exp()).sum::<f64>() / returns.len() as f64;
    let numerator = mean_gross - (1.0 + risk_free);
    let downside: Vec<f64> = returns.iter().copied().filter(|r| *r < 0.0).collect();
    if downside.is_empty() {
        return Err(Error::Stats(
            "sortino undefined: no negative returns in the series".into(),
        ));
    }
    let excess: Vec<f64> = downside.iter().map(|r| r - risk_free).collect();
    let mean = excess.iter().sum::<f64>() / excess.len() as f64;
    let var = excess.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / excess.len() as f64;
    if var <= 0.0 {
        return Err(Error::Stats("sortino undefined: zero downside variance".into()));
    }
    Ok(numerator / var.sqrt())
}

/// Maximum drawdown in percent (always <= 0): the biggest drop from a
/// running peak to a subsequent trough of the value series.
pub fn max_drawdown(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientData("max drawdown needs values".into()));
    }
    if values.iter().any(|v| *v <= 0.0) {
        return Err(Error::Validation("max drawdown needs positive values".into()));
    }
    let mut peak = values[0];
    let mut worst = 0.0f64;
    for &v in values {
        if v > peak {
            peak = v;
        }
        worst = worst.min(v / peak - 1.0);
    }
    Ok(worst * 100.0)
}

/// Trailing simple moving average: output i covers input[i..i+n].
pub fn sma(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::Validation("sma window must be positive".into()));
    }
    if series.len() < window {
        return Err(Error::InsufficientData(format!(
            "sma needs at least {} points, got {}",
            window,
            series.len()
        )));
    }
    Ok(series
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / window as f64)
        .collect())
}

/// Trailing rolling population standard deviation around the SMA of the same
/// window; the stability proxy for daily returns.
pub fn rstd(series: &[f64], window: usize) -> Result<Vec<f64>> {
    let means = sma(series, window)?;
    Ok(series
        .windows(window)
        .zip(means)
        .map(|(w, m)| {
            let ss: f64 = w.iter().map(|v| (v - m).powi(2)).sum();
            (ss / window as f64).sqrt()
        })
        .collect())
}

/// The standard 5-day stability series over a daily-return series.
pub fn rstd_drr(drr_series: &[f64]) -> Result<Vec<f64>> {
    rstd(drr_series, 5)
}

/// The four headline performance numbers, formatted to the conventional
/// precision (3 decimals DRR, 1 decimal ARR/MD, 2 decimals SR) by `rounded`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle {
    pub drr_pct: f64,
    pub arr_pct: f64,
    pub sortino: Option<f64>,
    pub max_drawdown_pct: f64,
    pub drr_raw: f64,
    pub arr_raw: f64,
    pub terminal_value: f64,
}

impl MetricBundle {
    /// Computes the bundle from daily log-returns and the value path.
    /// `values` must include the initial value as its first entry.
    pub fn from_returns(returns: &[f64], values: &[f64], initial_value: f64) -> Result<Self> {
        let d = drr(returns)?;
        let a = arr(returns, initial_value)?;
        let md = max_drawdown(values)?;
        let sr = sortino(returns, 0.0).ok();
        Ok(MetricBundle {
            drr_pct: d.pct,
            arr_pct: a.pct,
            sortino: sr,
            max_drawdown_pct: md,
            drr_raw: d.raw,
            arr_raw: a.raw,
            terminal_value: a.terminal_value,
        })
    }

    /// Table-style formatting: (DRR, ARR, MD, SR) strings.
    pub fn rounded(&self) -> (String, String, String, String) {
        (
            format!("{:.3}", self.drr_pct),
            format!("{:.1}", self.arr_pct),
            format!("{:.1}", self.max_drawdown_pct),
            self.sortino
                .map(|s| format!("{s:.2}"))
                .unwrap_or_else(|| "n/a".into()),
        )
    }
}
