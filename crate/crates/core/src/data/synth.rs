//! Seeded synthetic market generator: segment-wise geometric random walks
//! with sentiment correlated to the sign of the next day's move.

use chrono::{Datelike, NaiveDate, Weekday};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{AssetBar, AssetSeries, SentimentRecord};
use crate::error::{Error, Result};

/// One market regime: `length` days of a geometric random walk with the
/// given mean daily log-return and volatility, plus a sentiment bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSegment {
    pub length: usize,
    pub drift: f64,
    pub volatility: f64,
    #[serde(default)]
    pub sentiment_bias: f64,
}

/// Reproducible multi-asset market description. The per-asset regime plan is
/// cycled to cover `length` days, which makes periodic markets easy to state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticMarketSpec {
    pub num_assets: usize,
    pub length: usize,
    pub seed: u64,
    /// One regime plan per asset; a single plan is broadcast to all assets.
    pub regimes: Vec<Vec<RegimeSegment>>,
    #[serde(default = "default_start_date")]
    pub start_date: NaiveDate,
    #[serde(default = "default_base_price")]
    pub base_price: f64,
    #[serde(default = "default_base_volume")]
    pub base_volume: f64,
    /// How strongly sentiment leans toward the sign of the next day's
    /// log-return; 0 decouples sentiment from prices.
    #[serde(default = "default_sentiment_corr")]
    pub sentiment_corr: f64,
    /// Standard deviation of the additive sentiment noise.
    #[serde(default = "default_sentiment_noise")]
    pub sentiment_noise: f64,
}

fn default_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2016, 1, 4).expect("valid date")
}

fn default_base_price() -> f64 {
    100.0
}

fn default_base_volume() -> f64 {
    1_000_000.0
}

fn default_sentiment_corr() -> f64 {
    2.0
}

fn default_sentiment_noise() -> f64 {
    0.25
}

impl SyntheticMarketSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_assets == 0 {
            return Err(Error::Config("synthetic market needs at least one asset".into()));
        }
        if self.length < 2 {
            return Err(Error::Config("synthetic market needs at least two days".into()));
        }
        if self.regimes.is_empty() {
            return Err(Error::Config("synthetic market needs a regime plan".into()));
        }
        if self.regimes.len() != 1 && self.regimes.len() != self.num_assets {
            return Err(Error::Config(format!(
                "regime plans ({}) must be one-per-asset ({}) or a single shared plan",
                self.regimes.len(),
                self.num_assets
            )));
        }
        for plan in &self.regimes {
            if plan.is_empty() || plan.iter().any(|s| s.length == 0) {
                return Err(Error::Config("regime segments must have positive length".into()));
            }
            if plan.iter().any(|s| s.volatility < 0.0) {
                return Err(Error::Config("regime volatility must be non-negative".into()));
            }
        }
        if self.base_price <= 0.0 || self.base_volume <= 0.0 {
            return Err(Error::Config("base price and volume must be positive".into()));
        }
        Ok(())
    }

    fn plan_for(&self, asset: usize) -> &[RegimeSegment] {
        if self.regimes.len() == 1 {
            &self.regimes[0]
        } else {
            &self.regimes[asset]
        }
    }
}

/// Trading dates: consecutive weekdays starting at `start`.
fn trading_dates(start: NaiveDate, count: usize) -> Vec<NaiveDate> {
    let mut dates = Vec::with_capacity(count);
    let mut date = start;
    while dates.len() < count {
        if !matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
            dates.push(date);
        }
        date += chrono::Duration::days(1);
    }
    dates
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Generates one series set from the spec. Identical specs produce
/// bit-identical series: each asset draws from its own stream keyed by
/// (seed, asset index), so the result is independent of evaluation order.
pub fn generate_synthetic(spec: &SyntheticMarketSpec) -> Result<Vec<AssetSeries>> {
    spec.validate()?;
    let dates = trading_dates(spec.start_date, spec.length);
    let mut out = Vec::with_capacity(spec.num_assets);
    for asset in 0..spec.num_assets {
        let mut rng = ChaCha8Rng::seed_from_u64(
            spec.seed ^ (asset as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let plan = spec.plan_for(asset);

        // Per-day segment assignment, cycling the plan.
        let mut day_segment = Vec::with_capacity(spec.length);
        'outer: loop {
            for seg in plan {
                for _ in 0..seg.length {
                    if day_segment.len() == spec.length {
                        break 'outer;
                    }
                    day_segment.push(*seg);
                }
            }
        }

        // Log-return path first; everything downstream (high/low wiggle,
        // volume, sentiment) reads it.
        let mut log_returns = vec![0.0; spec.length]; // log_returns[t] moves day t-1 -> t
        for t in 1..spec.length {
            let seg = &day_segment[t];
            log_returns[t] = seg.drift + seg.volatility * normal(&mut rng);
        }

        let mut closes = Vec::with_capacity(spec.length);
        closes.push(spec.base_price);
        for t in 1..spec.length {
            closes.push(closes[t - 1] * log_returns[t].exp());
        }

        let mut bars = Vec::with_capacity(spec.length);
        let mut sentiments = Vec::with_capacity(spec.length);
        for t in 0..spec.length {
            let seg = &day_segment[t];
            let open = if t == 0 { closes[0] } else { closes[t - 1] };
            let close = closes[t];
            let wiggle_hi = (seg.volatility * 0.5 * normal(&mut rng).abs()).exp();
            let wiggle_lo = (-seg.volatility * 0.5 * normal(&mut rng).abs()).exp();
            let high = open.max(close) * wiggle_hi;
            let low = open.min(close) * wiggle_lo;
            let volume = spec.base_volume * (seg.volatility * normal(&mut rng)).exp();
            bars.push(AssetBar {
                date: dates[t],
                open,
                high,
                low,
                close,
                volume,
            });

            let next_sign = if t + 1 < spec.length {
                log_returns[t + 1].signum()
            } else {
                0.0
            };
            let noise = spec.sentiment_noise * normal(&mut rng);
            let sentiment =
                (seg.sentiment_bias + spec.sentiment_corr * next_sign + noise).clamp(-5.0, 5.0);
            let news_buzz = (5.5 + 2.0 * normal(&mut rng)).clamp(1.0, 10.0);
            sentiments.push(SentimentRecord {
                date: dates[t],
                sentiment,
                news_buzz,
                imputed: false,
            });
        }
        out.push(AssetSeries {
            symbol: format!("SYN{asset}"),
            bars,
            sentiments,
            normalization_base: None,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_spec() -> SyntheticMarketSpec {
        SyntheticMarketSpec {
            num_assets: 1,
            length: 30,
            seed: 99,
            regimes: vec![vec![RegimeSegment {
                length: 30,
                drift: 0.0,
                volatility: 0.0,
                sentiment_bias: 0.0,
            }]],
            start_date: default_start_date(),
            base_price: 100.0,
            base_volume: 1_000_000.0,
            sentiment_corr: 2.0,
            sentiment_noise: 0.25,
        }
    }

    #[test]
    fn zero_drift_zero_volatility_gives_constant_prices() {
        let series = generate_synthetic(&flat_spec()).unwrap();
        for b in &series[0].bars {
            assert_eq!(b.close, 100.0);
            assert_eq!(b.open, 100.0);
            assert_eq!(b.high, 100.0);
            assert_eq!(b.low, 100.0);
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let mut spec = flat_spec();
        spec.regimes = vec![vec![RegimeSegment {
            length: 10,
            drift: 0.001,
            volatility: 0.02,
            sentiment_bias: 0.5,
        }]];
        spec.num_assets = 3;
        let a = generate_synthetic(&spec).unwrap();
        let b = generate_synthetic(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bars_satisfy_ohlc_invariants() {
        let mut spec = flat_spec();
        spec.length = 200;
        spec.regimes = vec![vec![
            RegimeSegment {
                length: 20,
                drift: 0.01,
                volatility: 0.03,
                sentiment_bias: 1.0,
            },
            RegimeSegment {
                length: 20,
                drift: -0.01,
                volatility: 0.03,
                sentiment_bias: -1.0,
            },
        ]];
        let series = generate_synthetic(&spec).unwrap();
        for b in &series[0].bars {
            b.validate().unwrap();
        }
        for s in &series[0].sentiments {
            s.validate().unwrap();
        }
    }

    #[test]
    fn positive_drift_mean_log_return_matches_monte_carlo() {
        // Over 1000 seeds the mean total log-return of a drift-mu segment of
        // length L must sit within 3 standard errors of mu * L.
        let drift = 0.002;
        let vol = 0.01;
        let days = 61; // 60 return steps
        let steps = (days - 1) as f64;
        let mut totals = Vec::with_capacity(1000);
        for seed in 0..1000u64 {
            let spec = SyntheticMarketSpec {
                num_assets: 1,
                length: days,
                seed,
                regimes: vec![vec![RegimeSegment {
                    length: days,
                    drift,
                    volatility: vol,
                    sentiment_bias: 0.0,
                }]],
                start_date: default_start_date(),
                base_price: 50.0,
                base_volume: 1000.0,
                sentiment_corr: 0.0,
                sentiment_noise: 0.0,
            };
            let series = generate_synthetic(&spec).unwrap();
            let bars = &series[0].bars;
            totals.push((bars.last().unwrap().close / bars[0].close).ln());
        }
        let mean = totals.iter().sum::<f64>() / totals.len() as f64;
        let expected = drift * steps;
        // Each total is N(mu*L, vol^2*L); the Monte-Carlo standard error
        // of the mean over 1000 draws follows.
        let se = vol * steps.sqrt() / (totals.len() as f64).sqrt();
        assert!(
            (mean - expected).abs() < 3.0 * se,
            "mean {mean} vs expected {expected} (se {se})"
        );
    }

    #[test]
    fn sentiment_tracks_next_day_move_sign() {
        let mut spec = flat_spec();
        spec.length = 400;
        spec.sentiment_corr = 2.0;
        spec.sentiment_noise = 0.1;
        spec.regimes = vec![vec![RegimeSegment {
            length: 400,
            drift: 0.0,
            volatility: 0.02,
            sentiment_bias: 0.0,
        }]];
        let series = generate_synthetic(&spec).unwrap();
        let s = &series[0];
        let mut agree = 0;
        let mut total = 0;
        for t in 0..s.len() - 1 {
            let next_ret = s.bars[t + 1].close / s.bars[t].close - 1.0;
            if next_ret != 0.0 {
                total += 1;
                if (s.sentiments[t].sentiment > 0.0) == (next_ret > 0.0) {
                    agree += 1;
                }
            }
        }
        assert!(agree as f64 / total as f64 > 0.95, "{agree}/{total}");
    }
}
