//! The experiment configuration: one structured TOML file with a section
//! per subsystem. Every random choice in a run flows from the named seeds
//! here; nothing falls back to wall-clock entropy.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::BaselineSpec;
use crate::data::{DatasetSplit, DateRange, RegimeSegment, SyntheticMarketSpec};
use crate::eam::{EamHyperparams, EamNetConfig};
use crate::error::{Error, Result};
use crate::sam::{SamHyperparams, SamNetConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    Csv,
    Synthetic,
}

/// Synthetic-market parameters, minus the seed (which comes from `[seeds]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub num_assets: usize,
    pub length: usize,
    pub regimes: Vec<Vec<RegimeSegment>>,
    pub start_date: chrono::NaiveDate,
    pub base_price: f64,
    pub base_volume: f64,
    pub sentiment_corr: f64,
    pub sentiment_noise: f64,
}

impl SyntheticConfig {
    pub fn to_spec(&self, seed: u64) -> SyntheticMarketSpec {
        SyntheticMarketSpec {
            num_assets: self.num_assets,
            length: self.length,
            seed,
            regimes: self.regimes.clone(),
            start_date: self.start_date,
            base_price: self.base_price,
            base_volume: self.base_volume,
            sentiment_corr: self.sentiment_corr,
            sentiment_noise: self.sentiment_noise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSection {
    pub kind: DataKind,
    /// For csv data: directory holding <SYMBOL>_price.csv and
    /// <SYMBOL>_sentiment.csv per symbol.
    #[serde(default)]
    pub csv_dir: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: Option<SyntheticConfig>,
}

/// All randomness is keyed off these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub data: u64,
    pub eam: u64,
    pub sam: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub out_dir: PathBuf,
    pub initial_value: f64,
    /// The symbol whose agent trains first and donates its parameters to
    /// every other symbol's agent. Defaults to the alphabetically first.
    #[serde(default)]
    pub foundational_symbol: Option<String>,
    /// Worker threads for per-asset/per-portfolio parallel stages;
    /// 0 picks the runtime default.
    #[serde(default)]
    pub jobs: usize,
}

/// An externally produced daily log-return series available to `stats`
/// comparisons (CSV: date,log_return).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalSeries {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSection {
    /// The two strategies whose return stability is compared; names refer
    /// to "mspm", a baseline kind, or an external series name.
    pub compare: [String; 2],
    pub alpha: f64,
    #[serde(default)]
    pub external: Vec<ExternalSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data: DataSection,
    /// Portfolio name -> asset symbols.
    pub portfolios: BTreeMap<String, Vec<String>>,
    pub split: DatasetSplit,
    pub eam: EamHyperparams,
    pub sam: SamHyperparams,
    pub baselines: Vec<BaselineSpec>,
    pub seeds: Seeds,
    pub run: RunSection,
    pub stats: StatsSection,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: ExperimentConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Digest of the parsed config (formatting and comments don't matter).
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_toml().as_bytes());
        hex_string(&hasher.finalize())
    }

    /// Distinct symbols across all portfolios, sorted.
    pub fn all_symbols(&self) -> Vec<String> {
        let mut set: Vec<String> = self
            .portfolios
            .values()
            .flatten()
            .cloned()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        set.sort();
        set
    }

    pub fn foundational_symbol(&self) -> String {
        self.run
            .foundational_symbol
            .clone()
            .unwrap_or_else(|| self.all_symbols().first().cloned().unwrap_or_default())
    }

    pub fn validate(&self) -> Result<()> {
        match self.data.kind {
            DataKind::Csv if self.data.csv_dir.is_none() => {
                return Err(Error::Config("csv data needs data.csv_dir".into()));
            }
            DataKind::Synthetic if self.data.synthetic.is_none() => {
                return Err(Error::Config("synthetic data needs a [data.synthetic] section".into()));
            }
            _ => {}
        }
        if self.portfolios.is_empty() {
            return Err(Error::Config("at least one portfolio is required".into()));
        }
        for (name, symbols) in &self.portfolios {
            if symbols.is_empty() {
                return Err(Error::Config(format!("portfolio {name} has no assets")));
            }
        }
        if let Some(synth) = &self.data.synthetic {
            let available: Vec<String> =
                (0..synth.num_assets).map(|i| format!("SYN{i}")).collect();
            for sym in self.all_symbols() {
                if !available.contains(&sym) {
                    return Err(Error::Config(format!(
                        "portfolio symbol {sym} is not generated by the synthetic market (assets: {available:?})"
                    )));
                }
            }
            // Every agent and the allocator need their rolling windows
            // covered with room to spare.
            let min_len = 2 * self.eam.window.max(self.sam.window);
            if synth.length < min_len {
                return Err(Error::Config(format!(
                    "synthetic length {} is below twice the rolling window ({min_len})",
                    synth.length
                )));
            }
        }
        self.split.validate()?;
        // The allocator tier must sit inside the signal-prediction range:
        // its frames come from signals generated over that range.
        if self.split.sam_train.start < self.split.eam_predict.start
            || self.split.sam_experiment.end > self.split.eam_predict.end
        {
            return Err(Error::Config(
                "allocator date ranges must lie within the signal-prediction range".into(),
            ));
        }
        self.eam.validate()?;
        self.sam.validate()?;
        for b in &self.baselines {
            b.validate()?;
        }
        if let Some(f) = &self.run.foundational_symbol {
            if !self.all_symbols().contains(f) {
                return Err(Error::Config(format!(
                    "foundational symbol {f} is not in any portfolio"
                )));
            }
        }
        if self.run.initial_value <= 0.0 {
            return Err(Error::Config("initial portfolio value must be positive".into()));
        }
        if !(0.0 < self.stats.alpha && self.stats.alpha < 1.0) {
            return Err(Error::Config("stats alpha must be in (0, 1)".into()));
        }
        Ok(())
    }

    /// Replaces every seed with values derived from one override.
    pub fn override_seeds(&mut self, base: u64) {
        self.seeds = Seeds {
            data: base,
            eam: base.wrapping_add(1),
            sam: base.wrapping_add(2),
        };
    }
}

/// A runnable demo profile: a three-asset synthetic market with alternating
/// trend regimes, scaled-down networks, and every seed pinned.
impl Default for ExperimentConfig {
    fn default() -> Self {
        let d = |s: &str| chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d").expect("valid date");
        let mut portfolios = BTreeMap::new();
        portfolios.insert("alpha".to_string(), vec!["SYN0".into(), "SYN1".into(), "SYN2".into()]);
        ExperimentConfig {
            data: DataSection {
                kind: DataKind::Synthetic,
                csv_dir: None,
                synthetic: Some(SyntheticConfig {
                    num_assets: 3,
                    length: 760,
                    regimes: vec![vec![
                        RegimeSegment {
                            length: 5,
                            drift: 0.012,
                            volatility: 0.003,
                            sentiment_bias: 0.0,
                        },
                        RegimeSegment {
                            length: 5,
                            drift: -0.012,
                            volatility: 0.003,
                            sentiment_bias: 0.0,
                        },
                    ]],
                    start_date: d("2016-01-04"),
                    base_price: 100.0,
                    base_volume: 1_000_000.0,
                    sentiment_corr: 2.0,
                    sentiment_noise: 0.25,
                }),
            },
            portfolios,
            split: DatasetSplit {
                eam_train: DateRange::new(d("2016-01-04"), d("2017-06-30")),
                eam_predict: DateRange::new(d("2017-07-01"), d("2018-12-31")),
                sam_train: DateRange::new(d("2017-07-01"), d("2018-05-31")),
                sam_validate: DateRange::new(d("2018-06-01"), d("2018-08-31")),
                sam_experiment: DateRange::new(d("2018-09-01"), d("2018-12-31")),
            },
            eam: EamHyperparams {
                window: 12,
                epsilon_decay_steps: 4_000,
                episode_length: 120,
                episodes: 40,
                net: EamNetConfig {
                    conv_channels: 8,
                    conv_kernel: 5,
                    res_blocks: 1,
                    res_kernel: 3,
                    dense_width: 32,
                },
                ..Default::default()
            },
            sam: SamHyperparams {
                window: 12,
                rollout_length: 128,
                updates: 250,
                sigma_train: 0.4,
                gamma: 0.3,
                gae_lambda: 0.3,
                actor_lr: 1e-3,
                critic_lr: 1e-3,
                net: SamNetConfig { channels: 8 },
                ..Default::default()
            },
            baselines: vec![
                BaselineSpec::Crp,
                BaselineSpec::Bah,
                BaselineSpec::Eg { learning_rate: 0.05 },
                BaselineSpec::Ftrl { regularization: 0.1 },
            ],
            seeds: Seeds {
                data: 101,
                eam: 202,
                sam: 303,
            },
            run: RunSection {
                out_dir: PathBuf::from("out"),
                initial_value: 10_000.0,
                foundational_symbol: None,
                jobs: 0,
            },
            stats: StatsSection {
                compare: ["mspm".into(), "crp".into()],
                alpha: 0.05,
                external: Vec::new(),
            },
        }
    }
}

pub fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        use std::fmt::Write;
        write!(s, "{b:02x}").expect("hex write");
    }
    s
}

/// Stable 64-bit hash for deriving per-symbol/per-portfolio seeds.
pub fn stable_hash(label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("eight bytes"))
}
