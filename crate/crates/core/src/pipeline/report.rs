//! Comparison tables, plot-data emission, the stability protocol wiring,
//! and the machine-readable run report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{hex_string, ExperimentConfig};
use super::manifest::RunManifest;
use crate::error::{Error, Result};
use crate::metrics::{rstd_drr, stability_protocol, MetricBundle, StabilityTestReport};
use crate::sam::PortfolioLedger;

/// Context note attached to every ablation report: the full-scale reference
/// figure is not reproducible at desk scale and is recorded only to anchor
/// the direction of the comparison.
pub const ABLATION_REFERENCE_CONTEXT: &str = "Published full-scale results report signal-enabled \
portfolios improving accumulated return by at least 1341.8% over signal-disabled ones; that \
magnitude depends on licensed market data and full-scale training and is not reproducible here. \
Desk-scale runs record the direction of the gap only.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub portfolio: String,
    pub enabled: MetricBundle,
    pub disabled: MetricBundle,
    pub arr_gap_pct: f64,
    pub enabled_beats_disabled: bool,
    pub reference_context: String,
}

/// Loads every strategy ledger (allocator plus baselines) of a portfolio.
pub fn collect_ledgers(
    config: &ExperimentConfig,
    out_dir: &Path,
    portfolio: &str,
) -> Result<BTreeMap<String, PortfolioLedger>> {
    let mut ledgers = BTreeMap::new();
    let bt = out_dir.join("backtest").join(format!("{portfolio}_ledger.csv"));
    if bt.exists() {
        ledgers.insert("mspm".to_string(), PortfolioLedger::read_csv(&bt)?);
    }
    for spec in &config.baselines {
        let path = out_dir
            .join("baseline")
            .join(format!("{portfolio}_{}_ledger.csv", spec.name()));
        if path.exists() {
            ledgers.insert(spec.name().to_string(), PortfolioLedger::read_csv(&path)?);
        }
    }
    if ledgers.is_empty() {
        return Err(Error::Prerequisite(format!(
            "no ledgers found for portfolio {portfolio}; run backtest/baseline first"
        )));
    }
    Ok(ledgers)
}

fn check_ledger_alignment(ledgers: &BTreeMap<String, PortfolioLedger>) -> Result<()> {
    let mut iter = ledgers.values();
    let first = iter.next().expect("non-empty");
    let dates: Vec<_> = first.rows.iter().map(|r| r.date).collect();
    for ledger in iter {
        let other: Vec<_> = ledger.rows.iter().map(|r| r.date).collect();
        if other != dates {
            return Err(Error::Validation(
                "ledgers cover different date ranges; regenerate them from one run".into(),
            ));
        }
    }
    Ok(())
}

/// Writes the comparison grid plus accumulated-value and drawdown curves.
pub fn write_comparison(
    out_dir: &Path,
    cmp_dir: &Path,
    portfolio: &str,
    ledgers: &BTreeMap<String, PortfolioLedger>,
) -> Result<Vec<String>> {
    check_ledger_alignment(ledgers)?;
    let names: Vec<&String> = ledgers.keys().collect();
    let bundles: BTreeMap<&str, MetricBundle> = ledgers
        .iter()
        .map(|(name, ledger)| {
            MetricBundle::from_returns(&ledger.returns(), &ledger.values(), ledger.initial_value)
                .map(|b| (name.as_str(), b))
        })
        .collect::<Result<_>>()?;

    // Table grid: one row per metric, best strategy flagged. Higher is
    // better everywhere except drawdown, where closest to zero wins.
    let mut table = String::from("metric");
    for n in &names {
        write!(table, ",{n}").expect("string write");
    }
    table.push_str(",best\n");
    let best_by = |key: fn(&MetricBundle) -> f64| -> &str {
        names
            .iter()
            .max_by(|a, b| {
                key(&bundles[a.as_str()])
                    .partial_cmp(&key(&bundles[b.as_str()]))
                    .expect("finite metrics")
            })
            .expect("non-empty")
    };
    let rows: [(&str, fn(&MetricBundle) -> f64, usize); 4] = [
        ("drr_pct", |b| b.drr_pct, 3),
        ("arr_pct", |b| b.arr_pct, 1),
        ("max_drawdown_pct", |b| b.max_drawdown_pct, 1),
        ("sortino", |b| b.sortino.unwrap_or(f64::NEG_INFINITY), 2),
    ];
    for (label, key, decimals) in rows {
        write!(table, "{label}").expect("string write");
        for n in &names {
            let v = key(&bundles[n.as_str()]);
            if v == f64::NEG_INFINITY {
                table.push_str(",n/a");
            } else {
                write!(table, ",{v:.decimals$}").expect("string write");
            }
        }
        writeln!(table, ",{}", best_by(key)).expect("string write");
    }
    let table_path = cmp_dir.join(format!("{portfolio}_table.csv"));
    std::fs::write(&table_path, table).map_err(|e| Error::io(&table_path, e))?;

    // Accumulated portfolio value per day per strategy.
    let dates: Vec<_> = ledgers.values().next().expect("non-empty").rows.iter().map(|r| r.date).collect();
    let mut curves = String::from("date");
    for n in &names {
        write!(curves, ",{n}").expect("string write");
    }
    curves.push('\n');
    for (i, date) in dates.iter().enumerate() {
        write!(curves, "{date}").expect("string write");
        for n in &names {
            write!(curves, ",{}", ledgers[n.as_str()].rows[i].value).expect("string write");
        }
        curves.push('\n');
    }
    let curves_path = cmp_dir.join(format!("{portfolio}_curves.csv"));
    std::fs::write(&curves_path, curves).map_err(|e| Error::io(&curves_path, e))?;

    // Underwater series: percentage drawdown from the running peak.
    let mut underwater = String::from("date");
    for n in &names {
        write!(underwater, ",{n}").expect("string write");
    }
    underwater.push('\n');
    let mut peaks: BTreeMap<&str, f64> = ledgers
        .iter()
        .map(|(n, l)| (n.as_str(), l.initial_value))
        .collect();
    for (i, date) in dates.iter().enumerate() {
        write!(underwater, "{date}").expect("string write");
        for n in &names {
            let v = ledgers[n.as_str()].rows[i].value;
            let peak = peaks.get_mut(n.as_str()).expect("known strategy");
            if v > *peak {
                *peak = v;
            }
            write!(underwater, ",{}", (v / *peak - 1.0) * 100.0).expect("string write");
        }
        underwater.push('\n');
    }
    let uw_path = cmp_dir.join(format!("{portfolio}_underwater.csv"));
    std::fs::write(&uw_path, underwater).map_err(|e| Error::io(&uw_path, e))?;

    Ok(vec![
        rel(out_dir, &table_path),
        rel(out_dir, &curves_path),
        rel(out_dir, &uw_path),
    ])
}

/// One side of the stability comparison, resolved to daily log-returns.
fn resolve_return_series(
    config: &ExperimentConfig,
    out_dir: &Path,
    portfolio: &str,
    name: &str,
) -> Result<Vec<f64>> {
    if name == "mspm" {
        let path = out_dir.join("backtest").join(format!("{portfolio}_ledger.csv"));
        if !path.exists() {
            return Err(Error::Prerequisite(format!(
                "stats needs the backtest ledger of {portfolio}"
            )));
        }
        return Ok(PortfolioLedger::read_csv(&path)?.returns());
    }
    if config.baselines.iter().any(|b| b.name() == name) {
        let path = out_dir
            .join("baseline")
            .join(format!("{portfolio}_{name}_ledger.csv"));
        if !path.exists() {
            return Err(Error::Prerequisite(format!(
                "stats needs the {name} baseline ledger of {portfolio}; run baseline first"
            )));
        }
        return Ok(PortfolioLedger::read_csv(&path)?.returns());
    }
    if let Some(ext) = config.stats.external.iter().find(|e| e.name == name) {
        return read_external_returns(&ext.path);
    }
    Err(Error::Config(format!(
        "stats.compare names {name}, which is neither mspm, a configured baseline, nor an external series"
    )))
}

/// Reads a pre-computed daily log-return series (CSV: date,log_return).
pub fn read_external_returns(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Validation(format!("cannot open {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Validation(format!("{e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let value: f64 = record[1].parse().map_err(|_| Error::CsvRow {
            path: path.to_path_buf(),
            line,
            msg: format!("unparseable log_return {:?}", &record[1]),
        })?;
        out.push(value);
    }
    if out.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{} holds no returns",
            path.display()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityArtifact {
    pub portfolio: String,
    pub strategy_a: String,
    pub strategy_b: String,
    /// Rolling dispersion window applied to the daily net returns.
    pub rolling_window: usize,
    pub report: StabilityTestReport,
}

/// Runs the stability protocol between the two configured strategies on one
/// portfolio: daily net returns, 5-day rolling dispersion, then the
/// normality/variance/U-test chain.
pub fn write_stability(
    config: &ExperimentConfig,
    out_dir: &Path,
    stats_dir: &Path,
    portfolio: &str,
) -> Result<Vec<String>> {
    let [name_a, name_b] = &config.stats.compare;
    let to_dispersion = |returns: Vec<f64>| -> Result<Vec<f64>> {
        let daily: Vec<f64> = returns.iter().map(|r| r.exp() - 1.0).collect();
        rstd_drr(&daily)
    };
    let a = to_dispersion(resolve_return_series(config, out_dir, portfolio, name_a)?)?;
    let b = to_dispersion(resolve_return_series(config, out_dir, portfolio, name_b)?)?;
    let report = stability_protocol(&a, &b, config.stats.alpha)?;
    let artifact = StabilityArtifact {
        portfolio: portfolio.to_string(),
        strategy_a: name_a.clone(),
        strategy_b: name_b.clone(),
        rolling_window: 5,
        report,
    };
    let path = stats_dir.join(format!("{portfolio}_stability.json"));
    std::fs::write(
        &path,
        serde_json::to_string_pretty(&artifact).expect("stability serializes"),
    )
    .map_err(|e| Error::io(&path, e))?;
    Ok(vec![rel(out_dir, &path)])
}

fn rel(out_dir: &Path, path: &Path) -> String {
    path.strip_prefix(out_dir)
        .unwrap_or(path)
        .to_string_lossy()
        .into_owned()
}

/// The machine-readable run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub engine_version: String,
    pub config_digest: String,
    pub seeds: super::config::Seeds,
    pub complete: bool,
    pub missing_stages: Vec<String>,
    pub portfolios: BTreeMap<String, PortfolioReport>,
    pub eam_positions: BTreeMap<String, serde_json::Value>,
    /// sha256 of every stage artifact, keyed by path relative to the run dir.
    pub artifacts: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct PortfolioReport {
    pub strategies: BTreeMap<String, MetricBundle>,
    pub stability: Option<StabilityArtifact>,
    pub ablation: Option<AblationReport>,
}

fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(hex_string(&hasher.finalize()))
}

/// Stages a complete run is expected to have, given the data kind.
fn expected_stages(config: &ExperimentConfig) -> Vec<&'static str> {
    let data_stage = match config.data.kind {
        super::config::DataKind::Csv => "ingest",
        super::config::DataKind::Synthetic => "synth",
    };
    vec![
        data_stage,
        "train-eam",
        "gen-signals",
        "train-sam",
        "backtest",
        "baseline",
        "compare",
        "stats",
        "ablate",
    ]
}

/// Aggregates everything the manifest knows into report.json. Runs after
/// every stage; a partial pipeline yields an explicitly incomplete report.
pub fn emit_report(
    config: &ExperimentConfig,
    manifest: &RunManifest,
    out_dir: &Path,
) -> Result<PathBuf> {
    if manifest.stages.is_empty() {
        return Err(Error::Prerequisite(
            "nothing to report: no stage has run yet".into(),
        ));
    }
    let missing: Vec<String> = expected_stages(config)
        .into_iter()
        .filter(|s| !manifest.has_stage(s))
        .map(String::from)
        .collect();

    let mut portfolios = BTreeMap::new();
    for name in config.portfolios.keys() {
        let mut pr = PortfolioReport::default();
        if let Ok(ledgers) = collect_ledgers(config, out_dir, name) {
            for (strategy, ledger) in &ledgers {
                pr.strategies.insert(
                    strategy.clone(),
                    MetricBundle::from_returns(
                        &ledger.returns(),
                        &ledger.values(),
                        ledger.initial_value,
                    )?,
                );
            }
        }
        let stability_path = out_dir.join("stats").join(format!("{name}_stability.json"));
        if stability_path.exists() {
            let text =
                std::fs::read_to_string(&stability_path).map_err(|e| Error::io(&stability_path, e))?;
            pr.stability = serde_json::from_str(&text).ok();
        }
        let ablation_path = out_dir.join("ablate").join(format!("{name}_ablation.json"));
        if ablation_path.exists() {
            let text =
                std::fs::read_to_string(&ablation_path).map_err(|e| Error::io(&ablation_path, e))?;
            pr.ablation = serde_json::from_str(&text).ok();
        }
        portfolios.insert(name.clone(), pr);
    }

    let mut eam_positions = BTreeMap::new();
    for symbol in config.all_symbols() {
        let path = out_dir.join("signals").join(format!("{symbol}_positions.json"));
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            if let Ok(v) = serde_json::from_str(&text) {
                eam_positions.insert(symbol, v);
            }
        }
    }

    let mut artifacts = BTreeMap::new();
    for record in manifest.stages.values() {
        for output in &record.outputs {
            let path = out_dir.join(output);
            if path.exists() {
                artifacts.insert(output.clone(), file_digest(&path)?);
            }
        }
    }

    let report = RunReport {
        schema_version: 1,
        engine_version: manifest.engine_version.clone(),
        config_digest: manifest.config_digest.clone(),
        seeds: config.seeds,
        complete: missing.is_empty(),
        missing_stages: missing,
        portfolios,
        eam_positions,
        artifacts,
    };
    let json = serde_json::to_value(&report).expect("report serializes");
    validate_report(&json)?;
    let path = out_dir.join("report.json");
    let text = serde_json::to_string_pretty(&json).expect("report serializes");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Schema check for the versioned report layout.
pub fn validate_report(report: &serde_json::Value) -> Result<()> {
    let obj = report
        .as_object()
        .ok_or_else(|| Error::Validation("report must be a JSON object".into()))?;
    let version = obj
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Validation("report missing schema_version".into()))?;
    if version != 1 {
        return Err(Error::Validation(format!("unsupported report schema {version}")));
    }
    for key in [
        "engine_version",
        "config_digest",
        "seeds",
        "complete",
        "missing_stages",
        "portfolios",
        "eam_positions",
        "artifacts",
    ] {
        if !obj.contains_key(key) {
            return Err(Error::Validation(format!("report missing field {key}")));
        }
    }
    let portfolios = obj["portfolios"]
        .as_object()
        .ok_or_else(|| Error::Validation("portfolios must be an object".into()))?;
    for (name, pr) in portfolios {
        let pr = pr
            .as_object()
            .ok_or_else(|| Error::Validation(format!("portfolio {name} must be an object")))?;
        for key in ["strategies", "stability", "ablation"] {
            if !pr.contains_key(key) {
                return Err(Error::Validation(format!(
                    "portfolio {name} missing field {key}"
                )));
            }
        }
        for (strategy, bundle) in pr["strategies"].as_object().into_iter().flatten() {
            for key in ["drr_pct", "arr_pct", "max_drawdown_pct", "drr_raw", "arr_raw"] {
                if bundle.get(key).is_none() {
                    return Err(Error::Validation(format!(
                        "metrics of {name}/{strategy} missing {key}"
                    )));
                }
            }
        }
    }
    Ok(())
}
