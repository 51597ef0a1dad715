//! Pipeline stages. Every stage reads its inputs from files written by
//! earlier stages and writes its own artifacts under the run directory, so
//! stages can be re-run, inspected, and parallelized independently.
//! An agent checkpoint is trained once per distinct symbol and shared by
//! every portfolio that lists the symbol.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{stable_hash, DataKind, ExperimentConfig};
use super::manifest::RunManifest;
use super::report;
use crate::baselines::{run_baseline, BaselineSpec};
use crate::data::{
    align_calendar, fill_sentiment_gaps, generate_synthetic, load_csv, normalize,
    read_series_lenient, write_price_csv, write_sentiment_csv, AssetSeries, CsvSchema,
    SeriesFragment,
};
use crate::eam::{
    build_eam_network, generate_signals, position_report, train_eam, SignalComprisedFrame,
};
use crate::error::{Error, Result};
use crate::metrics::MetricBundle;
use crate::nncore::checkpoint::{self, CheckpointMeta};
use crate::nncore::NetworkGraph;
use crate::sam::{backtest, train_sam, PortfolioLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Synth,
    TrainEam,
    GenSignals,
    TrainSam,
    Backtest,
    Baseline,
    Compare,
    Stats,
    Ablate,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Ingest,
        Stage::Synth,
        Stage::TrainEam,
        Stage::GenSignals,
        Stage::TrainSam,
        Stage::Backtest,
        Stage::Baseline,
        Stage::Compare,
        Stage::Stats,
        Stage::Ablate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Synth => "synth",
            Stage::TrainEam => "train-eam",
            Stage::GenSignals => "gen-signals",
            Stage::TrainSam => "train-sam",
            Stage::Backtest => "backtest",
            Stage::Baseline => "baseline",
            Stage::Compare => "compare",
            Stage::Stats => "stats",
            Stage::Ablate => "ablate",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Runs one stage, updating the manifest and regenerating the report.
pub fn run_stage(config: &ExperimentConfig, stage: Stage, out_dir: &Path, jobs: usize) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let digest = config.digest();
    let mut manifest = RunManifest::load_or_new(out_dir, &digest)?;
    let started = Instant::now();

    let threads = if jobs > 0 { jobs } else { config.run.jobs };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;

    let outputs = pool.install(|| match stage {
        Stage::Ingest => stage_ingest(config, out_dir),
        Stage::Synth => stage_synth(config, out_dir),
        Stage::TrainEam => stage_train_eam(config, out_dir, &manifest),
        Stage::GenSignals => stage_gen_signals(config, out_dir, &manifest),
        Stage::TrainSam => stage_train_sam(config, out_dir, &manifest),
        Stage::Backtest => stage_backtest(config, out_dir, &manifest),
        Stage::Baseline => stage_baseline(config, out_dir, &manifest),
        Stage::Compare => stage_compare(config, out_dir, &manifest),
        Stage::Stats => stage_stats(config, out_dir, &manifest),
        Stage::Ablate => stage_ablate(config, out_dir, &manifest),
    })?;

    manifest.record(stage.name(), outputs, started.elapsed().as_millis() as u64);
    manifest.save(out_dir)?;
    report::emit_report(config, &manifest, out_dir)?;
    Ok(())
}

fn subdir(out_dir: &Path, name: &str) -> Result<PathBuf> {
    let dir = out_dir.join(name);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn rel(out_dir: &Path, path: &Path) -> String {
    path.strip_prefix(out_dir)
        .unwrap_or(path)
        .to_string_lossy()
        .into_owned()
}

fn require_data_stage(manifest: &RunManifest, needed_by: &str) -> Result<()> {
    if manifest.has_stage("ingest") || manifest.has_stage("synth") {
        Ok(())
    } else {
        Err(Error::Prerequisite(format!(
            "stage {needed_by} needs prepared data; run ingest or synth first"
        )))
    }
}

/// Shared tail of ingest/synth: gap-fill, align, normalize, write.
fn prepare_and_write(
    mut series: Vec<AssetSeries>,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<String>> {
    let wanted = config.all_symbols();
    series.retain(|s| wanted.contains(&s.symbol));
    if series.len() != wanted.len() {
        let have: Vec<&str> = series.iter().map(|s| s.symbol.as_str()).collect();
        return Err(Error::Config(format!(
            "portfolios need symbols {wanted:?} but data provides {have:?}"
        )));
    }
    let filled: Vec<AssetSeries> = series.iter().map(fill_sentiment_gaps).collect();
    let aligned = align_calendar(&filled)?;
    let data_dir = subdir(out_dir, "data")?;
    let mut outputs = Vec::new();
    for s in &aligned {
        let normalized = normalize(s)?;
        let price_path = data_dir.join(format!("{}_price.csv", s.symbol));
        let sent_path = data_dir.join(format!("{}_sentiment.csv", s.symbol));
        write_price_csv(&normalized, &price_path)?;
        write_sentiment_csv(&normalized, &sent_path)?;
        outputs.push(rel(out_dir, &price_path));
        outputs.push(rel(out_dir, &sent_path));
    }
    Ok(outputs)
}

fn stage_ingest(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<String>> {
    if config.data.kind != DataKind::Csv {
        return Err(Error::Config(
            "ingest runs on csv data; this config declares a synthetic market (use synth)".into(),
        ));
    }
    let dir = config
        .data
        .csv_dir
        .as_ref()
        .ok_or_else(|| Error::Config("csv data needs data.csv_dir".into()))?;
    let mut series = Vec::new();
    for symbol in config.all_symbols() {
        let price_path = dir.join(format!("{symbol}_price.csv"));
        let sent_path = dir.join(format!("{symbol}_sentiment.csv"));
        let SeriesFragment::Prices(bars) = load_csv(&price_path, CsvSchema::Price)? else {
            unreachable!("price schema yields bars");
        };
        let SeriesFragment::Sentiments(sentiments) = load_csv(&sent_path, CsvSchema::Sentiment)?
        else {
            unreachable!("sentiment schema yields sentiments");
        };
        series.push(AssetSeries::new(symbol, bars, sentiments)?);
    }
    prepare_and_write(series, config, out_dir)
}

fn stage_synth(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<String>> {
    if config.data.kind != DataKind::Synthetic {
        return Err(Error::Config(
            "synth runs on synthetic data; this config declares csv sources (use ingest)".into(),
        ));
    }
    let synth = config
        .data
        .synthetic
        .as_ref()
        .ok_or_else(|| Error::Config("missing [data.synthetic] section".into()))?;
    let spec = synth.to_spec(config.seeds.data);
    let series = generate_synthetic(&spec)?;
    prepare_and_write(series, config, out_dir)
}

fn load_prepared(config: &ExperimentConfig, out_dir: &Path) -> Result<BTreeMap<String, AssetSeries>> {
    let data_dir = out_dir.join("data");
    let mut map = BTreeMap::new();
    for symbol in config.all_symbols() {
        let price_path = data_dir.join(format!("{symbol}_price.csv"));
        let sent_path = data_dir.join(format!("{symbol}_sentiment.csv"));
        if !price_path.exists() {
            return Err(Error::Prerequisite(format!(
                "prepared data for {symbol} is missing; run ingest or synth first"
            )));
        }
        map.insert(
            symbol.clone(),
            read_series_lenient(&price_path, &sent_path, &symbol)?,
        );
    }
    Ok(map)
}

fn eam_log_csv(log: &[crate::eam::EpisodeLog], path: &Path) -> Result<()> {
    use std::fmt::Write as _;
    let mut out = String::from("episode,steps,total_reward,loss\n");
    for row in log {
        writeln!(
            out,
            "{},{},{},{}",
            row.episode, row.steps, row.total_reward, row.mean_loss
        )
        .expect("string write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn stage_train_eam(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    require_data_stage(manifest, "train-eam")?;
    let prepared = load_prepared(config, out_dir)?;
    let eam_dir = subdir(out_dir, "eam")?;
    let split = &config.split;
    let train_slice = |symbol: &str| -> Result<AssetSeries> {
        let series = &prepared[symbol];
        let cut = series.range(split.eam_train.start, split.eam_train.end);
        if cut.is_empty() {
            return Err(Error::InsufficientData(format!(
                "{symbol}: signal-training range selects no rows"
            )));
        }
        Ok(cut)
    };

    // The foundational agent trains first and donates its parameters.
    let foundational = config.foundational_symbol();
    let mut outputs = Vec::new();
    let seed_for = |symbol: &str| config.seeds.eam ^ stable_hash(symbol);
    let foundation_series = train_slice(&foundational)?;
    let trained = train_eam(&foundation_series, &config.eam, None, seed_for(&foundational))?;
    let foundation_path = eam_dir.join(format!("{foundational}.ckpt"));
    checkpoint::save(
        &trained.graph,
        None,
        CheckpointMeta {
            seed: seed_for(&foundational),
            epoch: config.eam.episodes as u64,
        },
        &foundation_path,
    )?;
    let log_path = eam_dir.join(format!("{foundational}_train_log.csv"));
    eam_log_csv(&trained.log, &log_path)?;
    outputs.push(rel(out_dir, &foundation_path));
    outputs.push(rel(out_dir, &log_path));

    let donor = checkpoint::load(&foundation_path)?;
    let others: Vec<String> = config
        .all_symbols()
        .into_iter()
        .filter(|s| *s != foundational)
        .collect();
    let results: Vec<Result<Vec<String>>> = others
        .par_iter()
        .map(|symbol| {
            let series = train_slice(symbol)?;
            let trained = train_eam(&series, &config.eam, Some(&donor), seed_for(symbol))?;
            let ckpt_path = eam_dir.join(format!("{symbol}.ckpt"));
            checkpoint::save(
                &trained.graph,
                None,
                CheckpointMeta {
                    seed: seed_for(symbol),
                    epoch: config.eam.episodes as u64,
                },
                &ckpt_path,
            )?;
            let log_path = eam_dir.join(format!("{symbol}_train_log.csv"));
            eam_log_csv(&trained.log, &log_path)?;
            Ok(vec![rel(out_dir, &ckpt_path), rel(out_dir, &log_path)])
        })
        .collect();
    for r in results {
        outputs.extend(r?);
    }
    Ok(outputs)
}

fn load_eam_graph(config: &ExperimentConfig, out_dir: &Path, symbol: &str) -> Result<NetworkGraph> {
    let path = out_dir.join("eam").join(format!("{symbol}.ckpt"));
    if !path.exists() {
        return Err(Error::Prerequisite(format!(
            "missing trained agent for {symbol}; run train-eam first"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut graph = build_eam_network(config.eam.window, &config.eam.net, &mut rng)?;
    checkpoint::load_into(&path, &mut graph)?;
    Ok(graph)
}

fn stage_gen_signals(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("train-eam", "gen-signals")?;
    let prepared = load_prepared(config, out_dir)?;
    let signal_dir = subdir(out_dir, "signals")?;
    let split = &config.split;
    let symbols = config.all_symbols();
    let results: Vec<Result<Vec<String>>> = symbols
        .par_iter()
        .map(|symbol| {
            let graph = load_eam_graph(config, out_dir, symbol)?;
            let series = prepared[symbol].range(split.eam_predict.start, split.eam_predict.end);
            let frame = generate_signals(&graph, &series, config.eam.window)?;
            let frame_path = signal_dir.join(format!("{symbol}.csv"));
            frame.write_csv(&frame_path)?;
            let positions = position_report(&frame);
            let pos_path = signal_dir.join(format!("{symbol}_positions.json"));
            std::fs::write(
                &pos_path,
                serde_json::to_string_pretty(&positions).expect("report serializes"),
            )
            .map_err(|e| Error::io(&pos_path, e))?;
            Ok(vec![rel(out_dir, &frame_path), rel(out_dir, &pos_path)])
        })
        .collect();
    let mut outputs = Vec::new();
    for r in results {
        outputs.extend(r?);
    }
    Ok(outputs)
}

/// Loads the signal frames of a portfolio, optionally cut to a date range.
fn load_frames(
    config: &ExperimentConfig,
    out_dir: &Path,
    portfolio: &str,
    range: Option<crate::data::DateRange>,
) -> Result<Vec<SignalComprisedFrame>> {
    let symbols = config
        .portfolios
        .get(portfolio)
        .ok_or_else(|| Error::Config(format!("unknown portfolio {portfolio}")))?;
    let mut frames = Vec::with_capacity(symbols.len());
    for symbol in symbols {
        let path = out_dir.join("signals").join(format!("{symbol}.csv"));
        if !path.exists() {
            return Err(Error::Prerequisite(format!(
                "missing signal frame for {symbol}; run gen-signals first"
            )));
        }
        let frame = SignalComprisedFrame::read_csv(&path, symbol)?;
        frames.push(match range {
            Some(r) => frame.range(r.start, r.end),
            None => frame,
        });
    }
    Ok(frames)
}

fn sam_log_csv(log: &[crate::sam::UpdateLog], path: &Path) -> Result<()> {
    use std::fmt::Write as _;
    let mut out = String::from("update,mean_reward,clip_fraction,value_loss,approx_kl\n");
    for row in log {
        writeln!(
            out,
            "{},{},{},{},{}",
            row.update, row.mean_reward, row.clip_fraction, row.value_loss, row.approx_kl
        )
        .expect("string write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn stage_train_sam(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("gen-signals", "train-sam")?;
    let sam_dir = subdir(out_dir, "sam")?;
    let portfolios: Vec<String> = config.portfolios.keys().cloned().collect();
    let results: Vec<Result<Vec<String>>> = portfolios
        .par_iter()
        .map(|name| {
            let frames = load_frames(config, out_dir, name, Some(config.split.sam_train))?;
            let seed = config.seeds.sam ^ stable_hash(name);
            let trained = train_sam(&frames, &config.sam, seed)?;
            let actor_path = sam_dir.join(format!("{name}_actor.ckpt"));
            let critic_path = sam_dir.join(format!("{name}_critic.ckpt"));
            let meta = CheckpointMeta {
                seed,
                epoch: config.sam.updates as u64,
            };
            checkpoint::save(&trained.actor, None, meta, &actor_path)?;
            checkpoint::save(&trained.critic, None, meta, &critic_path)?;
            let log_path = sam_dir.join(format!("{name}_train_log.csv"));
            sam_log_csv(&trained.log, &log_path)?;
            Ok(vec![
                rel(out_dir, &actor_path),
                rel(out_dir, &critic_path),
                rel(out_dir, &log_path),
            ])
        })
        .collect();
    let mut outputs = Vec::new();
    for r in results {
        outputs.extend(r?);
    }
    Ok(outputs)
}

fn load_actor(config: &ExperimentConfig, out_dir: &Path, portfolio: &str) -> Result<NetworkGraph> {
    let path = out_dir.join("sam").join(format!("{portfolio}_actor.ckpt"));
    if !path.exists() {
        return Err(Error::Prerequisite(format!(
            "missing trained allocator for {portfolio}; run train-sam first"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut actor = crate::sam::build_actor(config.sam.window, config.sam.net.channels, &mut rng)?;
    checkpoint::load_into(&path, &mut actor)?;
    Ok(actor)
}

fn metrics_of(ledger: &PortfolioLedger) -> Result<MetricBundle> {
    MetricBundle::from_returns(&ledger.returns(), &ledger.values(), ledger.initial_value)
}

fn write_ledger_and_metrics(
    out_dir: &Path,
    dir: &Path,
    stem: &str,
    ledger: &PortfolioLedger,
) -> Result<Vec<String>> {
    let ledger_path = dir.join(format!("{stem}_ledger.csv"));
    ledger.write_csv(&ledger_path)?;
    let metrics = metrics_of(ledger)?;
    let metrics_path = dir.join(format!("{stem}_metrics.json"));
    std::fs::write(
        &metrics_path,
        serde_json::to_string_pretty(&metrics).expect("metrics serialize"),
    )
    .map_err(|e| Error::io(&metrics_path, e))?;
    Ok(vec![rel(out_dir, &ledger_path), rel(out_dir, &metrics_path)])
}

fn stage_backtest(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("train-sam", "backtest")?;
    let bt_dir = subdir(out_dir, "backtest")?;
    let portfolios: Vec<String> = config.portfolios.keys().cloned().collect();
    let results: Vec<Result<Vec<String>>> = portfolios
        .par_iter()
        .map(|name| {
            let frames = load_frames(config, out_dir, name, Some(config.split.sam_experiment))?;
            let actor = load_actor(config, out_dir, name)?;
            let ledger = backtest(
                &actor,
                &frames,
                config.sam.window,
                config.run.initial_value,
                config.sam.commission,
                config.sam.risk_discount,
            )?;
            ledger.check_recursion(1e-12)?;
            write_ledger_and_metrics(out_dir, &bt_dir, name, &ledger)
        })
        .collect();
    let mut outputs = Vec::new();
    for r in results {
        outputs.extend(r?);
    }
    Ok(outputs)
}

fn stage_baseline(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("gen-signals", "baseline")?;
    let base_dir = subdir(out_dir, "baseline")?;
    let mut jobs: Vec<(String, BaselineSpec)> = Vec::new();
    for name in config.portfolios.keys() {
        for spec in &config.baselines {
            jobs.push((name.clone(), *spec));
        }
    }
    let results: Vec<Result<Vec<String>>> = jobs
        .par_iter()
        .map(|(name, spec)| {
            let frames = load_frames(config, out_dir, name, Some(config.split.sam_experiment))?;
            let ledger = run_baseline(
                *spec,
                &frames,
                config.sam.window,
                config.run.initial_value,
                config.sam.commission,
                config.sam.risk_discount,
            )?;
            ledger.check_recursion(1e-12)?;
            write_ledger_and_metrics(out_dir, &base_dir, &format!("{name}_{}", spec.name()), &ledger)
        })
        .collect();
    let mut outputs = Vec::new();
    for r in results {
        outputs.extend(r?);
    }
    Ok(outputs)
}

fn stage_compare(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("backtest", "compare")?;
    manifest.require_stage("baseline", "compare")?;
    let cmp_dir = subdir(out_dir, "compare")?;
    let mut outputs = Vec::new();
    for name in config.portfolios.keys() {
        let ledgers = report::collect_ledgers(config, out_dir, name)?;
        outputs.extend(report::write_comparison(out_dir, &cmp_dir, name, &ledgers)?);
    }
    Ok(outputs)
}

fn stage_stats(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("backtest", "stats")?;
    let stats_dir = subdir(out_dir, "stats")?;
    let mut outputs = Vec::new();
    for name in config.portfolios.keys() {
        outputs.extend(report::write_stability(config, out_dir, &stats_dir, name)?);
    }
    Ok(outputs)
}

fn stage_ablate(
    config: &ExperimentConfig,
    out_dir: &Path,
    manifest: &RunManifest,
) -> Result<Vec<String>> {
    manifest.require_stage("backtest", "ablate")?;
    let ablate_dir = subdir(out_dir, "ablate")?;
    let portfolios: Vec<String> = config.portfolios.keys().cloned().collect();
    let results: Vec<Result<Vec<String>>> = portfolios
        .par_iter()
        .map(|name| {
            let enabled_ledger = PortfolioLedger::read_csv(
                &out_dir.join("backtest").join(format!("{name}_ledger.csv")),
            )?;
            let enabled = metrics_of(&enabled_ledger)?;

            // The disabled variant re-runs the identical training and
            // backtest with the signal channel zeroed; seeds and
            // hyperparameters are shared with the enabled run.
            let train_frames: Vec<SignalComprisedFrame> =
                load_frames(config, out_dir, name, Some(config.split.sam_train))?
                    .iter()
                    .map(|f| f.without_signals())
                    .collect();
            let test_frames_enabled =
                load_frames(config, out_dir, name, Some(config.split.sam_experiment))?;
            let test_frames: Vec<SignalComprisedFrame> = test_frames_enabled
                .iter()
                .map(|f| f.without_signals())
                .collect();
            // By construction the two variants differ only in the signal
            // channel; verify it anyway.
            for (a, b) in test_frames_enabled.iter().zip(&test_frames) {
                debug_assert!(
                    a.dates == b.dates && a.close == b.close && a.volume == b.volume,
                    "ablation variants must share every non-signal channel"
                );
            }
            let seed = config.seeds.sam ^ stable_hash(name);
            let trained = train_sam(&train_frames, &config.sam, seed)?;
            let disabled_ledger = backtest(
                &trained.actor,
                &test_frames,
                config.sam.window,
                config.run.initial_value,
                config.sam.commission,
                config.sam.risk_discount,
            )?;
            let disabled = metrics_of(&disabled_ledger)?;
            let ledger_path = ablate_dir.join(format!("{name}_disabled_ledger.csv"));
            disabled_ledger.write_csv(&ledger_path)?;

            let ablation = report::AblationReport {
                portfolio: name.clone(),
                enabled,
                disabled,
                arr_gap_pct: enabled.arr_pct - disabled.arr_pct,
                enabled_beats_disabled: enabled.arr_pct > disabled.arr_pct,
                reference_context: report::ABLATION_REFERENCE_CONTEXT.to_string(),
            };
            let path = ablate_dir.join(format!("{name}_ablation.json"));
            std::fs::write(
                &path,
                serde_json::to_string_pretty(&ablation).expect("ablation serializes"),
            )
            .map_err(|e| Error::io(&path, e))?;
            Ok(vec![rel(out_dir, &ledger_path), rel(out_dir, &path)])
        })
        .collect();
    let mut outputs = Vec::new();
    for r in results {
        outputs.extend(r?);
    }
    Ok(outputs)
}
