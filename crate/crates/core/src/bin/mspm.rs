//! Command-line front end: one subcommand per pipeline stage, plus
//! `print-defaults` to emit a runnable starter config.
//!
//! Exit codes: 0 success, 2 configuration error, 3 missing prerequisite,
//! 4 numerical divergence, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mspm_core::error::Error;
use mspm_core::pipeline::{run_stage, ExperimentConfig, Stage};

#[derive(Parser)]
#[command(
    name = "mspm",
    version,
    about = "Multi-agent RL portfolio management engine: per-asset signal agents feeding a portfolio allocator, with baselines, metrics and statistical evaluation"
)]
struct Cli {
    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Run one stage by name instead of using a subcommand.
    #[arg(long, value_name = "STAGE")]
    stage: Option<String>,

    /// Output directory; overrides run.out_dir from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Replace every configured seed with values derived from this one.
    #[arg(long, global = true, value_name = "SEED")]
    seed_override: Option<u64>,

    /// Worker threads for parallel stages; overrides run.jobs.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Load, validate, align and normalize CSV market data.
    Ingest,
    /// Generate and prepare a seeded synthetic market.
    Synth,
    /// Train one signal agent per distinct symbol (foundational first,
    /// transfer to the rest).
    TrainEam,
    /// Run trained agents over the prediction range and emit
    /// signal-comprised frames.
    GenSignals,
    /// Train one allocator per portfolio on its signal frames.
    TrainSam,
    /// Backtest each trained allocator over the experiment range.
    Backtest,
    /// Run the configured baselines through the same accounting.
    Baseline,
    /// Emit the metric comparison grid and plot data.
    Compare,
    /// Run the return-stability statistical protocol.
    Stats,
    /// Train/backtest the signal-disabled variant and pair it with the
    /// enabled run.
    Ablate,
    /// Print the default configuration as TOML.
    PrintDefaults,
}

impl Command {
    fn stage(&self) -> Option<Stage> {
        match self {
            Command::Ingest => Some(Stage::Ingest),
            Command::Synth => Some(Stage::Synth),
            Command::TrainEam => Some(Stage::TrainEam),
            Command::GenSignals => Some(Stage::GenSignals),
            Command::TrainSam => Some(Stage::TrainSam),
            Command::Backtest => Some(Stage::Backtest),
            Command::Baseline => Some(Stage::Baseline),
            Command::Compare => Some(Stage::Compare),
            Command::Stats => Some(Stage::Stats),
            Command::Ablate => Some(Stage::Ablate),
            Command::PrintDefaults => None,
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Validation(_) | Error::CsvRow { .. } => 2,
        Error::Prerequisite(_) => 3,
        Error::Divergence(_) | Error::NonFinite(_) | Error::NonConvergence(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if matches!(cli.command, Some(Command::PrintDefaults)) {
        print!("{}", ExperimentConfig::default().to_toml());
        return ExitCode::SUCCESS;
    }

    let stage = match (&cli.command, &cli.stage) {
        (Some(cmd), _) => cmd.stage().expect("stage subcommand"),
        (None, Some(name)) => match Stage::from_name(name) {
            Some(s) => s,
            None => {
                eprintln!(
                    "mspm: unknown stage {name:?}; stages: {}",
                    Stage::ALL.map(|s| s.name()).join(", ")
                );
                return ExitCode::from(2);
            }
        },
        (None, None) => {
            eprintln!("mspm: pass a subcommand or --stage <name>; see --help");
            return ExitCode::from(2);
        }
    };

    let config_path = match &cli.config {
        Some(p) => p.clone(),
        None => {
            eprintln!("mspm: --config <path> is required to run a stage");
            return ExitCode::from(2);
        }
    };
    let mut config = match ExperimentConfig::load(&config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mspm: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if let Some(seed) = cli.seed_override {
        config.override_seeds(seed);
    }
    let out_dir = cli.out.clone().unwrap_or_else(|| config.run.out_dir.clone());

    match run_stage(&config, stage, &out_dir, cli.jobs) {
        Ok(()) => {
            println!("mspm: stage {} done (outputs under {})", stage.name(), out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mspm: stage {} failed: {e}", stage.name());
            ExitCode::from(exit_code_for(&e))
        }
    }
}
