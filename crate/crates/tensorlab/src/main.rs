use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tensorlab::config::{Experiment, ExperimentConfig, Profile};
use tensorlab::{resolve_seed, run_with_threads, write_csv, ConfigError, RunError, SEED_ENV};

#[derive(Parser)]
#[command(name = "tensorlab", version, about = "Spiked tensor experiments: spectra, alignments, HOOI")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config and write CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output path; defaults to the config's output_path, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        profile: Option<Profile>,
        #[arg(long)]
        threads: Option<usize>,
        /// Overrides both the environment and the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Evaluate the theory-versus-simulation gates; exit 1 if any fails.
        #[arg(long)]
        check: bool,
    },
    /// Print scales, spike predictions and the noise bound without simulating.
    Predict {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        /// Size parameter; defaults to the sum of the dimensions.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        s2: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        c_universal: f64,
    },
}

enum Failure {
    Config(ConfigError),
    Run(RunError),
    Gates,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => Failure::Config(c),
            other => Failure::Run(other),
        }
    }
}

fn emit(records: &[tensorlab::Record], out: Option<PathBuf>) -> Result<(), RunError> {
    match out {
        Some(path) => write_csv(records, BufWriter::new(File::create(path)?)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(records, &mut lock)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, out, profile, threads, seed, check } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(p) = profile {
                cfg = cfg.with_profile(p)?;
            }
            let env = std::env::var(SEED_ENV).ok();
            cfg.base_seed = resolve_seed(seed, env.as_deref(), cfg.base_seed)?;
            if threads == Some(0) {
                return Err(ConfigError::Invalid("--threads must be at least 1".into()).into());
            }
            let report = run_with_threads(&cfg, threads)?;
            emit(&report.records(), out.or(cfg.output_path.clone()))?;
            if check {
                let gates = report.gates();
                for g in &gates {
                    eprintln!("{}", g.line());
                }
                if gates.iter().any(|g| !g.passed) {
                    return Err(Failure::Gates);
                }
            }
            Ok(())
        }
        Command::Predict { dims, ranks, n, s2, delta, c_universal } => {
            let cfg = ExperimentConfig {
                dims,
                ranks,
                n_convention: n.map_or(tensorlab_core::NConvention::SumDims, tensorlab_core::NConvention::Custom),
                s2,
                delta,
                c_universal,
                ..ExperimentConfig::defaults(Experiment::Predict)
            };
            let report = run_with_threads(&cfg, Some(1))?;
            emit(&report.records(), None)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Gates) => ExitCode::from(1),
    }
}
