//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bench::{self, BenchError, ReportTable};
use crate::data::{self, ColumnMapping, DataError, SyntheticModel, SyntheticSpec};
use crate::experiment::{self, DataSource, ExperimentConfig, ExperimentError, OutputError};
use crate::filters::{Algorithm, FilterConfig};
use crate::parallel::Execution;

#[derive(Debug, Parser)]
#[command(
    name = "trinion",
    version,
    about = "Trinion-valued adaptive prediction of 3-D wind profiles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a multi-trial prediction experiment and write curves, traces and op counts.
    Run(RunArgs),
    /// Rerun an experiment from its manifest.
    Rerun {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check per-update op counts against the closed-form budgets.
    Audit {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize, 4, 8, 32])]
        len: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        iters: u64,
    },
    /// Time the four filters (median of repeats).
    Bench {
        #[arg(long, default_value_t = 8)]
        len: usize,
        #[arg(long, default_value_t = 20_000)]
        iters: u64,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write a synthetic series as CSV.
    Generate {
        #[arg(long, value_enum, default_value_t = Preset::Wind)]
        synthetic: Preset,
        #[arg(long, default_value_t = 5000)]
        length: usize,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Coupled VAR(1) around a mean wind vector.
    Wind,
    /// Independent AR(1) per axis, coefficient 0.95.
    Ar1,
    /// Sinusoids plus noise.
    Sine,
}

impl Preset {
    pub fn spec(self, length: usize, noise: Option<f64>, seed: u64) -> SyntheticSpec {
        let mut spec = match self {
            Preset::Wind => SyntheticSpec::wind_like(seed, length),
            Preset::Ar1 => SyntheticSpec::ar1(0.95, 1.0, seed, length),
            Preset::Sine => SyntheticSpec {
                model: SyntheticModel::Sinusoid {
                    amplitude: [2.0, 1.5, 0.5],
                    period: 200.0,
                    phase: [0.0, 1.0, 2.0],
                    mean: [6.0, 3.0, 0.5],
                },
                noise_std: 0.2,
                seed,
                length,
                dt: 1.0,
            },
        };
        if let Some(n) = noise {
            spec.noise_std = n;
        }
        spec
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Comma-separated subset of tlms, atlms, qlms, aqlms.
    #[arg(long, value_delimiter = ',', default_values_t = Algorithm::ALL.to_vec())]
    pub algo: Vec<Algorithm>,
    /// Filter length L.
    #[arg(long, default_value_t = 8)]
    pub len: usize,
    /// Prediction step P.
    #[arg(long, default_value_t = 1)]
    pub pstep: usize,
    /// Step size.
    #[arg(long, default_value_t = 6e-5)]
    pub mu: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Recorded CSV series.
    #[arg(long, conflicts_with = "synthetic")]
    pub input: Option<PathBuf>,
    /// Column names for time and the three wind components.
    #[arg(long, default_value = "t,u,v,w")]
    pub columns: String,
    /// Std of per-trial measurement noise added to recorded data.
    #[arg(long, default_value_t = 0.0)]
    pub noise_std: f64,
    /// Synthetic source preset (used when --input is absent).
    #[arg(long, value_enum)]
    pub synthetic: Option<Preset>,
    /// Synthetic series length.
    #[arg(long, default_value_t = 5000)]
    pub length: usize,
    /// Override the synthetic innovation std.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Moving-average window for the smoothed curve.
    #[arg(long, default_value_t = 1)]
    pub smooth: usize,
    /// Run trials on one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl RunArgs {
    pub fn to_config(&self) -> Result<ExperimentConfig, CliError> {
        let source = match &self.input {
            Some(path) => DataSource::Csv {
                path: path.clone(),
                columns: ColumnMapping::parse(&self.columns)?,
                noise_std: self.noise_std,
            },
            None => DataSource::Synthetic {
                spec: self.synthetic.unwrap_or(Preset::Wind).spec(
                    self.length,
                    self.noise,
                    self.seed,
                ),
            },
        };
        Ok(ExperimentConfig {
            algos: self.algo.clone(),
            filter: FilterConfig {
                len: self.len,
                pstep: self.pstep,
                step_size: self.mu,
            },
            trials: self.trials,
            source,
            seed: self.seed,
            smooth: self.smooth,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Data(#[from] DataError),
}

impl CliError {
    /// Process exit code by failure category.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Experiment(ExperimentError::Config(_)) => 2,
            CliError::Data(DataError::InvalidSpec(_)) => 2,
            CliError::Experiment(ExperimentError::Data(DataError::InvalidSpec(_))) => 2,
            CliError::Experiment(ExperimentError::Data(_)) | CliError::Data(_) => 3,
            CliError::Experiment(ExperimentError::Divergence { .. }) => 4,
            CliError::Experiment(ExperimentError::Filter(_)) => 4,
            CliError::Output(OutputError::Manifest { .. }) => 2,
            CliError::Output(_) => 5,
            CliError::Bench(BenchError::BudgetMismatch { .. }) => 6,
            CliError::Bench(_) => 5,
        }
    }
}

fn run_and_emit(
    config: &ExperimentConfig,
    out: &std::path::Path,
    exec: Execution,
) -> Result<(), CliError> {
    let results = experiment::run_experiment_with(config, exec)?;
    for w in &results.warnings {
        eprintln!("warning: {w}");
    }
    let written = experiment::emit_outputs(&results, config, out)?;
    println!("{}", ReportTable(&results.bench));
    for c in &results.curves {
        let db = c.smoothed_db();
        let tail = &db[db.len().saturating_sub(db.len() / 10).min(db.len() - 1)..];
        let steady = tail.iter().sum::<f64>() / tail.len() as f64;
        println!(
            "{:<6} trials={:<4} initial={:>8.2} dB  steady={:>8.2} dB",
            c.algo.name(),
            c.trials_used,
            db[0],
            steady
        );
    }
    println!("wrote {} files to {}", written.len(), out.display());
    Ok(())
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let config = args.to_config()?;
            let exec = if args.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            run_and_emit(&config, &args.out, exec)
        }
        Command::Rerun { manifest, out } => {
            let config = experiment::read_manifest(&manifest)?;
            run_and_emit(&config, &out, Execution::Parallel)
        }
        Command::Audit { len, iters } => {
            let mut reports = Vec::new();
            for l in len {
                for algo in Algorithm::ALL {
                    reports.push(bench::audit_op_counts(algo, l, iters)?);
                }
            }
            print!("{}", ReportTable(&reports));
            Ok(())
        }
        Command::Bench {
            len,
            iters,
            repeats,
            csv,
        } => {
            let reports = bench::time_filters(&Algorithm::ALL, len, iters, repeats)?;
            print!("{}", ReportTable(&reports));
            bench::write_reports_csv(&reports, std::io::stdout())?;
            if let Some(path) = csv {
                let file = std::fs::File::create(&path).map_err(BenchError::Io)?;
                bench::write_reports_csv(&reports, file)?;
            }
            Ok(())
        }
        Command::Generate {
            synthetic,
            length,
            noise,
            seed,
            out,
        } => {
            let series = data::generate(&synthetic.spec(length, noise, seed))?;
            let file = std::fs::File::create(&out).map_err(DataError::Io)?;
            data::write_csv(&series, file)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("trinion").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn run_defaults_follow_protocol() {
        let Command::Run(args) = parse(&["run"]).command else {
            panic!()
        };
        let c = args.to_config().unwrap();
        assert_eq!(
            c.filter,
            FilterConfig {
                len: 8,
                pstep: 1,
                step_size: 6e-5
            }
        );
        assert_eq!(c.trials, 200);
        assert_eq!(c.algos, Algorithm::ALL.to_vec());
    }

    #[test]
    fn flags_are_parsed() {
        let Command::Run(args) = parse(&[
            "run",
            "--algo",
            "tlms,atlms",
            "--len",
            "4",
            "--pstep",
            "2",
            "--mu",
            "0.01",
            "--trials",
            "3",
            "--synthetic",
            "ar1",
            "--seed",
            "9",
            "--smooth",
            "10",
            "--out",
            "x",
        ])
        .command
        else {
            panic!()
        };
        let c = args.to_config().unwrap();
        assert_eq!(c.algos, vec![Algorithm::Tlms, Algorithm::Atlms]);
        assert_eq!(
            c.filter,
            FilterConfig {
                len: 4,
                pstep: 2,
                step_size: 0.01
            }
        );
        assert_eq!((c.trials, c.seed, c.smooth), (3, 9, 10));
        assert!(Cli::try_parse_from(["trinion", "run", "--algo", "rls"]).is_err());
        assert!(
            Cli::try_parse_from(["trinion", "run", "--input", "a.csv", "--synthetic", "wind"])
                .is_err()
        );
    }

    #[test]
    fn validation_exit_code() {
        let Command::Run(args) = parse(&["run", "--pstep", "0", "--length", "50"]).command else {
            panic!()
        };
        let err = execute(Cli {
            command: Command::Run(args),
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_input_is_data_error() {
        let Command::Run(args) = parse(&["run", "--input", "/nonexistent/wind.csv"]).command else {
            panic!()
        };
        let err = execute(Cli {
            command: Command::Run(args),
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
