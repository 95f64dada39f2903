//! Multi-trial prediction experiments and learning curves.
//!
//! Every trial starts each filter from zero weights. What differs between
//! trials depends on the source: synthetic sources draw an independent
//! realisation per trial, recorded sources add independent Gaussian
//! measurement noise of a configured standard deviation. With zero noise
//! every recorded trial would be identical, so a single trial is run and a
//! warning is attached.

mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::BenchReport;
use crate::data::{self, ColumnMapping, DataError, SyntheticSpec, WindSample};
use crate::filters::{run_prediction, Algorithm, FilterConfig, FilterError, PredictionRecord};
use crate::parallel::{map_indexed, Execution};

pub use output::{emit_outputs, read_manifest, Manifest, OutputError, MANIFEST_FILE};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{algo} diverged in every trial")]
    Divergence { algo: Algorithm },
    #[error(transparent)]
    Filter(FilterError),
}

impl From<FilterError> for ExperimentError {
    fn from(e: FilterError) -> Self {
        match e {
            FilterError::InvalidConfig(m) => ExperimentError::Config(m),
            other => ExperimentError::Filter(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    Synthetic {
        spec: SyntheticSpec,
    },
    Csv {
        path: PathBuf,
        columns: ColumnMapping,
        noise_std: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algos: Vec<Algorithm>,
    pub filter: FilterConfig,
    pub trials: usize,
    pub source: DataSource,
    pub seed: u64,
    /// Moving-average window for the smoothed curve; 1 disables smoothing.
    pub smooth: usize,
}

impl ExperimentConfig {
    /// Defaults: all four filters, L = 8, P = 1, μ = 6e−5, 200 trials.
    pub fn new(source: DataSource) -> Self {
        ExperimentConfig {
            algos: Algorithm::ALL.to_vec(),
            filter: FilterConfig::default(),
            trials: 200,
            source,
            seed: 0,
            smooth: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.algos.is_empty() {
            return Err(ExperimentError::Config("algorithm set is empty".into()));
        }
        self.filter.validate()?;
        if self.trials < 1 {
            return Err(ExperimentError::Config("trials must be at least 1".into()));
        }
        if self.smooth < 1 {
            return Err(ExperimentError::Config(
                "smoothing window must be at least 1".into(),
            ));
        }
        match &self.source {
            DataSource::Synthetic { spec } => spec.validate()?,
            DataSource::Csv { noise_std, .. } => {
                if !(*noise_std >= 0.0 && noise_std.is_finite()) {
                    return Err(ExperimentError::Config(format!(
                        "measurement noise std must be finite and ≥ 0, got {noise_std}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Trial-averaged squared prediction error.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub algo: Algorithm,
    /// Sample index of the first point.
    pub start: usize,
    /// Pointwise mean of `|e(n)|²` over the trials that did not diverge.
    pub mse: Vec<f64>,
    /// Trailing moving average of `mse`.
    pub smoothed: Vec<f64>,
    pub trials_used: usize,
}

impl LearningCurve {
    pub fn len(&self) -> usize {
        self.mse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mse.is_empty()
    }

    pub fn mse_db(&self) -> Vec<f64> {
        self.mse.iter().map(|&v| to_db(v)).collect()
    }

    pub fn smoothed_db(&self) -> Vec<f64> {
        self.smoothed.iter().map(|&v| to_db(v)).collect()
    }
}

pub fn to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

/// Trailing moving average with window `w` (shorter at the start). Each
/// window is summed afresh, so no round-off accumulates along the series
/// and `w = 1` returns the input unchanged.
pub fn moving_average(xs: &[f64], w: usize) -> Vec<f64> {
    let w = w.max(1);
    (0..xs.len())
        .map(|i| {
            let window = &xs[(i + 1).saturating_sub(w)..=i];
            window.iter().sum::<f64>() / window.len() as f64
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub curves: Vec<LearningCurve>,
    /// Prediction traces of the first trial.
    pub traces: BTreeMap<Algorithm, Vec<PredictionRecord>>,
    /// Op counts of the first trial.
    pub bench: Vec<BenchReport>,
    /// Number of diverged trials per algorithm.
    pub diverged: BTreeMap<Algorithm, usize>,
    pub effective_trials: usize,
    pub warnings: Vec<String>,
}

impl ExperimentResults {
    pub fn curve(&self, algo: Algorithm) -> Option<&LearningCurve> {
        self.curves.iter().find(|c| c.algo == algo)
    }
}

/// Seed of trial `k`, derived from the experiment seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng.next_u64()
}

fn perturb(series: &[[f64; 3]], std: f64, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, std).expect("validated noise std");
    series
        .iter()
        .map(|s| std::array::from_fn(|k| s[k] + noise.sample(&mut rng)))
        .collect()
}

enum Prepared {
    Synthetic(SyntheticSpec),
    Recorded {
        series: Vec<[f64; 3]>,
        noise_std: f64,
    },
}

impl Prepared {
    fn trial_series(&self, seed: u64, trial: usize) -> Result<Vec<[f64; 3]>, DataError> {
        let s = trial_seed(seed, trial);
        match self {
            Prepared::Synthetic(spec) => Ok(data::components(&data::generate(&spec.with_seed(s))?)),
            Prepared::Recorded { series, noise_std } if *noise_std > 0.0 => {
                Ok(perturb(series, *noise_std, s))
            }
            Prepared::Recorded { series, .. } => Ok(series.clone()),
        }
    }
}

struct TrialOutcome {
    runs: Vec<Result<crate::filters::PredictionRun, FilterError>>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResults, ExperimentError> {
    run_experiment_with(config, Execution::default())
}

/// Runs the experiment with an explicit trial execution mode. Output is
/// identical for both modes.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    exec: Execution,
) -> Result<ExperimentResults, ExperimentError> {
    config.validate()?;
    let mut warnings = Vec::new();
    let (prepared, trials) = match &config.source {
        DataSource::Synthetic { spec } => (Prepared::Synthetic(spec.clone()), config.trials),
        DataSource::Csv {
            path,
            columns,
            noise_std,
        } => {
            let samples: Vec<WindSample> = data::load_csv(path, columns)?;
            let series = data::components(&samples);
            let trials = if *noise_std > 0.0 {
                config.trials
            } else {
                if config.trials > 1 {
                    warnings.push(format!(
                        "recorded source without measurement noise: {} requested trials collapse to 1",
                        config.trials
                    ));
                }
                1
            };
            (
                Prepared::Recorded {
                    series,
                    noise_std: *noise_std,
                },
                trials,
            )
        }
    };

    let needed = config.filter.len + config.filter.pstep;
    let outcomes: Vec<Result<TrialOutcome, DataError>> = map_indexed(trials, exec, |k| {
        let series = prepared.trial_series(config.seed, k)?;
        if series.len() < needed {
            return Ok(TrialOutcome {
                runs: vec![
                    Err(FilterError::SeriesTooShort {
                        needed,
                        got: series.len()
                    });
                    config.algos.len()
                ],
            });
        }
        let runs = config
            .algos
            .iter()
            .map(|&a| run_prediction(&series, a, &config.filter))
            .collect();
        Ok(TrialOutcome { runs })
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut curves = Vec::new();
    let mut traces = BTreeMap::new();
    let mut bench = Vec::new();
    let mut diverged = BTreeMap::new();
    for (ai, &algo) in config.algos.iter().enumerate() {
        let mut sum: Vec<f64> = Vec::new();
        let mut used = 0usize;
        let mut failed = 0usize;
        let mut start = 0;
        for (k, outcome) in outcomes.iter().enumerate() {
            match &outcome.runs[ai] {
                Ok(run) => {
                    if sum.is_empty() {
                        sum = vec![0.0; run.records.len()];
                        start = run.records.first().map_or(0, |r| r.n);
                    }
                    if run.records.len() != sum.len() {
                        return Err(ExperimentError::Config(
                            "trials produced series of different lengths".into(),
                        ));
                    }
                    for (acc, r) in sum.iter_mut().zip(&run.records) {
                        *acc += r.sq_err;
                    }
                    used += 1;
                    if k == 0 {
                        traces.insert(algo, run.records.clone());
                        let iters = run.records.len() as u64;
                        let (pm, pa) = algo.update_cost(config.filter.len);
                        bench.push(BenchReport {
                            algo,
                            len: config.filter.len,
                            iterations: iters,
                            counted_mults: run.update_ops.real_mults(),
                            counted_adds: run.update_ops.real_adds(),
                            predicted_mults: pm * iters,
                            predicted_adds: pa * iters,
                            output_mults: run.output_ops.real_mults(),
                            output_adds: run.output_ops.real_adds(),
                            median_ns: None,
                            repeats: 0,
                            low_confidence: false,
                        });
                    }
                }
                Err(FilterError::Diverged { .. }) => failed += 1,
                Err(e) => return Err(e.clone().into()),
            }
        }
        if used == 0 {
            return Err(ExperimentError::Divergence { algo });
        }
        if failed > 0 {
            warnings.push(format!(
                "{algo}: {failed} of {trials} trials diverged and were excluded"
            ));
        }
        let inv = 1.0 / used as f64;
        let mse: Vec<f64> = sum.into_iter().map(|s| s * inv).collect();
        let smoothed = moving_average(&mse, config.smooth);
        curves.push(LearningCurve {
            algo,
            start,
            mse,
            smoothed,
            trials_used: used,
        });
        diverged.insert(algo, failed);
    }

    Ok(ExperimentResults {
        curves,
        traces,
        bench,
        diverged,
        effective_trials: trials,
        warnings,
    })
}
