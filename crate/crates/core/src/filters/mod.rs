//! Adaptive trinion and quaternion LMS predictors over a shared delay line.

mod delay_line;
mod lms;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{CountedScalar, OpCounter};
use crate::hypercomplex::{Quaternion, Trinion};

pub use delay_line::DelayLine;
pub use lms::{Estimate, LmsFilter, QuaternionFilter, TrinionFilter, DIVERGENCE_LIMIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("invalid filter configuration: {0}")]
    InvalidConfig(String),
    #[error("regressor has length {got}, filter expects {expected}")]
    RegressorLength { expected: usize, got: usize },
    #[error("series of {got} samples is too short; need at least {needed}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("filter diverged at index {index}")]
    Diverged { index: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Tlms,
    Atlms,
    Qlms,
    Aqlms,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Tlms,
        Algorithm::Atlms,
        Algorithm::Qlms,
        Algorithm::Aqlms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tlms => "tlms",
            Algorithm::Atlms => "atlms",
            Algorithm::Qlms => "qlms",
            Algorithm::Aqlms => "aqlms",
        }
    }

    /// Closed-form real (multiplications, additions) per weight update.
    pub fn update_cost(self, len: usize) -> (u64, u64) {
        let l = len as u64;
        match self {
            Algorithm::Tlms => (9 * l + 3, 9 * l),
            Algorithm::Atlms => (27 * l + 3, 27 * l),
            Algorithm::Qlms => (16 * l + 4, 16 * l),
            Algorithm::Aqlms => (64 * l + 4, 64 * l),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tlms" => Ok(Algorithm::Tlms),
            "atlms" => Ok(Algorithm::Atlms),
            "qlms" => Ok(Algorithm::Qlms),
            "aqlms" => Ok(Algorithm::Aqlms),
            other => Err(format!(
                "unknown algorithm `{other}` (expected tlms, atlms, qlms or aqlms)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Filter length L.
    pub len: usize,
    /// Prediction step P.
    pub pstep: usize,
    pub step_size: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            len: 8,
            pstep: 1,
            step_size: 6e-5,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        if self.len < 1 {
            return Err(FilterError::InvalidConfig(
                "filter length must be at least 1".into(),
            ));
        }
        if self.pstep < 1 {
            return Err(FilterError::InvalidConfig(
                "prediction step must be at least 1".into(),
            ));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(FilterError::InvalidConfig(format!(
                "step size must be positive and finite, got {}",
                self.step_size
            )));
        }
        Ok(())
    }

    /// Samples consumed before the first prediction, `L + P − 1`.
    pub fn warm_up(&self) -> usize {
        self.len + self.pstep - 1
    }
}

/// One emitted prediction.
///
/// `y` is the 3-D prediction: the trinion itself, or the vector part of the
/// quaternion output. `e = d − y` and `sq_err = |e|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub n: usize,
    pub d: [f64; 3],
    pub y: [f64; 3],
    pub e: [f64; 3],
    pub sq_err: f64,
}

impl PredictionRecord {
    fn new(n: usize, d: [f64; 3], y: [f64; 3]) -> Self {
        let e = [d[0] - y[0], d[1] - y[1], d[2] - y[2]];
        let sq_err = e.iter().map(|v| v * v).sum();
        PredictionRecord { n, d, y, e, sq_err }
    }
}

/// Embedding of 3-D samples into a filter's scalar type.
pub trait SampleScalar: CountedScalar {
    fn from_sample(s: [f64; 3]) -> Self;
    fn to_sample(self) -> [f64; 3];
}

impl SampleScalar for Trinion {
    fn from_sample(s: [f64; 3]) -> Self {
        Trinion::from_array(s)
    }
    fn to_sample(self) -> [f64; 3] {
        self.to_array()
    }
}

impl SampleScalar for Quaternion {
    fn from_sample(s: [f64; 3]) -> Self {
        Quaternion::pure(s[0], s[1], s[2])
    }
    fn to_sample(self) -> [f64; 3] {
        self.vector()
    }
}

/// Records plus the op tallies of one prediction run.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRun {
    pub records: Vec<PredictionRecord>,
    pub update_ops: OpCounter,
    pub output_ops: OpCounter,
}

/// Streams `series` through `filter` with prediction step `pstep`. The
/// reference `d(n)` is the current sample and the regressor lags it by `pstep`.
pub fn predict_with<S: SampleScalar>(
    filter: &mut LmsFilter<S>,
    series: &[[f64; 3]],
    pstep: usize,
) -> Result<Vec<PredictionRecord>, FilterError> {
    let needed = filter.len() + pstep;
    if series.len() < needed {
        return Err(FilterError::SeriesTooShort {
            needed,
            got: series.len(),
        });
    }
    let mut line = DelayLine::new(filter.len(), pstep);
    let mut x = Vec::with_capacity(filter.len());
    let mut records = Vec::with_capacity(series.len() + 1 - needed);
    for (n, &sample) in series.iter().enumerate() {
        line.push(S::from_sample(sample));
        if !line.regressor_into(&mut x) {
            continue;
        }
        let est = filter
            .step(&x, S::from_sample(sample))
            .map_err(|e| match e {
                FilterError::Diverged { .. } => FilterError::Diverged { index: n as u64 },
                other => other,
            })?;
        records.push(PredictionRecord::new(n, sample, est.y.to_sample()));
    }
    Ok(records)
}

/// Runs one zero-initialised filter of kind `algo` over `series`.
pub fn run_prediction(
    series: &[[f64; 3]],
    algo: Algorithm,
    config: &FilterConfig,
) -> Result<PredictionRun, FilterError> {
    config.validate()?;
    fn finish<S: SampleScalar>(
        mut f: LmsFilter<S>,
        series: &[[f64; 3]],
        pstep: usize,
    ) -> Result<PredictionRun, FilterError> {
        let records = predict_with(&mut f, series, pstep)?;
        Ok(PredictionRun {
            records,
            update_ops: f.update_ops(),
            output_ops: f.output_ops(),
        })
    }
    let FilterConfig {
        len,
        pstep,
        step_size,
    } = *config;
    match algo {
        Algorithm::Tlms => finish(LmsFilter::tlms(len, step_size)?, series, pstep),
        Algorithm::Atlms => finish(LmsFilter::atlms(len, step_size)?, series, pstep),
        Algorithm::Qlms => finish(LmsFilter::qlms(len, step_size)?, series, pstep),
        Algorithm::Aqlms => finish(LmsFilter::aqlms(len, step_size)?, series, pstep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(len: usize, pstep: usize, step_size: f64) -> FilterConfig {
        FilterConfig {
            len,
            pstep,
            step_size,
        }
    }

    #[test]
    fn warm_up_and_record_indices() {
        let series: Vec<[f64; 3]> = (0..20).map(|i| [i as f64 * 0.01, 0.0, 0.0]).collect();
        for (len, pstep) in [(1, 1), (4, 2), (8, 1)] {
            let run = run_prediction(&series, Algorithm::Tlms, &cfg(len, pstep, 1e-3)).unwrap();
            assert_eq!(run.records.len(), 20 - (len + pstep - 1));
            assert_eq!(run.records[0].n, len + pstep - 1);
            for r in &run.records {
                assert_eq!(r.d, series[r.n]);
                assert!((r.sq_err - r.e.iter().map(|e| e * e).sum::<f64>()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn too_short_series() {
        let series = vec![[1.0, 2.0, 3.0]; 8];
        assert_eq!(
            run_prediction(&series, Algorithm::Atlms, &cfg(8, 1, 0.1)).unwrap_err(),
            FilterError::SeriesTooShort { needed: 9, got: 8 }
        );
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0, 1, 0.1).validate().is_err());
        assert!(cfg(1, 0, 0.1).validate().is_err());
        assert!(cfg(1, 1, 0.0).validate().is_err());
        assert!(cfg(1, 1, -1.0).validate().is_err());
        assert!(FilterConfig::default().validate().is_ok());
    }

    #[test]
    fn constant_series_is_learned() {
        let series = vec![[0.6, -0.3, 0.2]; 6000];
        for algo in Algorithm::ALL {
            let run = run_prediction(&series, algo, &cfg(4, 1, 0.05)).unwrap();
            let last = run.records.last().unwrap().sq_err;
            assert!(last < 1e-6, "{algo}: {last}");
        }
    }

    #[test]
    fn constant_series_windowed_error_never_rises() {
        let series = vec![[0.6, -0.3, 0.2]; 3000];
        for algo in Algorithm::ALL {
            let run = run_prediction(&series, algo, &cfg(4, 1, 0.05)).unwrap();
            let sums: Vec<f64> = run
                .records
                .chunks_exact(100)
                .map(|w| w.iter().map(|r| r.sq_err).sum())
                .collect();
            // Below 1e-28 only round-off is left.
            let rising = sums.windows(2).position(|p| p[1] > p[0] && p[1] > 1e-28);
            assert_eq!(rising, None, "{algo}: {sums:?}");
        }
    }

    #[test]
    fn divergence_is_indexed_by_sample() {
        let series = vec![[10.0, 10.0, 10.0]; 100];
        let err = run_prediction(&series, Algorithm::Qlms, &cfg(2, 1, 10.0)).unwrap_err();
        match err {
            FilterError::Diverged { index } => assert!((2..100).contains(&index)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("rls".parse::<Algorithm>().is_err());
    }
}
