//! Operation-count audits and wall-clock timing of the four filters.
//!
//! Counted costs cover the weight-update path only (`μ·e` plus
//! `w + (μe)·x*` per tap and block), which is what the closed-form budgets in
//! [`Algorithm::update_cost`] describe. Output and error arithmetic is tallied
//! separately and reported alongside.

mod counter;

use std::fmt;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::filters::{Algorithm, FilterError, LmsFilter, SampleScalar};

pub use counter::{CountedScalar, OpCounter};

/// Step size used for audit and timing streams (unit-variance inputs).
const BENCH_STEP: f64 = 1e-3;
const BENCH_SEED: u64 = 0x7121_0a11;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{algo} at L={len}: expected {expected_mults} mults / {expected_adds} adds, counted {counted_mults} / {counted_adds}")]
    BudgetMismatch {
        algo: Algorithm,
        len: usize,
        expected_mults: u64,
        expected_adds: u64,
        counted_mults: u64,
        counted_adds: u64,
    },
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("filter length must be at least 1")]
    InvalidLength,
    #[error("failed to write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to write report: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub algo: Algorithm,
    pub len: usize,
    pub iterations: u64,
    pub counted_mults: u64,
    pub counted_adds: u64,
    pub predicted_mults: u64,
    pub predicted_adds: u64,
    pub output_mults: u64,
    pub output_adds: u64,
    /// Median wall time of the update loop, when timed.
    pub median_ns: Option<u128>,
    pub repeats: usize,
    /// Set when fewer than five repeats back the median.
    pub low_confidence: bool,
}

impl BenchReport {
    pub fn within_budget(&self) -> bool {
        self.counted_mults == self.predicted_mults && self.counted_adds == self.predicted_adds
    }

    pub fn ns_per_update(&self) -> Option<f64> {
        self.median_ns
            .map(|ns| ns as f64 / self.iterations.max(1) as f64)
    }
}

fn random_stream<S: SampleScalar>(len: usize, iters: u64, seed: u64) -> (Vec<Vec<S>>, Vec<S>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = || {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        S::from_sample(v)
    };
    let mut xs = Vec::with_capacity(iters as usize);
    let mut ds = Vec::with_capacity(iters as usize);
    for _ in 0..iters {
        xs.push((0..len).map(|_| sample()).collect());
        ds.push(sample());
    }
    (xs, ds)
}

struct Measured {
    update: OpCounter,
    output: OpCounter,
    elapsed: Duration,
}

fn drive<S: SampleScalar>(
    filter: &mut LmsFilter<S>,
    xs: &[Vec<S>],
    ds: &[S],
) -> Result<Measured, FilterError> {
    let start = Instant::now();
    for (x, &d) in xs.iter().zip(ds) {
        std::hint::black_box(filter.step(std::hint::black_box(x), d)?);
    }
    let elapsed = start.elapsed();
    Ok(Measured {
        update: filter.update_ops(),
        output: filter.output_ops(),
        elapsed,
    })
}

fn measure(algo: Algorithm, len: usize, iters: u64, seed: u64) -> Result<Measured, FilterError> {
    match algo {
        Algorithm::Tlms => {
            let (xs, ds) = random_stream(len, iters, seed);
            drive(&mut LmsFilter::tlms(len, BENCH_STEP)?, &xs, &ds)
        }
        Algorithm::Atlms => {
            let (xs, ds) = random_stream(len, iters, seed);
            drive(&mut LmsFilter::atlms(len, BENCH_STEP)?, &xs, &ds)
        }
        Algorithm::Qlms => {
            let (xs, ds) = random_stream(len, iters, seed);
            drive(&mut LmsFilter::qlms(len, BENCH_STEP)?, &xs, &ds)
        }
        Algorithm::Aqlms => {
            let (xs, ds) = random_stream(len, iters, seed);
            drive(&mut LmsFilter::aqlms(len, BENCH_STEP)?, &xs, &ds)
        }
    }
}

fn report(algo: Algorithm, len: usize, iters: u64, m: &Measured) -> BenchReport {
    let (pm, pa) = algo.update_cost(len);
    BenchReport {
        algo,
        len,
        iterations: iters,
        counted_mults: m.update.real_mults(),
        counted_adds: m.update.real_adds(),
        predicted_mults: pm * iters,
        predicted_adds: pa * iters,
        output_mults: m.output.real_mults(),
        output_adds: m.output.real_adds(),
        median_ns: None,
        repeats: 0,
        low_confidence: false,
    }
}

/// Runs `iters` counted updates on a seeded Gaussian stream and checks the
/// tallies against the closed-form budget.
pub fn audit_op_counts(algo: Algorithm, len: usize, iters: u64) -> Result<BenchReport, BenchError> {
    if len == 0 {
        return Err(BenchError::InvalidLength);
    }
    let m = measure(algo, len, iters, BENCH_SEED)?;
    let r = report(algo, len, iters, &m);
    if !r.within_budget() {
        return Err(BenchError::BudgetMismatch {
            algo,
            len,
            expected_mults: r.predicted_mults,
            expected_adds: r.predicted_adds,
            counted_mults: r.counted_mults,
            counted_adds: r.counted_adds,
        });
    }
    Ok(r)
}

/// Median-of-`repeats` wall time of `iters` updates per algorithm. Every
/// algorithm sees the same input stream. Runs single-threaded, after one
/// untimed warm-up round, with repeats interleaved across algorithms so that
/// drift in machine state does not favour whichever runs first.
pub fn time_filters(
    algos: &[Algorithm],
    len: usize,
    iters: u64,
    repeats: usize,
) -> Result<Vec<BenchReport>, BenchError> {
    if len == 0 {
        return Err(BenchError::InvalidLength);
    }
    let repeats = repeats.max(1);
    for &algo in algos {
        measure(algo, len, iters, BENCH_SEED)?;
    }
    let mut times = vec![Vec::with_capacity(repeats); algos.len()];
    let mut last = Vec::with_capacity(algos.len());
    for round in 0..repeats {
        for (k, &algo) in algos.iter().enumerate() {
            let m = measure(algo, len, iters, BENCH_SEED)?;
            times[k].push(m.elapsed.as_nanos());
            if round + 1 == repeats {
                last.push(m);
            }
        }
    }
    Ok(algos
        .iter()
        .zip(times.iter_mut())
        .zip(&last)
        .map(|((&algo, t), m)| {
            t.sort_unstable();
            let mut r = report(algo, len, iters, m);
            r.median_ns = Some(t[t.len() / 2]);
            r.repeats = repeats;
            r.low_confidence = repeats < 5;
            r
        })
        .collect())
}

pub fn write_reports_csv<W: Write>(reports: &[BenchReport], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "algo",
        "len",
        "iterations",
        "counted_mults",
        "counted_adds",
        "predicted_mults",
        "predicted_adds",
        "output_mults",
        "output_adds",
        "within_budget",
        "median_ns",
        "repeats",
        "low_confidence",
    ])?;
    for r in reports {
        w.write_record([
            r.algo.to_string(),
            r.len.to_string(),
            r.iterations.to_string(),
            r.counted_mults.to_string(),
            r.counted_adds.to_string(),
            r.predicted_mults.to_string(),
            r.predicted_adds.to_string(),
            r.output_mults.to_string(),
            r.output_adds.to_string(),
            r.within_budget().to_string(),
            r.median_ns.map(|n| n.to_string()).unwrap_or_default(),
            r.repeats.to_string(),
            r.low_confidence.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable table of reports.
pub struct ReportTable<'a>(pub &'a [BenchReport]);

impl fmt::Display for ReportTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<6} {:>4} {:>9} {:>12} {:>12} {:>10} {:>10} {:>12}",
            "algo", "L", "iters", "mults/upd", "adds/upd", "budget", "ok", "ns/upd"
        )?;
        for r in self.0 {
            let it = r.iterations.max(1);
            let (pm, pa) = r.algo.update_cost(r.len);
            let timing = match r.ns_per_update() {
                Some(ns) if r.low_confidence => format!("{ns:.1}*"),
                Some(ns) => format!("{ns:.1}"),
                None => "-".into(),
            };
            writeln!(
                f,
                "{:<6} {:>4} {:>9} {:>12} {:>12} {:>10} {:>10} {:>12}",
                r.algo.name(),
                r.len,
                r.iterations,
                r.counted_mults / it,
                r.counted_adds / it,
                format!("{pm}/{pa}"),
                if r.within_budget() { "yes" } else { "NO" },
                timing
            )?;
        }
        Ok(())
    }
}
