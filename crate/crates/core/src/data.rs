//! Recorded anemometer series from CSV and synthetic 3-D wind-like signals.
//!
//! The three wind components `(u, v, w)` map to the trinion `(a, b, c)` and to
//! the pure quaternion `ui + vj + wk`. Samples are consumed by index; the
//! timestamps are validated but never resampled.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("missing column `{0}` in header")]
    MissingColumn(String),
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("row {row}: non-finite value in column `{column}`")]
    NonFinite { row: usize, column: String },
    #[error("row {row}: timestamp {t} precedes previous timestamp {prev}")]
    NonMonotone { row: usize, t: f64, prev: f64 },
    #[error("series is empty")]
    Empty,
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindSample {
    /// Seconds, non-decreasing within a series.
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl WindSample {
    pub fn components(&self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }
}

/// Extracts the `(u, v, w)` triples.
pub fn components(series: &[WindSample]) -> Vec<[f64; 3]> {
    series.iter().map(WindSample::components).collect()
}

/// Header names of the time and wind-component columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub t: String,
    pub u: String,
    pub v: String,
    pub w: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            t: "t".into(),
            u: "u".into(),
            v: "v".into(),
            w: "w".into(),
        }
    }
}

impl ColumnMapping {
    /// Parses `t,u,v,w` style comma-separated names.
    pub fn parse(spec: &str) -> Result<Self, DataError> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [t, u, v, w] if parts.iter().all(|p| !p.is_empty()) => Ok(ColumnMapping {
                t: t.to_string(),
                u: u.to_string(),
                v: v.to_string(),
                w: w.to_string(),
            }),
            _ => Err(DataError::InvalidSpec(format!(
                "column mapping must name four columns as t,u,v,w; got `{spec}`"
            ))),
        }
    }
}

pub fn load_csv(
    path: impl AsRef<Path>,
    mapping: &ColumnMapping,
) -> Result<Vec<WindSample>, DataError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DataError::Open {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, mapping)
}

/// Parses a headed CSV. Row numbers in errors count data rows from 1.
pub fn read_csv<R: Read>(reader: R, mapping: &ColumnMapping) -> Result<Vec<WindSample>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))
    };
    let cols = [
        find(&mapping.t)?,
        find(&mapping.u)?,
        find(&mapping.v)?,
        find(&mapping.w)?,
    ];
    let names = [&mapping.t, &mapping.u, &mapping.v, &mapping.w];

    let mut out = Vec::new();
    let mut prev: Option<f64> = None;
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| DataError::Parse {
            row,
            message: e.to_string(),
        })?;
        let mut vals = [0.0; 4];
        for ((val, &col), name) in vals.iter_mut().zip(&cols).zip(names) {
            let field = rec.get(col).ok_or_else(|| DataError::Parse {
                row,
                message: format!("missing field for column `{name}`"),
            })?;
            *val = field.parse::<f64>().map_err(|e| DataError::Parse {
                row,
                message: format!("column `{name}`: cannot parse `{field}`: {e}"),
            })?;
            if !val.is_finite() {
                return Err(DataError::NonFinite {
                    row,
                    column: name.clone(),
                });
            }
        }
        let [t, u, v, w] = vals;
        if let Some(p) = prev {
            if t < p {
                return Err(DataError::NonMonotone { row, t, prev: p });
            }
        }
        prev = Some(t);
        out.push(WindSample { t, u, v, w });
    }
    if out.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(out)
}

/// Formats a float with 17 significant digits, which round-trips exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `t,u,v,w` with exact-round-trip formatting.
pub fn write_csv<W: Write>(series: &[WindSample], out: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "u", "v", "w"])?;
    for s in series {
        w.write_record([fmt_f64(s.t), fmt_f64(s.u), fmt_f64(s.v), fmt_f64(s.w)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SyntheticModel {
    /// `s(n) = mean + A (s(n−1) − mean) + noise`, a stationary VAR(1) with
    /// per-axis AR coefficients on the diagonal of `A` and cross-coupling off it.
    Ar1 {
        coupling: [[f64; 3]; 3],
        mean: [f64; 3],
    },
    /// `s_k(n) = mean_k + amplitude_k · sin(2π n / period + phase_k) + noise`.
    Sinusoid {
        amplitude: [f64; 3],
        period: f64,
        phase: [f64; 3],
        mean: [f64; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub model: SyntheticModel,
    /// Standard deviation of the per-axis Gaussian innovation.
    pub noise_std: f64,
    pub seed: u64,
    pub length: usize,
    /// Sampling interval used for the timestamps.
    pub dt: f64,
}

impl SyntheticSpec {
    /// Per-axis AR(1) with the given coefficient and no cross-coupling.
    pub fn ar1(coefficient: f64, noise_std: f64, seed: u64, length: usize) -> Self {
        let mut coupling = [[0.0; 3]; 3];
        (0..3).for_each(|k| coupling[k][k] = coefficient);
        SyntheticSpec {
            model: SyntheticModel::Ar1 {
                coupling,
                mean: [0.0; 3],
            },
            noise_std,
            seed,
            length,
            dt: 1.0,
        }
    }

    /// Wind-like preset: coupled VAR(1) around a mean wind of (6, 3, 0.5) m/s.
    /// The horizontal components veer (a damped rotation in the u–v plane)
    /// and both feed the vertical one, so the dynamics are not a single
    /// trinion product.
    pub fn wind_like(seed: u64, length: usize) -> Self {
        SyntheticSpec {
            model: SyntheticModel::Ar1 {
                coupling: [[0.9, 0.3, 0.0], [-0.3, 0.9, 0.0], [0.1, 0.1, 0.7]],
                mean: [6.0, 3.0, 0.5],
            },
            noise_std: 0.3,
            seed,
            length,
            dt: 1.0,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SyntheticSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(DataError::InvalidSpec(format!(
                "noise std must be finite and ≥ 0, got {}",
                self.noise_std
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DataError::InvalidSpec(
                "sampling interval must be positive".into(),
            ));
        }
        match &self.model {
            SyntheticModel::Ar1 { coupling, mean } => {
                if coupling
                    .iter()
                    .flatten()
                    .chain(mean)
                    .any(|v| !v.is_finite())
                {
                    return Err(DataError::InvalidSpec("non-finite AR parameters".into()));
                }
                let radius = spectral_radius(coupling);
                if radius >= 1.0 {
                    return Err(DataError::InvalidSpec(format!(
                        "AR coupling has spectral radius {radius:.6} ≥ 1 (non-stationary)"
                    )));
                }
            }
            SyntheticModel::Sinusoid {
                amplitude,
                period,
                phase,
                mean,
            } => {
                if !(*period > 0.0 && period.is_finite()) {
                    return Err(DataError::InvalidSpec(
                        "sinusoid period must be positive".into(),
                    ));
                }
                if amplitude
                    .iter()
                    .chain(phase)
                    .chain(mean)
                    .any(|v| !v.is_finite())
                {
                    return Err(DataError::InvalidSpec(
                        "non-finite sinusoid parameters".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Spectral radius via `ρ = lim ‖A^k‖^{1/k}`, evaluated at `k = 2^48` by
/// repeated normalised squaring. (nalgebra's Schur iteration does not
/// terminate on the zero matrix.)
pub fn spectral_radius(m: &[[f64; 3]; 3]) -> f64 {
    const SQUARINGS: i32 = 48;
    let mut mat = Matrix3::from_fn(|i, j| m[i][j]);
    let n = mat.norm();
    if n == 0.0 {
        return 0.0;
    }
    mat /= n;
    // A^(2^k) = exp(log_scale) · mat with ‖mat‖ = 1
    let mut log_scale = n.ln();
    for _ in 0..SQUARINGS {
        mat = mat * mat;
        let n = mat.norm();
        if n == 0.0 {
            return 0.0;
        }
        mat /= n;
        log_scale = 2.0 * log_scale + n.ln();
    }
    (log_scale / 2f64.powi(SQUARINGS)).exp()
}

/// Deterministic for a fixed spec, seed included.
pub fn generate(spec: &SyntheticSpec) -> Result<Vec<WindSample>, DataError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise =
        Normal::new(0.0, spec.noise_std).map_err(|e| DataError::InvalidSpec(e.to_string()))?;
    let mut draw = || -> [f64; 3] { std::array::from_fn(|_| noise.sample(&mut rng)) };
    let mut out = Vec::with_capacity(spec.length);
    match &spec.model {
        SyntheticModel::Ar1 { coupling, mean } => {
            // deviation from the mean, started at zero
            let mut dev = [0.0; 3];
            for n in 0..spec.length {
                let eps = draw();
                let next: [f64; 3] = std::array::from_fn(|i| {
                    (0..3).map(|j| coupling[i][j] * dev[j]).sum::<f64>() + eps[i]
                });
                dev = next;
                out.push(sample_at(
                    spec,
                    n,
                    std::array::from_fn(|i| mean[i] + dev[i]),
                ));
            }
        }
        SyntheticModel::Sinusoid {
            amplitude,
            period,
            phase,
            mean,
        } => {
            for n in 0..spec.length {
                let eps = draw();
                let arg = std::f64::consts::TAU * n as f64 / period;
                let s = std::array::from_fn(|i| {
                    mean[i] + amplitude[i] * (arg + phase[i]).sin() + eps[i]
                });
                out.push(sample_at(spec, n, s));
            }
        }
    }
    Ok(out)
}

fn sample_at(spec: &SyntheticSpec, n: usize, s: [f64; 3]) -> WindSample {
    WindSample {
        t: n as f64 * spec.dt,
        u: s[0],
        v: s[1],
        w: s[2],
    }
}
