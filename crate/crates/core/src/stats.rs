//! Augmented second-order statistics of trinion vectors.
//!
//! A zero-mean trinion vector `v = v_a + ıv_b + ȷv_c` is fully described to
//! second order by six real covariances (`C_aa, C_bb, C_cc, C_ab, C_bc,
//! C_ca`), or equivalently by three trinion covariances
//!
//! ```text
//! C_vv  = E{v vᴴ},   C_vvⁱ = E{v (vⁱ)ᴴ},   C_vvʲ = E{v (vʲ)ᴴ}
//! ```
//!
//! where `ᴴ` is conjugate transpose and `(vⁱ)ᴴ` conjugates the mapped vector.
//!
//! Every entry `(i, j)` of the three trinion matrices is bilinear in
//! `(v_i, v_j)`, so its nine real components are a fixed linear image of the
//! nine ordered products `E{x_i y_j}` for `x, y ∈ {a, b, c}`. [`RecoveryMap`]
//! derives that 9×9 system by evaluating the trinion algebra on basis
//! elements and solves it in the least-squares sense (it has full rank).
//! Inverting gives, per entry, with `X.re`, `X.i`, `X.j` the components of
//! `X`:
//!
//! ```text
//! 2·C_aa = vv.re + vv.i + vv.j + vvi.re + vvj.re + vvj.i
//! 2·C_bb = vvi.i − vvj.re
//! 2·C_cc = vv.re − vv.i − vv.j − vvi.re − vvi.i − vvj.i
//! 2·C_ab = vvi.re + vvj.j
//! 2·C_bc = vvi.j − vv.re − vv.i − vv.j − vvi.re − vvj.re
//! 2·C_ca = vv.j − vv.re − vv.i + vvi.j − vvj.re + vvj.j
//! ```
//!
//! Sample covariances use `1/N` normalisation.

use nalgebra::{DMatrix, SMatrix, SVector};
use thiserror::Error;

use crate::hypercomplex::Trinion;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample {index} has length {got}, expected {expected}")]
    RaggedSamples {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("covariance {0} cannot be recovered from the trinion covariances")]
    Unrecoverable(&'static str),
    #[error("recovery residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("covariance sets have mismatched dimensions")]
    DimensionMismatch,
}

/// Whether to subtract the sample mean before forming outer products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    None,
    SampleMean,
}

impl Centering {
    fn min_samples(self) -> usize {
        match self {
            Centering::None => 1,
            Centering::SampleMean => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealCovarianceSet {
    pub aa: DMatrix<f64>,
    pub bb: DMatrix<f64>,
    pub cc: DMatrix<f64>,
    pub ab: DMatrix<f64>,
    pub bc: DMatrix<f64>,
    pub ca: DMatrix<f64>,
}

impl RealCovarianceSet {
    pub fn dim(&self) -> usize {
        self.aa.nrows()
    }

    fn zeros(n: usize) -> Self {
        let z = DMatrix::zeros(n, n);
        RealCovarianceSet {
            aa: z.clone(),
            bb: z.clone(),
            cc: z.clone(),
            ab: z.clone(),
            bc: z.clone(),
            ca: z,
        }
    }

    /// `(name, matrix)` pairs in a fixed order.
    pub fn named(&self) -> [(&'static str, &DMatrix<f64>); 6] {
        [
            ("C_aa", &self.aa),
            ("C_bb", &self.bb),
            ("C_cc", &self.cc),
            ("C_ab", &self.ab),
            ("C_bc", &self.bc),
            ("C_ca", &self.ca),
        ]
    }

    /// Largest entrywise absolute difference across all six matrices.
    pub fn max_abs_diff(&self, other: &RealCovarianceSet) -> f64 {
        self.named()
            .iter()
            .zip(other.named())
            .map(|((_, a), (_, b))| (*a - b).abs().max())
            .fold(0.0, f64::max)
    }
}

/// Square trinion matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TrinionMatrix {
    dim: usize,
    data: Vec<Trinion>,
}

impl TrinionMatrix {
    pub fn zeros(dim: usize) -> Self {
        TrinionMatrix {
            dim,
            data: vec![Trinion::ZERO; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Trinion {
        self.data[i * self.dim + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut Trinion {
        &mut self.data[i * self.dim + j]
    }

    /// Real matrix of one component (0 = real, 1 = ı, 2 = ȷ).
    pub fn component(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).to_array()[k])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|t| t.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrinionCovarianceSet {
    pub vv: TrinionMatrix,
    pub vvi: TrinionMatrix,
    pub vvj: TrinionMatrix,
}

fn check_shape<T: AsRef<[Trinion]>>(
    samples: &[T],
    centering: Centering,
) -> Result<usize, StatsError> {
    let needed = centering.min_samples();
    if samples.len() < needed {
        return Err(StatsError::TooFewSamples {
            needed,
            got: samples.len(),
        });
    }
    let dim = samples[0].as_ref().len();
    for (index, s) in samples.iter().enumerate() {
        if s.as_ref().len() != dim {
            return Err(StatsError::RaggedSamples {
                index,
                expected: dim,
                got: s.as_ref().len(),
            });
        }
    }
    Ok(dim)
}

fn centered<T: AsRef<[Trinion]>>(
    samples: &[T],
    dim: usize,
    centering: Centering,
) -> Vec<Vec<Trinion>> {
    let mut mean = vec![Trinion::ZERO; dim];
    if centering == Centering::SampleMean {
        for s in samples {
            for (m, &v) in mean.iter_mut().zip(s.as_ref()) {
                *m += v;
            }
        }
        let inv = 1.0 / samples.len() as f64;
        mean.iter_mut().for_each(|m| *m = m.scale(inv));
    }
    samples
        .iter()
        .map(|s| s.as_ref().iter().zip(&mean).map(|(&v, &m)| v - m).collect())
        .collect()
}

/// Six real sample covariances `E{x yᵀ}` of the component vectors.
pub fn estimate_real_covs<T: AsRef<[Trinion]>>(
    samples: &[T],
    centering: Centering,
) -> Result<RealCovarianceSet, StatsError> {
    let dim = check_shape(samples, centering)?;
    let data = centered(samples, dim, centering);
    let mut out = RealCovarianceSet::zeros(dim);
    for v in &data {
        let a = DMatrix::from_iterator(dim, 1, v.iter().map(|t| t.a));
        let b = DMatrix::from_iterator(dim, 1, v.iter().map(|t| t.b));
        let c = DMatrix::from_iterator(dim, 1, v.iter().map(|t| t.c));
        out.aa += &a * a.transpose();
        out.bb += &b * b.transpose();
        out.cc += &c * c.transpose();
        out.ab += &a * b.transpose();
        out.bc += &b * c.transpose();
        out.ca += &c * a.transpose();
    }
    let inv = 1.0 / data.len() as f64;
    for m in [
        &mut out.aa,
        &mut out.bb,
        &mut out.cc,
        &mut out.ab,
        &mut out.bc,
        &mut out.ca,
    ] {
        *m *= inv;
    }
    Ok(out)
}

/// Three trinion sample covariances `E{v vᴴ}`, `E{v (vⁱ)ᴴ}`, `E{v (vʲ)ᴴ}`.
pub fn estimate_trinion_covs<T: AsRef<[Trinion]>>(
    samples: &[T],
    centering: Centering,
) -> Result<TrinionCovarianceSet, StatsError> {
    let dim = check_shape(samples, centering)?;
    let data = centered(samples, dim, centering);
    let mut out = TrinionCovarianceSet {
        vv: TrinionMatrix::zeros(dim),
        vvi: TrinionMatrix::zeros(dim),
        vvj: TrinionMatrix::zeros(dim),
    };
    for v in &data {
        for i in 0..dim {
            for j in 0..dim {
                *out.vv.get_mut(i, j) += v[i] * v[j].conj();
                *out.vvi.get_mut(i, j) += v[i] * v[j].map_i().conj();
                *out.vvj.get_mut(i, j) += v[i] * v[j].map_j().conj();
            }
        }
    }
    let inv = 1.0 / data.len() as f64;
    for m in [&mut out.vv, &mut out.vvi, &mut out.vvj] {
        m.data.iter_mut().for_each(|t| *t = t.scale(inv));
    }
    Ok(out)
}

type Square9 = SMatrix<f64, 9, 9>;

/// Ordered-product index of `E{x_i y_j}`, with a = 0, b = 1, c = 2.
const fn product_index(x: usize, y: usize) -> usize {
    3 * x + y
}

const AA: usize = product_index(0, 0);
const BB: usize = product_index(1, 1);
const CC: usize = product_index(2, 2);
const AB: usize = product_index(0, 1);
const BC: usize = product_index(1, 2);
const CA: usize = product_index(2, 0);

const TARGETS: [(&str, usize); 6] = [
    ("C_aa", AA),
    ("C_bb", BB),
    ("C_cc", CC),
    ("C_ab", AB),
    ("C_bc", BC),
    ("C_ca", CA),
];

/// Residual bound on `inverse · forward − I` for the recovered rows.
pub const RECOVERY_TOLERANCE: f64 = 1e-10;

/// Linear map from trinion covariance components back to real covariances.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryMap {
    forward: Square9,
    inverse: Square9,
}

/// Builds the forward system by evaluating the covariance definitions on
/// basis trinions and solves it in the least-squares sense.
pub fn derive_recovery_map() -> Result<RecoveryMap, StatsError> {
    let basis = [Trinion::ONE, Trinion::I, Trinion::J];
    let mut forward = Square9::zeros();
    for x in 0..3 {
        for y in 0..3 {
            let (u, w) = (basis[x], basis[y]);
            let images = [u * w.conj(), u * w.map_i().conj(), u * w.map_j().conj()];
            let col = product_index(x, y);
            for (m, t) in images.iter().enumerate() {
                for (k, v) in t.to_array().into_iter().enumerate() {
                    forward[(3 * m + k, col)] = v;
                }
            }
        }
    }
    // Least squares through the normal equations. A rank-deficient system
    // fails the Cholesky factorisation; the SVD then names the casualty.
    let normal = forward.transpose() * forward;
    let inverse = match normal.cholesky() {
        Some(chol) => chol.solve(&forward.transpose()),
        None => {
            let pinv = forward
                .svd(true, true)
                .pseudo_inverse(1e-9)
                .map_err(|_| StatsError::Unrecoverable("all"))?;
            let projector = pinv * forward;
            let lost = TARGETS
                .iter()
                .find(|(_, idx)| (projector[(*idx, *idx)] - 1.0).abs() > 1e-6)
                .map_or("all", |(name, _)| *name);
            return Err(StatsError::Unrecoverable(lost));
        }
    };
    let projector = inverse * forward;
    let mut worst = 0.0f64;
    for (name, idx) in TARGETS {
        let mut unit = SVector::<f64, 9>::zeros();
        unit[idx] = 1.0;
        let err = (projector.row(idx).transpose() - unit).abs().max();
        if err > 1e-6 {
            return Err(StatsError::Unrecoverable(name));
        }
        worst = worst.max(err);
    }
    if worst > RECOVERY_TOLERANCE {
        return Err(StatsError::Residual(worst));
    }
    Ok(RecoveryMap { forward, inverse })
}

impl RecoveryMap {
    /// Coefficients of the nine trinion-covariance components (rows: `vv`,
    /// `vvi`, `vvj` × re/ı/ȷ) in the ordered products `E{x_i y_j}` (columns:
    /// aa, ab, ac, ba, bb, bc, ca, cb, cc).
    pub fn forward(&self) -> &SMatrix<f64, 9, 9> {
        &self.forward
    }

    pub fn inverse(&self) -> &SMatrix<f64, 9, 9> {
        &self.inverse
    }

    /// Coefficients giving one real covariance entry from the nine
    /// trinion-covariance components.
    pub fn recovery_row(&self, name: &str) -> Option<[f64; 9]> {
        let idx = TARGETS.iter().find(|(n, _)| *n == name)?.1;
        Some(std::array::from_fn(|k| self.inverse[(idx, k)]))
    }

    /// Reconstructs the six real covariances.
    pub fn recover(&self, covs: &TrinionCovarianceSet) -> Result<RealCovarianceSet, StatsError> {
        let dim = covs.vv.dim();
        if covs.vvi.dim() != dim || covs.vvj.dim() != dim {
            return Err(StatsError::DimensionMismatch);
        }
        let mut out = RealCovarianceSet::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut obs = SVector::<f64, 9>::zeros();
                for (m, mat) in [&covs.vv, &covs.vvi, &covs.vvj].into_iter().enumerate() {
                    for (k, v) in mat.get(i, j).to_array().into_iter().enumerate() {
                        obs[3 * m + k] = v;
                    }
                }
                let p = self.inverse * obs;
                out.aa[(i, j)] = p[AA];
                out.bb[(i, j)] = p[BB];
                out.cc[(i, j)] = p[CC];
                out.ab[(i, j)] = p[AB];
                out.bc[(i, j)] = p[BC];
                out.ca[(i, j)] = p[CA];
            }
        }
        Ok(out)
    }
}
