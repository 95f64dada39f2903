use crate::bench::{CountedScalar, OpCounter};
use crate::hypercomplex::{Quaternion, Trinion};

use super::{Algorithm, FilterError};

/// Weight magnitude beyond which a filter is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Output of one filter step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<S> {
    /// `y(n)`, the filter output.
    pub y: S,
    /// `e(n) = d(n) − y(n)`.
    pub e: S,
}

/// Strictly linear or augmented (widely linear) LMS filter.
///
/// The output is `y = Σ_m w_mᵀ x^(m)` over the regressor mappings `x^(m)`
/// (the identity for the strictly linear filters; `x, xⁱ, xʲ` for ATLMS and
/// the quaternion involutions for AQLMS). The plain transpose is used, with
/// no conjugation. Each weight block is updated as `w_m ← w_m + μ e conj(x^(m))`.
///
/// Arithmetic is split over two counters. The weight-update path
/// (`μ·e` and `w + (μe)·x*`) goes to [`update_ops`](Self::update_ops); the
/// output and error go to [`output_ops`](Self::output_ops).
#[derive(Debug, Clone)]
pub struct LmsFilter<S: 'static> {
    algorithm: Algorithm,
    /// Mappings after the leading identity block.
    mappings: &'static [fn(S) -> S],
    /// Blocks of `len` taps, one per mapping, laid end to end.
    weights: Vec<S>,
    len: usize,
    step_size: f64,
    update_ops: OpCounter,
    output_ops: OpCounter,
    updates: u64,
    augmented: Vec<S>,
}

pub type TrinionFilter = LmsFilter<Trinion>;
pub type QuaternionFilter = LmsFilter<Quaternion>;

impl LmsFilter<Trinion> {
    pub fn tlms(len: usize, step_size: f64) -> Result<Self, FilterError> {
        Self::with_mappings(Algorithm::Tlms, &[], len, step_size)
    }

    pub fn atlms(len: usize, step_size: f64) -> Result<Self, FilterError> {
        Self::with_mappings(
            Algorithm::Atlms,
            &[Trinion::map_i, Trinion::map_j],
            len,
            step_size,
        )
    }
}

impl LmsFilter<Quaternion> {
    pub fn qlms(len: usize, step_size: f64) -> Result<Self, FilterError> {
        Self::with_mappings(Algorithm::Qlms, &[], len, step_size)
    }

    pub fn aqlms(len: usize, step_size: f64) -> Result<Self, FilterError> {
        Self::with_mappings(
            Algorithm::Aqlms,
            &[
                Quaternion::involution_i,
                Quaternion::involution_j,
                Quaternion::involution_k,
            ],
            len,
            step_size,
        )
    }
}

impl<S: CountedScalar> LmsFilter<S> {
    fn with_mappings(
        algorithm: Algorithm,
        mappings: &'static [fn(S) -> S],
        len: usize,
        step_size: f64,
    ) -> Result<Self, FilterError> {
        if len == 0 {
            return Err(FilterError::InvalidConfig(
                "filter length must be at least 1".into(),
            ));
        }
        if !(step_size >= 0.0 && step_size.is_finite()) {
            return Err(FilterError::InvalidConfig(format!(
                "step size must be finite and non-negative, got {step_size}"
            )));
        }
        Ok(LmsFilter {
            algorithm,
            mappings,
            weights: vec![S::ZERO; len * (1 + mappings.len())],
            len,
            step_size,
            update_ops: OpCounter::new(),
            output_ops: OpCounter::new(),
            updates: 0,
            augmented: Vec::with_capacity(len * (1 + mappings.len())),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    /// Weight blocks, one per regressor mapping.
    pub fn weights(&self) -> Vec<Vec<S>> {
        self.weights.chunks(self.len).map(<[S]>::to_vec).collect()
    }

    /// Overwrites the weights. `blocks` must match the filter's shape.
    pub fn set_weights(&mut self, blocks: Vec<Vec<S>>) -> Result<(), FilterError> {
        if blocks.len() != 1 + self.mappings.len() || blocks.iter().any(|b| b.len() != self.len) {
            return Err(FilterError::InvalidConfig("weight shape mismatch".into()));
        }
        self.weights = blocks.concat();
        Ok(())
    }

    pub fn update_ops(&self) -> OpCounter {
        self.update_ops
    }

    pub fn output_ops(&self) -> OpCounter {
        self.output_ops
    }

    /// Number of completed weight updates.
    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Computes the output for regressor `x`, the error against `d`, and
    /// adapts the weights.
    pub fn step(&mut self, x: &[S], d: S) -> Result<Estimate<S>, FilterError> {
        let len = self.len();
        if x.len() != len {
            return Err(FilterError::RegressorLength {
                expected: len,
                got: x.len(),
            });
        }

        self.augmented.clear();
        self.augmented.extend_from_slice(x);
        for map in self.mappings {
            self.augmented.extend(x.iter().map(|&s| map(s)));
        }

        let ops = &mut self.output_ops;
        let mut y = self.weights[0].mul(self.augmented[0], ops);
        for (w, &xa) in self.weights.iter().zip(&self.augmented).skip(1) {
            y = y.add(w.mul(xa, ops), ops);
        }
        let e = d.sub(y, ops);

        let ops = &mut self.update_ops;
        let g = e.scale(self.step_size, ops);
        let mut bounded = true;
        for (w, &xa) in self.weights.iter_mut().zip(&self.augmented) {
            *w = w.add(g.mul(xa.conj(), ops), ops);
            bounded &= w.is_finite() && w.max_abs() <= DIVERGENCE_LIMIT;
        }

        let index = self.updates;
        self.updates += 1;
        if !bounded {
            return Err(FilterError::Diverged { index });
        }
        Ok(Estimate { y, e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: fn(f64, f64, f64) -> Trinion = Trinion::new;
    const Q: fn(f64, f64, f64, f64) -> Quaternion = Quaternion::new;

    fn regressor() -> Vec<Trinion> {
        vec![T(1., 2., 3.), T(-0.5, 0.25, 1.5), T(0., -1., 2.)]
    }

    #[test]
    fn tlms_zero_weight_first_step() {
        let x = regressor();
        let mut f = LmsFilter::tlms(3, 0.1).unwrap();
        let est = f.step(&x, T(1., 0., 0.)).unwrap();
        assert_eq!(est.e, T(1., 0., 0.));
        assert_eq!(est.y, Trinion::ZERO);
        for (w, x) in f.weights()[0].iter().zip(&x) {
            assert!(w.approx_eq(x.conj().scale(0.1), 1e-15));
        }
    }

    #[test]
    fn tlms_frozen_at_zero_step() {
        let x = regressor();
        let mut f = LmsFilter::tlms(3, 0.0).unwrap();
        let w0 = vec![vec![T(0.1, 0.2, 0.3), T(1., 0., -1.), T(0., 0., 2.)]];
        f.set_weights(w0.clone()).unwrap();
        for _ in 0..10 {
            f.step(&x, T(4., 5., 6.)).unwrap();
        }
        assert_eq!(f.weights(), w0);
    }

    #[test]
    fn tlms_exact_fit_has_zero_error() {
        let mut f = LmsFilter::tlms(1, 0.5).unwrap();
        f.set_weights(vec![vec![T(1., 0., 0.)]]).unwrap();
        let est = f.step(&[T(1., 2., 3.)], T(1., 2., 3.)).unwrap();
        // real weight times x: (1·1, 1·2, 1·3)
        assert_eq!(est.y, T(1., 2., 3.));
        assert_eq!(est.e, Trinion::ZERO);
        assert_eq!(f.weights()[0][0], T(1., 0., 0.));
    }

    #[test]
    fn atlms_zero_weight_first_step() {
        let x = regressor();
        let mut f = LmsFilter::atlms(3, 0.1).unwrap();
        let est = f.step(&x, T(1., 0., 0.)).unwrap();
        assert_eq!(est.e, T(1., 0., 0.));
        let maps: [fn(Trinion) -> Trinion; 3] = [|v| v, Trinion::map_i, Trinion::map_j];
        for (block, map) in f.weights().iter().zip(maps) {
            for (w, &x) in block.iter().zip(&x) {
                assert!(w.approx_eq(map(x).conj().scale(0.1), 1e-15));
            }
        }
    }

    #[test]
    fn atlms_output_for_real_regressor() {
        // With b = c = 0, xⁱ = (0, −a, 0) and xʲ = (0, 0, −a).
        let x = vec![T(2., 0., 0.), T(-1., 0., 0.)];
        let w1 = vec![T(0.5, 1., -1.), T(0., 2., 1.)];
        let w2 = vec![T(1., 0., 3.), T(-2., 1., 0.)];
        let w3 = vec![T(0., 1., 1.), T(1., 1., 1.)];
        let mut f = LmsFilter::atlms(2, 0.0).unwrap();
        f.set_weights(vec![w1.clone(), w2.clone(), w3.clone()])
            .unwrap();
        let est = f.step(&x, Trinion::ZERO).unwrap();

        // scalar expansion: (p,q,r)(d,e,f) = (pd−qf−re, pe+qd−rf, pf+qe+rd)
        let mut expect = [0.0; 3];
        for k in 0..2 {
            let a = x[k].a;
            // w1·(a,0,0) = a·w1
            expect[0] += a * w1[k].a;
            expect[1] += a * w1[k].b;
            expect[2] += a * w1[k].c;
            // w2·(0,−a,0) = (−r·(−a)... ) → (r·a, −p·a, −q·a)
            let (p, q, r) = (w2[k].a, w2[k].b, w2[k].c);
            expect[0] += r * a;
            expect[1] += -p * a;
            expect[2] += -q * a;
            // w3·(0,0,−a) → (q·a, r·a, −p·a)
            let (p, q, r) = (w3[k].a, w3[k].b, w3[k].c);
            expect[0] += q * a;
            expect[1] += r * a;
            expect[2] += -p * a;
        }
        assert!(est.y.approx_eq(Trinion::from_array(expect), 1e-12));
    }

    #[test]
    fn atlms_frozen_at_zero_step() {
        let x = regressor();
        let mut f = LmsFilter::atlms(3, 0.0).unwrap();
        f.step(&x, T(1., 1., 1.)).unwrap();
        assert!(f.weights().iter().flatten().all(|&w| w == Trinion::ZERO));
    }

    #[test]
    fn qlms_zero_weight_and_hand_case() {
        let x = vec![Q(0., 1., 2., 3.)];
        let mut f = LmsFilter::qlms(1, 0.1).unwrap();
        f.step(&x, Q(1., 0., 0., 0.)).unwrap();
        assert!(f.weights()[0][0].approx_eq(x[0].conj().scale(0.1), 1e-15));

        // single tap: w = (1,1,0,0), x = (0,0,1,0) → y = (1 + i) j = j + k
        let mut f = LmsFilter::qlms(1, 0.5).unwrap();
        f.set_weights(vec![vec![Q(1., 1., 0., 0.)]]).unwrap();
        let est = f.step(&[Q(0., 0., 1., 0.)], Q(0., 0., 1., 2.)).unwrap();
        assert_eq!(est.y, Q(0., 0., 1., 1.));
        assert_eq!(est.e, Q(0., 0., 0., 1.));
        // w += 0.5 · k · conj(j) = 0.5 · k · (−j) = 0.5 i
        assert!(f.weights()[0][0].approx_eq(Q(1., 1.5, 0., 0.), 1e-15));
    }

    #[test]
    fn aqlms_blocks() {
        let x = vec![Q(0., 1., 2., 3.), Q(0., -1., 0.5, 0.)];
        let mut f = LmsFilter::aqlms(2, 0.1).unwrap();
        f.step(&x, Q(1., 0., 0., 0.)).unwrap();
        let maps: [fn(Quaternion) -> Quaternion; 4] = [
            |q| q,
            Quaternion::involution_i,
            Quaternion::involution_j,
            Quaternion::involution_k,
        ];
        for (block, map) in f.weights().iter().zip(maps) {
            for (w, &x) in block.iter().zip(&x) {
                assert!(w.approx_eq(map(x).conj().scale(0.1), 1e-15));
            }
        }
        let mut f = LmsFilter::aqlms(2, 0.0).unwrap();
        f.step(&x, Q(1., 2., 3., 4.)).unwrap();
        assert!(f.weights().iter().flatten().all(|&w| w == Quaternion::ZERO));
    }

    #[test]
    fn op_counts_per_update() {
        for len in [1usize, 3, 8] {
            let l = len as u64;
            let x = vec![T(0.1, 0.2, 0.3); len];
            let mut t = LmsFilter::tlms(len, 0.01).unwrap();
            let mut a = LmsFilter::atlms(len, 0.01).unwrap();
            let xq = vec![Q(0., 0.1, 0.2, 0.3); len];
            let mut q = LmsFilter::qlms(len, 0.01).unwrap();
            let mut aq = LmsFilter::aqlms(len, 0.01).unwrap();
            for _ in 0..5 {
                t.step(&x, Trinion::ONE).unwrap();
                a.step(&x, Trinion::ONE).unwrap();
                q.step(&xq, Quaternion::ONE).unwrap();
                aq.step(&xq, Quaternion::ONE).unwrap();
            }
            let counts = |c: OpCounter| (c.real_mults(), c.real_adds());
            assert_eq!(counts(t.update_ops()), (5 * (9 * l + 3), 5 * 9 * l));
            assert_eq!(counts(a.update_ops()), (5 * (27 * l + 3), 5 * 27 * l));
            assert_eq!(counts(q.update_ops()), (5 * (16 * l + 4), 5 * 16 * l));
            assert_eq!(counts(aq.update_ops()), (5 * (64 * l + 4), 5 * 64 * l));
            // output: L products, L−1 sums, one subtraction
            assert_eq!(
                counts(t.output_ops()),
                (5 * 9 * l, 5 * (6 * l + 3 * (l - 1) + 3))
            );
        }
    }

    #[test]
    fn divergence_reports_index() {
        let mut f = LmsFilter::tlms(1, 1e6).unwrap();
        let x = [T(1e3, 1e3, 1e3)];
        let err = (0..100)
            .map(|_| f.step(&x, T(1., 1., 1.)))
            .find_map(Result::err)
            .unwrap();
        assert!(matches!(err, FilterError::Diverged { .. }));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(LmsFilter::tlms(0, 0.1).is_err());
        assert!(LmsFilter::tlms(2, f64::NAN).is_err());
        let mut f = LmsFilter::tlms(2, 0.1).unwrap();
        assert_eq!(
            f.step(&[Trinion::ONE], Trinion::ONE).unwrap_err(),
            FilterError::RegressorLength {
                expected: 2,
                got: 1
            }
        );
    }
}
