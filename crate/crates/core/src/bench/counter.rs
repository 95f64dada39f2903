use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::hypercomplex::{Quaternion, Trinion};

/// Real multiplication/addition tally.
///
/// Counts only move forward, and only through the counted kernels below.
/// Conjugation, the ı/ȷ mappings and quaternion involutions are sign flips
/// and permutations, so they are free.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounter {
    real_mults: u64,
    real_adds: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn real_mults(&self) -> u64 {
        self.real_mults
    }

    pub fn real_adds(&self) -> u64 {
        self.real_adds
    }

    #[inline]
    fn tally(&mut self, mults: u64, adds: u64) {
        self.real_mults += mults;
        self.real_adds += adds;
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, o: OpCounter) {
        self.tally(o.real_mults, o.real_adds);
    }
}

/// Hypercomplex scalar whose arithmetic is tallied against an [`OpCounter`].
pub trait CountedScalar: Copy + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    const ZERO: Self;
    /// Number of real components.
    const DIM: usize;

    fn mul(self, o: Self, ops: &mut OpCounter) -> Self;
    fn add(self, o: Self, ops: &mut OpCounter) -> Self;
    fn sub(self, o: Self, ops: &mut OpCounter) -> Self;
    fn scale(self, s: f64, ops: &mut OpCounter) -> Self;
    fn conj(self) -> Self;
    fn is_finite(self) -> bool;
    fn max_abs(self) -> f64;
}

impl CountedScalar for Trinion {
    const ZERO: Self = Trinion::ZERO;
    const DIM: usize = 3;

    #[inline]
    fn mul(self, o: Self, ops: &mut OpCounter) -> Self {
        ops.tally(9, 6);
        self * o
    }
    #[inline]
    fn add(self, o: Self, ops: &mut OpCounter) -> Self {
        ops.tally(0, 3);
        self + o
    }
    #[inline]
    fn sub(self, o: Self, ops: &mut OpCounter) -> Self {
        ops.tally(0, 3);
        self - o
    }
    #[inline]
    fn scale(self, s: f64, ops: &mut OpCounter) -> Self {
        ops.tally(3, 0);
        Trinion::scale(self, s)
    }
    #[inline]
    fn conj(self) -> Self {
        Trinion::conj(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Trinion::is_finite(self)
    }
    #[inline]
    fn max_abs(self) -> f64 {
        Trinion::max_abs(self)
    }
}

impl CountedScalar for Quaternion {
    const ZERO: Self = Quaternion::ZERO;
    const DIM: usize = 4;

    #[inline]
    fn mul(self, o: Self, ops: &mut OpCounter) -> Self {
        ops.tally(16, 12);
        self * o
    }
    #[inline]
    fn add(self, o: Self, ops: &mut OpCounter) -> Self {
        ops.tally(0, 4);
        self + o
    }
    #[inline]
    fn sub(self, o: Self, ops: &mut OpCounter) -> Self {
        ops.tally(0, 4);
        self - o
    }
    #[inline]
    fn scale(self, s: f64, ops: &mut OpCounter) -> Self {
        ops.tally(4, 0);
        Quaternion::scale(self, s)
    }
    #[inline]
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Quaternion::is_finite(self)
    }
    #[inline]
    fn max_abs(self) -> f64 {
        Quaternion::max_abs(self)
    }
}
