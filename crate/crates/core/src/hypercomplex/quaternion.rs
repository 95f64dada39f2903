//! Hamilton quaternions (`i² = j² = k² = ijk = −1`, `ij = k`), used by the
//! quaternion baseline filters.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// Pure quaternion `xi + yj + zk`.
    #[inline]
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Quaternion::new(0.0, x, y, z)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Vector (imaginary) part.
    #[inline]
    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Involution `q^i = −i q i`.
    #[inline]
    pub fn involution_i(self) -> Quaternion {
        Quaternion::new(self.w, self.x, -self.y, -self.z)
    }

    /// Involution `q^j = −j q j`.
    #[inline]
    pub fn involution_j(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, self.y, -self.z)
    }

    /// Involution `q^k = −k q k`.
    #[inline]
    pub fn involution_k(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(s * self.w, s * self.x, s * self.y, s * self.z)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn max_abs(self) -> f64 {
        self.w
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
    }

    pub fn approx_eq(self, o: Quaternion, tol: f64) -> bool {
        self.to_array()
            .iter()
            .zip(o.to_array())
            .all(|(p, q)| (p - q).abs() <= tol)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product. Costs 16 real multiplications and 12 real additions.
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: fn(f64, f64, f64, f64) -> Quaternion = Quaternion::new;

    // Expansion over the Hamilton basis table.
    fn table_product(p: Quaternion, q: Quaternion) -> Quaternion {
        // index 0 = 1, 1 = i, 2 = j, 3 = k
        const TABLE: [[(f64, usize); 4]; 4] = [
            [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
            [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
            [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
            [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
        ];
        let (ps, qs) = (p.to_array(), q.to_array());
        let mut out = [0.0; 4];
        for r in 0..4 {
            for s in 0..4 {
                let (sign, k) = TABLE[r][s];
                out[k] += sign * ps[r] * qs[s];
            }
        }
        Q(out[0], out[1], out[2], out[3])
    }

    #[test]
    fn hamilton_rules() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(i * j * k, -Quaternion::ONE);
    }

    #[test]
    fn product_matches_table_expansion() {
        let expected = table_product(Q(1., 2., 3., 4.), Q(5., 6., 7., 8.));
        assert_eq!(expected, Q(-60., 12., 30., 24.));
        assert_eq!(Q(1., 2., 3., 4.) * Q(5., 6., 7., 8.), expected);
    }

    #[test]
    fn norm_identity() {
        let q = Q(1., -2., 0.5, 3.);
        let p = q * q.conj();
        assert_eq!(p, Q(q.norm_sqr(), 0., 0., 0.));
    }

    #[test]
    fn involutions_match_definition() {
        let q = Q(1., 2., 3., 4.);
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(q.involution_i(), -(i * q * i));
        assert_eq!(q.involution_j(), -(j * q * j));
        assert_eq!(q.involution_k(), -(k * q * k));
    }

    #[test]
    fn random_products_match_table() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let mut q = || {
                Q(
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(-5.0..5.0),
                )
            };
            let (p, r) = (q(), q());
            assert!((p * r).approx_eq(table_product(p, r), 1e-12));
        }
    }
}
