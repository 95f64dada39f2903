//! Trinions: the commutative 3-D ring `a + ıb + ȷc` with
//! `ı² = ȷ`, `ıȷ = ȷı = −1`, `ȷ² = −ı`.
//!
//! The ring is isomorphic to `R[x]/(x³ + 1)` (with `ı = x`, `ȷ = x²`), so it is
//! associative and commutative but has zero divisors: `(1 + ı)(1 − ı + ȷ) = 0`.
//! The modulus is therefore *not* multiplicative.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A trinion `a + ıb + ȷc`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Trinion {
    /// Real part.
    pub a: f64,
    /// ı-part.
    pub b: f64,
    /// ȷ-part.
    pub c: f64,
}

impl Trinion {
    pub const ZERO: Trinion = Trinion::new(0.0, 0.0, 0.0);
    pub const ONE: Trinion = Trinion::new(1.0, 0.0, 0.0);
    pub const I: Trinion = Trinion::new(0.0, 1.0, 0.0);
    pub const J: Trinion = Trinion::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Trinion { a, b, c }
    }

    #[inline]
    pub const fn real(a: f64) -> Self {
        Trinion::new(a, 0.0, 0.0)
    }

    #[inline]
    pub fn from_array(v: [f64; 3]) -> Self {
        Trinion::new(v[0], v[1], v[2])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Conjugate `a − ȷb − ıc`. Note the cross-swap of the imaginary parts.
    #[inline]
    pub fn conj(self) -> Trinion {
        Trinion::new(self.a, -self.c, -self.b)
    }

    /// Euclidean modulus of the three components.
    #[inline]
    pub fn modulus(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `|v|²`, which equals `Re(v·v*)`.
    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c
    }

    /// The ı-mapping `b − ıa − ȷc`. Not an involution.
    #[inline]
    pub fn map_i(self) -> Trinion {
        Trinion::new(self.b, -self.a, -self.c)
    }

    /// The ȷ-mapping `c − ıb − ȷa`. Not an involution.
    #[inline]
    pub fn map_j(self) -> Trinion {
        Trinion::new(self.c, -self.b, -self.a)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Trinion {
        Trinion::new(s * self.a, s * self.b, s * self.c)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    /// Largest absolute component.
    #[inline]
    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    /// Component-wise comparison with an absolute tolerance.
    pub fn approx_eq(self, o: Trinion, tol: f64) -> bool {
        (self.a - o.a).abs() <= tol && (self.b - o.b).abs() <= tol && (self.c - o.c).abs() <= tol
    }
}

impl fmt::Display for Trinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}ı {:+}ȷ)", self.a, self.b, self.c)
    }
}

impl Add for Trinion {
    type Output = Trinion;
    #[inline]
    fn add(self, o: Trinion) -> Trinion {
        Trinion::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl AddAssign for Trinion {
    #[inline]
    fn add_assign(&mut self, o: Trinion) {
        *self = *self + o;
    }
}

impl Sub for Trinion {
    type Output = Trinion;
    #[inline]
    fn sub(self, o: Trinion) -> Trinion {
        Trinion::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl SubAssign for Trinion {
    #[inline]
    fn sub_assign(&mut self, o: Trinion) {
        *self = *self - o;
    }
}

impl Neg for Trinion {
    type Output = Trinion;
    #[inline]
    fn neg(self) -> Trinion {
        Trinion::new(-self.a, -self.b, -self.c)
    }
}

impl Mul for Trinion {
    type Output = Trinion;

    /// Ring product. Costs 9 real multiplications and 6 real additions.
    #[inline]
    fn mul(self, o: Trinion) -> Trinion {
        let (a, b, c) = (self.a, self.b, self.c);
        let (d, e, f) = (o.a, o.b, o.c);
        // Grouped so that swapping the operands only swaps the operands of
        // commutative floating-point adds: the product is bitwise symmetric.
        Trinion {
            a: a * d - (b * f + c * e),
            b: (a * e + b * d) - c * f,
            c: (a * f + c * d) + b * e,
        }
    }
}

impl Mul<Trinion> for f64 {
    type Output = Trinion;
    #[inline]
    fn mul(self, v: Trinion) -> Trinion {
        v.scale(self)
    }
}

/// Plain (non-conjugating) inner product `Σ wₖ xₖ`.
pub fn dot(w: &[Trinion], x: &[Trinion]) -> Trinion {
    w.iter()
        .zip(x)
        .fold(Trinion::ZERO, |acc, (&w, &x)| acc + w * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: fn(f64, f64, f64) -> Trinion = Trinion::new;

    // Symbolic expansion over the base-element table. Each basis product is
    // looked up, not computed by the closed form.
    fn table_product(u: Trinion, v: Trinion) -> Trinion {
        // basis index 0 = 1, 1 = ı, 2 = ȷ; entry = (sign, basis)
        const TABLE: [[(f64, usize); 3]; 3] = [
            [(1.0, 0), (1.0, 1), (1.0, 2)],
            [(1.0, 1), (1.0, 2), (-1.0, 0)],
            [(1.0, 2), (-1.0, 0), (-1.0, 1)],
        ];
        let (us, vs) = (u.to_array(), v.to_array());
        let mut out = [0.0; 3];
        for p in 0..3 {
            for q in 0..3 {
                let (s, k) = TABLE[p][q];
                out[k] += s * us[p] * vs[q];
            }
        }
        Trinion::from_array(out)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(T(0., 0., 0.) + T(1., 2., 3.), T(1., 2., 3.));
        assert_eq!(T(1., 2., 3.) + T(-1., -2., -3.), T(0., 0., 0.));
        assert_eq!(T(1., 0., 1.) + T(0., 1., 0.), T(1., 1., 1.));
    }

    #[test]
    fn base_element_rules() {
        assert_eq!(Trinion::I * Trinion::I, Trinion::J);
        assert_eq!(Trinion::J * Trinion::J, T(0., -1., 0.));
        assert_eq!(Trinion::I * Trinion::J, T(-1., 0., 0.));
        assert_eq!(Trinion::J * Trinion::I, T(-1., 0., 0.));
    }

    #[test]
    fn product_matches_table_expansion() {
        let expected = table_product(T(1., 2., 3.), T(4., 5., 6.));
        assert_eq!(expected, T(-23., -5., 28.));
        assert_eq!(T(1., 2., 3.) * T(4., 5., 6.), expected);

        let zd = table_product(T(1., 1., 0.), T(1., -1., 1.));
        assert_eq!(zd, Trinion::ZERO);
        assert_eq!(T(1., 1., 0.) * T(1., -1., 1.), Trinion::ZERO);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(T(1., 2., 3.).conj(), T(1., -3., -2.));
        assert_eq!(T(5., 0., 0.).conj(), T(5., 0., 0.));
        assert_eq!(T(1., 2., 3.).conj().conj(), T(1., 2., 3.));
    }

    #[test]
    fn modulus_examples() {
        assert!((T(1., 1., 1.).modulus() - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(Trinion::ZERO.modulus(), 0.0);
        assert_eq!(T(3., 0., 4.).modulus(), 5.0);
        let v = T(1., 2., 3.);
        assert_eq!((v * v.conj()).a, v.norm_sqr());
    }

    #[test]
    fn mapping_examples() {
        let v = T(1., 2., 3.);
        assert_eq!(v.map_i(), T(2., -1., -3.));
        assert_eq!(v.map_i().map_i(), T(-1., -2., 3.));
        assert_eq!(v.map_j(), T(3., -2., -1.));
        assert_eq!(v.map_j().map_j(), T(-1., 2., -3.));
        assert_eq!(Trinion::ZERO.map_i(), Trinion::ZERO);
        assert_eq!(Trinion::ZERO.map_j(), Trinion::ZERO);
    }

    #[test]
    fn scale_examples() {
        let v = T(1., 2., 3.);
        assert_eq!(v.scale(1.0), v);
        assert_eq!(v.scale(0.0), Trinion::ZERO);
        assert_eq!(2.0 * v, T(2., 4., 6.));
    }

    #[test]
    fn dot_is_plain_transpose() {
        let w = [T(1., 0., 0.), T(0., 1., 0.)];
        let x = [T(1., 2., 3.), T(0., 1., 0.)];
        assert_eq!(dot(&w, &x), T(1., 2., 3.) + Trinion::J);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn trinion() -> impl Strategy<Value = Trinion> {
            (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b, c)| T(a, b, c))
        }

        proptest! {
            #[test]
            fn closed_form_equals_table(u in trinion(), v in trinion()) {
                prop_assert!((u * v).approx_eq(table_product(u, v), 1e-12));
            }

            #[test]
            fn commutative_exactly(u in trinion(), v in trinion()) {
                prop_assert_eq!(u * v, v * u);
            }

            #[test]
            fn maps_are_linear_bijections(u in trinion(), v in trinion(), s in -5.0..5.0f64) {
                prop_assert!((u + v.scale(s)).map_i().approx_eq(u.map_i() + v.map_i().scale(s), 1e-12));
                prop_assert!((u + v.scale(s)).map_j().approx_eq(u.map_j() + v.map_j().scale(s), 1e-12));
                // fourth power of each map is the identity
                prop_assert_eq!(u.map_i().map_i().map_i().map_i(), u);
                prop_assert_eq!(u.map_j().map_j().map_j().map_j(), u);
            }
        }
    }
}
