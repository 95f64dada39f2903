//! Numerical trinion gradients.
//!
//! For `x = x_a + ıx_b + ȷx_c` the gradients with respect to `x` and `x*` are
//!
//! ```text
//! ∇_x  f = (∇_{x_a} f − ȷ ∇_{x_b} f − ı ∇_{x_c} f) / 3
//! ∇_x* f = (∇_{x_a} f + ı ∇_{x_b} f + ȷ ∇_{x_c} f) / 3
//! ```
//!
//! The component gradients are estimated by central differences. These are
//! test instruments for checking closed-form gradients, not a production
//! differentiation engine.

use thiserror::Error;

use super::Trinion;

/// Default relative finite-difference step.
pub const DEFAULT_REL_STEP: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum GradientError {
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("degenerate probe point: non-finite function value at element {index}, component {component}")]
    NonFinite { index: usize, component: usize },
}

/// Which variable the gradient is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wrt {
    Plain,
    Conjugate,
}

/// Real component gradients `(∇_{x_a} f, ∇_{x_b} f, ∇_{x_c} f)` for each
/// element of `x`. `f` may be trinion-valued; real-valued functions return a
/// real trinion.
pub fn component_gradients<F>(
    f: F,
    x: &[Trinion],
    rel_step: f64,
) -> Result<Vec<[Trinion; 3]>, GradientError>
where
    F: Fn(&[Trinion]) -> Trinion,
{
    if !(rel_step > 0.0 && rel_step.is_finite()) {
        return Err(GradientError::InvalidStep(rel_step));
    }
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for index in 0..x.len() {
        let mut grads = [Trinion::ZERO; 3];
        for (component, grad) in grads.iter_mut().enumerate() {
            let base = x[index].to_array();
            let h = rel_step * base[component].abs().max(1.0);

            let mut shifted = base;
            shifted[component] = base[component] + h;
            probe[index] = Trinion::from_array(shifted);
            let up = f(&probe);
            shifted[component] = base[component] - h;
            probe[index] = Trinion::from_array(shifted);
            let down = f(&probe);
            probe[index] = x[index];

            if !(up.is_finite() && down.is_finite()) {
                return Err(GradientError::NonFinite { index, component });
            }
            *grad = (up - down).scale(0.5 / h);
        }
        out.push(grads);
    }
    Ok(out)
}

/// Combines component gradients into `∇_x f` or `∇_x* f`.
pub fn combine(parts: [Trinion; 3], wrt: Wrt) -> Trinion {
    let [ga, gb, gc] = parts;
    let combined = match wrt {
        Wrt::Plain => ga - Trinion::J * gb - Trinion::I * gc,
        Wrt::Conjugate => ga + Trinion::I * gb + Trinion::J * gc,
    };
    combined.scale(1.0 / 3.0)
}

/// `∇_x f` by central differences.
pub fn tri_grad<F>(f: F, x: &[Trinion], rel_step: f64) -> Result<Vec<Trinion>, GradientError>
where
    F: Fn(&[Trinion]) -> Trinion,
{
    Ok(component_gradients(f, x, rel_step)?
        .into_iter()
        .map(|p| combine(p, Wrt::Plain))
        .collect())
}

/// `∇_x* f` by central differences.
pub fn tri_grad_conj<F>(f: F, x: &[Trinion], rel_step: f64) -> Result<Vec<Trinion>, GradientError>
where
    F: Fn(&[Trinion]) -> Trinion,
{
    Ok(component_gradients(f, x, rel_step)?
        .into_iter()
        .map(|p| combine(p, Wrt::Conjugate))
        .collect())
}
