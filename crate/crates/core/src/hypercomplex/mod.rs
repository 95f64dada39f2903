//! Trinion and quaternion scalar algebra.

pub mod gradient;
mod quaternion;
mod trinion;

pub use quaternion::Quaternion;
pub use trinion::{dot, Trinion};
