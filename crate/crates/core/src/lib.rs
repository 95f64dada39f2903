//! Trinion algebra and trinion-valued adaptive LMS prediction.
//!
//! Trinions are 3-D hypercomplex numbers `a + ıb + ȷc` forming a commutative
//! ring. A 3-D wind vector fits a single trinion, so trinion filters predict
//! wind profiles with fewer real operations than quaternion filters that
//! carry a redundant real part.
//!
//! * [`hypercomplex`]: trinion and quaternion algebra, numerical gradients
//! * [`filters`]: TLMS, ATLMS, QLMS and AQLMS predictors over a delay line
//! * [`stats`]: augmented covariances and their recovery map
//! * [`data`]: CSV series and synthetic generators
//! * [`bench`]: op-count audits and timing
//! * [`experiment`]: multi-trial runs, learning curves and CSV outputs

pub mod bench;
pub mod cli;
pub mod data;
pub mod experiment;
pub mod filters;
pub mod hypercomplex;
pub mod parallel;
pub mod stats;

pub use filters::{Algorithm, FilterConfig, LmsFilter, PredictionRecord};
pub use hypercomplex::{Quaternion, Trinion};
