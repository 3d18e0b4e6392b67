//! Combined asymptotic expansions `Σ (a_n(x) + g_n(x/η)) η^n` for singularly
//! perturbed equations with a turning point: series algebra, the special
//! functions of the inner equation, formal solutions, validation against
//! quadrature, Gevrey fits, canard values and resonance checks.

pub mod canard;
pub mod error;
pub mod gevrey;
pub mod numeric;
pub mod resonance;
pub mod scalar;
pub mod series;
pub mod special;
pub mod turning_point;
pub mod validation;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use series::{CombinedSeries, Sign};
