//! Shared numerical kernels: quadrature, ODE integration, root finding and
//! small least-squares fits.

pub mod lsq;
pub mod ode;
pub mod quad;
pub mod roots;

pub use statrs::function::gamma::{gamma, ln_gamma};
