//! Canard values: connection constants of reduced inner equations and
//! control series that keep inner solutions bounded on both sides.

pub mod angular;
pub mod control;
pub mod union_jack;

use crate::series::tail::AsymTail;

pub use angular::{angular_canard_value, v_at_zero, AngularOptions, AngularResult};
pub use control::{canard_control_series, control_alpha, ControlReport};
pub use union_jack::{union_jack_c0, Branch, UnionJackOptions, UnionJackResult};

/// Formal fixed point `Y = F(Y)` where `F` gains at least one order per pass.
pub(crate) fn tail_fixed_point(depth: usize, f: impl Fn(&AsymTail<f64>) -> AsymTail<f64>) -> AsymTail<f64> {
    let mut y = AsymTail::exact(Vec::new());
    for _ in 0..=depth {
        let mut c = f(&y).padded(depth);
        c.truncate(depth);
        y = AsymTail::exact(c);
    }
    y
}
