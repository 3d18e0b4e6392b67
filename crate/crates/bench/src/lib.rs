//! Shared fixtures for the kernel benchmarks.

use cae_core::series::{AsymTail, CombinedSeries, FastFn, TaylorPoly};
use cae_core::turning_point::{OdeSpec, Term};
use cae_core::{Rational, Scalar, Sign};

/// Dense float series of the given order with slow degree 3 and tails of depth 12.
pub fn dense_series(p: u32, order: usize) -> CombinedSeries<f64> {
    let slow = (0..order).map(|n| TaylorPoly::new((0..4).map(|i| 1.0 / (1 + n + i) as f64).collect())).collect();
    let fast = (0..order)
        .map(|n| FastFn::from_tail(AsymTail::new((1..=12usize).map(|m| (-1f64).powi(m as i32) / (n + m) as f64).collect())))
        .collect();
    CombinedSeries::new(p, Sign::Minus, slow, fast).expect("matching lengths")
}

/// `εy' = 2xy + ε(1 + x)`.
pub fn example_one() -> OdeSpec {
    OdeSpec::forced(2, &TaylorPoly::new(vec![Rational::from_i64(1), Rational::from_i64(1)])).expect("valid spec")
}

/// `εy' = 4x^3 y - 4ε - xy^2`.
pub fn obstructed() -> OdeSpec {
    let q = Rational::from_i64;
    OdeSpec::new(4, vec![Term { j: 0, k: 0, l: 1, c: q(-4) }, Term { j: 1, k: 2, l: 0, c: q(-1) }], 1, false).expect("valid spec")
}
