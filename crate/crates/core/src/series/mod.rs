//! Formal algebra of combined slow/fast expansions.

pub mod combined;
pub mod expr;
pub mod fast;
pub mod json;
pub mod matching;
pub mod poly;
pub mod tail;

pub use combined::{
    antiderivative, compose_left, differentiate, evaluate_partial_sum, multiply, shift_s, shift_t, CombinedSeries, LogComponent,
};
pub use expr::{Expr, Sign};
pub use fast::{BasisTerm, FastFn};
pub use matching::{extract_inner, extract_outer, reconstruct_from_matching};
pub use poly::{LaurentPoly, TaylorPoly};
pub use tail::{AsymTail, PolyTail};
