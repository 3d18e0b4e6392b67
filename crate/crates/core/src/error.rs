use thiserror::Error;

/// Errors raised by the series algebra and the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mismatched root power: {0} vs {1}")]
    RootPowerMismatch(u32, u32),

    #[error("fast part at order 0 is nonzero; series is not differentiable")]
    NonDifferentiable,

    #[error("series has valuation 0; left composition needs valuation >= 1")]
    ZeroValuation,

    #[error("tail of fast coefficient {order} is known only to depth {depth}, need {needed}")]
    InsufficientTailDepth { order: usize, depth: usize, needed: usize },

    #[error("fast coefficient {order} has residue {residue} but no evaluator")]
    MissingEvaluator { order: usize, residue: f64 },

    #[error("index {index} out of range for truncation order {order}")]
    OutOfRange { index: usize, order: usize },

    #[error("incompatible matching data at (n, m) = ({n}, {m}): outer {outer}, inner {inner}")]
    Incompatible { n: usize, m: i64, outer: f64, inner: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("argument {x} outside evaluator domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("exponent {0} exceeds overflow cap")]
    Overflow(f64),

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("solution blew up at t = {t}")]
    Blowup { t: f64 },

    #[error("root not bracketed: f({a}) = {fa}, f({b}) = {fb}")]
    NotBracketed { a: f64, fa: f64, b: f64, fb: f64 },

    #[error("quadrature did not converge: estimated error {0}")]
    Quadrature(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
