//! Connection constant of `Y' = Y(Y - X)(Y + X) + c`.

use crate::canard::tail_fixed_point;
use crate::error::{Error, Result};
use crate::numeric::ode::{ode_solve_until, OdeOptions, Termination};
use crate::numeric::roots::bisect_predicate;
use crate::series::tail::AsymTail;

/// Branch of the slow set the solution from `-∞` is connected to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `Y ~ X` as `X → +∞`.
    Upper,
    /// `Y ~ -X`.
    Lower,
}

#[derive(Debug, Clone, Copy)]
pub struct UnionJackOptions {
    pub tol: f64,
    pub x_far: f64,
    pub tail_depth: usize,
    pub ode_tol: f64,
}

impl Default for UnionJackOptions {
    fn default() -> Self {
        Self { tol: 1e-10, x_far: 10.0, tail_depth: 16, ode_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UnionJackResult {
    pub c0: f64,
    pub iterations: usize,
    /// `|Y' - rhs|` of the tail anchor at `-x_far`.
    pub anchor_residual: f64,
}

fn rhs(x: f64, y: f64, c: f64) -> f64 {
    y * (y - x) * (y + x) + c
}

/// Formal solution `Y = X^{-2}(c + Y^3 - Y')` at `-∞`.
pub fn anchor_tail(c: f64, depth: usize) -> AsymTail<f64> {
    tail_fixed_point(depth, |y| {
        let cube = y.mul(y).mul(y);
        let mut inner = cube.sub(&y.derivative()).padded(depth);
        inner.insert(0, c);
        inner.insert(0, 0.0);
        AsymTail::exact(inner)
    })
}

/// Above/below classification of the trajectory with control `c`.
fn exits_above(c: f64, branch: Branch, opts: &UnionJackOptions) -> Result<bool> {
    let x0 = -opts.x_far;
    let y0 = anchor_tail(c, opts.tail_depth).eval_optimal(x0).0;
    let s = match branch {
        Branch::Upper => 1.0,
        Branch::Lower => -1.0,
    };
    // mirror Y -> -Y so the target branch is always Y ~ X
    let ode = OdeOptions { blowup_cap: 1e6, ..OdeOptions::tol(opts.ode_tol) };
    let tr = ode_solve_until(
        |x, y: &[f64; 1]| [s * rhs(x, s * y[0], c)],
        x0,
        opts.x_far,
        [s * y0],
        ode,
        |x, y| y[0] > x.abs() + 1.0 || y[0] < -1.0,
    )?;
    let (x, y) = (tr.last_t(), tr.last()[0]);
    Ok(match tr.status {
        Termination::Completed => false,
        Termination::Blowup => y > 0.0,
        Termination::Stopped => y > x.abs() + 1.0,
    })
}

/// Control value for which the solution decaying at `-∞` follows the chosen
/// branch; bisection on `[0, 1]` (`[-1, 0]` for the lower branch).
pub fn union_jack_c0(branch: Branch, opts: &UnionJackOptions) -> Result<UnionJackResult> {
    if opts.tol < 1e-10 {
        return Err(Error::Invalid(format!("tolerance {} below 1e-10", opts.tol)));
    }
    let s = match branch {
        Branch::Upper => 1.0,
        Branch::Lower => -1.0,
    };
    // in mirrored variables the control is s·c
    let above = |cm: f64| exits_above(cm, branch, opts);
    let (lo, hi) = (0.0, 1.0);
    let (alo, ahi) = (above(s * lo)?, above(s * hi)?);
    if alo || !ahi {
        let sign = |b: bool| if b { 1.0 } else { -1.0 };
        return Err(Error::NotBracketed { a: s * lo, fa: sign(alo), b: s * hi, fb: sign(ahi) });
    }
    let (c, iterations) = bisect_predicate(|t| above(s * t), lo, hi, opts.tol, 200)?;
    let c0 = s * c;
    let tail = anchor_tail(c0, opts.tail_depth);
    let x0 = -opts.x_far;
    let y = tail.eval_optimal(x0).0;
    let anchor_residual = (tail.derivative().eval_optimal(x0).0 - rhs(x0, y, c0)).abs();
    Ok(UnionJackResult { c0, iterations, anchor_residual })
}
