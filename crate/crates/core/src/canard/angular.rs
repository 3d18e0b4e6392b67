//! Canard value for the angular slow curve: matches `V' = TV + V^2 + D`
//! solutions across the corner for `±eps`.

use crate::canard::tail_fixed_point;
use crate::error::{Error, Result};
use crate::numeric::ode::{ode_solve, OdeOptions, Termination};
use crate::numeric::roots::{find_bracket, secant_bracketed};
use crate::series::tail::AsymTail;

#[derive(Debug, Clone, Copy)]
pub struct AngularOptions {
    pub t_far: f64,
    pub tail_depth: usize,
    pub ode_tol: f64,
    pub tol: f64,
}

impl Default for AngularOptions {
    fn default() -> Self {
        Self { t_far: 10.0, tail_depth: 16, ode_tol: 1e-13, tol: 1e-14 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AngularResult {
    pub eps: f64,
    pub c: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Formal solution `V = T^{-1}(V' - V^2 - D)` at `+∞`.
fn anchor_tail(d: f64, depth: usize) -> AsymTail<f64> {
    tail_fixed_point(depth, |v| {
        let mut c = v.derivative().sub(&v.mul(v)).padded(depth);
        c.insert(0, -d);
        AsymTail::exact(c)
    })
}

/// `V_D(0)` for the solution with `V ~ -D/T` at `+∞`.
pub fn v_at_zero(d: f64, opts: &AngularOptions) -> Result<f64> {
    let t0 = opts.t_far;
    let v0 = anchor_tail(d, opts.tail_depth).eval_optimal(t0).0;
    let tr = ode_solve(|t, v: &[f64; 1]| [t * v[0] + v[0] * v[0] + d], t0, 0.0, [v0], OdeOptions::tol(opts.ode_tol))?;
    if tr.status == Termination::Blowup {
        return Err(Error::Blowup { t: tr.last_t() });
    }
    Ok(tr.last()[0])
}

/// `d + d^2 = eps` and `γ = (1 + 2d)^{1/2}`.
fn scaling(eps: f64) -> Result<(f64, f64)> {
    if eps <= -0.25 {
        return Err(Error::Domain { x: eps, lo: -0.25, hi: f64::INFINITY });
    }
    let root = (1.0 + 4.0 * eps).sqrt();
    Ok(((root - 1.0) / 2.0, root.sqrt()))
}

/// Solves `γ(ε) V(0, (c - d(ε))/γ(ε)^2) + γ(-ε) V(0, (c - d(-ε))/γ(-ε)^2) = 0` for `c`.
pub fn angular_canard_value(eps: f64, opts: &AngularOptions) -> Result<AngularResult> {
    if eps == 0.0 {
        return Ok(AngularResult { eps, c: 0.0, iterations: 0, residual: 0.0 });
    }
    let (dp, gp) = scaling(eps)?;
    let (dm, gm) = scaling(-eps)?;
    let f = |c: f64| -> Result<f64> { Ok(gp * v_at_zero((c - dp) / (gp * gp), opts)? + gm * v_at_zero((c - dm) / (gm * gm), opts)?) };
    let (a, b) = find_bracket(f, 0.0, 4.0 * eps * eps, 40)?;
    let r = secant_bracketed(f, a, b, opts.tol, 200)?;
    Ok(AngularResult { eps, c: r.root, iterations: r.iterations, residual: r.residual })
}
