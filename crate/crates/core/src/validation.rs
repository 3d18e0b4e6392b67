//! Numeric ground truth and fits: bounded solutions of linear equations by
//! quadrature, error-scaling tables and exponential-smallness fits.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::numeric::lsq::line_fit;
use crate::numeric::quad::{integrate_pieces, QuadOptions};
use crate::scalar::Scalar;
use crate::series::combined::{evaluate_partial_sum, CombinedSeries};
use crate::series::expr::Sign;
use crate::series::poly::TaylorPoly;
use crate::special::EXP_CAP;

pub use crate::numeric::ode::{ode_solve, ode_solve_until, OdeOptions, Termination, Trajectory};

/// Sup-errors below this are float noise and carry no slope.
pub const NOISE_FLOOR: f64 = 1e-10;

/// `y^σ(x) = e^{F(x)/ε} ∫_{σ∞}^x e^{-F(t)/ε} g(t) dt`, the solution of
/// `εy' = F'(x) y + ε g` that stays bounded on the σ side.
pub fn bounded_solution_quadrature(f: &TaylorPoly<f64>, g: impl Fn(f64) -> f64, eps: f64, x: f64, sigma: Sign) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Invalid(format!("eps must be positive, got {eps}")));
    }
    let s = sigma.value();
    let coercive = match f.degree() {
        Some(d) if d >= 1 => f.coeff(d) * s.powi(d as i32) > 0.0,
        _ => false,
    };
    if !coercive {
        return Err(Error::Invalid(format!("F does not grow to +inf on the {sigma} side")));
    }
    let fx = f.eval(x);
    let df = f.derivative();
    let min_on = |a: f64, b: f64, k: usize| (0..=k).map(|i| f.eval(a + (b - a) * i as f64 / k as f64)).fold(f64::INFINITY, f64::min);
    let mut width = x.abs().max(1.0);
    let mut end = x + s * width;
    for _ in 0..64 {
        let fe = f.eval(end);
        if s * df.eval(end) > 0.0 && (fe - fx) / eps > 80.0 && (fe - min_on(end, x, 256)) / eps > 80.0 {
            break;
        }
        width *= 1.5;
        end = x + s * width;
    }
    let lo = min_on(end, x, 1024);
    if (fx - lo) / eps > EXP_CAP {
        return Err(Error::Overflow((fx - lo) / eps));
    }
    let bad: RefCell<Option<f64>> = RefCell::new(None);
    let integrand = |t: f64| {
        let v = ((fx - f.eval(t)) / eps).exp() * g(t);
        if !v.is_finite() {
            bad.borrow_mut().get_or_insert(t);
            return 0.0;
        }
        v
    };
    let pieces = 32;
    let points: Vec<f64> = (0..=pieces).map(|i| end + (x - end) * i as f64 / pieces as f64).collect();
    let r = integrate_pieces(integrand, &points, QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 20_000 })?;
    if let Some(t) = bad.into_inner() {
        return Err(Error::Domain { x: t, lo: end.min(x), hi: end.max(x) });
    }
    Ok(r.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub eps: f64,
    pub eta: f64,
    pub sup_error: f64,
    /// Grid point where the sup is attained.
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    /// Number of series terms summed.
    pub terms: usize,
    pub rows: Vec<ErrorRow>,
    /// Slope of `log sup_error` against `log η`; `None` when degenerate.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Every error is float noise: the partial sum is exact.
    pub degenerate: bool,
}

impl ErrorTable {
    pub fn passes(&self, tol: f64) -> bool {
        self.slope.is_some_and(|s| s >= self.terms as f64 - tol)
    }
}

/// Sup-norm errors of the `terms`-term partial sum against `truth(x, eps)`.
pub fn error_scaling<S: Scalar>(
    series: &CombinedSeries<S>,
    truth: impl Fn(f64, f64) -> Result<f64>,
    eps_list: &[f64],
    x_grid: &[f64],
    terms: usize,
) -> Result<ErrorTable> {
    if eps_list.len() < 3 {
        return Err(Error::Invalid("error scaling needs at least 3 eps values".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) || eps_list.iter().any(|e| *e <= 0.0) {
        return Err(Error::Invalid("eps values must be positive and strictly decreasing".into()));
    }
    if x_grid.is_empty() {
        return Err(Error::Invalid("empty x grid".into()));
    }
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let eta = eps.powf(1.0 / series.p as f64);
        let mut row = ErrorRow { eps, eta, sup_error: 0.0, x: x_grid[0] };
        for &x in x_grid {
            let e = (evaluate_partial_sum(series, x, eta, terms)? - truth(x, eps)?).abs();
            if e > row.sup_error {
                row.sup_error = e;
                row.x = x;
            }
        }
        rows.push(row);
    }
    let degenerate = rows.iter().all(|r| r.sup_error < NOISE_FLOOR);
    let (slope, intercept) = if degenerate || rows.iter().any(|r| r.sup_error <= 0.0) {
        (None, None)
    } else {
        let lx: Vec<f64> = rows.iter().map(|r| r.eta.ln()).collect();
        let ly: Vec<f64> = rows.iter().map(|r| r.sup_error.ln()).collect();
        let fit = line_fit(&lx, &ly)?;
        (Some(fit.params[1]), Some(fit.params[0]))
    };
    Ok(ErrorTable { terms, rows, slope, intercept, degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    pub a: f64,
    pub c: f64,
    /// RMS of the log-linear fit.
    pub residual: f64,
    pub exponentially_small: bool,
}

/// Fits `|diff| ≈ C e^{-A/eps}`, i.e. `C e^{-A/η^p}`, to `(eps, |diff|)` pairs.
pub fn exp_smallness_fit(values: &[(f64, f64)]) -> Result<ExpFit> {
    if values.len() < 2 {
        return Err(Error::Invalid("need at least two points".into()));
    }
    if values.iter().any(|(e, d)| *e <= 0.0 || *d <= 0.0) {
        return Err(Error::Invalid("eps and differences must be positive".into()));
    }
    let x: Vec<f64> = values.iter().map(|(e, _)| 1.0 / e).collect();
    let y: Vec<f64> = values.iter().map(|(_, d)| d.ln()).collect();
    let fit = line_fit(&x, &y)?;
    let a = -fit.params[1];
    Ok(ExpFit { a, c: fit.params[0].exp(), residual: fit.rms, exponentially_small: a > 1e-8 })
}
