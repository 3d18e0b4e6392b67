//! Control series `α(η)` for which every inner coefficient stays bounded on
//! both sides of the turning point.

use std::cell::RefCell;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::quad::{integrate_pieces, QuadOptions};
use crate::scalar::{Rational, Scalar};
use crate::series::expr::{Expr, Sign};
use crate::series::poly::TaylorPoly;
use crate::special::formal::formal_solve;
use crate::special::gauss_moment;
use crate::special::ray::{RayFn, RayOptions};
use crate::turning_point::inner::{forcing, graded_terms};
use crate::turning_point::ring::{Numeric, Ring};
use crate::turning_point::spec::OdeSpec;

#[derive(Debug, Clone)]
pub struct ControlReport {
    /// `alpha[n]` multiplies `η^n`, `ε = η^p`.
    pub alpha: Vec<f64>,
    /// `∫ e^{-s^p} G_n(s) ds` after the control is applied.
    pub residuals: Vec<f64>,
}

/// `∫_{-L}^{L} e^{-s^p} f(s) ds` with `L^p = 50`.
fn weighted_integral(p: u32, f: &Expr) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let l = 50f64.powf(1.0 / p as f64);
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let g = |s: f64| match f.eval(s) {
        Ok(v) => (-s.powi(p as i32)).exp() * v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_panels: 20_000 };
    let r = integrate_pieces(g, &[-l, -1.0, 0.0, 1.0, l], opts)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(r.value)
}

/// The solution of `W' = p X^{p-1} W + G` of polynomial growth at both ends.
fn two_sided(p: u32, g: &Numeric, opts: &RayOptions) -> Result<Numeric> {
    if g.is_zero() {
        return Ok(Numeric::zero());
    }
    let tail = formal_solve(p, &[(0, g.formal.clone())], opts.depth)?;
    let side = |sigma| -> Result<Expr> {
        let ray = RayFn::solve(p, sigma, vec![(0, g.expr.clone())], tail.clone(), opts)?;
        Ok(Expr::Ray(Arc::new(ray)))
    };
    Ok(Numeric { formal: tail.clone(), expr: Expr::sided(side(Sign::Minus)?, side(Sign::Plus)?) })
}

/// `α_n = -∫ e^{-s^p} G_n^{known}(s) ds / ∫ e^{-s^p} ds` for `n < count`.
pub fn canard_control_series(spec: &OdeSpec, count: usize, opts: &RayOptions) -> Result<ControlReport> {
    if !spec.control {
        return Err(Error::Invalid("spec has no control parameter".into()));
    }
    if spec.has_nonlinear_reduced()? {
        return Err(Error::Invalid("control series needs a linear reduced inner equation".into()));
    }
    let p = spec.p;
    let graded = graded_terms(spec)?;
    let m0 = gauss_moment(p, 0, 1.0);
    let mut w: Vec<Numeric> = Vec::with_capacity(count);
    let mut alpha = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for n in 0..count {
        let known: Numeric = forcing(&graded, &w, n)?;
        let a = -weighted_integral(p, &known.expr)? / m0;
        let a = if a.abs() < 1e-15 { 0.0 } else { a };
        let g = known.add(&Numeric::constant(&Rational::from_f64(a)));
        residuals.push(weighted_integral(p, &g.expr)?);
        alpha.push(a);
        w.push(two_sided(p, &g, opts)?);
    }
    Ok(ControlReport { alpha, residuals })
}

/// η-indexed control coefficients for `εy' = p x^{p-1} y + ε(g(x) + α)`.
pub fn control_alpha(p: u32, g: &TaylorPoly<f64>, count: usize) -> Result<Vec<f64>> {
    let g = g.map(|c| Rational::from_f64(*c));
    let spec = OdeSpec::controlled(p, &g)?;
    Ok(canard_control_series(&spec, count, &RayOptions::default())?.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gamma;

    #[test]
    fn quadratic_forcing() {
        let a = control_alpha(2, &TaylorPoly::from_f64s(&[0.0, 0.0, 1.0]), 5).unwrap();
        let want = [0.0, 0.0, -0.5, 0.0, 0.0];
        for (x, y) in a.iter().zip(want) {
            assert!((x - y).abs() < 1e-12, "{a:?}");
        }
    }

    #[test]
    fn quartic_turning_point() {
        let a = control_alpha(4, &TaylorPoly::from_f64s(&[0.0, 3.0, 3.0]), 4).unwrap();
        let want = -3.0 * gamma(0.75) / gamma(0.25);
        assert!((a[2] - want).abs() < 1e-10, "{a:?}");
        assert!(a[0].abs() < 1e-14 && a[1].abs() < 1e-14 && a[3].abs() < 1e-12);
    }

    #[test]
    fn odd_forcing_needs_no_control() {
        let a = control_alpha(2, &TaylorPoly::from_f64s(&[0.0, 1.0, 0.0, -2.0]), 5).unwrap();
        assert!(a.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn nonlinear_coupling() {
        // εy' = 2xy + ε(x^2 + x + α) + ε y^2: W_1 = -1/2 feeds W_1^2 into order 4
        let g = TaylorPoly::new(vec![Rational::from_i64(0), Rational::from_i64(1), Rational::from_i64(1)]);
        let mut spec = OdeSpec::controlled(2, &g).unwrap();
        spec.terms.push(crate::turning_point::spec::Term { j: 0, k: 2, l: 1, c: Rational::from_i64(1) });
        let spec = OdeSpec::new(2, spec.terms, 1, true).unwrap();
        let r = canard_control_series(&spec, 5, &RayOptions::default()).unwrap();
        assert!(r.residuals.iter().all(|v| v.abs() < 1e-10), "{:?}", r.residuals);
        assert!((r.alpha[2] + 0.5).abs() < 1e-10);
        assert!((r.alpha[4] + 0.25).abs() < 1e-9, "{:?}", r.alpha);
    }
}
