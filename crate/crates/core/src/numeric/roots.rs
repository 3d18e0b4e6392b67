//! Scalar root finding: plain bisection on a predicate and a bracketed
//! secant/bisection hybrid.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub root: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Bisects on a monotone classifier: `above(a) == false`, `above(b) == true`.
pub fn bisect_predicate<P>(mut above: P, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Result<(f64, usize)>
where
    P: FnMut(f64) -> Result<bool>,
{
    let mut it = 0;
    while (b - a).abs() > tol && it < max_iter {
        let m = 0.5 * (a + b);
        if above(m)? {
            b = m;
        } else {
            a = m;
        }
        it += 1;
    }
    Ok((0.5 * (a + b), it))
}

/// Safeguarded secant (Illinois) iteration inside a sign-changing bracket.
pub fn secant_bracketed<F>(mut f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(RootResult { root: a, iterations: 0, residual: 0.0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, iterations: 0, residual: 0.0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed { a, fa, b, fb });
    }
    let mut side = 0i8;
    for it in 1..=max_iter {
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !c.is_finite() || c <= a.min(b) || c >= a.max(b) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 || (b - a).abs() < tol {
            return Ok(RootResult { root: c, iterations: it, residual: fc.abs() });
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < tol {
            let root = if fa.abs() < fb.abs() { a } else { b };
            return Ok(RootResult { root, iterations: it, residual: fa.abs().min(fb.abs()) });
        }
    }
    let root = if fa.abs() < fb.abs() { a } else { b };
    Ok(RootResult { root, iterations: max_iter, residual: fa.abs().min(fb.abs()) })
}

/// Expands `[x0 - w, x0 + w]` geometrically until `f` changes sign.
pub fn find_bracket<F>(mut f: F, x0: f64, w: f64, max_expand: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut w = w;
    for _ in 0..max_expand {
        let (a, b) = (x0 - w, x0 + w);
        let (fa, fb) = (f(a)?, f(b)?);
        if fa.signum() != fb.signum() || fa == 0.0 || fb == 0.0 {
            return Ok((a, b));
        }
        w *= 2.0;
    }
    let (a, b) = (x0 - w, x0 + w);
    Err(Error::NotBracketed { a, fa: f(a)?, b, fb: f(b)? })
}
