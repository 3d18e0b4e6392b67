//! Gevrey order-`1/p` type estimates from coefficient norms and truncated
//! Borel–Laplace summation.

use crate::error::{Error, Result};
use crate::numeric::lsq::{least_squares, line_fit};
use crate::numeric::quad::{integrate, QuadOptions};
use crate::numeric::{gamma, ln_gamma};

/// Mean second difference below this marks decay faster than Gevrey `1/p`.
pub const SUB_GEVREY_CURVATURE: f64 = -0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevreyFit {
    pub inv_order: f64,
    pub c: f64,
    pub l1: f64,
    /// RMS of the log-linear fit.
    pub residual: f64,
    /// Normalized log-norms bend downwards: the series is better than Gevrey `1/p`.
    pub sub_gevrey: bool,
    /// Nonzero norms used.
    pub used: usize,
}

/// Fits `‖a_n‖ ≈ C L_1^n Γ(n/p + 1)`; zero norms are skipped.
pub fn gevrey_fit(norms: &[f64], p: u32) -> Result<GevreyFit> {
    if norms.len() < 6 {
        return Err(Error::Invalid(format!("gevrey fit needs at least 6 norms, got {}", norms.len())));
    }
    if p == 0 {
        return Err(Error::Invalid("p must be positive".into()));
    }
    if norms.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Invalid("norms must be finite and nonnegative".into()));
    }
    let pts: Vec<(f64, f64)> = norms
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(n, v)| (n as f64, v.ln() - ln_gamma(n as f64 / p as f64 + 1.0)))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate("fewer than two nonzero norms".into()));
    }
    let x: Vec<f64> = pts.iter().map(|t| t.0).collect();
    let y: Vec<f64> = pts.iter().map(|t| t.1).collect();
    let fit = line_fit(&x, &y)?;
    let curvature = mean_second_difference(&pts);
    Ok(GevreyFit {
        inv_order: 1.0 / p as f64,
        c: fit.params[0].exp(),
        l1: fit.params[1].exp(),
        residual: fit.rms,
        sub_gevrey: curvature < SUB_GEVREY_CURVATURE,
        used: pts.len(),
    })
}

/// Mean of the second divided differences of the points.
fn mean_second_difference(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let d: Vec<f64> = pts
        .windows(3)
        .map(|w| {
            let s1 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let s2 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            2.0 * (s2 - s1) / (w[2].0 - w[0].0)
        })
        .collect();
    d.iter().sum::<f64>() / d.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCompat {
    pub c: f64,
    pub l1: f64,
    pub l2: f64,
    pub residual: f64,
    /// `max |g_{nm}| / (C L_1^n L_2^m Γ((n+m)/p + 1))`.
    pub max_violation_ratio: f64,
    /// `C` scaled so every entry obeys the bound.
    pub admissible_c: f64,
}

/// Fits `|g_{nm}| ≈ C L_1^n L_2^m Γ((n+m)/p + 1)`; `tails[n][m-1] = g_{nm}`.
/// With a single nonzero row `L_1` is not identifiable and is set to 1.
pub fn tail_compat_check(tails: &[Vec<f64>], p: u32) -> Result<TailCompat> {
    let weight = |n: usize, m: usize| ln_gamma((n + m) as f64 / p as f64 + 1.0);
    let pts: Vec<(usize, usize, f64)> = tails
        .iter()
        .enumerate()
        .flat_map(|(n, row)| row.iter().enumerate().map(move |(j, g)| (n, j + 1, g.abs())))
        .filter(|t| t.2 > 0.0)
        .map(|(n, m, g)| (n, m, g.ln() - weight(n, m)))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Degenerate("fewer than two nonzero tail coefficients".into()));
    }
    let rows_used = {
        let mut ns: Vec<usize> = pts.iter().map(|t| t.0).collect();
        ns.dedup();
        ns.len()
    };
    let y: Vec<f64> = pts.iter().map(|t| t.2).collect();
    let (c, l1, l2, residual) = if rows_used == 1 {
        let x: Vec<f64> = pts.iter().map(|t| t.1 as f64).collect();
        let fit = line_fit(&x, &y)?;
        (fit.params[0].exp(), 1.0, fit.params[1].exp(), fit.rms)
    } else {
        let rows: Vec<Vec<f64>> = pts.iter().map(|t| vec![1.0, t.0 as f64, t.1 as f64]).collect();
        let fit = least_squares(&rows, &y)?;
        (fit.params[0].exp(), fit.params[1].exp(), fit.params[2].exp(), fit.rms)
    };
    let max_violation_ratio = pts.iter().map(|&(n, m, v)| (v - c.ln() - n as f64 * l1.ln() - m as f64 * l2.ln()).exp()).fold(0.0, f64::max);
    Ok(TailCompat { c, l1, l2, residual, max_violation_ratio, admissible_c: c * max_violation_ratio.max(1.0) })
}

/// `Σ_{n<k} a_n η^n` truncated before the smallest term; returns `(sum, least term)`.
pub fn least_term_sum(coeffs: &[f64], eta: f64) -> (f64, f64) {
    let mut best = (0, f64::INFINITY);
    for (n, a) in coeffs.iter().enumerate() {
        let t = (a * eta.powi(n as i32)).abs();
        if *a != 0.0 && t < best.1 {
            best = (n, t);
        }
    }
    let sum = coeffs.iter().take(best.0).enumerate().map(|(n, a)| a * eta.powi(n as i32)).sum();
    (sum, best.1)
}

/// `η^{-p} ∫_0^ρ e^{-t^p/η^p} B(t) d(t^p)` with `B(t) = Σ a_n t^n / Γ(n/p + 1)`.
pub fn borel_laplace_truncated(coeffs: &[f64], p: u32, rho: f64, eta: f64) -> Result<f64> {
    if p < 2 {
        return Err(Error::Invalid("borel-laplace summation needs p >= 2".into()));
    }
    if rho <= 0.0 || eta <= 0.0 {
        return Err(Error::Invalid("rho and eta must be positive".into()));
    }
    let norms: Vec<f64> = coeffs.iter().map(|a| a.abs()).collect();
    if norms.iter().filter(|v| **v > 0.0).count() >= 6 {
        let fit = gevrey_fit(&norms, p)?;
        if !fit.sub_gevrey && rho * fit.l1 >= 1.0 {
            return Err(Error::Invalid(format!("rho {rho} reaches the Borel radius estimate {}", 1.0 / fit.l1)));
        }
    }
    let pf = p as f64;
    let borel: Vec<f64> = coeffs.iter().enumerate().map(|(n, a)| a / gamma(n as f64 / pf + 1.0)).collect();
    let b = |t: f64| {
        let mut s = 0.0;
        let mut pw = 1.0;
        for c in &borel {
            let term = c * pw;
            s += term;
            if pw.abs() < 1e-300 {
                break;
            }
            pw *= t;
        }
        s
    };
    let etap = eta.powi(p as i32);
    let f = |t: f64| (-t.powi(p as i32) / etap).exp() * b(t) * pf * t.powi(p as i32 - 1) / etap;
    let r = integrate(f, 0.0, rho, QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 20_000 })?;
    Ok(r.value)
}
