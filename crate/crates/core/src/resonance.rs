//! Resonance of `εz'' - f z' + g z = 0` at a turning point of order `p - 1`:
//! the integer condition on `D = β/α` and the polynomial reduced solution.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::series::poly::TaylorPoly;

/// Tolerance of the integer test on `D`.
pub const INTEGER_TOL: f64 = 1e-9;

/// Zeros of `Z_0` closer than this to a grid point exclude the point.
pub const ZERO_CLEARANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceCase {
    pub alpha: f64,
    pub beta: f64,
    pub p: u32,
}

impl ResonanceCase {
    pub fn new(alpha: f64, beta: f64, p: u32) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 || !beta.is_finite() {
            return Err(Error::Invalid(format!("need alpha > 0 and finite beta, got ({alpha}, {beta})")));
        }
        if p < 2 || !p.is_multiple_of(2) {
            return Err(Error::Invalid(format!("p must be even and >= 2, got {p}")));
        }
        Ok(Self { alpha, beta, p })
    }

    pub fn d(&self) -> f64 {
        self.beta / self.alpha
    }

    /// `D` when it is a nonnegative integer.
    pub fn integer_d(&self) -> Option<u64> {
        let d = self.d();
        let r = d.round();
        (r >= 0.0 && (d - r).abs() <= INTEGER_TOL).then_some(r as u64)
    }
}

/// `D` is a nonnegative integer with `D mod p ∈ {0, 1}`.
pub fn condition_check(case: &ResonanceCase) -> bool {
    case.integer_d().is_some_and(|d| d % case.p as u64 <= 1)
}

/// Monic polynomial solution of degree `D` of `Z'' - α X^{p-1} Z' + β X^{p-2} Z = 0`,
/// built downward by `z_j = z_{j+p} (j+p)(j+p-1) / (α (j - D))`.
pub fn z0_polynomial(case: &ResonanceCase) -> Result<TaylorPoly<Rational>> {
    let d = case.integer_d().ok_or_else(|| Error::Infeasible(format!("D = {} is not a nonnegative integer", case.d())))? as usize;
    let p = case.p as usize;
    if d % p > 1 {
        return Err(Error::Infeasible(format!("D = {d} leaves residue {} mod {p}; the recursion reaches a forced zero", d % p)));
    }
    let alpha = Rational::from_f64(case.alpha);
    let mut z = vec![Rational::from_i64(0); d + 1];
    z[d] = Rational::from_i64(1);
    let mut j = d;
    while j >= p {
        let lo = j - p;
        let num = z[j].clone() * Rational::from_i64((j * (j - 1)) as i64);
        z[lo] = num / (alpha.clone() * Rational::from_i64(lo as i64 - d as i64));
        j = lo;
    }
    Ok(TaylorPoly::new(z))
}

/// `Z'' - α X^{p-1} Z' + β X^{p-2} Z` in exact arithmetic.
pub fn reduced_residual(case: &ResonanceCase, z: &TaylorPoly<Rational>) -> TaylorPoly<Rational> {
    let p = case.p as usize;
    let alpha = Rational::from_f64(case.alpha);
    let beta = Rational::from_f64(case.beta);
    let dz = z.derivative();
    dz.derivative().sub(&dz.shift_up(p - 1).scale(&alpha)).add(&z.shift_up(p - 2).scale(&beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiCheck {
    pub max_residual: f64,
    pub used: Vec<f64>,
    pub skipped: Vec<f64>,
}

/// Real zeros of `q`, by sign changes on a fine grid refined by bisection.
fn real_zeros(q: &TaylorPoly<f64>) -> Vec<f64> {
    let Some(deg) = q.degree() else { return Vec::new() };
    let lead = q.coeff(deg).abs();
    let bound = 1.0 + (0..deg).map(|i| q.coeff(i).abs() / lead).fold(0.0, f64::max);
    let n = 20_000;
    let mut out = Vec::new();
    let mut a = -bound;
    let mut fa = q.eval(a);
    for i in 1..=n {
        let b = -bound + 2.0 * bound * i as f64 / n as f64;
        let fb = q.eval(b);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..80 {
                let m = 0.5 * (lo + hi);
                if q.eval(lo) * q.eval(m) <= 0.0 {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    out
}

/// `max |Y' - α X^{p-1} Y + β X^{p-2} + Y^2|` for `Y = Z_0'/Z_0` on grid points
/// at least `ZERO_CLEARANCE` away from the zeros of `Z_0`.
pub fn riccati_leading_check(case: &ResonanceCase, grid: &[f64]) -> Result<RiccatiCheck> {
    let z = z0_polynomial(case)?.to_f64();
    let zeros = real_zeros(&z);
    let (dz, ddz) = (z.derivative(), z.derivative().derivative());
    let p = case.p as i32;
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    let mut max_residual: f64 = 0.0;
    for &x in grid {
        if zeros.iter().any(|r| (x - r).abs() < ZERO_CLEARANCE) {
            skipped.push(x);
            continue;
        }
        let (v, d1, d2) = (z.eval(x), dz.eval(x), ddz.eval(x));
        let y = d1 / v;
        let dy = d2 / v - y * y;
        let r = dy - case.alpha * x.powi(p - 1) * y + case.beta * x.powi(p - 2) + y * y;
        max_residual = max_residual.max(r.abs());
        used.push(x);
    }
    if used.is_empty() {
        return Err(Error::Invalid("no grid point is clear of the zeros of Z0".into()));
    }
    Ok(RiccatiCheck { max_residual, used, skipped })
}

/// Parity of `Z_0`: `Some(0)` even, `Some(1)` odd.
pub fn parity(z: &TaylorPoly<Rational>) -> Option<usize> {
    let nz: Vec<usize> = z.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i % 2).collect();
    let first = *nz.first()?;
    nz.iter().all(|&r| r == first).then_some(first)
}

/// `Z_0` coefficients as decimals.
pub fn z0_f64(z: &TaylorPoly<Rational>) -> Vec<f64> {
    z.to_f64().coeffs().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(a: f64, b: f64, p: u32) -> ResonanceCase {
        ResonanceCase::new(a, b, p).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn truth_table() {
        assert!(condition_check(&case(1.0, 2.0, 2)));
        assert!(condition_check(&case(1.0, 3.0, 2)));
        assert!(!condition_check(&case(1.0, 2.0, 4)));
        assert!(!condition_check(&case(1.0, 2.5, 2)));
        assert!(condition_check(&case(1.0, 5.0, 4)));
        assert!(!condition_check(&case(1.0, -2.0, 2)));
    }

    #[test]
    fn hermite_like_solutions() {
        assert_eq!(z0_polynomial(&case(1.0, 2.0, 2)).unwrap(), TaylorPoly::new(vec![q(-1), q(0), q(1)]));
        assert_eq!(z0_polynomial(&case(1.0, 1.0, 2)).unwrap(), TaylorPoly::new(vec![q(0), q(1)]));
        assert_eq!(z0_polynomial(&case(1.0, 3.0, 2)).unwrap(), TaylorPoly::new(vec![q(0), q(-3), q(0), q(1)]));
        assert!(z0_polynomial(&case(1.0, 2.0, 4)).is_err());
    }

    #[test]
    fn exact_residual_and_parity() {
        for (a, b, p) in [(1.0, 2.0, 2), (0.5, 3.0, 2), (2.0, 8.0, 4), (1.0, 9.0, 4), (1.5, 9.0, 6), (1.0, 0.0, 2)] {
            let c = case(a, b, p);
            let z = z0_polynomial(&c).unwrap();
            assert!(reduced_residual(&c, &z).is_zero(), "{c:?}");
            assert_eq!(z.degree(), Some(c.integer_d().unwrap() as usize));
            assert_eq!(parity(&z), Some(c.integer_d().unwrap() as usize % 2));
        }
    }

    #[test]
    fn riccati_identity() {
        let r = riccati_leading_check(&case(1.0, 2.0, 2), &[-10.0, -5.0, -3.0, 3.0, 5.0, 10.0]).unwrap();
        assert!(r.max_residual < 1e-10);
        let r = riccati_leading_check(&case(1.0, 1.0, 2), &[-2.0, -0.05, 0.5, 2.0]).unwrap();
        assert_eq!(r.skipped, vec![-0.05]);
        assert!(r.max_residual < 1e-10);
        assert!(riccati_leading_check(&case(1.0, 1.0, 2), &[0.0, 0.01]).is_err());
    }
}
