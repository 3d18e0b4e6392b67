//! Special functions of the turning-point problem: `U_k^±`, the Dawson-type
//! integral, Gaussian moments, and the operator `J^±` on real rays.

pub mod formal;
pub mod ray;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::numeric::gamma;
use crate::numeric::quad::{integrate, QuadOptions};
use crate::series::expr::Sign;
use crate::series::tail::AsymTail;

pub use formal::{dawson_tail, formal_solve, tail_of_j, u_tail};
pub use ray::{apply_j, RayFn, RayOptions};

/// Exponent cap for `e^{X^p}` factors.
pub const EXP_CAP: f64 = 700.0;

/// `|X|^p` beyond which asymptotic tails replace quadrature.
const TAIL_SWITCH: f64 = 40.0;

const QUAD: QuadOptions = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 4000 };

type TailCache = Mutex<HashMap<(u32, u32), Arc<AsymTail<f64>>>>;

fn cached_u_tail(p: u32, k: u32) -> Arc<AsymTail<f64>> {
    static CACHE: OnceLock<TailCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("tail cache poisoned");
    guard.entry((p, k)).or_insert_with(|| Arc::new(u_tail::<f64>(p, k, 45 * p as usize + 20))).clone()
}

fn check_u_args(p: u32, k: u32) -> Result<()> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(Error::Invalid(format!("p = {p} must be even and >= 2")));
    }
    if k < 1 || k >= p {
        return Err(Error::Invalid(format!("k = {k} must lie in 1..={}", p - 1)));
    }
    Ok(())
}

/// `U_k^σ(X)`, with `U_k^-(X) = e^{X^p} ∫_{-∞}^X e^{-T^p} T^{k-1} dT` and
/// `U_k^+(X) = (-1)^k U_k^-(-X)`.
pub fn eval_u(p: u32, k: u32, sigma: Sign, x: f64) -> Result<f64> {
    check_u_args(p, k)?;
    match sigma {
        Sign::Minus => eval_u_minus(p, k, x),
        Sign::Plus => {
            let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(s * eval_u_minus(p, k, -x)?)
        }
    }
}

fn eval_u_minus(p: u32, k: u32, x: f64) -> Result<f64> {
    let pi = p as i32;
    let xp = x.powi(pi);
    if x < 0.0 && xp >= TAIL_SWITCH {
        return Ok(cached_u_tail(p, k).eval_optimal(x).0);
    }
    if x > 0.0 && xp > EXP_CAP {
        return Err(Error::Overflow(xp));
    }
    let reach = if x < 0.0 { xp + TAIL_SWITCH } else { TAIL_SWITCH };
    let lo = -reach.powf(1.0 / p as f64);
    let km1 = k as i32 - 1;
    Ok(integrate(|t| (xp - t.powi(pi)).exp() * t.powi(km1), lo, x, QUAD)?.value)
}

/// `∫_0^X e^{T^2 - X^2} dT`, the bounded solution of `U' = -2XU + 1` through 0.
pub fn dawson(x: f64) -> Result<f64> {
    static TAIL: OnceLock<AsymTail<f64>> = OnceLock::new();
    if x.abs() >= 6.0 {
        return Ok(TAIL.get_or_init(|| dawson_tail(120)).eval_optimal(x).0);
    }
    let x2 = x * x;
    Ok(integrate(|t| (t * t - x2).exp(), 0.0, x, QUAD)?.value)
}

/// `∫_{-∞}^{∞} e^{-t^p/eps} t^j dt`.
pub fn gauss_moment(p: u32, j: u32, eps: f64) -> f64 {
    if j % 2 == 1 {
        return 0.0;
    }
    let a = (j as f64 + 1.0) / p as f64;
    2.0 / p as f64 * eps.powf(a) * gamma(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::quad::quad;
    use std::f64::consts::PI;

    #[test]
    fn u_at_zero() {
        assert!((eval_u(2, 1, Sign::Minus, 0.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!((eval_u(4, 1, Sign::Minus, 0.0).unwrap() - gamma(1.25)).abs() < 1e-13);
    }

    #[test]
    fn u_far_left_matches_three_terms() {
        let v = eval_u(2, 1, Sign::Minus, -10.0).unwrap();
        assert!((v - 0.04975375).abs() < 1e-6);
    }

    #[test]
    fn tail_and_quadrature_agree_at_switch() {
        for (p, k) in [(2, 1), (4, 1), (4, 2), (4, 3)] {
            let x = -(TAIL_SWITCH.powf(1.0 / p as f64)) * 1.0001;
            let b = eval_u_minus(p, k, x * 0.9999).unwrap();
            let t = cached_u_tail(p, k).eval_optimal(x * 0.9999).0;
            assert!((t - b).abs() < 1e-12 * b.abs().max(1e-3), "p={p} k={k}: {t} vs {b}");
        }
    }

    #[test]
    fn plus_side_reflection() {
        let x = 0.7;
        let m = eval_u(2, 1, Sign::Minus, -x).unwrap();
        assert!((eval_u(2, 1, Sign::Plus, x).unwrap() + m).abs() < 1e-14);
        // U^+ bounded on the right: e^{X^2} ∫_X^∞ e^{-T^2}
        let direct = -(x * x).exp() * quad(|t| (-t * t).exp(), x, 12.0).unwrap();
        assert!((eval_u(2, 1, Sign::Plus, x).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(eval_u(2, 1, Sign::Minus, 30.0), Err(Error::Overflow(_))));
        assert!(eval_u(3, 1, Sign::Minus, 0.0).is_err());
        assert!(eval_u(2, 2, Sign::Minus, 0.0).is_err());
    }

    #[test]
    fn dawson_values() {
        // D(1) = 0.5380795069127684 (Dawson's integral)
        assert!((dawson(1.0).unwrap() - 0.538_079_506_912_768_4).abs() < 1e-13);
        let far = dawson(8.0).unwrap();
        let quad_far = quad(|t| (t * t - 64.0).exp(), 0.0, 8.0).unwrap();
        assert!((far - quad_far).abs() < 1e-12);
        assert_eq!(dawson(0.0).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_moments() {
        assert!((gauss_moment(2, 0, 1.0) - PI.sqrt()).abs() < 1e-14);
        assert_eq!(gauss_moment(4, 1, 0.3), 0.0);
        assert!((gauss_moment(4, 2, 1.0) - 0.5 * gamma(0.75)).abs() < 1e-14);
        for p in [2u32, 4] {
            for j in [0u32, 2, 4] {
                for eps in [0.1f64, 1.0] {
                    let lim = (60.0 * eps).powf(1.0 / p as f64);
                    let q = quad(|t| (-t.powi(p as i32) / eps).exp() * t.powi(j as i32), -lim, lim).unwrap();
                    let g = gauss_moment(p, j, eps);
                    assert!((q - g).abs() < 1e-10 * g, "p={p} j={j} eps={eps}");
                }
            }
        }
    }
}
