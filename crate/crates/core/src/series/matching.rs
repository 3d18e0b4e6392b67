//! Outer and inner expansions of a combined series, and the reverse
//! assembly from matched outer/inner data.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::combined::CombinedSeries;
use crate::series::expr::Sign;
use crate::series::fast::FastFn;
use crate::series::poly::{LaurentPoly, TaylorPoly};
use crate::series::tail::{AsymTail, PolyTail};

/// Absolute tolerance on matched coefficients in floating-point mode.
pub const MATCH_TOL: f64 = 1e-9;

/// `c_n(x) = a_n(x) + Σ_{l<n} g_{l,n-l} x^{l-n}`.
pub fn extract_outer<S: Scalar>(y: &CombinedSeries<S>, n: usize) -> Result<LaurentPoly<S>> {
    if n >= y.order() {
        return Err(Error::OutOfRange { index: n, order: y.order() });
    }
    let mut c = LaurentPoly::from_taylor(&y.slow[n]);
    for l in 0..n {
        let m = n - l;
        let g = &y.fast[l].tail;
        let coeff = g.coeff(m).ok_or(Error::InsufficientTailDepth { order: l, depth: g.depth().unwrap_or(0), needed: m })?;
        c = c.add(&LaurentPoly::monomial(l as i64 - n as i64, coeff));
    }
    Ok(c)
}

/// `h_n(X) = g_n(X) + Σ_{l≤n} a_{n-l,l} X^l`, as polynomial part plus tail.
pub fn extract_inner<S: Scalar>(y: &CombinedSeries<S>, n: usize) -> Result<PolyTail<S>> {
    if n >= y.order() {
        return Err(Error::OutOfRange { index: n, order: y.order() });
    }
    let poly: Vec<S> = (0..=n).map(|l| y.slow[n - l].coeff(l)).collect();
    Ok(PolyTail::new(TaylorPoly::new(poly), y.fast[n].tail.clone()))
}

/// Coefficient of `X^{-j}` in `h_k`, or `None` beyond the tail depth.
fn z<S: Scalar>(inner: &[PolyTail<S>], k: usize, j: i64) -> Option<S> {
    inner.get(k)?.coeff(-j)
}

/// First index where the matching condition `c_{n,m} = z_{n+m,-m}` fails.
pub fn check_compatibility<S: Scalar>(outer: &[LaurentPoly<S>], inner: &[PolyTail<S>], tol: f64) -> Result<()> {
    for (n, c) in outer.iter().enumerate() {
        let (Some(lo), Some(hi)) = (c.low(), c.high()) else {
            // zero outer coefficient: every paired inner coefficient must vanish
            for m in -(n as i64)..(inner.len() as i64 - n as i64) {
                check_pair(n, m, &S::zero(), inner, tol)?;
            }
            continue;
        };
        let lo = lo.min(-(n as i64));
        let hi = hi.max(inner.len() as i64 - n as i64 - 1);
        for m in lo..=hi {
            if n as i64 + m < 0 {
                if !c.coeff(m).is_zero() {
                    return Err(Error::Infeasible(format!("outer coefficient {n} has a pole of order {} > {n}", -m)));
                }
                continue;
            }
            check_pair(n, m, &c.coeff(m), inner, tol)?;
        }
    }
    Ok(())
}

fn check_pair<S: Scalar>(n: usize, m: i64, outer: &S, inner: &[PolyTail<S>], tol: f64) -> Result<()> {
    let k = n as i64 + m;
    if k < 0 || k as usize >= inner.len() {
        return Ok(());
    }
    let Some(zv) = z(inner, k as usize, -m) else {
        return Ok(());
    };
    if !outer.close_to(&zv, tol) {
        return Err(Error::Incompatible { n, m, outer: outer.to_f64(), inner: zv.to_f64() });
    }
    Ok(())
}

/// Rebuilds the combined series: slow parts are the regular parts of the
/// outer coefficients, fast parts the tails of the inner ones.
pub fn reconstruct_from_matching<S: Scalar>(
    p: u32,
    sigma: Sign,
    outer: &[LaurentPoly<S>],
    inner: &[PolyTail<S>],
) -> Result<CombinedSeries<S>> {
    for (n, c) in outer.iter().enumerate() {
        if c.pole_order() > n {
            return Err(Error::Infeasible(format!("pole order {} at n={n} exceeds {n}", c.pole_order())));
        }
    }
    for (n, h) in inner.iter().enumerate() {
        if let Some(d) = h.poly.degree() {
            if d > n {
                return Err(Error::Infeasible(format!("inner polynomial degree {d} at n={n} exceeds {n}")));
            }
        }
    }
    let tol = if S::EXACT { 0.0 } else { MATCH_TOL };
    check_compatibility(outer, inner, tol)?;
    let n = outer.len().min(inner.len());
    let slow = outer[..n].iter().map(|c| c.regular_part()).collect();
    let fast = inner[..n].iter().map(|h| FastFn::from_tail(h.tail.clone())).collect();
    CombinedSeries::new(p, sigma, slow, fast)
}

pub type MatchingData<S> = (Vec<LaurentPoly<S>>, Vec<PolyTail<S>>);

/// `(outer, inner)` for all orders of `y`.
pub fn extract_all<S: Scalar>(y: &CombinedSeries<S>) -> Result<MatchingData<S>> {
    let outer = (0..y.order()).map(|n| extract_outer(y, n)).collect::<Result<_>>()?;
    let inner = (0..y.order()).map(|n| extract_inner(y, n)).collect::<Result<_>>()?;
    Ok((outer, inner))
}

/// Tail of `h` with one coefficient replaced; used for fault injection.
pub fn perturb_tail<S: Scalar>(h: &PolyTail<S>, m: usize, delta: S) -> PolyTail<S> {
    let depth = h.tail.depth();
    let mut c = h.tail.padded(m.max(h.tail.coeffs().len()));
    c[m - 1] = c[m - 1].clone() + delta;
    PolyTail::new(h.poly.clone(), AsymTail::with_depth(c, depth))
}
