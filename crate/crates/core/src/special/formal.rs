//! Formal solutions at infinity of `U' = p X^{p-1} U + R(X, U)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::poly::TaylorPoly;
use crate::series::tail::{AsymTail, PolyTail};

fn exact<S: Scalar>(t: &PolyTail<S>, depth: usize) -> PolyTail<S> {
    PolyTail::new(t.poly.clone(), AsymTail::exact(t.tail.padded(depth)))
}

/// The unique polynomial-growth formal solution of
/// `U' = p X^{p-1} U + Σ_k c_k(X) U^k`, tail kept to `depth` terms.
///
/// Iterates `U ← (U' - Σ c_k U^k) / (p X^{p-1})`; every pass fixes at least
/// one more coefficient as long as the `c_k` grow slower than `X^{p-1}`.
pub fn formal_solve<S: Scalar>(p: u32, terms: &[(u32, PolyTail<S>)], depth: usize) -> Result<PolyTail<S>> {
    if p < 1 {
        return Err(Error::Invalid("root power must be >= 1".into()));
    }
    let input_depth = |top: usize| {
        terms
            .iter()
            .filter_map(|(k, c)| c.tail.depth().map(|d| (d + p as usize - 1).saturating_sub(*k as usize * top)))
            .min()
            .unwrap_or(usize::MAX)
    };
    let terms: Vec<(u32, PolyTail<S>)> = terms.iter().map(|(k, c)| (*k, exact(c, depth + p as usize))).collect();
    let max_deg = terms.iter().filter_map(|(_, c)| c.poly.degree()).max().unwrap_or(0);
    let inv_p = S::one() / S::from_i64(p as i64);
    let mut u = PolyTail::<S>::zero();
    let limit = depth + max_deg + 16;
    for _ in 0..limit {
        let mut rhs = u.derivative();
        for (k, c) in &terms {
            let uk = exact(&u.pow(*k as usize)?, depth + p as usize);
            rhs = rhs.sub(&exact(&c.mul(&uk)?, depth + p as usize));
        }
        let next = exact(&rhs.shift_down(p as usize - 1).scale(&inv_p), depth);
        if next == u {
            // coefficients beyond what the inputs determine stay unknown
            let known = input_depth(u.poly.degree().unwrap_or(0));
            if known == usize::MAX && u.tail.is_zero() {
                return Ok(PolyTail::from_poly(u.poly));
            }
            let known = depth.min(known);
            return Ok(PolyTail::new(u.poly, AsymTail::new(u.tail.padded(known))));
        }
        u = next;
    }
    Err(Error::Degenerate(format!("formal solution did not settle within {limit} passes")))
}

/// Formal image of `v` under `J`: the polynomial-growth formal solution of
/// `U' = p X^{p-1} U + v`, tail to `depth` terms.
pub fn tail_of_j<S: Scalar>(p: u32, v: &PolyTail<S>, depth: usize) -> PolyTail<S> {
    formal_solve(p, &[(0, v.clone())], depth).expect("linear formal solve terminates")
}

/// Tail of `U_k^±`, shared by both sides.
pub fn u_tail<S: Scalar>(p: u32, k: u32, depth: usize) -> AsymTail<S> {
    let v = PolyTail::from_poly(TaylorPoly::monomial(k as usize - 1, S::one()));
    tail_of_j(p, &v, depth).tail
}

/// Tail of the Dawson-type integral `∫_0^X e^{T^2 - X^2} dT`:
/// `Σ_{n≥0} (2n-1)!! / (2^{n+1} X^{2n+1})`.
pub fn dawson_tail<S: Scalar>(depth: usize) -> AsymTail<S> {
    let mut out = vec![S::zero(); depth];
    let mut c = S::from_ratio(1, 2);
    let mut n = 0i64;
    while (2 * n + 1) as usize <= depth {
        out[2 * n as usize] = c.clone();
        c = c * S::from_ratio(2 * n + 1, 2);
        n += 1;
    }
    AsymTail::new(out)
}
