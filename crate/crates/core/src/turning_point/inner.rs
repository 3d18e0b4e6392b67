//! Inner expansion `y = η^r Σ_n W_n(X) η^n` in the stretched variable `X = x/η`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::series::expr::{Expr, Sign};
use crate::series::tail::PolyTail;
use crate::special::formal::formal_solve;
use crate::special::ray::{RayFn, RayOptions};
use crate::turning_point::ring::{Numeric, Ring};
use crate::turning_point::spec::{OdeSpec, Term};

#[derive(Debug, Clone, Copy)]
pub struct InnerOptions {
    /// Tail depth of the formal inner coefficients.
    pub depth: usize,
    /// Also build numeric evaluators on the σ ray.
    pub numeric: bool,
    pub ray: RayOptions,
}

impl Default for InnerOptions {
    fn default() -> Self {
        Self { depth: 16, numeric: true, ray: RayOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct InnerExpansion<S> {
    pub p: u32,
    pub r: usize,
    pub sigma: Sign,
    /// `W_n` as polynomial part plus tail.
    pub formal: Vec<PolyTail<S>>,
    pub numeric: Option<Vec<Expr>>,
}

/// Terms with their inner orders.
pub(crate) fn graded_terms(spec: &OdeSpec) -> Result<Vec<(usize, Term)>> {
    spec.terms.iter().map(|t| Ok((spec.inner_order(t)?, t.clone()))).collect()
}

/// `[η^0..=η^m]` of `Y^k`, `Y = Σ_{i<w.len()} w_i η^i`.
fn ring_powers<R: Ring>(w: &[R], k_max: usize, m: usize) -> Result<Vec<Vec<R>>> {
    let mut out = vec![vec![R::zero(); m + 1]; k_max + 1];
    out[0][0] = R::constant(&Rational::from_i64(1));
    for k in 1..=k_max {
        for a in 0..=m {
            if out[k - 1][a].is_zero() {
                continue;
            }
            for (b, wb) in w.iter().enumerate() {
                if a + b > m {
                    break;
                }
                if !wb.is_zero() {
                    let prod = out[k - 1][a].mul(wb)?;
                    out[k][a + b] = out[k][a + b].add(&prod);
                }
            }
        }
    }
    Ok(out)
}

/// Forcing `G_n` of `W_n' = (p X^{p-1} + B) W_n + G_n`, built from `W_0..W_{n-1}`.
pub(crate) fn forcing<R: Ring>(graded: &[(usize, Term)], w: &[R], n: usize) -> Result<R> {
    let k_max = graded.iter().map(|(_, t)| t.k).max().unwrap_or(0);
    let pw = ring_powers(&w[..n.min(w.len())], k_max, n)?;
    let mut g = R::zero();
    for (e, t) in graded {
        if *e > n {
            continue;
        }
        let yk = &pw[t.k][n - e];
        if !yk.is_zero() {
            g = g.add(&yk.mul_xpow(t.j)?.scale(&t.c));
        }
    }
    Ok(g)
}

/// `B = Σ_{e=0, k≥2} c k X^j W_0^{k-1}`.
pub(crate) fn linear_coefficient<R: Ring>(graded: &[(usize, Term)], w0: &R) -> Result<R> {
    let mut b = R::zero();
    for (e, t) in graded {
        if *e != 0 || t.k < 2 {
            continue;
        }
        let mut m = R::constant(&Rational::from_i64(1));
        for _ in 0..t.k - 1 {
            m = m.mul(w0)?;
        }
        b = b.add(&m.mul_xpow(t.j)?.scale(&(t.c.clone() * Rational::from_i64(t.k as i64))));
    }
    Ok(b)
}

/// Reduced terms `(k, c X^j)` of the order-0 equation, `k = 0` included.
fn reduced_terms<R: Ring>(graded: &[(usize, Term)]) -> Result<Vec<(u32, R)>> {
    let mut out: Vec<(u32, R)> = Vec::new();
    for (e, t) in graded {
        if *e != 0 {
            continue;
        }
        let c = R::constant(&t.c).mul_xpow(t.j)?;
        match out.iter_mut().find(|(k, _)| *k == t.k as u32) {
            Some((_, acc)) => *acc = acc.add(&c),
            None => out.push((t.k as u32, c)),
        }
    }
    Ok(out)
}

fn solve_numeric(p: u32, sigma: Sign, terms: Vec<(u32, Numeric)>, opts: &InnerOptions) -> Result<Numeric> {
    let terms: Vec<(u32, Numeric)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if terms.is_empty() {
        return Ok(Numeric::zero());
    }
    let formal_terms: Vec<(u32, PolyTail<f64>)> = terms.iter().map(|(k, c)| (*k, c.formal.clone())).collect();
    let tail = formal_solve(p, &formal_terms, opts.ray.depth)?;
    if tail.tail.is_exact() && tail.tail.is_zero() {
        return Ok(Numeric { expr: Expr::poly(tail.poly.clone()), formal: tail });
    }
    let exprs = terms.into_iter().map(|(k, c)| (k, c.expr)).collect();
    let ray = RayFn::solve(p, sigma, exprs, tail.clone(), &opts.ray)?;
    Ok(Numeric { formal: tail, expr: Expr::Ray(Arc::new(ray)) })
}

fn solve_formal<S: Scalar>(p: u32, terms: Vec<(u32, PolyTail<S>)>, depth: usize) -> Result<PolyTail<S>> {
    let terms: Vec<(u32, PolyTail<S>)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if terms.is_empty() {
        return Ok(PolyTail::zero());
    }
    formal_solve(p, &terms, depth)
}

/// `W_0..W_{count-1}`; `W_n` is the solution of polynomial growth on the σ side.
pub fn inner_expansion<S: Scalar>(spec: &OdeSpec, count: usize, sigma: Sign, opts: &InnerOptions) -> Result<InnerExpansion<S>> {
    let graded = graded_terms(spec)?;
    let p = spec.p;
    let work_depth = opts.depth + 2 * count + p as usize;
    let mut formal: Vec<PolyTail<S>> = Vec::with_capacity(count);
    let mut numeric: Vec<Numeric> = Vec::with_capacity(count);
    let nonlinear = spec.has_nonlinear_reduced()?;
    for n in 0..count {
        let alpha = spec.alpha_eta::<Rational>(n);
        let has_alpha = spec.control && alpha != Rational::from_i64(0);
        if n == 0 && nonlinear {
            let mut t: Vec<(u32, PolyTail<S>)> = reduced_terms(&graded)?;
            if has_alpha {
                add_constant(&mut t, &alpha);
            }
            formal.push(solve_formal(p, t, work_depth)?);
            if opts.numeric {
                let mut t: Vec<(u32, Numeric)> = reduced_terms(&graded)?;
                if has_alpha {
                    add_constant(&mut t, &alpha);
                }
                numeric.push(solve_numeric(p, sigma, t, opts).map_err(blowup_note)?);
            }
            continue;
        }
        let mut g: PolyTail<S> = forcing(&graded, &formal, n)?;
        if has_alpha {
            g = g.add(&<PolyTail<S> as Ring>::constant(&alpha));
        }
        let b: PolyTail<S> = if n > 0 { linear_coefficient(&graded, &formal[0])? } else { PolyTail::zero() };
        formal.push(solve_formal(p, vec![(0, g), (1, b)], work_depth)?);
        if opts.numeric {
            let mut g: Numeric = forcing(&graded, &numeric, n)?;
            if has_alpha {
                g = g.add(&Numeric::constant(&alpha));
            }
            let b: Numeric = if n > 0 { linear_coefficient(&graded, &numeric[0])? } else { Numeric::zero() };
            numeric.push(solve_numeric(p, sigma, vec![(0, g), (1, b)], opts)?);
        }
    }
    let formal = formal.into_iter().map(|w| w.truncate(opts.depth)).collect();
    Ok(InnerExpansion { p, r: spec.r, sigma, formal, numeric: opts.numeric.then(|| numeric.into_iter().map(|w| w.expr).collect()) })
}

fn add_constant<R: Ring>(t: &mut Vec<(u32, R)>, c: &Rational) {
    match t.iter_mut().find(|(k, _)| *k == 0) {
        Some((_, acc)) => *acc = acc.add(&R::constant(c)),
        None => t.push((0, R::constant(c))),
    }
}

fn blowup_note(e: Error) -> Error {
    match e {
        Error::Blowup { t } => Error::Infeasible(format!("reduced inner solution is singular near X = {t}")),
        e => e,
    }
}
