//! Adaptive Gauss–Kronrod (7/15) quadrature with global panel bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let value = resk * h;
    if !value.is_finite() {
        return Err(Error::Quadrature(f64::INFINITY));
    }
    let err = ((resk - resg) * h).abs();
    Ok((value, err))
}

/// Integrates `f` over `[a, b]`; `a > b` gives the negated integral.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, panels: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (v, e) = kronrod(&mut f, lo, hi)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a: lo, b: hi, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut panels = 1;
    while total_err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if panels >= opts.max_panels {
            return Err(Error::Quadrature(total_err));
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in double precision
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid)?;
        let (v2, e2) = kronrod(&mut f, mid, worst.b)?;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        panels += 1;
        if panels % 64 == 0 {
            // resum to shed accumulated cancellation
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult { value: sign * value, error, panels })
}

/// Integrates over consecutive breakpoints, summing the pieces.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    let mut out = QuadResult { value: 0.0, error: 0.0, panels: 0 };
    for w in points.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts)?;
        out.value += r.value;
        out.error += r.error;
        out.panels += r.panels;
    }
    Ok(out)
}

pub fn quad<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    integrate(f, a, b, QuadOptions::default()).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = quad(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0) + 3.0;
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn gaussian_half_line() {
        let v = quad(|t| (-t * t).exp(), -9.0, 0.0).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_negate() {
        let a = quad(|x| x.sin(), 0.0, 2.0).unwrap();
        let b = quad(|x| x.sin(), 2.0, 0.0).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let v = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions { max_panels: 20000, ..Default::default() }).unwrap().value;
        assert!((v - 2.0).abs() < 1e-9);
    }
}
