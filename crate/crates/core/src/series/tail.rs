//! Asymptotic expansions at infinity: `AsymTail` (no constant term) and
//! `PolyTail` (polynomial part plus tail).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::poly::TaylorPoly;

/// `Σ_{m≥1} g_m X^{-m}` known through `X^{-depth}`; `depth == None` means
/// the stored coefficients are the whole expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymTail<S> {
    coeffs: Vec<S>,
    depth: Option<usize>,
}

impl<S: Scalar> Default for AsymTail<S> {
    fn default() -> Self {
        Self::zero()
    }
}

fn min_depth(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl<S: Scalar> AsymTail<S> {
    /// Coefficients `g_1..g_M`, known exactly to depth `M = coeffs.len()`.
    pub fn new(coeffs: Vec<S>) -> Self {
        let depth = coeffs.len();
        Self::with_depth(coeffs, Some(depth))
    }

    /// A finite expansion with nothing beyond the stored terms.
    pub fn exact(coeffs: Vec<S>) -> Self {
        Self::with_depth(coeffs, None)
    }

    pub fn with_depth(mut coeffs: Vec<S>, depth: Option<usize>) -> Self {
        if let Some(d) = depth {
            coeffs.truncate(d);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, depth }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new(), depth: None }
    }

    pub fn from_f64s(c: &[f64]) -> Self {
        Self::new(c.iter().map(|&x| S::from_f64(x)).collect())
    }

    pub fn depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn is_exact(&self) -> bool {
        self.depth.is_none()
    }

    /// Stored coefficients `g_1, g_2, ...` (trailing zeros dropped).
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `g_m`, or `None` beyond the known depth.
    pub fn coeff(&self, m: usize) -> Option<S> {
        if m == 0 {
            return Some(S::zero());
        }
        if let Some(d) = self.depth {
            if m > d {
                return None;
            }
        }
        Some(self.coeffs.get(m - 1).cloned().unwrap_or_else(S::zero))
    }

    /// `g_m`, treating unknown coefficients as a depth error.
    pub fn coeff_checked(&self, m: usize, order: usize) -> Result<S> {
        self.coeff(m).ok_or(Error::InsufficientTailDepth { order, depth: self.depth.unwrap_or(usize::MAX), needed: m })
    }

    /// Stored coefficients padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<S> {
        (1..=len).map(|m| self.coeff(m).unwrap_or_else(S::zero)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i + 1)
    }

    pub fn truncate(&self, depth: usize) -> Self {
        if self.depth.is_none() && self.coeffs.len() <= depth {
            return self.clone();
        }
        Self::with_depth(self.coeffs.clone(), Some(min_depth(self.depth, Some(depth)).unwrap()))
    }

    /// `X g(X) - g_1`.
    pub fn shift_t(&self) -> Self {
        Self::with_depth(self.coeffs.iter().skip(1).cloned().collect(), self.depth.map(|d| d.saturating_sub(1)))
    }

    pub fn shift_t_pow(&self, nu: usize) -> Self {
        Self::with_depth(self.coeffs.iter().skip(nu).cloned().collect(), self.depth.map(|d| d.saturating_sub(nu)))
    }

    /// Multiplication by `X^{-k}`.
    pub fn shift_down(&self, k: usize) -> Self {
        let mut v = vec![S::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::with_depth(v, self.depth.map(|d| d + k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (1..=n)
            .map(|m| {
                let a = self.coeffs.get(m - 1).cloned().unwrap_or_else(S::zero);
                let b = other.coeffs.get(m - 1).cloned().unwrap_or_else(S::zero);
                a + b
            })
            .collect();
        Self::with_depth(v, min_depth(self.depth, other.depth))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::with_depth(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.depth)
    }

    /// Cauchy product; the result is known through the first power that an
    /// unknown coefficient could reach.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() && self.is_exact() || other.is_zero() && other.is_exact() {
            return Self::zero();
        }
        // unknown terms of one factor first meet the lowest nonzero (or unknown) term of the other
        let low = |t: &Self| t.valuation().or(t.depth.map(|d| d + 1)).unwrap_or(usize::MAX / 4);
        let depth = min_depth(self.depth.map(|d| d + low(other)), other.depth.map(|d| d + low(self)));
        if self.is_zero() || other.is_zero() {
            return Self::with_depth(Vec::new(), depth);
        }
        let n = self.coeffs.len() + other.coeffs.len();
        let mut out = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                // X^{-(i+1)} X^{-(j+1)} = X^{-(i+j+2)}, stored at index i+j+1
                out[i + j + 1] = out[i + j + 1].clone() + a.clone() * b.clone();
            }
        }
        Self::with_depth(out, depth)
    }

    /// `d/dX Σ g_m X^{-m} = Σ -m g_m X^{-m-1}`.
    pub fn derivative(&self) -> Self {
        let mut v = vec![S::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            v.push(c.clone() * S::from_i64(-(i as i64 + 1)));
        }
        Self::with_depth(v, self.depth.map(|d| d + 1))
    }

    /// Partial sum of the first `terms` coefficients.
    pub fn eval_partial(&self, x: f64, terms: usize) -> f64 {
        let inv = 1.0 / x;
        let mut acc = 0.0;
        for c in self.coeffs.iter().take(terms).rev() {
            acc = (acc + c.to_f64()) * inv;
        }
        acc
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_partial(x, self.coeffs.len())
    }

    /// Sum up to (excluding) the smallest term, for divergent expansions.
    pub fn eval_optimal(&self, x: f64) -> (f64, f64) {
        let inv = 1.0 / x;
        let mut pow = 1.0;
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        for c in &self.coeffs {
            pow *= inv;
            let c = c.to_f64();
            if c == 0.0 {
                continue;
            }
            let term = c * pow;
            if term.abs() > last {
                return (sum, last);
            }
            sum += term;
            last = term.abs();
        }
        (sum, if self.depth.is_none() { 0.0 } else { last })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AsymTail<T> {
        AsymTail::with_depth(self.coeffs.iter().map(f).collect(), self.depth)
    }

    pub fn to_f64(&self) -> AsymTail<f64> {
        self.map(|c| c.to_f64())
    }
}

/// Expansion at infinity with a polynomial part: `Σ_{k=0}^{K} q_k X^k + Σ_{m≥1} g_m X^{-m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTail<S> {
    pub poly: TaylorPoly<S>,
    pub tail: AsymTail<S>,
}

impl<S: Scalar> Default for PolyTail<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> PolyTail<S> {
    pub fn new(poly: TaylorPoly<S>, tail: AsymTail<S>) -> Self {
        Self { poly, tail }
    }

    pub fn zero() -> Self {
        Self { poly: TaylorPoly::zero(), tail: AsymTail::zero() }
    }

    pub fn from_poly(poly: TaylorPoly<S>) -> Self {
        Self { poly, tail: AsymTail::zero() }
    }

    pub fn from_tail(tail: AsymTail<S>) -> Self {
        Self { poly: TaylorPoly::zero(), tail }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(TaylorPoly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.tail.is_zero()
    }

    /// Coefficient of `X^k` for any integer `k`; `None` if beyond the tail depth.
    pub fn coeff(&self, k: i64) -> Option<S> {
        if k >= 0 {
            Some(self.poly.coeff(k as usize))
        } else {
            self.tail.coeff((-k) as usize)
        }
    }

    pub fn depth(&self) -> Option<usize> {
        self.tail.depth()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { poly: self.poly.add(&other.poly), tail: self.tail.add(&other.tail) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { poly: self.poly.sub(&other.poly), tail: self.tail.sub(&other.tail) }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { poly: self.poly.scale(c), tail: self.tail.scale(c) }
    }

    pub fn truncate(&self, depth: usize) -> Self {
        Self { poly: self.poly.clone(), tail: self.tail.truncate(depth) }
    }

    /// Multiplication by `X^k`; fails when unknown tail terms would reach
    /// the polynomial part.
    pub fn shift_up(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if let Some(d) = self.tail.depth() {
            if d < k {
                return Err(Error::InsufficientTailDepth { order: 0, depth: d, needed: k });
            }
        }
        let mut poly = self.poly.shift_up(k).coeffs().to_vec();
        poly.resize(poly.len().max(k), S::zero());
        for m in 1..=k {
            poly[k - m] = self.tail.coeff(m).unwrap_or_else(S::zero);
        }
        Ok(Self { poly: TaylorPoly::new(poly), tail: self.tail.shift_t_pow(k) })
    }

    /// Multiplication by `X^{-k}`.
    pub fn shift_down(&self, k: usize) -> Self {
        let mut tail = self.tail.shift_down(k);
        let low: Vec<S> = (0..k.min(self.poly.coeffs().len())).map(|j| self.poly.coeff(j)).collect();
        // X^j X^{-k} = X^{-(k-j)}
        let mut moved = vec![S::zero(); k];
        for (j, c) in low.into_iter().enumerate() {
            moved[k - j - 1] = c;
        }
        tail = tail.add(&AsymTail::exact(moved));
        Self { poly: self.poly.shift_s_pow(k), tail }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = PolyTail::from_poly(self.poly.mul(&other.poly)).add(&PolyTail::from_tail(self.tail.mul(&other.tail)));
        for (i, c) in self.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&PolyTail::from_tail(other.tail.clone()).shift_up(i)?.scale(c));
        }
        for (i, c) in other.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&PolyTail::from_tail(self.tail.clone()).shift_up(i)?.scale(c));
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut out = PolyTail::constant(S::one());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Self {
        Self { poly: self.poly.derivative(), tail: self.tail.derivative() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x) + self.tail.eval(x)
    }

    pub fn eval_optimal(&self, x: f64) -> (f64, f64) {
        let (t, e) = self.tail.eval_optimal(x);
        (self.poly.eval(x) + t, e)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PolyTail<T> {
        PolyTail { poly: self.poly.map(f), tail: self.tail.map(f) }
    }

    pub fn to_f64(&self) -> PolyTail<f64> {
        self.map(|c| c.to_f64())
    }
}
