//! Fast coefficients `g_n(X)`: an asymptotic tail, an optional evaluator and
//! an optional closed form in terms of the special functions.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::series::expr::{Expr, Sign};
use crate::series::poly::TaylorPoly;
use crate::series::tail::AsymTail;
use crate::special::{dawson_tail, u_tail};

/// One closed-form summand of a fast coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisTerm {
    /// `coeff · U_k^σ(X)`.
    U { p: u32, k: u32, sigma: Sign, coeff: f64 },
    /// `e^{-X^p} Σ poly_j X^j`; flat, so its tail vanishes.
    ExpPoly { p: u32, poly: Vec<f64> },
    /// `coeff · ∫_0^X e^{T^2 - X^2} dT`.
    Dawson { coeff: f64 },
}

impl BasisTerm {
    pub fn expr(&self) -> Expr {
        match self {
            BasisTerm::U { p, k, sigma, coeff } => Expr::U { p: *p, k: *k, sigma: *sigma }.scale(*coeff),
            BasisTerm::ExpPoly { p, poly } => {
                let q = TaylorPoly::new(poly.clone());
                if q.is_zero() {
                    Expr::Zero
                } else {
                    Expr::ExpPoly { p: *p, poly: q }
                }
            }
            BasisTerm::Dawson { coeff } => Expr::Dawson.scale(*coeff),
        }
    }

    pub fn tail<S: Scalar>(&self, depth: usize) -> AsymTail<S> {
        match self {
            BasisTerm::U { p, k, coeff, .. } => u_tail::<S>(*p, *k, depth).scale(&S::from_f64(*coeff)),
            BasisTerm::ExpPoly { .. } => AsymTail::zero(),
            BasisTerm::Dawson { coeff } => dawson_tail::<S>(depth).scale(&S::from_f64(*coeff)),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        match self {
            BasisTerm::U { p, k, sigma, coeff } => BasisTerm::U { p: *p, k: *k, sigma: *sigma, coeff: coeff * c },
            BasisTerm::ExpPoly { p, poly } => BasisTerm::ExpPoly { p: *p, poly: poly.iter().map(|v| v * c).collect() },
            BasisTerm::Dawson { coeff } => BasisTerm::Dawson { coeff: coeff * c },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BasisTerm::U { coeff, .. } | BasisTerm::Dawson { coeff } => *coeff == 0.0,
            BasisTerm::ExpPoly { poly, .. } => poly.iter().all(|c| *c == 0.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FastFn<S> {
    pub tail: AsymTail<S>,
    pub eval: Option<Expr>,
    /// When nonempty, `eval` is the sum of these terms.
    pub basis: Vec<BasisTerm>,
}

impl<S: Scalar> Default for FastFn<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> FastFn<S> {
    pub fn zero() -> Self {
        Self { tail: AsymTail::zero(), eval: None, basis: Vec::new() }
    }

    pub fn from_tail(tail: AsymTail<S>) -> Self {
        Self { tail, eval: None, basis: Vec::new() }
    }

    pub fn with_eval(tail: AsymTail<S>, eval: Expr) -> Self {
        Self { tail, eval: Some(eval), basis: Vec::new() }
    }

    pub fn from_basis(basis: Vec<BasisTerm>, depth: usize) -> Self {
        let basis: Vec<BasisTerm> = basis.into_iter().filter(|b| !b.is_zero()).collect();
        let tail = basis.iter().fold(AsymTail::zero(), |acc, b| acc.add(&b.tail(depth)));
        let eval = basis.iter().fold(Expr::Zero, |acc, b| acc.add(&b.expr()));
        if basis.is_empty() {
            return Self::zero();
        }
        Self { tail, eval: Some(eval), basis }
    }

    /// True only when the function is identically zero, flat parts included.
    pub fn is_zero(&self) -> bool {
        self.tail.is_zero() && self.eval.as_ref().is_none_or(|e| e.is_zero()) && self.basis.is_empty()
    }

    /// The evaluator, falling back to the tail when it is an exact finite sum.
    pub fn evaluator(&self) -> Option<Expr> {
        match &self.eval {
            Some(e) => Some(e.clone()),
            None if self.tail.is_exact() => Some(Expr::tail(self.tail.to_f64())),
            None => None,
        }
    }

    /// Evaluator of a binary combination; exact tails alone need none.
    fn combine_eval(&self, other: &Self, op: impl Fn(&Expr, &Expr) -> Expr) -> Option<Expr> {
        if self.eval.is_none() && other.eval.is_none() {
            return None;
        }
        Some(op(&self.evaluator()?, &other.evaluator()?))
    }

    fn closed(&self) -> bool {
        !self.basis.is_empty() || self.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let eval = self.combine_eval(other, Expr::add);
        let basis =
            if self.closed() && other.closed() { self.basis.iter().chain(other.basis.iter()).cloned().collect() } else { Vec::new() };
        Self { tail: self.tail.add(&other.tail), eval, basis }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let cf = c.to_f64();
        Self {
            tail: self.tail.scale(c),
            eval: self.eval.as_ref().map(|e| e.scale(cf)),
            basis: self.basis.iter().map(|b| b.scale(cf)).collect(),
        }
    }

    /// Pointwise product (tail by Cauchy product).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let eval = self.combine_eval(other, Expr::mul);
        Self { tail: self.tail.mul(&other.tail), eval, basis: Vec::new() }
    }

    /// `T^ν g = X^ν g - Σ_{m≤ν} g_m X^{ν-m}`; `None` when the tail is too shallow.
    pub fn shift_t_pow(&self, nu: usize) -> Option<Self> {
        if nu == 0 {
            return Some(self.clone());
        }
        let head: Vec<S> = (1..=nu).map(|m| self.tail.coeff(m)).collect::<Option<_>>()?;
        let eval = self.eval.as_ref().map(|e| {
            let poly: Vec<f64> = (0..nu).map(|j| -head[nu - 1 - j].to_f64()).collect();
            e.mul_xpow(nu).add(&Expr::poly(TaylorPoly::new(poly)))
        });
        Some(Self { tail: self.tail.shift_t_pow(nu), eval, basis: Vec::new() })
    }

    pub fn derivative(&self) -> Self {
        Self { tail: self.tail.derivative(), eval: self.eval.as_ref().map(|e| e.derivative()), basis: Vec::new() }
    }

    pub fn to_f64(&self) -> FastFn<f64> {
        FastFn { tail: self.tail.to_f64(), eval: self.eval.clone(), basis: self.basis.clone() }
    }
}
