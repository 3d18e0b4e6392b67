//! Numeric evaluators for fast coefficients: a small expression tree over
//! the special functions, closed under differentiation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, QuadOptions};
use crate::series::poly::TaylorPoly;
use crate::series::tail::AsymTail;
use crate::special::{self, ray::RayFn};

/// Side of the turning point on which a fast function is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" | "-" | "m" => Ok(Sign::Minus),
            "plus" | "+" | "p" => Ok(Sign::Plus),
            _ => Err(Error::Invalid(format!("unknown side {s:?}, expected minus or plus"))),
        }
    }
}

/// `H(X) = ∫_{σ∞}^X (g(T) - r ℓ'(T)) dT` with `ℓ'(T) = T^{p-1}/(T^p + 1)`.
#[derive(Debug, Clone)]
pub struct TailIntegral {
    pub integrand: Expr,
    pub residue: f64,
    pub p: u32,
    pub sigma: Sign,
    /// Tail of `H` itself, used beyond `x_far`.
    pub tail: AsymTail<f64>,
    pub x_far: f64,
}

impl TailIntegral {
    fn eval(&self, x: f64) -> Result<f64> {
        let s = self.sigma.value();
        if s * x >= self.x_far {
            return Ok(self.tail.eval_optimal(x).0);
        }
        let start = s * self.x_far;
        let base = self.tail.eval_optimal(start).0;
        let kernel = log_kernel_prime(self.p);
        let mut err = None;
        let q = integrate(
            |t| match (self.integrand.eval(t), kernel.eval(t)) {
                (Ok(g), Ok(k)) => g - self.residue * k,
                (Err(e), _) | (_, Err(e)) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            start,
            x,
            QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 4000 },
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(base + q.value)
    }
}

/// `ℓ'(X) = X^{p-1} / (X^p + 1)`.
pub fn log_kernel_prime(p: u32) -> Expr {
    let mut den = vec![0.0; p as usize + 1];
    den[0] = 1.0;
    den[p as usize] = 1.0;
    Expr::Rational(TaylorPoly::monomial(p as usize - 1, 1.0), TaylorPoly::new(den))
}

/// `ℓ(X) = (1/p) log(X^p + 1)`.
pub fn log_kernel(p: u32, x: f64) -> f64 {
    (x.powi(p as i32)).ln_1p() / p as f64
}

/// Tail of `ℓ'`: `Σ_{j≥0} (-1)^j X^{-(jp+1)}`, to `depth` terms.
pub fn log_kernel_prime_tail(p: u32, depth: usize) -> AsymTail<f64> {
    let mut c = vec![0.0; depth];
    let mut j = 0;
    while j * (p as usize) < depth {
        c[j * p as usize] = if j % 2 == 0 { 1.0 } else { -1.0 };
        j += 1;
    }
    AsymTail::new(c)
}

#[derive(Clone)]
pub enum Expr {
    Zero,
    Poly(TaylorPoly<f64>),
    /// A finite sum `Σ c_m X^{-m}`, exact.
    Tail(AsymTail<f64>),
    U {
        p: u32,
        k: u32,
        sigma: Sign,
    },
    /// `e^{-X^p} q(X)`.
    ExpPoly {
        p: u32,
        poly: TaylorPoly<f64>,
    },
    Dawson,
    Ray(Arc<RayFn>),
    Rational(TaylorPoly<f64>, TaylorPoly<f64>),
    Sum(Arc<Vec<Expr>>),
    Product(Arc<Vec<Expr>>),
    Scaled(f64, Arc<Expr>),
    TailIntegral(Arc<TailIntegral>),
    /// `minus` for `X ≤ 0`, `plus` for `X > 0`.
    Sided {
        minus: Arc<Expr>,
        plus: Arc<Expr>,
    },
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => write!(f, "0"),
            Expr::Poly(q) => write!(f, "Poly{:?}", q.coeffs()),
            Expr::Tail(t) => write!(f, "Tail{:?}", t.coeffs()),
            Expr::U { p, k, sigma } => write!(f, "U[p={p},k={k},{sigma}]"),
            Expr::ExpPoly { p, poly } => write!(f, "exp(-X^{p}){:?}", poly.coeffs()),
            Expr::Dawson => write!(f, "Dawson"),
            Expr::Ray(r) => write!(f, "Ray[p={},{}]", r.p(), r.sigma()),
            Expr::Rational(n, d) => write!(f, "({:?})/({:?})", n.coeffs(), d.coeffs()),
            Expr::Sum(v) => f.debug_tuple("Sum").field(v).finish(),
            Expr::Product(v) => f.debug_tuple("Product").field(v).finish(),
            Expr::Scaled(c, e) => write!(f, "{c}*{e:?}"),
            Expr::TailIntegral(t) => write!(f, "Int[{:?} - {}*l']", t.integrand, t.residue),
            Expr::Sided { minus, plus } => write!(f, "Sided[{minus:?} | {plus:?}]"),
        }
    }
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Expr::Zero
        } else {
            Expr::Poly(TaylorPoly::constant(c))
        }
    }

    /// `c X^k`.
    pub fn monomial(k: usize, c: f64) -> Self {
        if c == 0.0 {
            Expr::Zero
        } else {
            Expr::Poly(TaylorPoly::monomial(k, c))
        }
    }

    pub fn poly(q: TaylorPoly<f64>) -> Self {
        if q.is_zero() {
            Expr::Zero
        } else {
            Expr::Poly(q)
        }
    }

    pub fn tail(t: AsymTail<f64>) -> Self {
        if t.is_zero() {
            Expr::Zero
        } else {
            Expr::Tail(t)
        }
    }

    pub fn sided(minus: Expr, plus: Expr) -> Self {
        if minus.is_zero() && plus.is_zero() {
            Expr::Zero
        } else {
            Expr::Sided { minus: Arc::new(minus), plus: Arc::new(plus) }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Zero)
    }

    pub fn add(&self, other: &Expr) -> Expr {
        match (self, other) {
            (Expr::Zero, e) | (e, Expr::Zero) => e.clone(),
            (Expr::Poly(a), Expr::Poly(b)) => Expr::poly(a.add(b)),
            (Expr::Tail(a), Expr::Tail(b)) => Expr::tail(a.add(b)),
            _ => {
                let mut v = Vec::new();
                for e in [self, other] {
                    match e {
                        Expr::Sum(items) => v.extend(items.iter().cloned()),
                        _ => v.push(e.clone()),
                    }
                }
                Expr::Sum(Arc::new(v))
            }
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Expr {
        if c == 0.0 {
            return Expr::Zero;
        }
        if c == 1.0 {
            return self.clone();
        }
        match self {
            Expr::Zero => Expr::Zero,
            Expr::Poly(q) => Expr::Poly(q.scale(&c)),
            Expr::Tail(t) => Expr::Tail(t.scale(&c)),
            Expr::ExpPoly { p, poly } => Expr::ExpPoly { p: *p, poly: poly.scale(&c) },
            Expr::Scaled(d, e) => Expr::Scaled(c * d, e.clone()).simplified_scale(),
            _ => Expr::Scaled(c, Arc::new(self.clone())),
        }
    }

    fn simplified_scale(self) -> Expr {
        match self {
            Expr::Scaled(1.0, e) => (*e).clone(),
            e => e,
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        match (self, other) {
            (Expr::Zero, _) | (_, Expr::Zero) => Expr::Zero,
            (Expr::Poly(a), Expr::Poly(b)) => Expr::poly(a.mul(b)),
            (Expr::Poly(a), e) | (e, Expr::Poly(a)) if a.degree() == Some(0) => e.scale(a.coeff(0)),
            (Expr::Poly(a), Expr::ExpPoly { p, poly }) | (Expr::ExpPoly { p, poly }, Expr::Poly(a)) => {
                Expr::ExpPoly { p: *p, poly: poly.mul(a) }
            }
            (Expr::Scaled(c, a), b) | (b, Expr::Scaled(c, a)) => a.mul(b).scale(*c),
            _ => {
                let mut v = Vec::new();
                for e in [self, other] {
                    match e {
                        Expr::Product(items) => v.extend(items.iter().cloned()),
                        _ => v.push(e.clone()),
                    }
                }
                Expr::Product(Arc::new(v))
            }
        }
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut out = Expr::constant(1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication by `X^k`.
    pub fn mul_xpow(&self, k: usize) -> Expr {
        if k == 0 {
            self.clone()
        } else {
            self.mul(&Expr::monomial(k, 1.0))
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Zero => 0.0,
            Expr::Poly(q) => q.eval(x),
            Expr::Tail(t) => {
                if x == 0.0 {
                    return Err(Error::Domain { x, lo: f64::MIN_POSITIVE, hi: f64::INFINITY });
                }
                t.eval(x)
            }
            Expr::U { p, k, sigma } => special::eval_u(*p, *k, *sigma, x)?,
            Expr::ExpPoly { p, poly } => (-x.powi(*p as i32)).exp() * poly.eval(x),
            Expr::Dawson => special::dawson(x)?,
            Expr::Ray(r) => r.eval(x)?,
            Expr::Rational(n, d) => n.eval(x) / d.eval(x),
            Expr::Sum(v) => {
                let mut s = 0.0;
                for e in v.iter() {
                    s += e.eval(x)?;
                }
                s
            }
            Expr::Product(v) => {
                let mut s = 1.0;
                for e in v.iter() {
                    s *= e.eval(x)?;
                }
                s
            }
            Expr::Scaled(c, e) => c * e.eval(x)?,
            Expr::TailIntegral(t) => t.eval(x)?,
            Expr::Sided { minus, plus } => {
                if x <= 0.0 {
                    minus.eval(x)?
                } else {
                    plus.eval(x)?
                }
            }
        })
    }

    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Zero => Expr::Zero,
            Expr::Poly(q) => Expr::poly(q.derivative()),
            Expr::Tail(t) => Expr::tail(t.derivative()),
            Expr::U { p, k, .. } => Expr::monomial(*p as usize - 1, *p as f64).mul(self).add(&Expr::monomial(*k as usize - 1, 1.0)),
            Expr::ExpPoly { p, poly } => {
                let q = poly.derivative().sub(&poly.shift_up(*p as usize - 1).scale(&(*p as f64)));
                if q.is_zero() {
                    Expr::Zero
                } else {
                    Expr::ExpPoly { p: *p, poly: q }
                }
            }
            Expr::Dawson => Expr::constant(1.0).add(&Expr::monomial(1, -2.0).mul(self)),
            Expr::Ray(r) => r.derivative_expr(self),
            Expr::Rational(n, d) => {
                let num = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
                if num.is_zero() {
                    Expr::Zero
                } else {
                    Expr::Rational(num, d.mul(d))
                }
            }
            Expr::Sum(v) => v.iter().fold(Expr::Zero, |acc, e| acc.add(&e.derivative())),
            Expr::Product(v) => {
                let mut out = Expr::Zero;
                for i in 0..v.len() {
                    let mut term = v[i].derivative();
                    for (j, e) in v.iter().enumerate() {
                        if j != i {
                            term = term.mul(e);
                        }
                    }
                    out = out.add(&term);
                }
                out
            }
            Expr::Scaled(c, e) => e.derivative().scale(*c),
            Expr::TailIntegral(t) => t.integrand.sub(&log_kernel_prime(t.p).scale(t.residue)),
            Expr::Sided { minus, plus } => Expr::sided(minus.derivative(), plus.derivative()),
        }
    }
}
