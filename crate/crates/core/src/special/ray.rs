//! Polynomial-growth solutions of `U' = p X^{p-1} U + Σ_k c_k(X) U^k` on a
//! real ray, tabulated on a grid and extended by their formal tails.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::numeric::ode::{hermite, Dopri, OdeOptions};
use crate::series::expr::{Expr, Sign};
use crate::series::tail::PolyTail;
use crate::special::formal::formal_solve;
use crate::special::EXP_CAP;

#[derive(Debug, Clone, Copy)]
pub struct RayOptions {
    pub nodes: usize,
    /// `X_far^p`: the grid starts at `σ X_far`, beyond which the tail is used.
    pub far: f64,
    /// `X_over^p`: the grid ends at `-σ X_over`, past the turning point.
    pub over: f64,
    pub tol: f64,
    /// Formal tail depth.
    pub depth: usize,
}

impl Default for RayOptions {
    fn default() -> Self {
        Self { nodes: 2048, far: 40.0, over: 4.0, tol: 1e-12, depth: 60 }
    }
}

#[derive(Debug)]
pub struct RayFn {
    p: u32,
    sigma: Sign,
    terms: Vec<(u32, Expr)>,
    tail: PolyTail<f64>,
    x_far: f64,
    start: f64,
    step: f64,
    vals: Vec<f64>,
    ders: Vec<f64>,
    tol: f64,
}

fn rhs_value(p: u32, terms: &[(u32, Expr)], x: f64, u: f64) -> Result<f64> {
    let mut s = p as f64 * x.powi(p as i32 - 1) * u;
    for (k, c) in terms {
        s += c.eval(x)? * u.powi(*k as i32);
    }
    Ok(s)
}

impl RayFn {
    /// Integrates inward from `σ X_far`, starting from the formal solution
    /// whose tail is `tail` (computed by the caller to the depth it needs).
    pub fn solve(p: u32, sigma: Sign, terms: Vec<(u32, Expr)>, tail: PolyTail<f64>, opts: &RayOptions) -> Result<Self> {
        if opts.nodes < 4 {
            return Err(Error::Invalid("ray grid needs at least 4 nodes".into()));
        }
        let inv = 1.0 / p as f64;
        let x_far = opts.far.powf(inv);
        let x_over = opts.over.powf(inv);
        let s = sigma.value();
        let start = s * x_far;
        let end = -s * x_over;
        let step = (end - start) / (opts.nodes - 1) as f64;
        let u0 = tail.eval_optimal(start).0;
        let err: RefCell<Option<Error>> = RefCell::new(None);
        let rhs = |x: f64, u: &[f64; 1]| match rhs_value(p, &terms, x, u[0]) {
            Ok(v) => [v],
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                [f64::NAN]
            }
        };
        let ode = OdeOptions { rtol: opts.tol, atol: opts.tol, blowup_cap: 1e100, ..Default::default() };
        let mut stepper = Dopri::new(rhs, start, [u0], ode);
        let mut vals = Vec::with_capacity(opts.nodes);
        let mut ders = Vec::with_capacity(opts.nodes);
        vals.push(stepper.y[0]);
        ders.push(stepper.f[0]);
        for i in 1..opts.nodes {
            let target = if i == opts.nodes - 1 { end } else { start + step * i as f64 };
            let res = stepper.advance_to(target);
            if let Some(e) = err.borrow_mut().take() {
                return Err(e);
            }
            res?;
            vals.push(stepper.y[0]);
            ders.push(stepper.f[0]);
        }
        Ok(Self { p, sigma, terms, tail, x_far, start, step, vals, ders, tol: opts.tol })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn sigma(&self) -> Sign {
        self.sigma
    }

    pub fn tail(&self) -> &PolyTail<f64> {
        &self.tail
    }

    pub fn terms(&self) -> &[(u32, Expr)] {
        &self.terms
    }

    /// Grid end points, outermost first.
    pub fn grid(&self) -> (f64, f64) {
        (self.start, self.start + self.step * (self.vals.len() - 1) as f64)
    }

    pub fn rhs(&self, x: f64, u: f64) -> Result<f64> {
        rhs_value(self.p, &self.terms, x, u)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let s = self.sigma.value();
        if s * x >= self.x_far {
            return Ok(self.tail.eval_optimal(x).0);
        }
        let n = self.vals.len();
        let pos = (x - self.start) / self.step;
        if pos <= (n - 1) as f64 {
            let i = (pos.floor() as usize).min(n - 2);
            let x0 = self.start + self.step * i as f64;
            let x1 = if i + 1 == n - 1 { self.grid().1 } else { x0 + self.step };
            return Ok(hermite(x0, &[self.vals[i]], &[self.ders[i]], x1, &[self.vals[i + 1]], &[self.ders[i + 1]], x)[0]);
        }
        self.continue_to(x)
    }

    /// ODE continuation past the grid, in the direction where the
    /// homogeneous solution grows.
    fn continue_to(&self, x: f64) -> Result<f64> {
        let xp = x.abs().powi(self.p as i32);
        if xp > EXP_CAP {
            return Err(Error::Overflow(xp));
        }
        let n = self.vals.len();
        let err: RefCell<Option<Error>> = RefCell::new(None);
        let rhs = |t: f64, u: &[f64; 1]| match self.rhs(t, u[0]) {
            Ok(v) => [v],
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                [f64::NAN]
            }
        };
        let ode = OdeOptions { rtol: self.tol, atol: self.tol, blowup_cap: 1e300, ..Default::default() };
        let mut st = Dopri::new(rhs, self.grid().1, [self.vals[n - 1]], ode);
        let res = st.advance_to(x);
        if let Some(e) = err.borrow_mut().take() {
            return Err(e);
        }
        res?;
        Ok(st.y[0])
    }

    /// `U' = p X^{p-1} U + Σ c_k U^k`, with `me` the expression for `U`.
    pub fn derivative_expr(&self, me: &Expr) -> Expr {
        let mut out = Expr::monomial(self.p as usize - 1, self.p as f64).mul(me);
        for (k, c) in &self.terms {
            out = out.add(&c.mul(&me.pow(*k)));
        }
        out
    }
}

/// `J^σ v`: the solution of `U' = p X^{p-1} U + v` of polynomial growth on
/// the σ side; `v_tail` is the expansion of `v` at infinity.
pub fn apply_j(p: u32, sigma: Sign, v: &Expr, v_tail: &PolyTail<f64>, opts: &RayOptions) -> Result<Expr> {
    if v.is_zero() {
        return Ok(Expr::Zero);
    }
    let tail = formal_solve(p, &[(0, v_tail.clone())], opts.depth)?;
    let ray = RayFn::solve(p, sigma, vec![(0, v.clone())], tail, opts)?;
    Ok(Expr::Ray(std::sync::Arc::new(ray)))
}
