//! Combined series `Σ (a_n(x) + g_n(x/η)) η^n` with `ε = η^p`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::expr::{log_kernel, log_kernel_prime, log_kernel_prime_tail, Expr, Sign, TailIntegral};
use crate::series::fast::FastFn;
use crate::series::poly::TaylorPoly;
use crate::series::tail::AsymTail;

/// `Σ_n r_n ℓ(X) η^n` with `ℓ(X) = (1/p) log(X^p + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogComponent<S> {
    /// `residues[n]` multiplies `η^n`.
    pub residues: Vec<S>,
    pub p: u32,
}

impl<S: Scalar> LogComponent<S> {
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|r| r.is_zero())
    }

    pub fn residue(&self, n: usize) -> S {
        self.residues.get(n).cloned().unwrap_or_else(S::zero)
    }
}

#[derive(Debug, Clone)]
pub struct CombinedSeries<S> {
    pub p: u32,
    /// Side on which the fast parts are bounded.
    pub sigma: Sign,
    pub slow: Vec<TaylorPoly<S>>,
    pub fast: Vec<FastFn<S>>,
    pub log: Option<LogComponent<S>>,
}

/// Tail depth used for `ℓ'` when the partner tail is exact.
const KERNEL_DEPTH: usize = 40;

impl<S: Scalar> CombinedSeries<S> {
    pub fn zero(p: u32, order: usize) -> Self {
        Self { p, sigma: Sign::Minus, slow: vec![TaylorPoly::zero(); order], fast: vec![FastFn::zero(); order], log: None }
    }

    pub fn new(p: u32, sigma: Sign, slow: Vec<TaylorPoly<S>>, fast: Vec<FastFn<S>>) -> Result<Self> {
        if slow.len() != fast.len() {
            return Err(Error::Invalid(format!("{} slow but {} fast coefficients", slow.len(), fast.len())));
        }
        if p < 1 {
            return Err(Error::Invalid("root power must be >= 1".into()));
        }
        Ok(Self { p, sigma, slow, fast, log: None })
    }

    /// The constant `c` as a series of the given order.
    pub fn constant(p: u32, order: usize, c: S) -> Self {
        let mut s = Self::zero(p, order);
        if order > 0 {
            s.slow[0] = TaylorPoly::constant(c);
        }
        s
    }

    pub fn with_sigma(mut self, sigma: Sign) -> Self {
        self.sigma = sigma;
        self
    }

    /// Truncation order `N`: coefficients of `η^0 .. η^{N-1}` are known.
    pub fn order(&self) -> usize {
        self.slow.len()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        let mut out = self.clone();
        out.slow.truncate(n);
        out.fast.truncate(n);
        if let Some(l) = &mut out.log {
            l.residues.truncate(n);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Smallest `n` with a nonzero slow or fast part.
    pub fn valuation(&self) -> Option<usize> {
        (0..self.order())
            .find(|&n| !self.slow[n].is_zero() || !self.fast[n].is_zero() || self.log.as_ref().is_some_and(|l| !l.residue(n).is_zero()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::RootPowerMismatch(self.p, other.p));
        }
        let n = self.order().min(other.order());
        let log = match (&self.log, &other.log) {
            (None, None) => None,
            (a, b) => {
                let zero = LogComponent { residues: Vec::new(), p: self.p };
                let (a, b) = (a.as_ref().unwrap_or(&zero), b.as_ref().unwrap_or(&zero));
                Some(LogComponent { residues: (0..n).map(|i| a.residue(i) + b.residue(i)).collect(), p: self.p })
            }
        };
        Ok(Self {
            p: self.p,
            sigma: self.sigma,
            slow: (0..n).map(|i| self.slow[i].add(&other.slow[i])).collect(),
            fast: (0..n).map(|i| self.fast[i].add(&other.fast[i])).collect(),
            log,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            p: self.p,
            sigma: self.sigma,
            slow: self.slow.iter().map(|a| a.scale(c)).collect(),
            fast: self.fast.iter().map(|g| g.scale(c)).collect(),
            log: self.log.as_ref().map(|l| LogComponent { residues: l.residues.iter().map(|r| r.clone() * c.clone()).collect(), p: l.p }),
        }
    }

    pub fn to_f64(&self) -> CombinedSeries<f64> {
        CombinedSeries {
            p: self.p,
            sigma: self.sigma,
            slow: self.slow.iter().map(|a| a.to_f64()).collect(),
            fast: self.fast.iter().map(|g| g.to_f64()).collect(),
            log: self.log.as_ref().map(|l| LogComponent { residues: l.residues.iter().map(|r| r.to_f64()).collect(), p: l.p }),
        }
    }
}

pub fn shift_s<S: Scalar>(a: &TaylorPoly<S>) -> TaylorPoly<S> {
    a.shift_s()
}

pub fn shift_t<S: Scalar>(g: &AsymTail<S>) -> AsymTail<S> {
    g.shift_t()
}

/// Adds `a(x) g(x/η) η^base` into `out`, expanded as
/// `Σ_ν (g_ν S^ν a + a_ν T^ν g) η^{base+ν}`.
fn add_slow_fast<S: Scalar>(out: &mut CombinedSeries<S>, a: &TaylorPoly<S>, g: &FastFn<S>, g_order: usize, base: usize) -> Result<()> {
    let n = out.order();
    if a.is_zero() || g.is_zero() {
        return Ok(());
    }
    let deg = a.degree().unwrap_or(0);
    for nu in 0..=deg {
        let k = base + nu;
        if k >= n {
            break;
        }
        if nu > 0 {
            let g_nu =
                g.tail.coeff(nu).ok_or(Error::InsufficientTailDepth { order: g_order, depth: g.tail.depth().unwrap_or(0), needed: nu })?;
            if !g_nu.is_zero() {
                out.slow[k] = out.slow[k].add(&a.shift_s_pow(nu).scale(&g_nu));
            }
        }
        let a_nu = a.coeff(nu);
        if !a_nu.is_zero() {
            let t =
                g.shift_t_pow(nu).ok_or(Error::InsufficientTailDepth { order: g_order, depth: g.tail.depth().unwrap_or(0), needed: nu })?;
            out.fast[k] = out.fast[k].add(&t.scale(&a_nu));
        }
    }
    Ok(())
}

/// Coefficient-level product, truncated at the smaller order.
pub fn multiply<S: Scalar>(y: &CombinedSeries<S>, z: &CombinedSeries<S>) -> Result<CombinedSeries<S>> {
    if y.p != z.p {
        return Err(Error::RootPowerMismatch(y.p, z.p));
    }
    if y.log.as_ref().is_some_and(|l| !l.is_zero()) || z.log.as_ref().is_some_and(|l| !l.is_zero()) {
        return Err(Error::Invalid("products with logarithmic components are not supported".into()));
    }
    let n = y.order().min(z.order());
    let mut out = CombinedSeries::zero(y.p, n).with_sigma(y.sigma);
    for i in 0..n {
        for j in 0..n - i {
            let k = i + j;
            out.slow[k] = out.slow[k].add(&y.slow[i].mul(&z.slow[j]));
            if !y.fast[i].is_zero() && !z.fast[j].is_zero() {
                out.fast[k] = out.fast[k].add(&y.fast[i].mul(&z.fast[j]));
            }
            add_slow_fast(&mut out, &y.slow[i], &z.fast[j], j, k)?;
            add_slow_fast(&mut out, &z.slow[j], &y.fast[i], i, k)?;
        }
    }
    Ok(out)
}

/// `d/dx`; order `n` of the result is `a_n' + g_{n+1}'`.
pub fn differentiate<S: Scalar>(y: &CombinedSeries<S>) -> Result<CombinedSeries<S>> {
    let n = y.order();
    if n == 0 {
        return Ok(y.clone());
    }
    if !y.fast[0].is_zero() {
        return Err(Error::NonDifferentiable);
    }
    let mut out = CombinedSeries::zero(y.p, n - 1).with_sigma(y.sigma);
    for k in 0..n - 1 {
        out.slow[k] = y.slow[k].derivative();
        let mut g = y.fast[k + 1].derivative();
        if let Some(log) = &y.log {
            let r = log.residue(k + 1);
            if !r.is_zero() {
                let depth = g.tail.depth().unwrap_or(KERNEL_DEPTH).max(1);
                let kernel = log_kernel_prime_tail(y.p, depth).map(|c| S::from_f64(*c));
                let kf = FastFn::with_eval(kernel, log_kernel_prime(y.p));
                g = g.add(&kf.scale(&r));
            }
        }
        out.fast[k] = g;
    }
    Ok(out)
}

/// Primitive in `x`: slow parts `∫_r^x a_n`, fast parts
/// `H_n(X) = ∫_{σ∞}^X (g_n - g_{n,1} ℓ')` moved to order `n+1`, and residues
/// `g_{n,1}` collected at order `n+1` in the returned log component.
pub fn antiderivative<S: Scalar>(y: &CombinedSeries<S>, r: &S) -> Result<(CombinedSeries<S>, LogComponent<S>)> {
    if y.log.as_ref().is_some_and(|l| !l.is_zero()) {
        return Err(Error::Invalid("series already carries a logarithmic component".into()));
    }
    let n = y.order();
    let p = y.p;
    let mut out = CombinedSeries::zero(p, n).with_sigma(y.sigma);
    let mut residues = vec![S::zero(); n];
    for k in 0..n {
        out.slow[k] = y.slow[k].integral_from(r);
    }
    for k in 0..n.saturating_sub(1) {
        let g = &y.fast[k];
        if g.is_zero() {
            continue;
        }
        let rho = g.tail.coeff(1).ok_or(Error::InsufficientTailDepth { order: k, depth: 0, needed: 1 })?;
        let depth = g.tail.depth();
        let c = if rho.is_zero() {
            g.tail.clone()
        } else {
            let kd = depth.unwrap_or(KERNEL_DEPTH.max(g.tail.coeffs().len() + p as usize));
            let kernel = log_kernel_prime_tail(p, kd).map(|c| S::from_f64(*c));
            g.tail.sub(&kernel.scale(&rho))
        };
        let h_depth = c.depth().map(|d| d.saturating_sub(1));
        let h_coeffs: Vec<S> = c.coeffs().iter().enumerate().skip(1).map(|(i, cm)| cm.clone() * S::from_ratio(-1, i as i64)).collect();
        let h_tail = AsymTail::with_depth(h_coeffs, h_depth);
        let eval = match g.evaluator() {
            Some(e) => Some(Expr::TailIntegral(Arc::new(TailIntegral {
                integrand: e,
                residue: rho.to_f64(),
                p,
                sigma: y.sigma,
                tail: h_tail.to_f64(),
                x_far: 40f64.powf(1.0 / p as f64).max(10.0),
            }))),
            None if rho.is_zero() => None,
            None => return Err(Error::MissingEvaluator { order: k, residue: rho.to_f64() }),
        };
        residues[k + 1] = rho;
        out.fast[k + 1] = FastFn { tail: h_tail, eval, basis: Vec::new() };
    }
    let log = LogComponent { residues, p };
    out.log = Some(log.clone());
    Ok((out, log))
}

/// `Σ_j P_j · y^j`, for `y` of valuation at least 1.
pub fn compose_left<S: Scalar>(coeffs: &[CombinedSeries<S>], y: &CombinedSeries<S>) -> Result<CombinedSeries<S>> {
    if let Some(0) = y.valuation() {
        return Err(Error::ZeroValuation);
    }
    let mut n = y.order();
    for c in coeffs {
        if c.p != y.p {
            return Err(Error::RootPowerMismatch(c.p, y.p));
        }
        n = n.min(c.order());
    }
    let y = y.truncate(n);
    let mut out = CombinedSeries::zero(y.p, n).with_sigma(y.sigma);
    let mut power = CombinedSeries::constant(y.p, n, S::one()).with_sigma(y.sigma);
    for (j, c) in coeffs.iter().enumerate() {
        if j >= n.max(1) && j > 0 {
            break;
        }
        if j > 0 {
            power = multiply(&power, &y)?;
        }
        out = out.add(&multiply(&c.truncate(n), &power)?)?;
    }
    Ok(out)
}

/// `Σ_{n<terms} (a_n(x) + g_n(x/η)) η^n` plus any logarithmic component.
pub fn evaluate_partial_sum<S: Scalar>(y: &CombinedSeries<S>, x: f64, eta: f64, terms: usize) -> Result<f64> {
    if terms > y.order() {
        return Err(Error::OutOfRange { index: terms, order: y.order() });
    }
    let big_x = x / eta;
    let mut total = 0.0;
    let mut pw = 1.0;
    for n in 0..terms {
        let mut v = y.slow[n].eval(x);
        if !y.fast[n].is_zero() {
            let e = y.fast[n]
                .evaluator()
                .ok_or(Error::MissingEvaluator { order: n, residue: y.fast[n].tail.coeff(1).map(|c| c.to_f64()).unwrap_or(f64::NAN) })?;
            v += e.eval(big_x)?;
        }
        if let Some(l) = &y.log {
            let r = l.residue(n).to_f64();
            if r != 0.0 {
                v += r * log_kernel(y.p, big_x);
            }
        }
        total += v * pw;
        pw *= eta;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::series::fast::BasisTerm;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn u_minus(coeff: f64) -> FastFn<f64> {
        FastFn::from_basis(vec![BasisTerm::U { p: 2, k: 1, sigma: Sign::Minus, coeff }], 12)
    }

    #[test]
    fn shifts() {
        assert_eq!(shift_s(&TaylorPoly::new(vec![q(3, 1), q(2, 1), q(5, 1)])), TaylorPoly::new(vec![q(2, 1), q(5, 1)]));
        assert!(shift_s(&TaylorPoly::constant(q(7, 1))).is_zero());
        assert_eq!(shift_t(&AsymTail::<f64>::new(vec![2.0, 3.0, 4.0])).padded(2), vec![3.0, 4.0]);
    }

    #[test]
    fn slow_x_times_inverse_x() {
        let mut y = CombinedSeries::<f64>::zero(2, 3);
        y.slow[0] = TaylorPoly::monomial(1, 1.0);
        let mut z = CombinedSeries::<f64>::zero(2, 3);
        z.fast[0] = FastFn::from_tail(AsymTail::exact(vec![1.0]));
        let w = multiply(&y, &z).unwrap();
        assert_eq!(w.slow[1], TaylorPoly::constant(1.0));
        assert!(w.slow[0].is_zero() && w.slow[2].is_zero());
        assert!(w.fast.iter().all(|f| f.is_zero()));
        let (x, eta) = (0.3, 0.1);
        let lhs = evaluate_partial_sum(&w, x, eta, 3).unwrap();
        assert!((lhs - 0.1).abs() < 1e-15);
    }

    #[test]
    fn slow_x_times_u_minus() {
        let mut y = CombinedSeries::<f64>::zero(2, 3);
        y.slow[0] = TaylorPoly::monomial(1, 1.0);
        let mut z = CombinedSeries::<f64>::zero(2, 3);
        z.fast[0] = u_minus(1.0);
        let w = multiply(&y, &z).unwrap();
        assert_eq!(w.slow[1], TaylorPoly::constant(-0.5));
        assert_eq!(w.fast[1].tail.padded(4), vec![0.0, 0.25, 0.0, -0.375]);
        // numeric: x U^-(x/η) = η(-1/2 + (T U^-)(x/η))
        let (x, eta) = (-0.4, 0.2);
        let direct = x * crate::special::eval_u(2, 1, Sign::Minus, x / eta).unwrap();
        assert!((evaluate_partial_sum(&w, x, eta, 3).unwrap() - direct).abs() < 1e-13);
    }

    #[test]
    fn scalar_multiple() {
        let mut y = CombinedSeries::<f64>::zero(2, 2);
        y.slow[1] = TaylorPoly::from_f64s(&[1.0, 2.0]);
        y.fast[1] = u_minus(1.0);
        let w = multiply(&CombinedSeries::constant(2, 2, 3.0), &y).unwrap();
        assert_eq!(w.slow[1], TaylorPoly::from_f64s(&[3.0, 6.0]));
        assert_eq!(w.fast[1].basis, vec![BasisTerm::U { p: 2, k: 1, sigma: Sign::Minus, coeff: 3.0 }]);
    }

    #[test]
    fn derivative_rules() {
        let mut y = CombinedSeries::<f64>::zero(2, 3);
        y.slow[0] = TaylorPoly::monomial(2, 1.0);
        y.fast[1] = FastFn::from_tail(AsymTail::exact(vec![1.0]));
        let d = differentiate(&y).unwrap();
        assert_eq!(d.order(), 2);
        assert_eq!(d.slow[0], TaylorPoly::monomial(1, 2.0));
        assert_eq!(d.fast[0].tail.padded(2), vec![0.0, -1.0]);
        assert!(differentiate(&CombinedSeries::constant(2, 3, 4.0)).unwrap().is_zero());
        let mut bad = CombinedSeries::<f64>::zero(2, 2);
        bad.fast[0] = FastFn::from_tail(AsymTail::exact(vec![1.0]));
        assert_eq!(differentiate(&bad).unwrap_err(), Error::NonDifferentiable);
    }

    #[test]
    fn antiderivative_inverse_square() {
        let mut y = CombinedSeries::<Rational>::zero(2, 3);
        y.fast[0] = FastFn::from_tail(AsymTail::exact(vec![q(0, 1), q(1, 1)]));
        y.slow[0] = TaylorPoly::constant(q(1, 1));
        let (a, log) = antiderivative(&y, &q(0, 1)).unwrap();
        assert_eq!(a.fast[1].tail.padded(2), vec![q(-1, 1), q(0, 1)]);
        assert!(log.is_zero());
        assert_eq!(a.slow[0], TaylorPoly::monomial(1, q(1, 1)));
    }

    #[test]
    fn antiderivative_with_residue() {
        let mut y = CombinedSeries::<f64>::zero(2, 3).with_sigma(Sign::Plus);
        y.fast[0] = FastFn::from_tail(AsymTail::exact(vec![1.0]));
        let (a, log) = antiderivative(&y, &0.0).unwrap();
        assert_eq!(log.residues, vec![0.0, 1.0, 0.0]);
        let h = a.fast[1].evaluator().unwrap().eval(2.0).unwrap();
        assert!((h + 0.5 * 1.25f64.ln()).abs() < 1e-10, "{h}");
        let mut missing = CombinedSeries::<f64>::zero(2, 2);
        missing.fast[0] = FastFn::from_tail(AsymTail::new(vec![1.0]));
        assert!(matches!(antiderivative(&missing, &0.0), Err(Error::MissingEvaluator { .. })));
    }

    #[test]
    fn derivative_of_antiderivative() {
        let mut y = CombinedSeries::<Rational>::zero(2, 4);
        y.slow[0] = TaylorPoly::new(vec![q(1, 1), q(2, 1)]);
        y.slow[2] = TaylorPoly::new(vec![q(0, 1), q(0, 1), q(3, 1)]);
        y.fast[1] = FastFn::from_tail(AsymTail::exact(vec![q(0, 1), q(5, 1), q(1, 3)]));
        let (a, _) = antiderivative(&y, &q(1, 2)).unwrap();
        let d = differentiate(&a).unwrap();
        for n in 0..3 {
            assert_eq!(d.slow[n], y.slow[n]);
            assert_eq!(d.fast[n].tail.padded(6), y.fast[n].tail.padded(6), "order {n}");
        }
    }

    #[test]
    fn compose_square() {
        let mut y = CombinedSeries::<f64>::zero(2, 4);
        y.slow[1] = TaylorPoly::monomial(1, 1.0);
        y.fast[1] = u_minus(1.0);
        let one = CombinedSeries::constant(2, 4, 1.0);
        let zero = CombinedSeries::zero(2, 4);
        let sq = compose_left(&[zero.clone(), zero.clone(), one.clone()], &y).unwrap();
        let oracle = multiply(&y, &y).unwrap();
        assert_eq!(sq.slow[2], TaylorPoly::monomial(2, 1.0));
        for n in 0..4 {
            assert_eq!(sq.slow[n], oracle.slow[n]);
            assert_eq!(sq.fast[n].tail.padded(6), oracle.fast[n].tail.padded(6));
        }
        assert_eq!(sq.fast[2].tail.padded(4)[..2], [0.0, 0.25]);
        let id = compose_left(&[zero.clone(), one.clone()], &y).unwrap();
        assert_eq!(id.slow, y.slow);
        let c = compose_left(&[CombinedSeries::constant(2, 4, 2.5)], &y).unwrap();
        assert_eq!(c.slow[0], TaylorPoly::constant(2.5));
        let mut bad = y.clone();
        bad.slow[0] = TaylorPoly::constant(1.0);
        assert_eq!(compose_left(&[one], &bad).unwrap_err(), Error::ZeroValuation);
    }

    #[test]
    fn partial_sums() {
        assert_eq!(evaluate_partial_sum(&CombinedSeries::<f64>::zero(2, 3), 0.4, 0.1, 3).unwrap(), 0.0);
        let mut y = CombinedSeries::<f64>::zero(2, 1);
        y.slow[0] = TaylorPoly::monomial(1, 1.0);
        assert_eq!(evaluate_partial_sum(&y, 0.5, 0.1, 1).unwrap(), 0.5);
        let mut u = CombinedSeries::<f64>::zero(2, 2);
        u.fast[1] = u_minus(1.0);
        let eta = 0.1f64.sqrt();
        let v = evaluate_partial_sum(&u, 0.0, eta, 2).unwrap();
        assert!((v - (0.1 * std::f64::consts::PI).sqrt() / 2.0).abs() < 1e-12);
        assert!(evaluate_partial_sum(&u, 0.0, eta, 3).is_err());
    }
}
