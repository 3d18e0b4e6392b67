//! Polynomials at the origin (`TaylorPoly`) and finite Laurent polynomials
//! (`LaurentPoly`).

use crate::scalar::Scalar;

/// Polynomial `c_0 + c_1 x + ... + c_M x^M` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPoly<S> {
    coeffs: Vec<S>,
}

fn trim<S: Scalar>(v: &mut Vec<S>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl<S: Scalar> Default for TaylorPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> TaylorPoly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        let mut coeffs = coeffs;
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `c x^k`
    pub fn monomial(k: usize, c: S) -> Self {
        let mut v = vec![S::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_f64s(c: &[f64]) -> Self {
        Self::new(c.iter().map(|&x| S::from_f64(x)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn value_at_zero(&self) -> S {
        self.coeff(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn eval_exact(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(S::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![S::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * S::from_i64(k as i64)).collect())
    }

    /// Primitive vanishing at `x = r`.
    pub fn integral_from(&self, r: &S) -> Self {
        let mut v = vec![S::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c.clone() / S::from_i64(k as i64 + 1));
        }
        let p = Self::new(v);
        let at_r = p.eval_exact(r);
        p.sub(&Self::constant(at_r))
    }

    /// The difference quotient `(a(x) - a(0)) / x`.
    pub fn shift_s(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).cloned().collect())
    }

    pub fn shift_s_pow(&self, nu: usize) -> Self {
        Self::new(self.coeffs.iter().skip(nu).cloned().collect())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TaylorPoly<T> {
        TaylorPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> TaylorPoly<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }
}

/// Finite Laurent polynomial `Σ_{m=low}^{high} c_m x^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<S> {
    low: i64,
    coeffs: Vec<S>,
}

impl<S: Scalar> Default for LaurentPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn new(low: i64, coeffs: Vec<S>) -> Self {
        let mut coeffs = coeffs;
        trim(&mut coeffs);
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        Self { low: low + lead as i64, coeffs }
    }

    pub fn zero() -> Self {
        Self { low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(m: i64, c: S) -> Self {
        Self::new(m, vec![c])
    }

    pub fn from_taylor(p: &TaylorPoly<S>) -> Self {
        Self::new(0, p.coeffs().to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: i64) -> S {
        if m < self.low {
            return S::zero();
        }
        self.coeffs.get((m - self.low) as usize).cloned().unwrap_or_else(S::zero)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn pole_order(&self) -> usize {
        match self.low() {
            Some(l) if l < 0 => (-l) as usize,
            _ => 0,
        }
    }

    /// Leading coefficient of the pole part, i.e. the coefficient of `x^{-K}`.
    pub fn leading_pole_coeff(&self) -> Option<S> {
        (self.pole_order() > 0).then(|| self.coeffs[0].clone())
    }

    pub fn regular_part(&self) -> TaylorPoly<S> {
        match self.high() {
            Some(h) if h >= 0 => TaylorPoly::new((0..=h).map(|m| self.coeff(m)).collect()),
            _ => TaylorPoly::zero(),
        }
    }

    /// Coefficients of `x^{-1}, x^{-2}, ...`.
    pub fn pole_part(&self) -> Vec<S> {
        (1..=self.pole_order() as i64).map(|k| self.coeff(-k)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high().unwrap().max(other.high().unwrap());
        Self::new(lo, (lo..=hi).map(|m| self.coeff(m) + other.coeff(m)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(self.low + other.low, out)
    }

    /// Multiplication by `x^k`, `k` of either sign.
    pub fn shift(&self, k: i64) -> Self {
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.low - 1, self.coeffs.iter().enumerate().map(|(i, c)| c.clone() * S::from_i64(self.low + i as i64)).collect())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, c)| c.to_f64() * x.powi((self.low + i as i64) as i32)).sum()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaurentPoly<T> {
        LaurentPoly::new(self.low, self.coeffs.iter().map(f).collect())
    }

    /// `(power, coefficient)` pairs of the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.low + i as i64, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn shift_s_examples() {
        let a = TaylorPoly::<f64>::new(vec![1.0, 1.0]);
        assert_eq!(a.shift_s(), TaylorPoly::constant(1.0));
        assert!(TaylorPoly::constant(7.0).shift_s().is_zero());
        let a = TaylorPoly::<f64>::new(vec![3.0, 2.0, 5.0]);
        assert_eq!(a.shift_s(), TaylorPoly::new(vec![2.0, 5.0]));
    }

    #[test]
    fn shift_s_reconstruction_is_exact() {
        let a = TaylorPoly::new(vec![q(3, 2), q(-1, 7), q(5, 3), q(2, 9)]);
        let back = TaylorPoly::constant(a.value_at_zero()).add(&a.shift_s().shift_up(1));
        assert_eq!(back, a);
    }

    #[test]
    fn integral_from_vanishes_at_base() {
        let a = TaylorPoly::new(vec![q(1, 1), q(2, 1)]);
        let r = q(1, 2);
        let big = a.integral_from(&r);
        assert!(big.eval_exact(&r).is_zero());
        assert_eq!(big.derivative(), a);
    }

    #[test]
    fn laurent_parts() {
        // -(x+1)/(2x) = -1/2 - 1/(2x)
        let l = LaurentPoly::new(-1, vec![q(-1, 2), q(-1, 2)]);
        assert_eq!(l.pole_order(), 1);
        assert_eq!(l.regular_part(), TaylorPoly::constant(q(-1, 2)));
        assert_eq!(l.pole_part(), vec![q(-1, 2)]);
        let d = l.derivative();
        assert_eq!(d, LaurentPoly::monomial(-2, q(1, 2)));
    }

    #[test]
    fn laurent_normalizes_zeros() {
        let l = LaurentPoly::<f64>::new(-3, vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(l.low(), Some(-1));
        assert_eq!(l.pole_order(), 1);
        assert!(LaurentPoly::<f64>::new(-2, vec![0.0]).is_zero());
    }
}
