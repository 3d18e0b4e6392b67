//! The operations the inner recursion needs, shared by formal tails and
//! numeric evaluators.

use crate::error::Result;
use crate::scalar::{Rational, Scalar};
use crate::series::expr::Expr;
use crate::series::tail::PolyTail;

pub trait Ring: Clone {
    fn zero() -> Self;
    fn constant(c: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, c: &Rational) -> Self;
    fn mul_xpow(&self, j: usize) -> Result<Self>;
}

impl<S: Scalar> Ring for PolyTail<S> {
    fn zero() -> Self {
        PolyTail::zero()
    }

    fn constant(c: &Rational) -> Self {
        PolyTail::constant(S::from_rational(c))
    }

    fn is_zero(&self) -> bool {
        PolyTail::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        PolyTail::add(self, other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        PolyTail::mul(self, other)
    }

    fn scale(&self, c: &Rational) -> Self {
        PolyTail::scale(self, &S::from_rational(c))
    }

    fn mul_xpow(&self, j: usize) -> Result<Self> {
        self.shift_up(j)
    }
}

impl Ring for Expr {
    fn zero() -> Self {
        Expr::Zero
    }

    fn constant(c: &Rational) -> Self {
        Expr::constant(c.to_f64())
    }

    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        Expr::add(self, other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Expr::mul(self, other))
    }

    fn scale(&self, c: &Rational) -> Self {
        Expr::scale(self, c.to_f64())
    }

    fn mul_xpow(&self, j: usize) -> Result<Self> {
        Ok(Expr::mul_xpow(self, j))
    }
}

/// A numeric function together with its expansion at infinity.
#[derive(Debug, Clone)]
pub struct Numeric {
    pub formal: PolyTail<f64>,
    pub expr: Expr,
}

impl Ring for Numeric {
    fn zero() -> Self {
        Numeric { formal: PolyTail::zero(), expr: Expr::Zero }
    }

    fn constant(c: &Rational) -> Self {
        Numeric { formal: Ring::constant(c), expr: Ring::constant(c) }
    }

    fn is_zero(&self) -> bool {
        self.expr.is_zero() && self.formal.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Numeric { formal: self.formal.add(&o.formal), expr: self.expr.add(&o.expr) }
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(Numeric { formal: self.formal.mul(&o.formal)?, expr: self.expr.mul(&o.expr) })
    }

    fn scale(&self, c: &Rational) -> Self {
        Numeric { formal: Ring::scale(&self.formal, c), expr: Ring::scale(&self.expr, c) }
    }

    fn mul_xpow(&self, j: usize) -> Result<Self> {
        Ok(Numeric { formal: self.formal.shift_up(j)?, expr: self.expr.mul_xpow(j) })
    }
}
