//! Closed-form expansions for `εy' = ±2xy + εg(x)` and the control problem
//! `εy' = 2xy + ε(g + α)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::combined::CombinedSeries;
use crate::series::expr::{Expr, Sign};
use crate::series::fast::{BasisTerm, FastFn};
use crate::series::poly::TaylorPoly;
use crate::series::tail::AsymTail;
use crate::special::{dawson_tail, u_tail};

/// Tail depth of the fast coefficients built here.
pub const CLOSED_FORM_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum Variant<S> {
    /// `εy' = 2xy + εg`, solution of polynomial growth on the σ side.
    Attractive(Sign),
    /// `εy' = -2xy + εg` with `y(0) = Σ ic_n η^n`.
    Repulsive { ic: Vec<S> },
}

/// `½ D S`.
fn half_ds<S: Scalar>(a: &TaylorPoly<S>, sign: S) -> TaylorPoly<S> {
    a.shift_s().derivative().scale(&(sign * S::from_ratio(1, 2)))
}

fn closed_fast<S: Scalar>(tail: AsymTail<S>, basis: Vec<BasisTerm>) -> FastFn<S> {
    let basis: Vec<BasisTerm> = basis.into_iter().filter(|b| !b.is_zero()).collect();
    if basis.is_empty() {
        return FastFn::zero();
    }
    let eval = basis.iter().fold(Expr::Zero, |acc, b| acc.add(&b.expr()));
    FastFn { tail, eval: Some(eval), basis }
}

/// Combined series of η-order `order` (`ε = η²`).
pub fn example1_closed_form<S: Scalar>(g: &TaylorPoly<S>, order: usize, variant: &Variant<S>) -> CombinedSeries<S> {
    let mut slow = vec![TaylorPoly::zero(); order];
    let mut fast = vec![FastFn::zero(); order];
    let depth = CLOSED_FORM_DEPTH;
    match variant {
        Variant::Attractive(sigma) => {
            // it = (½DS)^n g
            let mut it = g.clone();
            for n in 0.. {
                if 2 * n + 1 >= order {
                    break;
                }
                fast[2 * n + 1] = fast_u(*sigma, &it.value_at_zero(), depth);
                if 2 * n + 2 < order {
                    slow[2 * n + 2] = it.shift_s().scale(&S::from_ratio(-1, 2));
                }
                it = half_ds(&it, S::one());
            }
            CombinedSeries { p: 2, sigma: *sigma, slow, fast, log: None }
        }
        Variant::Repulsive { ic } => {
            let c = |n: usize| ic.get(n).cloned().unwrap_or_else(S::zero);
            let minus = -S::one();
            // it_n = (-½DS)^n g
            let mut iters = vec![g.clone()];
            while iters.len() * 2 < order + 2 {
                let next = half_ds(iters.last().unwrap(), minus.clone());
                iters.push(next);
            }
            for (n, it) in iters.iter().enumerate() {
                let k = 2 * n + 2;
                if k >= order {
                    break;
                }
                slow[k] = it.shift_s().scale(&S::from_ratio(1, 2));
            }
            for (k, f) in fast.iter_mut().enumerate() {
                if k % 2 == 0 {
                    let d = c(k) - slow[k].value_at_zero();
                    *f = closed_fast(AsymTail::zero(), vec![BasisTerm::ExpPoly { p: 2, poly: vec![d.to_f64()] }]);
                } else {
                    let b = iters[(k - 1) / 2].value_at_zero();
                    let tail = if b.is_zero() { AsymTail::zero() } else { dawson_tail::<S>(depth).scale(&b) };
                    *f = closed_fast(
                        tail,
                        vec![BasisTerm::Dawson { coeff: b.to_f64() }, BasisTerm::ExpPoly { p: 2, poly: vec![c(k).to_f64()] }],
                    );
                }
            }
            CombinedSeries { p: 2, sigma: Sign::Plus, slow, fast, log: None }
        }
    }
}

fn fast_u<S: Scalar>(sigma: Sign, b: &S, depth: usize) -> FastFn<S> {
    if b.is_zero() {
        return FastFn::zero();
    }
    closed_fast(u_tail::<S>(2, 1, depth).scale(b), vec![BasisTerm::U { p: 2, k: 1, sigma, coeff: b.to_f64() }])
}

/// Control series `α = Σ alpha_eta[n] η^n` (`ε = η^p`) and, for `p = 2`,
/// the regular outer coefficients `y = Σ_{n≥1} y_n ε^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSeries<S> {
    pub p: u32,
    pub alpha_eta: Vec<S>,
    /// `y[n]` multiplies `ε^n`; `y[0] = 0`. Empty unless `p = 2`.
    pub y: Vec<TaylorPoly<S>>,
}

impl<S: Scalar> ControlSeries<S> {
    /// Coefficients of integer powers of `ε`.
    pub fn alpha_eps(&self) -> Vec<S> {
        self.alpha_eta.iter().step_by(self.p as usize).cloned().collect()
    }
}

/// `α_0..=α_order` in powers of `ε`. For `p = 2`: `α_0 = -g(0)`,
/// `y_1 = -½S(g + α_0)`, `α_n = y_n'(0)`, `y_{n+1} = ½S(y_n')`.
pub fn control_expansion<S: Scalar>(g: &TaylorPoly<S>, p: u32, order: usize) -> Result<ControlSeries<S>> {
    if p != 2 {
        return general_control(g, p, order);
    }
    let mut alpha = Vec::with_capacity(order + 1);
    let mut y = vec![TaylorPoly::zero()];
    let a0 = -g.value_at_zero();
    alpha.push(a0.clone());
    if order > 0 {
        y.push(g.add(&TaylorPoly::constant(a0)).shift_s().scale(&S::from_ratio(-1, 2)));
        for n in 1..order {
            let d = y[n].derivative();
            alpha.push(d.value_at_zero());
            y.push(d.shift_s().scale(&S::from_ratio(1, 2)));
        }
        alpha.push(y[order].derivative().value_at_zero());
    }
    let alpha_eta = alpha.into_iter().enumerate().flat_map(|(i, a)| {
        let pad = if i == 0 { 0 } else { 1 };
        std::iter::repeat_n(S::zero(), pad).chain(std::iter::once(a))
    });
    Ok(ControlSeries { p, alpha_eta: alpha_eta.collect(), y })
}

fn general_control<S: Scalar>(g: &TaylorPoly<S>, p: u32, order: usize) -> Result<ControlSeries<S>> {
    let count = p as usize * order + 1;
    let alpha = crate::canard::control_alpha(p, &g.to_f64(), count)?;
    if alpha.len() < count {
        return Err(Error::Degenerate("control series came back short".into()));
    }
    Ok(ControlSeries { p, alpha_eta: alpha.iter().map(|a| S::from_f64(*a)).collect(), y: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn linear_forcing() {
        let g = TaylorPoly::new(vec![q(1, 1), q(1, 1)]);
        let y = example1_closed_form(&g, 6, &Variant::Attractive(Sign::Minus));
        assert_eq!(y.slow[2], TaylorPoly::constant(q(-1, 2)));
        assert!(y.slow[4].is_zero());
        assert_eq!(y.fast[1].basis, vec![BasisTerm::U { p: 2, k: 1, sigma: Sign::Minus, coeff: 1.0 }]);
        assert!(y.fast[3].is_zero() && y.fast[5].is_zero());
        assert_eq!(y.fast[1].tail.coeff(1), Some(q(-1, 2)));
    }

    #[test]
    fn zero_and_odd_forcing() {
        let y = example1_closed_form(&TaylorPoly::<Rational>::zero(), 6, &Variant::Attractive(Sign::Minus));
        assert!(y.is_zero());
        let g = TaylorPoly::new(vec![q(0, 1), q(2, 1), q(0, 1), q(-1, 1)]);
        let y = example1_closed_form(&g, 9, &Variant::Attractive(Sign::Plus));
        assert!(y.fast.iter().all(|f| f.is_zero()));
        assert!(!y.slow[2].is_zero());
    }

    #[test]
    fn slow_part_solves_outer_equation() {
        // 2x a_{n+2} - a_n' + [n=0] g is constant for even n
        let g = TaylorPoly::new(vec![q(1, 1), q(-2, 1), q(3, 1), q(5, 1), q(1, 7)]);
        let y = example1_closed_form(&g, 9, &Variant::Attractive(Sign::Minus));
        for n in (0..=6).step_by(2) {
            let lhs = y.slow[n + 2].shift_up(1).scale(&q(2, 1)).sub(&y.slow[n].derivative());
            let lhs = if n == 0 { lhs.add(&g) } else { lhs };
            // constant terms are carried by the fast part
            assert!(lhs.shift_s().is_zero(), "n={n}: {lhs:?}");
        }
    }

    #[test]
    fn repulsive_initial_values() {
        let g = TaylorPoly::new(vec![q(1, 1), q(1, 1), q(1, 1)]);
        let ic = vec![q(1, 2), q(0, 1), q(1, 3), q(2, 1)];
        let y = example1_closed_form(&g, 6, &Variant::Repulsive { ic: ic.clone() });
        for (k, c) in ic.iter().enumerate() {
            let v = y.slow[k].value_at_zero().to_f64() + y.fast[k].evaluator().map_or(0.0, |e| e.eval(0.0).unwrap());
            assert!((v - c.to_f64()).abs() < 1e-14, "k={k}");
        }
        assert_eq!(y.slow[2], TaylorPoly::new(vec![q(1, 2), q(1, 2)]));
        assert_eq!(y.fast[1].basis[0], BasisTerm::Dawson { coeff: 1.0 });
    }

    #[test]
    fn control_coefficients() {
        let c = control_expansion(&TaylorPoly::new(vec![q(0, 1), q(0, 1), q(1, 1)]), 2, 4).unwrap();
        assert_eq!(c.alpha_eps(), vec![q(0, 1), q(-1, 2), q(0, 1), q(0, 1), q(0, 1)]);
        assert_eq!(c.alpha_eta.len(), 9);
        assert_eq!(c.alpha_eta[2], q(-1, 2));
        assert_eq!(c.y[1], TaylorPoly::new(vec![q(0, 1), q(-1, 2)]));
        let c = control_expansion(&TaylorPoly::constant(q(1, 1)), 2, 3).unwrap();
        assert_eq!(c.alpha_eta[0], q(-1, 1));
        assert!(c.alpha_eta[1..].iter().all(|a| a == &q(0, 1)) && c.y.iter().all(|y| y.is_zero()));
        let c = control_expansion(&TaylorPoly::<Rational>::zero(), 2, 3).unwrap();
        assert!(c.alpha_eta.iter().all(|a| a == &q(0, 1)));
    }

    #[test]
    fn quartic_delegates() {
        let c = control_expansion(&TaylorPoly::new(vec![0.0, 3.0, 3.0]), 4, 1).unwrap();
        assert_eq!(c.alpha_eta.len(), 5);
        assert!((c.alpha_eta[2] + 1.0139677).abs() < 1e-6);
        assert!(c.y.is_empty());
    }
}
