//! Feasibility of a combined expansion and its assembly from outer and inner data.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::combined::CombinedSeries;
use crate::series::expr::{Expr, Sign};
use crate::series::matching::reconstruct_from_matching;
use crate::series::poly::LaurentPoly;
use crate::series::tail::PolyTail;
use crate::turning_point::inner::{inner_expansion, InnerOptions};
use crate::turning_point::outer::{outer_expansion, OuterExpansion};
use crate::turning_point::spec::OdeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Order in ε.
    pub n: usize,
    pub pole: usize,
    pub bound: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pole order {} at n={} exceeds {}", self.pole, self.n, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub pole_orders: Vec<usize>,
    /// Largest admissible pole order of `v_n`, `p·n`.
    pub bounds: Vec<usize>,
    /// First violating order.
    pub witness: Option<Violation>,
}

impl Feasibility {
    pub fn passes(&self) -> bool {
        self.witness.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.witness {
            None => Ok(()),
            Some(w) => Err(Error::Infeasible(w.to_string())),
        }
    }
}

/// `v_n ε^n` sits at `η^{pn}`, so a combined expansion needs `pole(v_n) ≤ p·n`.
pub fn dac_feasibility<S: Scalar>(outer: &OuterExpansion<S>) -> Feasibility {
    let pole_orders = outer.pole_orders();
    let bounds: Vec<usize> = (0..pole_orders.len()).map(|n| outer.p as usize * n).collect();
    let witness = pole_orders
        .iter()
        .zip(&bounds)
        .enumerate()
        .find(|(_, (pole, bound))| pole > bound)
        .map(|(n, (&pole, &bound))| Violation { n, pole, bound });
    Feasibility { pole_orders, bounds, witness }
}

/// Combined series with η-orders `0..order`, built from the outer and inner
/// expansions; the parts each side rejects are checked against the other.
pub fn combined_from_matching<S: Scalar>(spec: &OdeSpec, order: usize, sigma: Sign, opts: &InnerOptions) -> Result<CombinedSeries<S>> {
    let p = spec.p as usize;
    if order == 0 {
        return Ok(CombinedSeries::zero(spec.p, 0).with_sigma(sigma));
    }
    let outer = outer_expansion::<S>(spec, (order - 1).div_ceil(p).max(1))?;
    dac_feasibility(&outer).into_result()?;
    let count = order.saturating_sub(spec.r);
    let inner = inner_expansion::<S>(spec, count, sigma, opts)?;

    let outer_eta: Vec<LaurentPoly<S>> =
        (0..order).map(|k| if k % p == 0 { outer.coeffs[k / p].clone() } else { LaurentPoly::zero() }).collect();
    let inner_eta: Vec<PolyTail<S>> =
        (0..order).map(|k| if k < spec.r { PolyTail::zero() } else { inner.formal[k - spec.r].clone() }).collect();
    let mut series = reconstruct_from_matching(spec.p, sigma, &outer_eta, &inner_eta)?;
    if let Some(numeric) = &inner.numeric {
        for (n, w) in numeric.iter().enumerate() {
            let poly = Expr::poly(inner.formal[n].poly.to_f64());
            let g = w.sub(&poly);
            if !g.is_zero() {
                series.fast[n + spec.r].eval = Some(g);
            }
        }
    }
    Ok(series)
}
