//! Outer (Poincaré) expansion `y ~ Σ_{n≥1} v_n(x) ε^n` away from the turning point.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::poly::LaurentPoly;
use crate::turning_point::spec::OdeSpec;

#[derive(Debug, Clone)]
pub struct OuterExpansion<S> {
    pub p: u32,
    /// `coeffs[n] = v_n`, with `v_0 = 0`.
    pub coeffs: Vec<LaurentPoly<S>>,
}

impl<S: Scalar> OuterExpansion<S> {
    pub fn pole_orders(&self) -> Vec<usize> {
        self.coeffs.iter().map(|v| v.pole_order()).collect()
    }
}

/// Coefficients `[ε^0..=ε^m]` of `y^k` for `y = Σ v_n ε^n`.
fn powers<S: Scalar>(v: &[LaurentPoly<S>], k_max: usize, m: usize) -> Vec<Vec<LaurentPoly<S>>> {
    let mut out = vec![vec![LaurentPoly::zero(); m + 1]; k_max + 1];
    out[0][0] = LaurentPoly::monomial(0, S::one());
    for k in 1..=k_max {
        for a in 0..=m {
            if out[k - 1][a].is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if a + b > m {
                    break;
                }
                if !vb.is_zero() {
                    out[k][a + b] = out[k][a + b].add(&out[k - 1][a].mul(vb));
                }
            }
        }
    }
    out
}

/// `v_{n+1} = (v_n' - q_n) / (p x^{p-1})` with `q_n = [ε^{n+1}] R(x, Σ_{ν≤n} v_ν ε^ν, ε)`;
/// returns `v_0..=v_order`.
pub fn outer_expansion<S: Scalar>(spec: &OdeSpec, order: usize) -> Result<OuterExpansion<S>> {
    if order < 1 {
        return Err(Error::Invalid("outer expansion needs order >= 1".into()));
    }
    let p = spec.p as usize;
    for (i, a) in spec.alpha.iter().enumerate() {
        if i % p != 0 && *a != crate::scalar::Rational::from_i64(0) {
            return Err(Error::Invalid(format!("control coefficient at eta^{i} has no outer counterpart in integer powers of eps")));
        }
    }
    let k_max = spec.terms.iter().map(|t| t.k).max().unwrap_or(0);
    let inv = S::one() / S::from_i64(p as i64);
    let mut v: Vec<LaurentPoly<S>> = vec![LaurentPoly::zero()];
    for n in 0..order {
        let pw = powers(&v, k_max, n + 1);
        let mut q = LaurentPoly::zero();
        for t in &spec.terms {
            if t.l > n + 1 {
                continue;
            }
            let yk = &pw[t.k][n + 1 - t.l];
            if !yk.is_zero() {
                q = q.add(&yk.shift(t.j as i64).scale(&S::from_rational(&t.c)));
            }
        }
        if spec.control {
            q = q.add(&LaurentPoly::monomial(0, spec.alpha_eta::<S>(n * p)));
        }
        let next = v[n].derivative().sub(&q).shift(-(p as i64 - 1)).scale(&inv);
        v.push(next);
    }
    Ok(OuterExpansion { p: spec.p, coeffs: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::series::poly::TaylorPoly;
    use crate::turning_point::spec::Term;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    pub(crate) fn e1() -> OdeSpec {
        OdeSpec::new(4, vec![Term { j: 0, k: 0, l: 1, c: q(-4, 1) }, Term { j: 1, k: 2, l: 0, c: q(-1, 1) }], 1, false).unwrap()
    }

    #[test]
    fn example_one_outer() {
        let spec = OdeSpec::forced(2, &TaylorPoly::new(vec![q(1, 1), q(1, 1)])).unwrap();
        let o = outer_expansion::<Rational>(&spec, 2).unwrap();
        assert_eq!(o.coeffs[1], LaurentPoly::new(-1, vec![q(-1, 2), q(-1, 2)]));
        assert_eq!(o.coeffs[2], LaurentPoly::monomial(-3, q(1, 4)));
        assert_eq!(o.pole_orders(), vec![0, 1, 3]);
    }

    #[test]
    fn counterexample_outer() {
        let o = outer_expansion::<Rational>(&e1(), 5).unwrap();
        assert_eq!(o.coeffs[1], LaurentPoly::monomial(-3, q(1, 1)));
        assert_eq!(o.coeffs[2], LaurentPoly::new(-8, vec![q(1, 4), q(-3, 4)]));
        for n in 1..=5 {
            assert_eq!(o.coeffs[n].pole_order(), 5 * n - 2);
        }
    }

    #[test]
    fn residual_vanishes() {
        // substitute the partial sum back: ε^{n+1} coefficients of εy' - 4x^3 y - R vanish
        let spec = e1();
        let o = outer_expansion::<Rational>(&spec, 4).unwrap();
        let pw = powers(&o.coeffs, 2, 5);
        for m in 1..=4 {
            let lhs = o.coeffs[m - 1].derivative();
            let mut rhs = o.coeffs[m].shift(3).scale(&q(4, 1));
            for t in &spec.terms {
                if t.l <= m {
                    rhs = rhs.add(&pw[t.k][m - t.l].shift(t.j as i64).scale(&t.c));
                }
            }
            assert!(lhs.sub(&rhs).is_zero(), "eps^{m}");
        }
    }

    #[test]
    fn zero_forcing() {
        let spec = OdeSpec::new(2, vec![], 1, false).unwrap();
        let o = outer_expansion::<f64>(&spec, 3).unwrap();
        assert!(o.coeffs.iter().all(|v| v.is_zero()));
    }
}
