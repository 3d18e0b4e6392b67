//! Turning-point equations `εy' = p x^{p-1} y + ε h(x, ε) + Σ P_{jkl} x^j y^k ε^l`
//! (plus `ε α(ε)` when a control parameter is present).

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::series::poly::TaylorPoly;

/// One monomial `c x^j y^k ε^l` of the right-hand side beyond `p x^{p-1} y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSpec {
    pub p: u32,
    /// All terms, `h_{jl}` already folded in as `(j, 0, l+1)`.
    pub terms: Vec<Term>,
    /// Inner scaling `y = η^r Y`.
    pub r: usize,
    pub control: bool,
    /// Known control coefficients, indexed by powers of `η`.
    pub alpha: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawH {
    j: usize,
    l: usize,
    c: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawP {
    j: usize,
    k: usize,
    l: usize,
    c: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    p: u32,
    #[serde(default)]
    f: Option<Vec<Value>>,
    #[serde(default)]
    h: Vec<RawH>,
    #[serde(default, rename = "P")]
    big_p: Vec<RawP>,
    #[serde(default)]
    r: Option<usize>,
    #[serde(default)]
    control: bool,
    #[serde(default)]
    alpha: Vec<Value>,
}

fn coeff(v: &Value, ctx: &str) -> Result<Rational> {
    let parsed = match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => None,
    };
    parsed.ok_or_else(|| Error::Invalid(format!("{ctx}: expected a number or \"num/den\" string, got {v}")))
}

impl OdeSpec {
    /// Checks `p` and the admissible term set.
    pub fn new(p: u32, terms: Vec<Term>, r: usize, control: bool) -> Result<Self> {
        if p < 2 || !p.is_multiple_of(2) {
            return Err(Error::Invalid(format!("p = {p} must be even and >= 2")));
        }
        if r < 1 {
            return Err(Error::Invalid("r must be >= 1".into()));
        }
        for t in &terms {
            if t.l == 0 && t.k <= 1 {
                return Err(Error::Invalid(format!(
                    "term x^{} y^{} without a factor of eps: the equation must be normalized to eps y' = p x^(p-1) y + O(eps) + O(y^2)",
                    t.j, t.k
                )));
            }
        }
        let terms = terms.into_iter().filter(|t| t.c != Rational::from_i64(0)).collect();
        Ok(Self { p, terms, r, control, alpha: Vec::new() })
    }

    /// `εy' = p x^{p-1} y + ε g(x)`.
    pub fn forced(p: u32, g: &TaylorPoly<Rational>) -> Result<Self> {
        let terms = g.coeffs().iter().enumerate().map(|(j, c)| Term { j, k: 0, l: 1, c: c.clone() }).collect();
        Self::new(p, terms, 1, false)
    }

    /// `εy' = p x^{p-1} y + ε (g(x) + α)`.
    pub fn controlled(p: u32, g: &TaylorPoly<Rational>) -> Result<Self> {
        let mut s = Self::forced(p, g)?;
        s.control = true;
        Ok(s)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: RawSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(format!("spec: {e}")))?;
        Self::from_raw(raw)
    }

    /// Parses JSON text; diagnostics carry line and column.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("spec: {e}")))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawSpec) -> Result<Self> {
        if let Some(f) = &raw.f {
            let f: Vec<Rational> = f.iter().enumerate().map(|(i, c)| coeff(c, &format!("spec.f[{i}]"))).collect::<Result<_>>()?;
            let want = TaylorPoly::monomial(raw.p as usize - 1, Rational::from_i64(raw.p as i64));
            if TaylorPoly::new(f) != want {
                return Err(Error::Invalid(format!("spec.f must equal {} x^{}; normalize the equation first", raw.p, raw.p - 1)));
            }
        }
        let mut terms = Vec::new();
        for (i, h) in raw.h.iter().enumerate() {
            terms.push(Term { j: h.j, k: 0, l: h.l + 1, c: coeff(&h.c, &format!("spec.h[{i}].c"))? });
        }
        for (i, t) in raw.big_p.iter().enumerate() {
            terms.push(Term { j: t.j, k: t.k, l: t.l, c: coeff(&t.c, &format!("spec.P[{i}].c"))? });
        }
        let mut s = Self::new(raw.p, terms, raw.r.unwrap_or(1), raw.control)?;
        s.alpha = raw.alpha.iter().enumerate().map(|(i, c)| coeff(c, &format!("spec.alpha[{i}]"))).collect::<Result<_>>()?;
        if !s.alpha.is_empty() && !s.control {
            return Err(Error::Invalid("spec.alpha given without control".into()));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|t| serde_json::json!({"j": t.j, "k": t.k, "l": t.l, "c": format_rational(&t.c)})).collect();
        let mut v = serde_json::json!({"p": self.p, "P": terms, "r": self.r, "control": self.control});
        if !self.alpha.is_empty() {
            v["alpha"] = Value::Array(self.alpha.iter().map(|a| Value::String(format_rational(a))).collect());
        }
        v
    }

    /// Inner order `e = j + rk + pl - (p - 1 + r)` at which a term enters
    /// after `x = ηX`, `y = η^r Y`, `ε = η^p`.
    pub fn inner_order(&self, t: &Term) -> Result<usize> {
        let e = (t.j + self.r * t.k + self.p as usize * t.l) as i64 - (self.p as i64 - 1 + self.r as i64);
        if e < 0 {
            return Err(Error::Infeasible(format!(
                "term x^{} y^{} eps^{} enters the inner equation at eta^{e}; the equation is not quasi-homogeneous with r = {}",
                t.j, t.k, t.l, self.r
            )));
        }
        Ok(e as usize)
    }

    /// True when some term of inner order 0 is nonlinear in `Y`.
    pub fn has_nonlinear_reduced(&self) -> Result<bool> {
        for t in &self.terms {
            if t.k >= 2 && self.inner_order(t)? == 0 {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn alpha_eta<S: Scalar>(&self, n: usize) -> S {
        self.alpha.get(n).map(S::from_rational).unwrap_or_else(S::zero)
    }
}
