//! JSON form of combined series. Rationals are written as `"num/den"`
//! strings, floats as numbers.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::series::combined::{CombinedSeries, LogComponent};
use crate::series::expr::Sign;
use crate::series::fast::{BasisTerm, FastFn};
use crate::series::poly::TaylorPoly;
use crate::series::tail::AsymTail;

pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => parse_rational(s).map(|q| q.to_f64()),
            _ => None,
        }
    }
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            _ => None,
        }
    }
}

fn list<S: JsonScalar>(c: &[S]) -> Value {
    Value::Array(c.iter().map(|x| x.to_json()).collect())
}

pub fn series_to_json<S: JsonScalar>(y: &CombinedSeries<S>) -> Value {
    let fast: Vec<Value> = y
        .fast
        .iter()
        .map(|g| {
            json!({
                "tail": list(g.tail.coeffs()),
                "depth": g.tail.depth(),
                "basis": serde_json::to_value(&g.basis).expect("basis serializes"),
            })
        })
        .collect();
    json!({
        "p": y.p,
        "N": y.order(),
        "sigma": y.sigma,
        "exact": S::EXACT,
        "slow": y.slow.iter().map(|a| list(a.coeffs())).collect::<Vec<_>>(),
        "fast": fast,
        "log": y.log.as_ref().map(|l| json!({"residues": list(&l.residues), "kernel_p": l.p})),
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Invalid(format!("{ctx}: missing field {key:?}")))
}

fn scalars<S: JsonScalar>(v: &Value, ctx: &str) -> Result<Vec<S>> {
    let arr = v.as_array().ok_or_else(|| Error::Invalid(format!("{ctx}: expected an array")))?;
    arr.iter().enumerate().map(|(i, x)| S::from_json(x).ok_or_else(|| Error::Invalid(format!("{ctx}[{i}]: not a number: {x}")))).collect()
}

fn object<'a>(v: &'a Value, ctx: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| Error::Invalid(format!("{ctx}: expected an object")))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Invalid(format!("{ctx}: unknown field {k:?}")));
    }
    Ok(obj)
}

/// Parses a series; evaluators are rebuilt from the basis terms.
pub fn series_from_json<S: JsonScalar>(v: &Value) -> Result<CombinedSeries<S>> {
    let obj = object(v, "series", &["p", "N", "sigma", "exact", "slow", "fast", "log"])?;
    let p = field(obj, "p", "series")?.as_u64().ok_or_else(|| Error::Invalid("series.p: expected a positive integer".into()))? as u32;
    let sigma: Sign = match obj.get("sigma") {
        Some(s) => serde_json::from_value(s.clone()).map_err(|e| Error::Invalid(format!("series.sigma: {e}")))?,
        None => Sign::Minus,
    };
    let slow_v = field(obj, "slow", "series")?.as_array().ok_or_else(|| Error::Invalid("series.slow: expected an array".into()))?;
    let slow = slow_v
        .iter()
        .enumerate()
        .map(|(n, a)| scalars::<S>(a, &format!("series.slow[{n}]")).map(TaylorPoly::new))
        .collect::<Result<Vec<_>>>()?;
    let fast_v = field(obj, "fast", "series")?.as_array().ok_or_else(|| Error::Invalid("series.fast: expected an array".into()))?;
    let mut fast = Vec::with_capacity(fast_v.len());
    for (n, g) in fast_v.iter().enumerate() {
        let ctx = format!("series.fast[{n}]");
        let go = object(g, &ctx, &["tail", "depth", "basis"])?;
        let coeffs = scalars::<S>(field(go, "tail", &ctx)?, &format!("{ctx}.tail"))?;
        let depth = match go.get("depth") {
            None => Some(coeffs.len()),
            Some(Value::Null) => None,
            Some(d) => Some(d.as_u64().ok_or_else(|| Error::Invalid(format!("{ctx}.depth: expected an integer or null")))? as usize),
        };
        let basis: Vec<BasisTerm> = match go.get("basis") {
            None => Vec::new(),
            Some(b) => serde_json::from_value(b.clone()).map_err(|e| Error::Invalid(format!("{ctx}.basis: {e}")))?,
        };
        let tail = AsymTail::with_depth(coeffs, depth);
        let f = if basis.is_empty() {
            FastFn::from_tail(tail)
        } else {
            let mut f = FastFn::<S>::from_basis(basis, 1);
            f.tail = tail;
            f
        };
        fast.push(f);
    }
    if let Some(n) = obj.get("N") {
        let n = n.as_u64().ok_or_else(|| Error::Invalid("series.N: expected an integer".into()))? as usize;
        if n != slow.len() || n != fast.len() {
            return Err(Error::Invalid(format!("series.N = {n} but {} slow and {} fast entries", slow.len(), fast.len())));
        }
    }
    let mut y = CombinedSeries::new(p, sigma, slow, fast)?;
    if let Some(l) = obj.get("log").filter(|l| !l.is_null()) {
        let lo = object(l, "series.log", &["residues", "kernel_p"])?;
        let residues = scalars::<S>(field(lo, "residues", "series.log")?, "series.log.residues")?;
        y.log = Some(LogComponent { residues, p });
    }
    Ok(y)
}
