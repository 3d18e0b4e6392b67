use std::fs;
use std::path::Path;

use cae_core::canard::{angular_canard_value, canard_control_series, union_jack_c0, AngularOptions, Branch, UnionJackOptions};
use cae_core::gevrey::{borel_laplace_truncated, gevrey_fit, least_term_sum};
use cae_core::resonance::{condition_check, riccati_leading_check, z0_polynomial, ResonanceCase};
use cae_core::scalar::format_rational;
use cae_core::series::json::series_to_json;
use cae_core::series::{LaurentPoly, TaylorPoly};
use cae_core::special::{eval_u, u_tail, RayOptions};
use cae_core::turning_point::{combined_from_matching, dac_feasibility, outer_expansion, InnerOptions, OdeSpec};
use cae_core::validation::{bounded_solution_quadrature, error_scaling, ErrorTable};
use cae_core::{Rational, Sign};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{csv_text, emit, f, json_text, stamp};
use crate::{
    AngularArgs, BranchArg, CanardCmd, Cli, CliError, Command, CriterionArgs, ExpandArgs, GevreyCmd, GevreyFitArgs, GevreySumArgs,
    ResonanceArgs, SpecialCmd, UArgs, UnionJackArgs, ValidateArgs,
};

/// Slope slack of the error-scaling check.
const SLOPE_TOL: f64 = 0.3;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (name, out, outcome) = match &cli.command {
        Command::Expand(a) => ("expand", &a.out, expand(a)),
        Command::Validate(a) => ("validate", &a.out, validate(a)),
        Command::Special(SpecialCmd::U(a)) => ("special U", &a.out, special_u(a)),
        Command::Gevrey(GevreyCmd::Fit(a)) => ("gevrey fit", &a.out, gevrey_fit_cmd(a)),
        Command::Gevrey(GevreyCmd::Sum(a)) => ("gevrey sum", &a.out, gevrey_sum(a)),
        Command::Canard(CanardCmd::Unionjack(a)) => ("canard unionjack", &a.out, unionjack(a)),
        Command::Canard(CanardCmd::Angular(a)) => ("canard angular", &a.out, angular(a)),
        Command::Canard(CanardCmd::Criterion(a)) => ("canard criterion", &a.out, criterion(a)),
        Command::Resonance(a) => ("resonance", &a.out, resonance(a)),
    };
    let out = out.as_deref();
    // a failed validation still writes its table
    let (text, verdict) = outcome?;
    emit(&text, out)?;
    if cli.stamp {
        stamp(out, name)?;
    }
    verdict
}

type Outcome = Result<(String, Result<(), CliError>), CliError>;

fn done(text: String) -> Outcome {
    Ok((text, Ok(())))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<OdeSpec, CliError> {
    OdeSpec::from_json_str(&read(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Minus => "minus",
        Sign::Plus => "plus",
    }
}

/// Nonzero terms as `[power, "coeff"]` pairs.
fn laurent_json(v: &LaurentPoly<Rational>) -> Value {
    Value::Array(v.terms().filter(|(_, c)| **c != Rational::from_integer(0.into())).map(|(m, c)| json!([m, format_rational(c)])).collect())
}

fn expand(a: &ExpandArgs) -> Outcome {
    let spec = load_spec(&a.spec)?;
    if a.order == 0 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    let sigma: Sign = a.side.into();
    // the outer check runs to eps-order `order`, beyond what the assembly needs
    let outer = outer_expansion::<Rational>(&spec, a.order)?;
    dac_feasibility(&outer).into_result()?;
    let opts = InnerOptions { numeric: false, ..Default::default() };
    let y = combined_from_matching::<Rational>(&spec, a.order, sigma, &opts)?;
    let v = json!({
        "spec": spec.to_json(),
        "order": a.order,
        "sigma": sign_name(sigma),
        "pole_orders": outer.pole_orders(),
        "outer": outer.coeffs.iter().map(laurent_json).collect::<Vec<_>>(),
        "series": series_to_json(&y),
    });
    done(json_text(&v))
}

/// `lo:hi:intervals` as `intervals + 1` equispaced points.
fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::usage(format!("--xgrid expects lo:hi:intervals, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Err(bad());
    }
    Ok((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
}

/// Forcing `g` of `εy' = p x^{p-1} y + ε g(x)`.
fn linear_forcing(spec: &OdeSpec) -> Result<TaylorPoly<f64>, CliError> {
    if spec.control || spec.terms.iter().any(|t| t.k != 0 || t.l != 1) {
        return Err(CliError::usage("validate needs a linear forced equation: only h terms with l = 0 and no control"));
    }
    let deg = spec.terms.iter().map(|t| t.j).max().unwrap_or(0);
    let mut g = vec![0.0; deg + 1];
    for t in &spec.terms {
        g[t.j] += cae_core::Scalar::to_f64(&t.c);
    }
    Ok(TaylorPoly::new(g))
}

fn validate(a: &ValidateArgs) -> Outcome {
    let spec = load_spec(&a.spec)?;
    let g = linear_forcing(&spec)?;
    let grid = parse_grid(&a.xgrid)?;
    let max_n = *a.orders.iter().max().ok_or_else(|| CliError::usage("--orders is empty"))?;
    if a.orders.contains(&0) {
        return Err(CliError::usage("--orders must be positive"));
    }
    let sigma: Sign = a.side.into();
    let y = combined_from_matching::<f64>(&spec, max_n, sigma, &InnerOptions::default())?;
    let big_f = TaylorPoly::monomial(spec.p as usize, 1.0);
    let truth = |x: f64, eps: f64| bounded_solution_quadrature(&big_f, |t| g.eval(t), eps, x, sigma);
    let tables: Vec<ErrorTable> =
        a.orders.par_iter().map(|&n| error_scaling(&y, truth, &a.eps, &grid, n)).collect::<cae_core::Result<_>>()?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for t in &tables {
        for (i, r) in t.rows.iter().enumerate() {
            let slope = if i + 1 == t.rows.len() { t.slope.map(f).unwrap_or_default() } else { String::new() };
            rows.push(vec![t.terms.to_string(), f(r.eps), f(r.sup_error), slope]);
        }
        if !t.degenerate && !t.passes(SLOPE_TOL) {
            failures.push(format!("N={} slope {}", t.terms, t.slope.map(|s| format!("{s:.3}")).unwrap_or("undefined".into())));
        }
    }
    let text = csv_text(&["N", "eps", "sup_error", "slope"], &rows)?;
    let verdict = if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::failed(format!("error scaling below N - {SLOPE_TOL}: {}", failures.join(", "))))
    };
    Ok((text, verdict))
}

fn special_u(a: &UArgs) -> Outcome {
    let value = eval_u(a.p, a.k, a.sigma.into(), a.x)?;
    let tail = u_tail::<f64>(a.p, a.k, a.terms);
    let rows: Vec<Vec<String>> = (1..=a.terms)
        .map(|m| {
            let partial = tail.eval_partial(a.x, m);
            vec![m.to_string(), f(value), f(partial), f((partial - value).abs())]
        })
        .collect();
    done(csv_text(&["M", "value", "partial", "abs_diff"], &rows)?)
}

/// One value per row, from the last column; a non-numeric first row is a header.
fn read_coeffs(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read(path)?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let Some(field) = rec.iter().next_back() else { continue };
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => {}
            Err(_) => return Err(CliError::usage(format!("{}: line {}: not a number: {field:?}", path.display(), i + 1))),
        }
    }
    if out.is_empty() {
        return Err(CliError::usage(format!("{}: no coefficients", path.display())));
    }
    Ok(out)
}

fn gevrey_fit_cmd(a: &GevreyFitArgs) -> Outcome {
    let norms: Vec<f64> = read_coeffs(&a.coeffs)?.iter().map(|c| c.abs()).collect();
    let fit = gevrey_fit(&norms, a.p)?;
    let v = json!({
        "p": a.p,
        "inv_order": fit.inv_order,
        "C": fit.c,
        "L1": fit.l1,
        "residual": fit.residual,
        "sub_gevrey": fit.sub_gevrey,
        "used": fit.used,
    });
    done(json_text(&v))
}

fn gevrey_sum(a: &GevreySumArgs) -> Outcome {
    let coeffs = read_coeffs(&a.coeffs)?;
    let bl = borel_laplace_truncated(&coeffs, a.p, a.rho, a.eta)?;
    let (lt, least) = least_term_sum(&coeffs, a.eta);
    let v = json!({
        "p": a.p,
        "eta": a.eta,
        "rho": a.rho,
        "borel_laplace": bl,
        "least_term_sum": lt,
        "least_term": least,
        "difference": (bl - lt).abs(),
    });
    done(json_text(&v))
}

fn unionjack(a: &UnionJackArgs) -> Outcome {
    let (branch, name) = match a.branch {
        BranchArg::Upper => (Branch::Upper, "upper"),
        BranchArg::Lower => (Branch::Lower, "lower"),
    };
    let r = union_jack_c0(branch, &UnionJackOptions { tol: a.tol, x_far: a.x_far, ..Default::default() })?;
    let v = json!({
        "branch": name,
        "value": r.c0,
        "iterations": r.iterations,
        "residuals": [r.anchor_residual],
    });
    done(json_text(&v))
}

fn angular(a: &AngularArgs) -> Outcome {
    if a.eps.is_empty() {
        return Err(CliError::usage("--eps is empty"));
    }
    let o = AngularOptions::default();
    let res: Vec<_> = a.eps.par_iter().map(|e| angular_canard_value(*e, &o)).collect::<cae_core::Result<_>>()?;
    let v = json!({
        "eps": a.eps,
        "values": res.iter().map(|r| r.c).collect::<Vec<_>>(),
        "iterations": res.iter().map(|r| r.iterations).collect::<Vec<_>>(),
        "residuals": res.iter().map(|r| r.residual).collect::<Vec<_>>(),
    });
    done(json_text(&v))
}

fn criterion(a: &CriterionArgs) -> Outcome {
    let spec = load_spec(&a.spec)?;
    if a.order == 0 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    let r = canard_control_series(&spec, a.order, &RayOptions::default())?;
    let v = json!({
        "p": spec.p,
        "values": r.alpha,
        "iterations": a.order,
        "residuals": r.residuals,
    });
    done(json_text(&v))
}

fn resonance(a: &ResonanceArgs) -> Outcome {
    let case = ResonanceCase::new(a.alpha, a.beta, a.p)?;
    let condition = condition_check(&case);
    let d = match case.integer_d() {
        Some(d) => json!(d),
        None => json!(case.d()),
    };
    let (z0, residual) = if condition {
        let z = z0_polynomial(&case)?;
        let r = riccati_leading_check(&case, &a.grid)?;
        (json!(z.coeffs().iter().map(format_rational).collect::<Vec<_>>()), json!(r.max_residual))
    } else {
        (Value::Null, Value::Null)
    };
    let v = json!({
        "alpha": a.alpha,
        "beta": a.beta,
        "p": a.p,
        "condition": condition,
        "D": d,
        "Z0": z0,
        "riccati_residual": residual,
    });
    done(json_text(&v))
}
