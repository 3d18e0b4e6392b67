//! Linear least squares through the SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LinearFit {
    pub params: Vec<f64>,
    /// Root-mean-square residual.
    pub rms: f64,
    pub residuals: Vec<f64>,
}

/// Solves min ‖A p − y‖₂ where `rows[i]` is the i-th row of A.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<LinearFit> {
    let m = rows.len();
    if m == 0 || m != y.len() {
        return Err(Error::Invalid("least squares needs matching nonempty rows".into()));
    }
    let n = rows[0].len();
    if m < n {
        return Err(Error::Degenerate(format!("{m} observations for {n} parameters")));
    }
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 || svd.singular_values.min() <= 1e-13 * smax {
        return Err(Error::Degenerate("rank-deficient design matrix".into()));
    }
    let p = svd.solve(&b, 1e-14 * smax).map_err(|e| Error::Degenerate(e.to_string()))?;
    let r = &a * &p - &b;
    let residuals: Vec<f64> = r.iter().copied().collect();
    let rms = (residuals.iter().map(|v| v * v).sum::<f64>() / m as f64).sqrt();
    Ok(LinearFit { params: p.iter().copied().collect(), rms, residuals })
}

/// Fits y ≈ intercept + slope·x.
pub fn line_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&xi| vec![1.0, xi]).collect();
    least_squares(&rows, y)
}
