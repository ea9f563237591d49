//! Error norms, fitted orders and per-step records.

use serde::Serialize;

use crate::spectral::SpinorField;
use crate::{Error, Result};

/// Conserved quantities of the reconstructed solution at one time level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    /// Fixed-point iterations used by the last step (0 for explicit schemes).
    pub iterations: usize,
}

impl DiagnosticsRecord {
    /// `(|M - M0|/|M0|, |E - E0|/|E0|)` relative to `first`.
    pub fn drift_from(&self, first: &DiagnosticsRecord) -> (f64, f64) {
        let rel = |a: f64, b: f64| if b == 0.0 { (a - b).abs() } else { (a - b).abs() / b.abs() };
        (rel(self.mass, first.mass), rel(self.energy, first.energy))
    }
}

/// `‖a - b‖∞ / ‖b‖∞` with the pointwise spinor length.
pub fn relative_linf_error(a: &SpinorField, reference: &SpinorField) -> Result<f64> {
    a.ensure_same_grid(reference.grid())?;
    let denom = reference.norm_linf();
    let num = a.sub(reference).norm_linf();
    Ok(if denom == 0.0 { num } else { num / denom })
}

/// `‖a - b‖_{H¹} / ‖b‖_{H¹}`.
pub fn relative_h1_error(a: &SpinorField, reference: &SpinorField) -> Result<f64> {
    a.ensure_same_grid(reference.grid())?;
    let denom = reference.norm_h1();
    let num = a.sub(reference).norm_h1();
    Ok(if denom == 0.0 { num } else { num / denom })
}

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Parameter(format!(
            "slope fit needs two or more paired samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("slope fit with identical abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Slope of `log err` against `log h`.
pub fn fitted_order(h: &[f64], err: &[f64]) -> Result<f64> {
    if err.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Numerical("order fit needs positive errors".into()));
    }
    let lx: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    least_squares_slope(&lx, &ly)
}

/// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for consecutive rows.
pub fn pairwise_orders(h: &[f64], err: &[f64]) -> Vec<f64> {
    h.windows(2)
        .zip(err.windows(2))
        .map(|(hw, ew)| (ew[0] / ew[1]).ln() / (hw[0] / hw[1]).ln())
        .collect()
}
