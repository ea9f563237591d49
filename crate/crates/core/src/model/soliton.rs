use std::sync::Arc;

use num_complex::Complex64;

use crate::spectral::{SpatialGrid, SpinorField};
use crate::{Error, Result};

/// Parameters of a boosted standing wave of the 1D NLDE at ε = 1, V = 0, λ2 = 0.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolitonParams {
    pub omega: f64,
    pub velocity: f64,
    pub x0: f64,
    pub lambda1: f64,
}

impl SolitonParams {
    pub fn new(omega: f64, velocity: f64, x0: f64, lambda1: f64) -> Result<Self> {
        let p = Self { omega, velocity, x0, lambda1 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(Error::Parameter(format!("ω must lie in (0, 1], got {}", self.omega)));
        }
        if !(self.velocity.abs() < 1.0) {
            return Err(Error::Parameter(format!("|v| must be < 1, got {}", self.velocity)));
        }
        if !(self.lambda1 < 0.0) {
            return Err(Error::Parameter(format!("λ1 must be negative, got {}", self.lambda1)));
        }
        if !self.x0.is_finite() {
            return Err(Error::Parameter("x0 must be finite".into()));
        }
        Ok(())
    }

    /// Lorentz factor `1/sqrt(1 - v²)`.
    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.velocity * self.velocity).sqrt()
    }

    /// Exact solution value at `(x, t)`.
    pub fn value(&self, x: f64, t: f64) -> [Complex64; 2] {
        let (v, gamma) = (self.velocity, self.gamma());
        let y = x - self.x0;
        let x_tilde = gamma * (y - v * t);
        let t_tilde = gamma * (t - v * y);
        let (a, b) = standing_wave_profile(self.omega, self.lambda1, x_tilde);
        let phase = Complex64::from_polar(1.0, -self.omega * t_tilde);
        let sw = [a * phase, Complex64::new(0.0, b) * phase];
        let diag = ((gamma + 1.0) / 2.0).sqrt();
        let off = v.signum() * ((gamma - 1.0) / 2.0).sqrt();
        let off = if v == 0.0 { 0.0 } else { off };
        [diag * sw[0] + off * sw[1], off * sw[0] + diag * sw[1]]
    }
}

/// Standing-wave amplitudes `(A(x), B(x))`, with `A ∝ cosh(kx)` and `B ∝ sinh(kx)`
/// over `1 + ω cosh(2kx)`, `k = sqrt(1 - ω²)`.
pub fn standing_wave_profile(omega: f64, lambda1: f64, x: f64) -> (f64, f64) {
    let k = (1.0 - omega * omega).sqrt();
    // divide through by e^{2k|x|} to avoid overflow
    let ax = (k * x).abs();
    let e1 = (-ax).exp();
    let e2 = (-2.0 * ax).exp();
    let den = e1 * e1 + 0.5 * omega * (1.0 + e2 * e2);
    let c = 0.5 * (1.0 + e2) * e1 / den;
    let s = x.signum() * 0.5 * (1.0 - e2) * e1 / den;
    let base = -2.0 / lambda1 * (1.0 - omega * omega);
    ((base * (1.0 + omega)).sqrt() * c, (base * (1.0 - omega)).sqrt() * s)
}

/// Samples the traveling soliton at time `t` on a 1D grid.
pub fn soliton_state(grid: Arc<SpatialGrid>, params: &SolitonParams, t: f64) -> Result<SpinorField> {
    params.validate()?;
    if grid.dim() != 1 {
        return Err(Error::Config("soliton states are one-dimensional".into()));
    }
    Ok(SpinorField::from_fn(grid, |x| params.value(x[0], t)))
}
