//! Exponential time stepping of the τ-modal two-scale system
//! `dẐ/dt = iΘẐ + Ξ(t, Ẑ)` and reconstruction of the physical solution.

mod run;
mod stepper;

pub use run::{reconstruct_physical_solution, run_simulation, run_simulation_with, SimulationConfig, SimulationOutput};
pub use stepper::{FixedPointSettings, Stepper};

use num_complex::Complex64;

use crate::twoscale::{AugmentedField, TauGrid};

/// Diagonal of `Θ` per τ-mode slot: `θ_l = -l/ε²`.
///
/// With this sign the linear flow `e^{iΘt}` is the exact transport
/// `U(t, τ) = U(0, τ - t/ε²)`. In the slot order of [`TauGrid`] the unpaired
/// mode `-Nτ/2` carries `+Nτ/(2ε²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpectrum {
    eps: f64,
    theta: Vec<f64>,
}

impl ThetaSpectrum {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `θ` per slot.
    pub fn values(&self) -> &[f64] {
        &self.theta
    }

    /// `i θ h` per slot.
    pub fn scaled(&self, h: f64) -> Vec<Complex64> {
        self.theta.iter().map(|t| Complex64::new(0.0, t * h)).collect()
    }
}

pub fn assemble_theta(tau: &TauGrid, eps: f64) -> ThetaSpectrum {
    let inv = 1.0 / (eps * eps);
    ThetaSpectrum {
        eps,
        theta: (0..tau.len()).map(|j| -(tau.mode(j) as f64) * inv).collect(),
    }
}

/// `out[x, j] = coef[j] * f[x, j]` for a modal field.
pub(crate) fn diag_mul(f: &AugmentedField, coef: &[Complex64]) -> AugmentedField {
    let mut out = f.clone();
    let nt = coef.len();
    for c in out.data_mut().iter_mut() {
        for chunk in c.chunks_mut(nt) {
            chunk.iter_mut().zip(coef).for_each(|(z, s)| *z *= s);
        }
    }
    out
}

/// `dst[x, j] += s * coef[j] * src[x, j]`.
pub(crate) fn diag_axpy(dst: &mut AugmentedField, s: f64, coef: &[Complex64], src: &AugmentedField) {
    let nt = coef.len();
    let src = src.data();
    for (d, o) in dst.data_mut().iter_mut().zip(src) {
        for (dc, oc) in d.chunks_mut(nt).zip(o.chunks(nt)) {
            for j in 0..nt {
                dc[j] += s * coef[j] * oc[j];
            }
        }
    }
}
