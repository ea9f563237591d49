use num_complex::Complex64;

use crate::{Error, Result};

/// Evaluates `φ_ρ(z) = ∫₀¹ θ^{ρ-1} e^{(1-θ)z}/(ρ-1)! dθ`, with `φ_0 = e^z`.
///
/// Uses the Taylor series `Σ_k z^k/(k+ρ)!` inside `|z| < cutoff` and the
/// recurrence `φ_{ρ+1}(z) = (φ_ρ(z) - 1/ρ!)/z` from `e^z` outside.
#[derive(Debug, Clone, Copy)]
pub struct PhiEvaluator {
    cutoff: f64,
    rho_max: usize,
    terms: usize,
}

impl Default for PhiEvaluator {
    fn default() -> Self {
        Self {
            cutoff: 2.0,
            rho_max: 6,
            terms: 40,
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl PhiEvaluator {
    pub fn new(cutoff: f64, rho_max: usize, terms: usize) -> Result<Self> {
        if !(cutoff > 0.0) || rho_max < 5 || terms < 10 {
            return Err(Error::Config(format!(
                "invalid φ evaluator settings: cutoff {cutoff}, ρ_max {rho_max}, terms {terms}"
            )));
        }
        Ok(Self { cutoff, rho_max, terms })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn rho_max(&self) -> usize {
        self.rho_max
    }

    pub fn eval(&self, rho: usize, z: Complex64) -> Result<Complex64> {
        if rho > self.rho_max {
            return Err(Error::Parameter(format!("φ order {rho} exceeds maximum {}", self.rho_max)));
        }
        Ok(if z.norm() < self.cutoff {
            self.taylor(rho, z)
        } else {
            self.recurrence(rho, z)
        })
    }

    /// `[φ_0(z), ..., φ_n(z)]` in one pass.
    pub fn eval_all(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        (0..=n).map(|rho| self.eval(rho, z)).collect()
    }

    pub(crate) fn taylor(&self, rho: usize, z: Complex64) -> Complex64 {
        // Horner on Σ_k z^k/(k+ρ)! = (1/ρ!)(1 + z/(ρ+1)(1 + z/(ρ+2)(1 + ...)))
        let mut acc = Complex64::new(1.0, 0.0);
        for k in (1..=self.terms).rev() {
            acc = Complex64::new(1.0, 0.0) + z * acc / (rho + k) as f64;
        }
        acc / factorial(rho)
    }

    pub(crate) fn recurrence(&self, rho: usize, z: Complex64) -> Complex64 {
        let mut phi = z.exp();
        for r in 0..rho {
            phi = (phi - 1.0 / factorial(r)) / z;
        }
        phi
    }
}
