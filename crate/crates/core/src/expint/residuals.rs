use num_complex::Complex64;

use super::tableau::coefficients;
use super::{EepReading, PhiEvaluator, Scheme};
use crate::Result;

/// Residuals at one argument `z`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SampleResiduals {
    pub z_re: f64,
    pub z_im: f64,
    /// `|Ψ_ρ(z)|` for `ρ = 1..=4`.
    pub psi: [f64; 4],
    /// `stage_psi[ρ-1][j] = |Ψ_{ρ,j}(z)|` for `ρ = 1..=4`.
    pub stage_psi: Vec<Vec<f64>>,
    /// Max over `ρ` of `|b_ρ(z) - e^z b_{s+1-ρ}(-z)|`.
    pub symmetry_b: f64,
    /// Max over `j, ρ` of `|a_jρ(z) - (e^{c_j z} b_{s+1-ρ}(-z) - a_{s+1-j,s+1-ρ}(-z))|`.
    pub symmetry_a: f64,
}

/// Order and symmetry residuals of a scheme over a set of imaginary-axis samples.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ResidualReport {
    pub scheme: Scheme,
    pub reading: EepReading,
    /// Max over `ρ` of `|c_ρ - (1 - c_{s+1-ρ})|`.
    pub symmetry_c: f64,
    pub samples: Vec<SampleResiduals>,
}

impl ResidualReport {
    /// Max of `|Ψ_ρ|` over samples.
    pub fn max_psi(&self, rho: usize) -> f64 {
        self.samples.iter().map(|s| s.psi[rho - 1]).fold(0.0, f64::max)
    }

    pub fn max_stage_psi(&self, rho: usize) -> f64 {
        self.samples
            .iter()
            .flat_map(|s| s.stage_psi[rho - 1].iter().copied())
            .fold(0.0, f64::max)
    }

    /// Largest of the c, b and a symmetry defects.
    pub fn max_symmetry_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.symmetry_a.max(s.symmetry_b))
            .fold(self.symmetry_c, f64::max)
    }

    /// `|Ψ_ρ(i y)|` at the sample nearest to `y`.
    pub fn psi_at(&self, rho: usize, y: f64) -> Option<f64> {
        self.samples
            .iter()
            .min_by(|a, b| (a.z_im - y).abs().total_cmp(&(b.z_im - y).abs()))
            .map(|s| s.psi[rho - 1])
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Evaluates `Ψ_ρ`, `Ψ_{ρ,j}` and the symmetry defects at `z = i y` for each `y` in `samples`.
pub fn order_and_symmetry_residuals(
    scheme: Scheme,
    reading: EepReading,
    samples: &[f64],
) -> Result<ResidualReport> {
    let c = scheme.nodes();
    let s = c.len();
    let symmetry_c = (0..s).map(|r| (c[r] - (1.0 - c[s - 1 - r])).abs()).fold(0.0, f64::max);
    let samples = samples
        .iter()
        .map(|&y| residuals_at(scheme, reading, Complex64::new(0.0, y)))
        .collect::<Result<_>>()?;
    Ok(ResidualReport {
        scheme,
        reading,
        symmetry_c,
        samples,
    })
}

/// Residuals at an arbitrary complex argument.
pub fn residuals_at(scheme: Scheme, reading: EepReading, z: Complex64) -> Result<SampleResiduals> {
    let phi = PhiEvaluator::default();
    let c = scheme.nodes();
    let s = c.len();
    let (a, b) = coefficients(scheme, reading, &phi, z)?;
    let (am, bm) = coefficients(scheme, reading, &phi, -z)?;

    let mut psi = [0.0; 4];
    let mut stage_psi = Vec::with_capacity(4);
    for rho in 1..=4 {
        let f = factorial(rho - 1);
        let quad: Complex64 = (0..s).map(|j| b[j] * c[j].powi(rho as i32 - 1) / f).sum();
        psi[rho - 1] = (phi.eval(rho, z)? - quad).norm();
        let mut row = Vec::with_capacity(s);
        for j in 0..s {
            let quad: Complex64 = (0..s).map(|k| a[j][k] * c[k].powi(rho as i32 - 1) / f).sum();
            let exact = phi.eval(rho, z * c[j])? * c[j].powi(rho as i32);
            row.push((exact - quad).norm());
        }
        stage_psi.push(row);
    }

    let ez = z.exp();
    let symmetry_b = (0..s).map(|r| (b[r] - ez * bm[s - 1 - r]).norm()).fold(0.0, f64::max);
    let mut symmetry_a: f64 = 0.0;
    for j in 0..s {
        let ecz = (z * c[j]).exp();
        for r in 0..s {
            let want = ecz * bm[s - 1 - r] - am[s - 1 - j][s - 1 - r];
            symmetry_a = symmetry_a.max((a[j][r] - want).norm());
        }
    }
    Ok(SampleResiduals {
        z_re: z.re,
        z_im: z.im,
        psi,
        stage_psi,
        symmetry_b,
        symmetry_a,
    })
}
