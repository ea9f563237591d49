//! Order-condition and symmetry residuals of the tableaux on the imaginary axis.

use dirac_ua_core::expint::{order_and_symmetry_residuals, EepReading, ResidualReport, Scheme};

use crate::output::{fmt_f64, CsvRow};
use crate::Result;

#[derive(Debug, Clone)]
pub struct ResidualRow {
    pub scheme: Scheme,
    pub reading: EepReading,
    pub y: f64,
    pub psi: [f64; 4],
    /// Max over stages of `|Ψ_{ρ,j}(iy)|` for `ρ = 1..=4`.
    pub stage_psi: [f64; 4],
    pub symmetry_b: f64,
    pub symmetry_a: f64,
}

impl CsvRow for ResidualRow {
    fn header() -> &'static [&'static str] {
        &[
            "scheme", "reading", "y", "psi1", "psi2", "psi3", "psi4", "stage_psi1", "stage_psi2", "stage_psi3",
            "stage_psi4", "symmetry_b", "symmetry_a",
        ]
    }

    fn fields(&self) -> Vec<String> {
        let mut f = vec![
            self.scheme.name().to_string(),
            format!("{:?}", self.reading).to_lowercase(),
            fmt_f64(self.y),
        ];
        f.extend(self.psi.iter().map(|v| fmt_f64(*v)));
        f.extend(self.stage_psi.iter().map(|v| fmt_f64(*v)));
        f.push(fmt_f64(self.symmetry_b));
        f.push(fmt_f64(self.symmetry_a));
        f
    }
}

/// `n` evenly spaced samples of `y` in `[-y_max, y_max]`, plus `y = ±1` exactly.
pub fn imaginary_samples(y_max: f64, n: usize) -> Vec<f64> {
    let mut ys: Vec<f64> = (0..n)
        .map(|k| -y_max + 2.0 * y_max * k as f64 / (n.max(2) - 1) as f64)
        .collect();
    ys.extend([-1.0, 1.0]);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

pub fn residual_reports(reading: EepReading, ys: &[f64]) -> Result<Vec<ResidualReport>> {
    [Scheme::SepTs4, Scheme::EepTs4]
        .into_iter()
        .map(|s| Ok(order_and_symmetry_residuals(s, reading, ys)?))
        .collect()
}

pub fn residual_rows(reports: &[ResidualReport]) -> Vec<ResidualRow> {
    reports
        .iter()
        .flat_map(|rep| {
            rep.samples.iter().map(|s| ResidualRow {
                scheme: rep.scheme,
                reading: rep.reading,
                y: s.z_im,
                psi: s.psi,
                stage_psi: std::array::from_fn(|r| s.stage_psi[r].iter().cloned().fold(0.0, f64::max)),
                symmetry_b: s.symmetry_b,
                symmetry_a: s.symmetry_a,
            })
        })
        .collect()
}
