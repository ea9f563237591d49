use num_complex::Complex64;

use super::ops::{a_power, average};
use super::{AugmentedField, Derivative, TwoScale};
use crate::spectral::SpinorField;
use crate::{Error, Result};

/// How the term of `h3` printed as `A²∂uG(Π∂uG, AG)` is read.
///
/// A first derivative applied to two arguments does not type-check;
/// [`H3Term::Composition`] reads it as `A² ∂uG(Π ∂uG(AG))`, which is what the
/// expansion produces from `∂t Ū = ΠG + ε² Π ∂uG(h1) + ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H3Term {
    #[default]
    Composition,
    Dropped,
}

/// `h1, h2, h3` at one averaged state, all nodal.
#[derive(Debug, Clone)]
pub struct Corrections {
    pub h: Vec<AugmentedField>,
}

impl Corrections {
    pub fn level(&self, l: usize) -> &AugmentedField {
        &self.h[l - 1]
    }
}

fn lin(terms: &[(f64, &AugmentedField)]) -> Result<AugmentedField> {
    let mut out = terms[0].1.to_nodal();
    out.scale(Complex64::new(terms[0].0, 0.0));
    for (c, f) in &terms[1..] {
        out.axpy(Complex64::new(*c, 0.0), &f.to_nodal())?;
    }
    Ok(out)
}

impl TwoScale {
    /// Chapman–Enskog corrections `h1..=h_level` at `t = 0` for the τ-independent state `ū`.
    pub fn corrections(&self, ubar: &SpinorField, level: usize, h3: H3Term) -> Result<Corrections> {
        if !(1..=3).contains(&level) {
            return Err(Error::Parameter(format!("correction level must be 1, 2 or 3, got {level}")));
        }
        let tau = self.tau().clone();
        let u = AugmentedField::constant(tau.clone(), ubar);
        let lift = |f: &SpinorField| AugmentedField::constant(tau.clone(), f);
        let d = |which: Derivative<'_>| self.g_derivative(0.0, &u, which);

        let g = self.g_eval(0.0, &u)?;
        let pg = lift(&average(&g));
        let ag = a_power(&g, 1);
        let h1 = ag.clone();
        if level == 1 {
            return Ok(Corrections { h: vec![h1] });
        }

        let dt = d(Derivative::T)?;
        let du_ag = d(Derivative::U(&ag))?;
        let du_pg = d(Derivative::U(&pg))?;
        // h2 = A ∂uG(AG) - A² ∂tG - A² ∂uG(ΠG)
        let inner = lin(&[(1.0, &dt), (1.0, &du_pg)])?;
        let h2 = a_power(&lin(&[(1.0, &du_ag), (-1.0, &a_power(&inner, 1))])?, 1);
        if level == 2 {
            return Ok(Corrections { h: vec![h1, h2] });
        }

        // A-terms
        let t1 = d(Derivative::U(&h2))?;
        let t2 = d(Derivative::UU(&h1, &h1))?;
        // A²-terms
        let s1 = d(Derivative::TU(&ag))?;
        let s2 = d(Derivative::UU(&pg, &ag))?;
        let s3 = d(Derivative::U(&a_power(&dt, 1)))?;
        let s4 = d(Derivative::U(&a_power(&du_pg, 1)))?;
        let s5 = match h3 {
            H3Term::Composition => Some(d(Derivative::U(&lift(&average(&du_ag))))?),
            H3Term::Dropped => None,
        };
        // A³-terms
        let r1 = d(Derivative::TT)?;
        let r2 = d(Derivative::TU(&pg))?;
        let r3 = d(Derivative::UU(&pg, &pg))?;
        let r4 = d(Derivative::U(&lift(&average(&dt))))?;
        let r5 = d(Derivative::U(&lift(&average(&du_pg))))?;

        let third = lin(&[(1.0, &r1), (2.0, &r2), (1.0, &r3), (1.0, &r4), (1.0, &r5)])?;
        let mut second = lin(&[(1.0, &s1), (1.0, &s2), (1.0, &s3), (1.0, &s4)])?;
        if let Some(s5) = &s5 {
            second.axpy(Complex64::new(1.0, 0.0), s5)?;
        }
        // A(t1 + t2/2 - A(second - A third))
        let nested = lin(&[(1.0, &second), (-1.0, &a_power(&third, 1))])?;
        let h3f = a_power(&lin(&[(1.0, &t1), (0.5, &t2), (-1.0, &a_power(&nested, 1))])?, 1);
        Ok(Corrections { h: vec![h1, h2, h3f] })
    }

    /// Same as [`Self::corrections`] for a lifted state; rejects τ-dependent input.
    pub fn corrections_lifted(&self, ubar: &AugmentedField, level: usize, h3: H3Term) -> Result<Corrections> {
        self.check(ubar)?;
        let var = ubar.tau_variation();
        let scale = ubar.norm_linf().max(1.0);
        if var > 1e-12 * scale {
            return Err(Error::Contract(format!(
                "corrections need a τ-independent state, non-zero modes reach {var:e}"
            )));
        }
        self.corrections(&average(ubar), level, h3)
    }

    /// Well-prepared initial data `U0(τ)` with `U0(0) = Φ0`.
    ///
    /// `Ū[0] = Φ0`, `Ū[r] = Φ0 - Σ_{l≤r} ε^{2l} h_l(τ=0, Ū[r-l])`, and
    /// `U0 = Ū[3] + Σ_l ε^{2l} h_l(τ, Ū[3-l])`. Output is nodal.
    pub fn prepare_initial_data(&self, phi0: &SpinorField, h3: H3Term) -> Result<AugmentedField> {
        phi0.ensure_same_grid(self.model().grid())?;
        let e2 = self.eps() * self.eps();
        let weights = [e2, e2 * e2, e2 * e2 * e2];
        let c = |x: f64| Complex64::new(x, 0.0);

        // corrections[r] holds h_1..h_{3-r} at Ū[r]
        let mut ubars = vec![phi0.clone()];
        let mut corr: Vec<Corrections> = Vec::new();
        for r in 0..3 {
            corr.push(self.corrections(&ubars[r], 3 - r, h3)?);
            let mut next = phi0.clone();
            for l in 1..=r + 1 {
                next.axpy(-c(weights[l - 1]), &corr[r + 1 - l].level(l).slice(0));
            }
            ubars.push(next);
        }
        let mut u0 = AugmentedField::constant(self.tau().clone(), &ubars[3]);
        for l in 1..=3 {
            let h = corr[3 - l].level(l);
            log::debug!("h{l} max norm {:e}", h.norm_linf());
            u0.axpy(c(weights[l - 1]), h)?;
        }
        Ok(u0)
    }
}
