//! Problem definitions: the pointwise right-hand side `g`, its real-linear
//! derivatives, the conserved functionals, and closed-form/built-in data.

mod builtin;
mod soliton;

use std::sync::Arc;

use num_complex::Complex64;

use crate::spectral::{partial, SpatialGrid, SpinorField};
use crate::{Error, Result, I};

pub use builtin::{builtin_initial, builtin_potential, BuiltinInitial, BuiltinPotential};
pub use soliton::{soliton_state, standing_wave_profile, SolitonParams};

/// Which equation is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `g(Φ) = -i(VΦ + F(Φ)Φ)`.
    Nonlinear,
    /// `g(Φ) = -i(VΦ - Σ Aj σj Φ)`; no nonlinearity.
    LinearMagnetic,
}

/// Model data: ε, grid, sampled potentials and nonlinearity weights.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    eps: f64,
    grid: Arc<SpatialGrid>,
    potential: Vec<f64>,
    magnetic: Vec<Vec<f64>>,
    lambda1: f64,
    lambda2: f64,
    variant: Variant,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("ε must lie in (0, 1], got {eps}")))
    }
}

fn check_sampled(name: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Shape(format!("{name} has {} samples, grid has {n} points", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config(format!("{name} has non-finite samples")));
    }
    Ok(())
}

impl ModelSpec {
    /// Nonlinear Dirac equation with weights `λ1, λ2`.
    pub fn nonlinear(
        grid: Arc<SpatialGrid>,
        eps: f64,
        potential: Vec<f64>,
        lambda1: f64,
        lambda2: f64,
    ) -> Result<Self> {
        check_eps(eps)?;
        check_sampled("potential", &potential, grid.len())?;
        if !(lambda1.is_finite() && lambda2.is_finite()) {
            return Err(Error::Config("nonlinearity weights must be finite".into()));
        }
        Ok(Self {
            eps,
            grid,
            potential,
            magnetic: Vec::new(),
            lambda1,
            lambda2,
            variant: Variant::Nonlinear,
        })
    }

    /// Linear Dirac equation with electric potential `V` and one magnetic
    /// component `Aj` per space dimension.
    pub fn linear_magnetic(
        grid: Arc<SpatialGrid>,
        eps: f64,
        potential: Vec<f64>,
        magnetic: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_eps(eps)?;
        check_sampled("potential", &potential, grid.len())?;
        if magnetic.len() != grid.dim() {
            return Err(Error::Config(format!(
                "need {} magnetic components, got {}",
                grid.dim(),
                magnetic.len()
            )));
        }
        for (j, a) in magnetic.iter().enumerate() {
            check_sampled(&format!("magnetic component {}", j + 1), a, grid.len())?;
        }
        Ok(Self {
            eps,
            grid,
            potential,
            magnetic,
            lambda1: 0.0,
            lambda2: 0.0,
            variant: Variant::LinearMagnetic,
        })
    }

    /// Same model at a different ε.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(Self { eps, ..self.clone() })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn magnetic(&self) -> &[Vec<f64>] {
        &self.magnetic
    }

    pub fn lambdas(&self) -> (f64, f64) {
        (self.lambda1, self.lambda2)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// True when `g` vanishes identically.
    pub fn is_trivial(&self) -> bool {
        self.lambda1 == 0.0
            && self.lambda2 == 0.0
            && self.potential.iter().all(|v| *v == 0.0)
            && self.magnetic.iter().flatten().all(|a| *a == 0.0)
    }

    /// Real diagonal of `V + F(Φ)` at point `i`: `(V + λ1ρ3 + λ2ρ, V - λ1ρ3 + λ2ρ)`.
    #[inline]
    pub(crate) fn diagonal_potential(&self, i: usize, p: Complex64, q: Complex64) -> (f64, f64) {
        let (n1, n2) = (p.norm_sqr(), q.norm_sqr());
        let rho3 = n1 - n2;
        let rho = n1 + n2;
        let v = self.potential[i];
        (
            v + self.lambda1 * rho3 + self.lambda2 * rho,
            v - self.lambda1 * rho3 + self.lambda2 * rho,
        )
    }

    /// `(V - Σ Aj σj) (p, q)` at point `i`.
    #[inline]
    fn magnetic_apply(&self, i: usize, p: Complex64, q: Complex64) -> (Complex64, Complex64) {
        let v = self.potential[i];
        let a1 = self.magnetic.first().map_or(0.0, |a| a[i]);
        let a2 = self.magnetic.get(1).map_or(0.0, |a| a[i]);
        // A1σ1 + A2σ2 = [[0, A1 - iA2], [A1 + iA2, 0]]
        let lo = Complex64::new(a1, a2);
        (v * p - lo.conj() * q, v * q - lo * p)
    }

    /// Applies `g` pointwise to raw component slices in place.
    pub(crate) fn g_in_place(&self, a: &mut [Complex64], b: &mut [Complex64]) {
        match self.variant {
            Variant::Nonlinear => {
                for i in 0..a.len() {
                    let (d1, d2) = self.diagonal_potential(i, a[i], b[i]);
                    a[i] *= Complex64::new(0.0, -d1);
                    b[i] *= Complex64::new(0.0, -d2);
                }
            }
            Variant::LinearMagnetic => {
                for i in 0..a.len() {
                    let (p, q) = self.magnetic_apply(i, a[i], b[i]);
                    a[i] = -I * p;
                    b[i] = -I * q;
                }
            }
        }
    }

    fn check(&self, f: &SpinorField) -> Result<()> {
        f.ensure_same_grid(&self.grid)
    }

    /// `g(Φ) = -i(VΦ + F(Φ)Φ)` (or the magnetic linear operator).
    pub fn g_eval(&self, phi: &SpinorField) -> Result<SpinorField> {
        self.check(phi)?;
        let mut out = phi.clone();
        let [a, b] = out.components_mut();
        self.g_in_place(a, b);
        Ok(out)
    }

    /// Real-linear Gateaux derivative `Dg[Φ](v)`, treating `Φ` and `Φ̄` as independent.
    pub fn g_derivative(&self, phi: &SpinorField, v: &SpinorField) -> Result<SpinorField> {
        self.check(phi)?;
        self.check(v)?;
        if self.variant == Variant::LinearMagnetic {
            return self.g_eval(v);
        }
        let mut out = SpinorField::zeros(self.grid.clone());
        let (l1, l2) = (self.lambda1, self.lambda2);
        let [o1, o2] = out.components_mut();
        for i in 0..phi.len() {
            let [p1, p2] = phi.at(i);
            let [v1, v2] = v.at(i);
            let rho3 = p1.norm_sqr() - p2.norm_sqr();
            let rho = p1.norm_sqr() + p2.norm_sqr();
            // D(Φ*σ3Φ)(v) = 2 Re(Φ*σ3 v), D|Φ|²(v) = 2 Re(Φ* v)
            let drho3 = 2.0 * (p1.conj() * v1 - p2.conj() * v2).re;
            let drho = 2.0 * (p1.conj() * v1 + p2.conj() * v2).re;
            let vv = self.potential[i];
            let t1 = vv * v1 + l1 * (drho3 * p1 + rho3 * v1) + l2 * (drho * p1 + rho * v1);
            let t2 = vv * v2 + l1 * (-drho3 * p2 - rho3 * v2) + l2 * (drho * p2 + rho * v2);
            o1[i] = -I * t1;
            o2[i] = -I * t2;
        }
        Ok(out)
    }

    /// Second real-linear derivative `D²g[Φ](v, w)`; symmetric in `(v, w)`.
    pub fn g_second_derivative(
        &self,
        phi: &SpinorField,
        v: &SpinorField,
        w: &SpinorField,
    ) -> Result<SpinorField> {
        self.check(phi)?;
        self.check(v)?;
        self.check(w)?;
        let mut out = SpinorField::zeros(self.grid.clone());
        if self.variant == Variant::LinearMagnetic {
            return Ok(out);
        }
        let (l1, l2) = (self.lambda1, self.lambda2);
        let [o1, o2] = out.components_mut();
        for i in 0..phi.len() {
            let [p1, p2] = phi.at(i);
            let [v1, v2] = v.at(i);
            let [w1, w2] = w.at(i);
            let dv3 = 2.0 * (p1.conj() * v1 - p2.conj() * v2).re;
            let dw3 = 2.0 * (p1.conj() * w1 - p2.conj() * w2).re;
            let dv = 2.0 * (p1.conj() * v1 + p2.conj() * v2).re;
            let dw = 2.0 * (p1.conj() * w1 + p2.conj() * w2).re;
            let vw3 = 2.0 * (w1.conj() * v1 - w2.conj() * v2).re;
            let vw = 2.0 * (w1.conj() * v1 + w2.conj() * v2).re;
            let t1 = l1 * (vw3 * p1 + dv3 * w1 + dw3 * v1) + l2 * (vw * p1 + dv * w1 + dw * v1);
            let t2 = -l1 * (vw3 * p2 + dv3 * w2 + dw3 * v2) + l2 * (vw * p2 + dv * w2 + dw * v2);
            o1[i] = -I * t1;
            o2[i] = -I * t2;
        }
        Ok(out)
    }

    /// Discrete mass `Δx^d Σ |Φ_j|²`.
    pub fn mass(&self, phi: &SpinorField) -> Result<f64> {
        self.check(phi)?;
        Ok(self.grid.cell_volume() * phi.sum_sq())
    }

    /// Discrete energy with spectral derivatives and rectangle-rule quadrature.
    ///
    /// The integrand is real for Hermitian spectral differentiation; its
    /// imaginary residue is checked against `1e-10` of the total magnitude.
    pub fn energy(&self, phi: &SpinorField) -> Result<f64> {
        self.check(phi)?;
        let eps = self.eps;
        let derivs = (0..self.grid.dim())
            .map(|ax| partial(phi, ax))
            .collect::<Result<Vec<_>>>()?;
        let mut total = Complex64::default();
        let mut magnitude = 0.0;
        for i in 0..phi.len() {
            let [p1, p2] = phi.at(i);
            let (n1, n2) = (p1.norm_sqr(), p2.norm_sqr());
            let rho3 = n1 - n2;
            let rho = n1 + n2;
            // Φ*σj∂jΦ summed over axes
            let mut kin = Complex64::default();
            for (ax, d) in derivs.iter().enumerate() {
                let [d1, d2] = d.at(i);
                kin += match ax {
                    0 => p1.conj() * d2 + p2.conj() * d1,
                    _ => p1.conj() * (-I * d2) + p2.conj() * (I * d1),
                };
            }
            let kinetic = -I * kin / eps;
            let mut density = kinetic + Complex64::new(rho3 / (eps * eps) + self.potential[i] * rho, 0.0);
            match self.variant {
                Variant::Nonlinear => {
                    density += 0.5 * self.lambda1 * rho3 * rho3 + 0.5 * self.lambda2 * rho * rho;
                }
                Variant::LinearMagnetic => {
                    let a1 = self.magnetic.first().map_or(0.0, |a| a[i]);
                    let a2 = self.magnetic.get(1).map_or(0.0, |a| a[i]);
                    let s1 = 2.0 * (p1.conj() * p2).re;
                    let s2 = 2.0 * (p1.conj() * p2).im;
                    density -= a1 * s1 + a2 * s2;
                }
            }
            magnitude += kinetic.norm() + (rho3 / (eps * eps)).abs() + (self.potential[i] * rho).abs();
            total += density;
        }
        let w = self.grid.cell_volume();
        if total.im.abs() > 1e-10 * magnitude.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "energy quadrature has imaginary residue {:e} (magnitude {:e})",
                total.im * w,
                magnitude * w
            )));
        }
        Ok(total.re * w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DiracSymbols;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn grid1(n: usize) -> Arc<SpatialGrid> {
        Arc::new(SpatialGrid::one_d(-32.0, 32.0, n).unwrap())
    }

    fn sample(g: &Arc<SpatialGrid>, seed: f64) -> SpinorField {
        SpinorField::from_fn(g.clone(), |x| {
            let x = x[0];
            let env = (-(x * x) / 8.0).exp();
            [
                Complex64::new((seed * x).cos(), (0.3 * x + seed).sin()) * env,
                Complex64::new(0.5 * (x - seed).sin(), (1.1 * x).cos() * 0.7) * env,
            ]
        })
    }

    #[test]
    fn g_zero_field() {
        let g = grid1(32);
        let m = ModelSpec::nonlinear(g.clone(), 0.5, vec![0.3; 32], -1.0, 2.0).unwrap();
        let out = m.g_eval(&SpinorField::zeros(g)).unwrap();
        assert_eq!(out.norm_linf(), 0.0);
    }

    #[test]
    fn g_hand_evaluation() {
        let g = grid1(16);
        let m = ModelSpec::nonlinear(g.clone(), 1.0, vec![0.0; 16], 1.0, 0.0).unwrap();
        let phi = SpinorField::from_fn(g, |_| [c(1.0), c(0.0)]);
        let out = m.g_eval(&phi).unwrap();
        for i in 0..16 {
            assert_eq!(out.at(i), [-I, c(0.0)]);
        }
    }

    #[test]
    fn g_pure_phase_generator() {
        let g = grid1(32);
        let m = ModelSpec::nonlinear(g.clone(), 1.0, vec![1.0; 32], 0.0, 0.0).unwrap();
        let phi = sample(&g, 0.4);
        let mut want = phi.clone();
        want.scale(-I);
        assert!(m.g_eval(&phi).unwrap().sub(&want).norm_linf() < 1e-15);
    }

    #[test]
    fn gauge_shift_of_potential() {
        let g = grid1(32);
        let pot: Vec<f64> = (0..32).map(|i| (i as f64 * 0.2).sin()).collect();
        let shifted: Vec<f64> = pot.iter().map(|v| v + 0.7).collect();
        let m = ModelSpec::nonlinear(g.clone(), 0.3, pot, -1.0, 0.5).unwrap();
        let ms = ModelSpec::nonlinear(g.clone(), 0.3, shifted, -1.0, 0.5).unwrap();
        let phi = sample(&g, 1.3);
        let diff = ms.g_eval(&phi).unwrap().sub(&m.g_eval(&phi).unwrap());
        let mut want = phi.clone();
        want.scale(-I * 0.7);
        assert!(diff.sub(&want).norm_linf() < 1e-14);
    }

    #[test]
    fn derivative_is_linear_part_without_nonlinearity() {
        let g = grid1(32);
        let pot: Vec<f64> = (0..32).map(|i| i as f64 * 0.1).collect();
        let m = ModelSpec::nonlinear(g.clone(), 1.0, pot.clone(), 0.0, 0.0).unwrap();
        let (phi, v) = (sample(&g, 0.2), sample(&g, 0.9));
        let d = m.g_derivative(&phi, &v).unwrap();
        for i in 0..32 {
            let [v1, v2] = v.at(i);
            assert_eq!(d.at(i), [-I * (pot[i] * v1), -I * (pot[i] * v2)]);
        }
    }

    #[test]
    fn second_derivative_symmetric() {
        let g = grid1(64);
        let m = ModelSpec::nonlinear(g.clone(), 1.0, vec![0.1; 64], -1.3, 0.8).unwrap();
        let (phi, v, w) = (sample(&g, 0.1), sample(&g, 0.7), sample(&g, 2.1));
        let a = m.g_second_derivative(&phi, &v, &w).unwrap();
        let b = m.g_second_derivative(&phi, &w, &v).unwrap();
        assert!(a.sub(&b).norm_linf() <= 1e-13 * a.norm_linf());
    }

    #[test]
    fn linear_magnetic_derivatives() {
        let g = grid1(32);
        let m = ModelSpec::linear_magnetic(g.clone(), 0.5, vec![0.2; 32], vec![vec![0.4; 32]]).unwrap();
        let (phi, v) = (sample(&g, 0.1), sample(&g, 0.7));
        assert!(m.g_derivative(&phi, &v).unwrap().sub(&m.g_eval(&v).unwrap()).norm_linf() == 0.0);
        assert_eq!(m.g_second_derivative(&phi, &v, &v).unwrap().norm_linf(), 0.0);
        assert_eq!(m.lambdas(), (0.0, 0.0));
    }

    #[test]
    fn mass_of_gaussian() {
        let g = grid1(256);
        let m = ModelSpec::nonlinear(g.clone(), 1.0, vec![0.0; 256], 0.0, 0.0).unwrap();
        let phi = SpinorField::from_fn(g, |x| [c((-x[0] * x[0] / 2.0).exp()), c(0.0)]);
        let mass = m.mass(&phi).unwrap();
        assert!((mass - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((mass - 1.772_454).abs() < 1e-6);
        let mut scaled = phi.clone();
        scaled.scale(Complex64::new(1.0, 2.0));
        assert!((m.mass(&scaled).unwrap() - 5.0 * mass).abs() < 1e-12);
        assert_eq!(m.mass(&SpinorField::zeros(m.grid().clone())).unwrap(), 0.0);
    }

    #[test]
    fn energy_zero_and_translation_invariance() {
        let g = grid1(128);
        let m = ModelSpec::nonlinear(g.clone(), 0.4, vec![0.0; 128], -1.0, 0.5).unwrap();
        assert_eq!(m.energy(&SpinorField::zeros(g.clone())).unwrap(), 0.0);
        let phi = sample(&g, 0.6);
        let e0 = m.energy(&phi).unwrap();
        let e1 = m.energy(&phi.shift_cells(7)).unwrap();
        assert!((e0 - e1).abs() <= 1e-13 * e0.abs());
        let m0 = m.mass(&phi).unwrap();
        assert!((m0 - m.mass(&phi.shift_cells(7)).unwrap()).abs() <= 1e-13 * m0);
    }

    #[test]
    fn energy_conserved_by_free_flow() {
        let g = grid1(128);
        let eps = 0.3;
        let m = ModelSpec::nonlinear(g.clone(), eps, vec![0.0; 128], 0.0, 0.0).unwrap();
        let sy = DiracSymbols::new(g.clone(), eps).unwrap();
        let phi = sample(&g, 1.7);
        let e0 = m.energy(&phi).unwrap();
        let later = sy.apply_free_flow(&phi, 2.3, -1).unwrap();
        assert!((m.energy(&later).unwrap() - e0).abs() <= 1e-11 * e0.abs());
    }

    #[test]
    fn bad_model_configs() {
        let g = grid1(16);
        assert!(matches!(ModelSpec::nonlinear(g.clone(), 0.0, vec![0.0; 16], 0.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(ModelSpec::nonlinear(g.clone(), 1.5, vec![0.0; 16], 0.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(ModelSpec::nonlinear(g.clone(), 1.0, vec![0.0; 3], 0.0, 0.0), Err(Error::Shape(_))));
        assert!(matches!(
            ModelSpec::nonlinear(g.clone(), 1.0, vec![f64::NAN; 16], 0.0, 0.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(ModelSpec::linear_magnetic(g, 1.0, vec![0.0; 16], vec![]), Err(Error::Config(_))));
    }
}
