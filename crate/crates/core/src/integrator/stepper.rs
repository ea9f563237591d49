use num_complex::Complex64;

use super::{assemble_theta, diag_axpy, diag_mul};
use crate::expint::{EepReading, Scheme, SchemeTableau};
use crate::twoscale::{AugmentedField, TwoScale};
use crate::{Error, Result};

/// Stopping rule for the implicit stages of SEP-TS4.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FixedPointSettings {
    /// Lower bound on the relative tolerance.
    pub floor: f64,
    /// Tolerance is `max(floor, factor * |Δt|⁵)`.
    pub factor: f64,
    pub max_iterations: usize,
}

impl Default for FixedPointSettings {
    fn default() -> Self {
        Self {
            floor: 1e-12,
            factor: 0.01,
            max_iterations: 50,
        }
    }
}

impl FixedPointSettings {
    pub fn tolerance(&self, dt: f64) -> f64 {
        self.floor.max(self.factor * dt.abs().powi(5))
    }
}

/// One-step map `Ẑⁿ ↦ Ẑ^{n+1}` of an exponential scheme with cached tableau.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    system: &'a TwoScale,
    tableau: SchemeTableau,
    dt: f64,
    /// `e^{iΘΔt}`.
    full: Vec<Complex64>,
    fixed_point: FixedPointSettings,
    last_iterations: usize,
}

impl<'a> Stepper<'a> {
    pub fn new(system: &'a TwoScale, scheme: Scheme, dt: f64) -> Result<Self> {
        Self::with_settings(system, scheme, EepReading::default(), dt, FixedPointSettings::default())
    }

    pub fn with_settings(
        system: &'a TwoScale,
        scheme: Scheme,
        reading: EepReading,
        dt: f64,
        fixed_point: FixedPointSettings,
    ) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::Parameter(format!("time step must be finite and non-zero, got {dt}")));
        }
        let z = assemble_theta(system.tau(), system.eps()).scaled(dt);
        let tableau = SchemeTableau::build_with(scheme, reading, &z)?;
        let full = z.iter().map(|v| v.exp()).collect();
        Ok(Self {
            system,
            tableau,
            dt,
            full,
            fixed_point,
            last_iterations: 0,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.tableau.scheme()
    }

    pub fn tableau(&self) -> &SchemeTableau {
        &self.tableau
    }

    /// Fixed-point iterations used by the last implicit step.
    pub fn last_iterations(&self) -> usize {
        self.last_iterations
    }

    /// Advances `zhat` (modal) from time `t`.
    pub fn step(&mut self, t: f64, zhat: &AugmentedField) -> Result<AugmentedField> {
        self.system.check(zhat)?;
        let zhat = zhat.to_modal();
        match self.tableau.scheme() {
            Scheme::EepTs4 => self.step_explicit(t, &zhat),
            Scheme::SepTs4 => self.step_symmetric(t, &zhat),
        }
    }

    fn step_explicit(&mut self, t: f64, zn: &AugmentedField) -> Result<AugmentedField> {
        let tb = &self.tableau;
        let c = tb.nodes();
        let mut xis: Vec<AugmentedField> = Vec::with_capacity(tb.stages());
        for j in 0..tb.stages() {
            let mut stage = diag_mul(zn, tb.stage_exp(j));
            for (k, xi) in xis.iter().enumerate() {
                if !tb.a_is_zero(j, k) {
                    diag_axpy(&mut stage, self.dt, tb.a(j, k), xi);
                }
            }
            xis.push(self.system.xi(t + c[j] * self.dt, &stage)?);
        }
        let mut out = diag_mul(zn, &self.full);
        for (j, xi) in xis.iter().enumerate() {
            if tb.b(j).iter().any(|v| *v != Complex64::default()) {
                diag_axpy(&mut out, self.dt, tb.b(j), xi);
            }
        }
        self.last_iterations = 0;
        Ok(out)
    }

    fn step_symmetric(&mut self, t: f64, zn: &AugmentedField) -> Result<AugmentedField> {
        // c = (1, 1/2, 0): stage 3 is Ẑⁿ, stage 1 is the new value
        let tb = &self.tableau;
        let c = tb.nodes();
        let dt = self.dt;
        let xi3 = self.system.xi(t, zn)?;
        let base: Vec<AugmentedField> = (0..2).map(|j| diag_mul(zn, tb.stage_exp(j))).collect();
        let mut stages = base.clone();
        let tol = self.fixed_point.tolerance(dt);
        let mut change = f64::INFINITY;
        for it in 1..=self.fixed_point.max_iterations {
            let xis = [
                self.system.xi(t + c[0] * dt, &stages[0])?,
                self.system.xi(t + c[1] * dt, &stages[1])?,
            ];
            let mut next = base.clone();
            for (j, nj) in next.iter_mut().enumerate() {
                diag_axpy(nj, dt, tb.a(j, 0), &xis[0]);
                diag_axpy(nj, dt, tb.a(j, 1), &xis[1]);
                diag_axpy(nj, dt, tb.a(j, 2), &xi3);
            }
            let mut diff2 = 0.0;
            let mut norm2 = 0.0;
            for j in 0..2 {
                diff2 += next[j].sub(&stages[j])?.norm_flat().powi(2);
                norm2 += next[j].norm_flat().powi(2);
            }
            change = if norm2 > 0.0 { (diff2 / norm2).sqrt() } else { diff2.sqrt() };
            stages = next;
            if !change.is_finite() {
                break;
            }
            if change <= tol {
                self.last_iterations = it;
                let [s1, _] = <[AugmentedField; 2]>::try_from(stages).expect("two stages");
                return Ok(s1);
            }
        }
        Err(Error::FixedPoint {
            iterations: self.fixed_point.max_iterations,
            residual: change,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::ModelSpec;
    use crate::spectral::{SpatialGrid, SpinorField};
    use crate::twoscale::{Representation, TauGrid};

    fn system(eps: f64, nx: usize, nt: usize, nonlinear: bool) -> TwoScale {
        let g = Arc::new(SpatialGrid::one_d(-4.0, 4.0, nx).unwrap());
        let (pot, l1, l2) = if nonlinear {
            ((0..nx).map(|i| 0.5 * (g.point(i)[0] * std::f64::consts::PI / 4.0).cos()).collect(), -1.0, 0.5)
        } else {
            (vec![0.0; nx], 0.0, 0.0)
        };
        let m = ModelSpec::nonlinear(g, eps, pot, l1, l2).unwrap();
        TwoScale::new(m, TauGrid::new(nt).unwrap()).unwrap()
    }

    fn data(s: &TwoScale) -> AugmentedField {
        let g = s.model().grid().clone();
        let nodes: Vec<_> = (0..s.tau().len())
            .map(|k| {
                let t = s.tau().node(k);
                SpinorField::from_fn(g.clone(), |x| {
                    let y = x[0] * std::f64::consts::PI / 4.0;
                    [
                        Complex64::new(0.8 * y.cos() + 0.2 * t.sin(), 0.3 * (y + t).sin()),
                        Complex64::new(0.1 * (2.0 * y).sin(), 0.4 * (t - y).cos()),
                    ]
                })
            })
            .collect();
        AugmentedField::from_nodes(s.tau().clone(), &nodes).unwrap().into_modal()
    }

    #[test]
    fn transport_oracle() {
        let s = system(0.3, 8, 8, false);
        let z0 = data(&s);
        let dt = 0.037;
        for scheme in [Scheme::SepTs4, Scheme::EepTs4] {
            let mut st = Stepper::new(&s, scheme, dt).unwrap();
            let z1 = st.step(0.0, &z0).unwrap();
            for k in 0..8 {
                let tau = s.tau().node(k);
                let want = z0.evaluate_at(tau - dt / (0.3 * 0.3));
                assert!(z1.evaluate_at(tau).sub(&want).norm_linf() < 1e-13);
            }
        }
    }

    #[test]
    fn linear_flow_group_property() {
        let s = system(0.2, 8, 8, false);
        let z0 = data(&s);
        let mut st = Stepper::new(&s, Scheme::EepTs4, 0.01).unwrap();
        let mut z = z0.clone();
        for n in 0..50 {
            z = st.step(n as f64 * 0.01, &z).unwrap();
        }
        let th = assemble_theta(s.tau(), 0.2).scaled(0.5);
        let want = diag_mul(&z0, &th.iter().map(|v| v.exp()).collect::<Vec<_>>());
        assert!(z.sub(&want).unwrap().norm_linf() < 1e-12);
    }

    /// Classical RK4 on the modal system with many substeps.
    fn rk4_oracle(s: &TwoScale, z0: &AugmentedField, t0: f64, dt: f64, n: usize) -> AugmentedField {
        let th = assemble_theta(s.tau(), s.eps()).scaled(1.0);
        let f = |t: f64, z: &AugmentedField| {
            let mut out = s.xi(t, z).unwrap();
            diag_axpy(&mut out, 1.0, &th, z);
            out
        };
        let h = dt / n as f64;
        let mut z = z0.clone();
        let add = |a: &AugmentedField, s: f64, b: &AugmentedField| {
            let mut o = a.clone();
            o.axpy(Complex64::new(s, 0.0), b).unwrap();
            o
        };
        for i in 0..n {
            let t = t0 + i as f64 * h;
            let k1 = f(t, &z);
            let k2 = f(t + h / 2.0, &add(&z, h / 2.0, &k1));
            let k3 = f(t + h / 2.0, &add(&z, h / 2.0, &k2));
            let k4 = f(t + h, &add(&z, h, &k3));
            z = add(&z, h / 6.0, &k1);
            z.axpy(Complex64::new(h / 3.0, 0.0), &k2).unwrap();
            z.axpy(Complex64::new(h / 3.0, 0.0), &k3).unwrap();
            z.axpy(Complex64::new(h / 6.0, 0.0), &k4).unwrap();
        }
        z
    }

    #[test]
    fn local_error_is_fifth_order() {
        let s = system(0.5, 8, 8, true);
        let z0 = data(&s);
        for scheme in [Scheme::SepTs4, Scheme::EepTs4] {
            let err = |dt: f64| {
                let mut st = Stepper::new(&s, scheme, dt).unwrap();
                let got = st.step(0.1, &z0).unwrap();
                let fine = rk4_oracle(&s, &z0, 0.1, dt, 400);
                let finer = rk4_oracle(&s, &z0, 0.1, dt, 800);
                assert!(fine.sub(&finer).unwrap().norm_linf() < 1e-12);
                got.sub(&finer).unwrap().norm_linf()
            };
            let (e1, e2) = (err(0.1), err(0.05));
            let ratio = e1 / e2;
            assert!(ratio > 24.0 && ratio < 40.0, "{scheme}: {e1:e} / {e2:e} = {ratio}");
        }
    }

    #[test]
    fn symmetric_step_is_self_adjoint() {
        let s = system(0.5, 8, 8, true);
        let z0 = data(&s);
        let dt = 0.1;
        let mut fwd = Stepper::new(&s, Scheme::SepTs4, dt).unwrap();
        let mut back = Stepper::new(&s, Scheme::SepTs4, -dt).unwrap();
        let z1 = fwd.step(0.3, &z0).unwrap();
        let z2 = back.step(0.3 + dt, &z1).unwrap();
        let tol = FixedPointSettings::default().tolerance(dt);
        let dev = z2.sub(&z0).unwrap().norm_flat() / z0.norm_flat();
        assert!(dev <= 10.0 * tol, "deviation {dev:e}, tolerance {tol:e}");
        // the explicit scheme is not
        let mut efwd = Stepper::new(&s, Scheme::EepTs4, dt).unwrap();
        let mut eback = Stepper::new(&s, Scheme::EepTs4, -dt).unwrap();
        let e2 = eback.step(0.3 + dt, &efwd.step(0.3, &z0).unwrap()).unwrap();
        let edev = e2.sub(&z0).unwrap().norm_flat() / z0.norm_flat();
        assert!(edev > 10.0 * tol && edev > 100.0 * dev, "explicit deviation {edev:e}");
    }

    #[test]
    fn fixed_point_failure_is_reported() {
        let s = system(0.5, 8, 8, true);
        let z0 = data(&s);
        let settings = FixedPointSettings { floor: 1e-15, factor: 0.0, max_iterations: 2 };
        let mut st = Stepper::with_settings(&s, Scheme::SepTs4, EepReading::Classical, 0.1, settings).unwrap();
        assert!(matches!(st.step(0.0, &z0), Err(Error::FixedPoint { iterations: 2, .. })));
    }

    #[test]
    fn nodal_input_accepted() {
        let s = system(0.5, 8, 8, false);
        let z0 = data(&s);
        let mut st = Stepper::new(&s, Scheme::EepTs4, 0.1).unwrap();
        let a = st.step(0.0, &z0).unwrap();
        let b = st.step(0.0, &z0.to_nodal()).unwrap();
        assert_eq!(a.repr(), Representation::Modal);
        assert!(a.sub(&b).unwrap().norm_linf() < 1e-14);
    }
}
