//! Strang splitting with exact sub-flows, used as a reference solution.

use num_complex::Complex64;

use crate::model::{ModelSpec, Variant};
use crate::spectral::{DiracSymbols, SpinorField};
use crate::Result;

/// Exact flow of `i∂tΦ = (V + F(Φ))Φ` (or the magnetic potential) over time `h`, pointwise.
fn potential_flow(model: &ModelSpec, phi: &mut SpinorField, h: f64) {
    let [a, b] = phi.components_mut();
    match model.variant() {
        Variant::Nonlinear => {
            // |φ1|, |φ2| are invariant, so F(Φ) is frozen along the flow
            for i in 0..a.len() {
                let (d1, d2) = model.diagonal_potential(i, a[i], b[i]);
                a[i] *= Complex64::from_polar(1.0, -h * d1);
                b[i] *= Complex64::from_polar(1.0, -h * d2);
            }
        }
        Variant::LinearMagnetic => {
            let pot = model.potential();
            let mag = model.magnetic();
            for i in 0..a.len() {
                let a1 = mag.first().map_or(0.0, |m| m[i]);
                let a2 = mag.get(1).map_or(0.0, |m| m[i]);
                let norm = a1.hypot(a2);
                let phase = Complex64::from_polar(1.0, -h * pot[i]);
                // e^{ih a·σ} = cos(h|a|) I + i sin(h|a|) (a·σ)/|a|
                let (cs, sn) = ((h * norm).cos(), (h * norm).sin());
                let (u1, u2) = if norm > 0.0 { (a1 / norm, a2 / norm) } else { (0.0, 0.0) };
                let up = Complex64::new(u1, -u2);
                let lo = Complex64::new(u1, u2);
                let i_sn = Complex64::new(0.0, sn);
                let (p, q) = (a[i], b[i]);
                a[i] = phase * (cs * p + i_sn * up * q);
                b[i] = phase * (cs * q + i_sn * lo * p);
            }
        }
    }
}

/// One Strang step: half potential flow, full free flow, half potential flow.
pub fn strang_step(model: &ModelSpec, symbols: &DiracSymbols, phi: &SpinorField, dt: f64) -> Result<SpinorField> {
    phi.ensure_same_grid(model.grid())?;
    let mut u = phi.clone();
    potential_flow(model, &mut u, 0.5 * dt);
    let mut u = symbols.apply_free_flow(&u, dt, -1)?;
    potential_flow(model, &mut u, 0.5 * dt);
    Ok(u)
}

/// Strang trajectory from `phi0`; returns the field at each requested time
/// (rounded to the nearest step).
pub fn run_reference(
    model: &ModelSpec,
    phi0: &SpinorField,
    dt: f64,
    times: &[f64],
) -> Result<Vec<SpinorField>> {
    let eps = model.eps();
    if dt > eps * eps / 10.0 {
        log::warn!("reference step {dt} does not resolve the ε² = {:e} oscillation", eps * eps);
    }
    let symbols = DiracSymbols::new(model.grid().clone(), eps)?;
    let mut targets: Vec<(usize, usize)> = times
        .iter()
        .enumerate()
        .map(|(i, t)| (i, (t / dt).round() as usize))
        .collect();
    targets.sort_by_key(|p| p.1);
    let mut out = vec![phi0.clone(); times.len()];
    let mut phi = phi0.clone();
    let mut n = 0;
    for (i, target) in targets {
        while n < target {
            phi = strang_step(model, &symbols, &phi, dt)?;
            n += 1;
        }
        out[i] = phi.clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{soliton_state, SolitonParams};
    use crate::spectral::SpatialGrid;

    fn phi0(g: &Arc<SpatialGrid>) -> SpinorField {
        SpinorField::from_fn(g.clone(), |x| {
            let e = (-(x[0] * x[0]) / 2.0).exp();
            [Complex64::new(e, 0.1), Complex64::new(0.2 * x[0] * e, 0.5 * e)]
        })
    }

    fn grid() -> Arc<SpatialGrid> {
        Arc::new(SpatialGrid::one_d(-16.0, 16.0, 128).unwrap())
    }

    #[test]
    fn free_case_is_free_flow() {
        let g = grid();
        let m = ModelSpec::nonlinear(g.clone(), 0.3, vec![0.0; 128], 0.0, 0.0).unwrap();
        let sy = DiracSymbols::new(g.clone(), 0.3).unwrap();
        let p = phi0(&g);
        let a = strang_step(&m, &sy, &p, 0.07).unwrap();
        assert!(a.sub(&sy.apply_free_flow(&p, 0.07, -1).unwrap()).norm_linf() < 1e-15);
    }

    #[test]
    fn mass_preserved_and_symmetric() {
        let g = grid();
        let pot: Vec<f64> = (0..128).map(|i| 1.0 - (g.point(i)[0] * 0.3).cos()).collect();
        let models = [
            ModelSpec::nonlinear(g.clone(), 0.5, pot.clone(), -1.0, 0.7).unwrap(),
            ModelSpec::linear_magnetic(g.clone(), 0.5, pot.clone(), vec![pot.iter().map(|v| 0.3 * v).collect()])
                .unwrap(),
        ];
        for m in &models {
            let sy = DiracSymbols::new(g.clone(), 0.5).unwrap();
            let p = phi0(&g);
            let m0 = m.mass(&p).unwrap();
            let a = strang_step(m, &sy, &p, 0.05).unwrap();
            assert!((m.mass(&a).unwrap() - m0).abs() <= 1e-13 * m0);
            let back = strang_step(m, &sy, &a, -0.05).unwrap();
            assert!(back.sub(&p).norm_linf() < 1e-12);
        }
    }

    #[test]
    fn magnetic_flow_matches_matrix_exponential() {
        let g = Arc::new(SpatialGrid::one_d(0.0, 1.0, 4).unwrap());
        let m = ModelSpec::linear_magnetic(g.clone(), 1.0, vec![0.3; 4], vec![vec![0.8; 4]]).unwrap();
        let mut f = SpinorField::from_fn(g.clone(), |_| [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)]);
        let h = 0.4;
        potential_flow(&m, &mut f, h);
        // Taylor series of exp(-ih(V - A1σ1))
        let hm = nalgebra::Matrix2::new(
            Complex64::new(0.3, 0.0),
            Complex64::new(-0.8, 0.0),
            Complex64::new(-0.8, 0.0),
            Complex64::new(0.3, 0.0),
        ) * Complex64::new(0.0, -h);
        let mut term = nalgebra::Matrix2::<Complex64>::identity();
        let mut sum = term;
        for k in 1..30 {
            term = term * hm / Complex64::new(k as f64, 0.0);
            sum += term;
        }
        let v = sum * nalgebra::Vector2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5));
        assert!((f.at(2)[0] - v[0]).norm() < 1e-14 && (f.at(2)[1] - v[1]).norm() < 1e-14);
    }

    #[test]
    fn second_order_convergence() {
        let g = grid();
        let pot: Vec<f64> = (0..128).map(|i| 1.0 - (g.point(i)[0] * 0.3).cos()).collect();
        let m = ModelSpec::nonlinear(g.clone(), 0.5, pot, -1.0, 0.5).unwrap();
        let p = phi0(&g);
        let fine = run_reference(&m, &p, 1e-4, &[0.5]).unwrap().remove(0);
        let err = |dt: f64| run_reference(&m, &p, dt, &[0.5]).unwrap().remove(0).sub(&fine).norm_linf();
        let ratio = err(0.01) / err(0.005);
        assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn soliton_closed_form() {
        let g = Arc::new(SpatialGrid::one_d(-32.0, 32.0, 512).unwrap());
        let m = ModelSpec::nonlinear(g.clone(), 1.0, vec![0.0; 512], -1.0, 0.0).unwrap();
        let params = SolitonParams::new(0.8, 0.2, 0.0, -1.0).unwrap();
        let p0 = soliton_state(g.clone(), &params, 0.0).unwrap();
        let got = run_reference(&m, &p0, 1e-3, &[1.0]).unwrap().remove(0);
        let want = soliton_state(g.clone(), &params, 1.0).unwrap();
        let err = got.sub(&want).norm_linf();
        assert!(err < 1e-5, "error {err:e}");
    }
}
