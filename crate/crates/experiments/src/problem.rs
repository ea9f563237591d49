//! Turns a [`ModelConfig`] into solver objects.

use std::sync::Arc;

use dirac_ua_core::model::{builtin_initial, builtin_potential, soliton_state, ModelSpec, SolitonParams};
use dirac_ua_core::spectral::{Axis, SpatialGrid, SpinorField};
use dirac_ua_core::twoscale::{TauGrid, TwoScale};

use crate::config::{InitialSpec, ModelConfig};
use crate::{Error, Result};

/// A fully resolved problem instance at one ε.
#[derive(Debug, Clone)]
pub struct Instance {
    pub model: ModelSpec,
    pub initial: SpinorField,
}

impl Instance {
    pub fn eps(&self) -> f64 {
        self.model.eps()
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        self.model.grid()
    }

    pub fn two_scale(&self, ntau: usize) -> Result<TwoScale> {
        Ok(TwoScale::new(self.model.clone(), TauGrid::new(ntau)?)?)
    }
}

/// Grid of the config with every axis resized to `n` points (or as configured if `None`).
pub fn build_grid(m: &ModelConfig, n: Option<usize>) -> Result<Arc<SpatialGrid>> {
    let axes: Vec<Axis> = m
        .domain
        .iter()
        .zip(&m.nx)
        .map(|(&[a, b], &nx)| Axis::new(a, b, n.unwrap_or(nx)))
        .collect();
    Ok(Arc::new(SpatialGrid::new(&axes)?))
}

/// Model and initial data at `eps` on `grid`.
pub fn instance(m: &ModelConfig, eps: f64, grid: Arc<SpatialGrid>) -> Result<Instance> {
    let potential = builtin_potential(&m.potential, &grid)?;
    let model = if m.magnetic.is_empty() {
        ModelSpec::nonlinear(grid.clone(), eps, potential, m.lambda1, m.lambda2)?
    } else {
        let magnetic = m
            .magnetic
            .iter()
            .map(|name| builtin_potential(name, &grid))
            .collect::<dirac_ua_core::Result<Vec<_>>>()?;
        ModelSpec::linear_magnetic(grid.clone(), eps, potential, magnetic)?
    };
    let initial = initial_data(m, grid)?;
    Ok(Instance { model, initial })
}

pub fn initial_data(m: &ModelConfig, grid: Arc<SpatialGrid>) -> Result<SpinorField> {
    match &m.initial {
        InitialSpec::Builtin { name } => Ok(builtin_initial(name, grid)?),
        InitialSpec::Soliton { omega, velocity, x0 } => {
            let p = SolitonParams::new(*omega, *velocity, *x0, m.lambda1)?;
            Ok(soliton_state(grid, &p, 0.0)?)
        }
        InitialSpec::Collision { omega, x_l, x_r, v_l, v_r } => {
            let left = SolitonParams::new(*omega, *v_l, *x_l, m.lambda1)?;
            let right = SolitonParams::new(*omega, *v_r, *x_r, m.lambda1)?;
            let mut phi = soliton_state(grid.clone(), &left, 0.0)?;
            phi.axpy(1.0.into(), &soliton_state(grid, &right, 0.0)?);
            Ok(phi)
        }
    }
}

/// Closed-form solution at `t` for a single-soliton config, if the model admits one.
pub fn closed_form(m: &ModelConfig, eps: f64, grid: Arc<SpatialGrid>, t: f64) -> Result<SpinorField> {
    let InitialSpec::Soliton { omega, velocity, x0 } = m.initial else {
        return Err(Error::Config("closed-form reference needs soliton initial data".into()));
    };
    if eps != 1.0 || m.lambda2 != 0.0 || m.potential != "zero" || !m.magnetic.is_empty() {
        return Err(Error::Config(
            "closed-form reference needs ε = 1, λ2 = 0, zero potential and no magnetic field".into(),
        ));
    }
    let p = SolitonParams::new(omega, velocity, x0, m.lambda1)?;
    Ok(soliton_state(grid, &p, t)?)
}

/// Samples a fine-grid field on a coarser grid of the same box (every `k`-th point per axis).
pub fn restrict(fine: &SpinorField, coarse: &Arc<SpatialGrid>) -> Result<SpinorField> {
    let fg = fine.grid();
    if fg.dim() != coarse.dim() {
        return Err(Error::Config("restriction between grids of different dimension".into()));
    }
    let mut ratio = [1usize; 2];
    for d in 0..fg.dim() {
        let (f, c) = (fg.axis(d), coarse.axis(d));
        if f.n % c.n != 0 || (f.a - c.a).abs() > 1e-12 || (f.b - c.b).abs() > 1e-12 {
            return Err(Error::Config(format!("grid with {} points does not nest in {} points", c.n, f.n)));
        }
        ratio[d] = f.n / c.n;
    }
    let fine_ny = if fg.dim() == 2 { fg.axis(1).n } else { 1 };
    let pick = |c: usize| -> Vec<_> {
        (0..coarse.len())
            .map(|idx| {
                let [i, j] = coarse.unflatten(idx);
                fine.component(c)[i * ratio[0] * fine_ny + j * ratio[1]]
            })
            .collect()
    };
    Ok(SpinorField::from_components(coarse.clone(), pick(0), pick(1))?)
}
