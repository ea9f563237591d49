//! Density snapshots at chosen times.

use std::path::PathBuf;

use crate::config::{ExperimentConfig, SchemeChoice};
use crate::problem::{build_grid, instance};
use crate::runner::{run_observed, RunSpec};
use crate::snapshot::Snapshot;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct DynamicsOutput {
    pub snapshots: Vec<Snapshot>,
    /// Files written, parallel to `snapshots` (empty when not saving).
    pub files: Vec<PathBuf>,
}

/// Runs the first configured scheme for every ε and keeps ρ at the requested
/// times (which must be multiples of Δt). Snapshots are written under
/// `cfg.out` when `save` is set.
pub fn run_dynamics(cfg: &ExperimentConfig, save: bool) -> Result<DynamicsOutput> {
    cfg.validate()?;
    let m = &cfg.model;
    let d = &cfg.dynamics;
    let scheme = *cfg.schemes.first().ok_or_else(|| Error::Config("no scheme selected".into()))?;
    let steps_at: Vec<usize> = d
        .times
        .iter()
        .map(|&t| {
            let n = t / d.dt;
            if (n - n.round()).abs() > 1e-8 * n.max(1.0) {
                Err(Error::Config(format!("dynamics: time {t} is not a multiple of Δt = {}", d.dt)))
            } else {
                Ok(n.round() as usize)
            }
        })
        .collect::<Result<_>>()?;
    let t_end = d.times.iter().cloned().fold(0.0, f64::max);
    let grid = build_grid(m, None)?;
    let mut out = DynamicsOutput { snapshots: Vec::new(), files: Vec::new() };
    for &eps in &m.eps {
        let inst = instance(m, eps, grid.clone())?;
        let spec = RunSpec { scheme, ntau: m.ntau, dt: d.dt, t_end, cadence: 1, conserved: false };
        let mut taken = Vec::new();
        let res = run_observed(&inst, &spec, &cfg.solver, |n, t, phi| {
            if steps_at.contains(&n) {
                taken.push(Snapshot::from_field(phi, t, eps, scheme.name()));
            }
            Ok(())
        })?;
        if let Some(e) = res.failure {
            return Err(e);
        }
        for s in taken {
            if save {
                let p = cfg.out.join(snapshot_name(scheme, eps, s.time));
                s.save(&p)?;
                out.files.push(p);
            }
            out.snapshots.push(s);
        }
    }
    Ok(out)
}

pub fn snapshot_name(scheme: SchemeChoice, eps: f64, t: f64) -> String {
    format!("rho_{}_eps{eps}_t{t:.4}.bin", scheme.name())
}
