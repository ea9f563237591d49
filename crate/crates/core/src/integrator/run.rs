use std::f64::consts::TAU;

use super::{FixedPointSettings, Stepper};
use crate::diagnostics::DiagnosticsRecord;
use crate::expint::{EepReading, Scheme};
use crate::spectral::{DiracSymbols, SpinorField};
use crate::twoscale::{AugmentedField, H3Term, TwoScale};
use crate::{Error, Result};

/// `Φⁿ = e^{-it_n Q/ε²} Z(τ = t_n/ε²)` with the τ-sum evaluated directly.
pub fn reconstruct_physical_solution(zhat: &AugmentedField, t: f64, symbols: &DiracSymbols) -> Result<SpinorField> {
    let eps = symbols.eps();
    let tau = (t / (eps * eps)).rem_euclid(TAU);
    let z = zhat.evaluate_at(tau);
    symbols.apply_free_flow(&z, t, -1)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimulationConfig {
    pub scheme: Scheme,
    #[serde(default)]
    pub reading: EepReading,
    #[serde(default)]
    pub h3: H3Term,
    pub dt: f64,
    pub t_end: f64,
    /// Record diagnostics every `cadence` steps (and at the end); 0 records only the endpoints.
    #[serde(default)]
    pub cadence: usize,
    #[serde(default)]
    pub fixed_point: FixedPointSettings,
    /// Compute mass and energy at each record.
    #[serde(default = "yes")]
    pub conserved: bool,
}

fn yes() -> bool {
    true
}

impl SimulationConfig {
    pub fn new(scheme: Scheme, dt: f64, t_end: f64) -> Self {
        Self {
            scheme,
            reading: EepReading::default(),
            h3: H3Term::default(),
            dt,
            t_end,
            cadence: 0,
            fixed_point: FixedPointSettings::default(),
            conserved: true,
        }
    }

    /// Number of steps; `T/Δt` must be integral to rounding.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.t_end >= 0.0) {
            return Err(Error::Config(format!("need Δt > 0 and T ≥ 0, got {} and {}", self.dt, self.t_end)));
        }
        let n = self.t_end / self.dt;
        let r = n.round();
        if (n - r).abs() > 1e-8 * n.max(1.0) {
            return Err(Error::Config(format!("T = {} is not a multiple of Δt = {}", self.t_end, self.dt)));
        }
        Ok(r as usize)
    }
}

#[derive(Debug)]
pub struct SimulationOutput {
    pub records: Vec<DiagnosticsRecord>,
    /// Last successfully computed physical solution.
    pub final_field: SpinorField,
    pub final_time: f64,
    pub steps: usize,
    pub max_iterations: usize,
    /// Step error that stopped the run early, if any.
    pub failure: Option<Error>,
}

pub fn run_simulation(system: &TwoScale, phi0: &SpinorField, cfg: &SimulationConfig) -> Result<SimulationOutput> {
    run_simulation_with(system, phi0, cfg, |_, _, _| Ok(()))
}

/// Prepares initial data, steps to `T`, records diagnostics at the cadence and
/// hands each recorded physical field to `observe(step, t, Φ)`.
pub fn run_simulation_with(
    system: &TwoScale,
    phi0: &SpinorField,
    cfg: &SimulationConfig,
    mut observe: impl FnMut(usize, f64, &SpinorField) -> Result<()>,
) -> Result<SimulationOutput> {
    let steps = cfg.steps()?;
    let eps = system.eps();
    let nonres = (0.5 * cfg.dt / (eps * eps)).sin().abs();
    log::info!(
        "{} Δt={} T={} ε={}: |sin(Δt/2ε²)|={nonres:.3e}, Δt/√ε={:.3e}",
        cfg.scheme,
        cfg.dt,
        cfg.t_end,
        eps,
        cfg.dt / eps.sqrt()
    );
    let mut stepper = Stepper::with_settings(system, cfg.scheme, cfg.reading, cfg.dt, cfg.fixed_point)?;
    let model = system.model();
    let symbols = system.symbols();
    let record = |step: usize, t: f64, phi: &SpinorField, iterations: usize| -> Result<DiagnosticsRecord> {
        let (mass, energy) = if cfg.conserved {
            (model.mass(phi)?, model.energy(phi)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(DiagnosticsRecord { step, t, mass, energy, iterations })
    };

    let mut zhat = system.prepare_initial_data(phi0, cfg.h3)?.into_modal();
    let first = reconstruct_physical_solution(&zhat, 0.0, symbols)?;
    let mut records = vec![record(0, 0.0, &first, 0)?];
    observe(0, 0.0, &first)?;
    let mut last = first;
    let mut last_t = 0.0;
    let mut max_iterations = 0;
    let mut failure = None;
    let mut done = 0;
    for n in 0..steps {
        let t = n as f64 * cfg.dt;
        match stepper.step(t, &zhat) {
            Ok(next) if next.is_finite() => zhat = next,
            Ok(_) => {
                failure = Some(Error::Numerical(format!("non-finite state after step {}", n + 1)));
                break;
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
        done = n + 1;
        max_iterations = max_iterations.max(stepper.last_iterations());
        let tn = done as f64 * cfg.dt;
        let due = done == steps || (cfg.cadence > 0 && done % cfg.cadence == 0);
        if due {
            let phi = reconstruct_physical_solution(&zhat, tn, symbols)?;
            records.push(record(done, tn, &phi, stepper.last_iterations())?);
            observe(done, tn, &phi)?;
            last = phi;
            last_t = tn;
        }
    }
    if failure.is_some() && done > 0 && last_t != done as f64 * cfg.dt {
        let tn = done as f64 * cfg.dt;
        last = reconstruct_physical_solution(&zhat, tn, symbols)?;
        last_t = tn;
    }
    if max_iterations > 10 && cfg.dt <= 0.1 {
        log::warn!("fixed-point iteration needed {max_iterations} sweeps at Δt = {}", cfg.dt);
    }
    Ok(SimulationOutput {
        records,
        final_field: last,
        final_time: last_t,
        steps: done,
        max_iterations,
        failure,
    })
}
