//! One trajectory with any of the selectable schemes.

use dirac_ua_core::diagnostics::DiagnosticsRecord;
use dirac_ua_core::integrator::{run_simulation_with, SimulationConfig};
use dirac_ua_core::reference::strang_step;
use dirac_ua_core::spectral::{DiracSymbols, SpinorField};

use crate::config::{SchemeChoice, SolverSettings};
use crate::problem::Instance;
use crate::{Error, Result};

/// What to run and how often to look at it.
#[derive(Debug, Clone, Copy)]
pub struct RunSpec {
    pub scheme: SchemeChoice,
    pub ntau: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Record every `cadence` steps; 0 records only the endpoints.
    pub cadence: usize,
    pub conserved: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub final_field: SpinorField,
    pub final_time: f64,
    pub steps: usize,
    pub max_iterations: usize,
    pub failure: Option<Error>,
}

impl RunOutcome {
    /// The final field, or the step failure that cut the run short.
    pub fn into_result(self) -> Result<SpinorField> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self.final_field),
        }
    }
}

pub fn run(inst: &Instance, spec: &RunSpec, solver: &SolverSettings) -> Result<RunOutcome> {
    run_observed(inst, spec, solver, |_, _, _| Ok(()))
}

/// Runs `spec` and hands every recorded field to `observe(step, t, Φ)`.
pub fn run_observed(
    inst: &Instance,
    spec: &RunSpec,
    solver: &SolverSettings,
    observe: impl FnMut(usize, f64, &SpinorField) -> Result<()>,
) -> Result<RunOutcome> {
    let mut cfg = match spec.scheme.two_scale() {
        Some(s) => SimulationConfig::new(s, spec.dt, spec.t_end),
        None => return run_strang(inst, spec, observe),
    };
    cfg.reading = solver.reading;
    cfg.h3 = solver.h3;
    cfg.fixed_point = solver.fixed_point;
    cfg.cadence = spec.cadence;
    cfg.conserved = spec.conserved;
    let sys = inst.two_scale(spec.ntau)?;
    // the observer is FnMut over our error type; adapt it to the core one
    let mut observe = observe;
    let mut observer_error = None;
    let out = run_simulation_with(&sys, &inst.initial, &cfg, |n, t, phi| {
        observe(n, t, phi).map_err(|e| {
            let msg = e.to_string();
            observer_error = Some(e);
            dirac_ua_core::Error::Contract(msg)
        })
    });
    if let Some(e) = observer_error {
        return Err(e);
    }
    let out = out?;
    Ok(RunOutcome {
        records: out.records,
        final_field: out.final_field,
        final_time: out.final_time,
        steps: out.steps,
        max_iterations: out.max_iterations,
        failure: out.failure.map(Error::from),
    })
}

fn run_strang(
    inst: &Instance,
    spec: &RunSpec,
    mut observe: impl FnMut(usize, f64, &SpinorField) -> Result<()>,
) -> Result<RunOutcome> {
    let steps = SimulationConfig::new(dirac_ua_core::expint::Scheme::SepTs4, spec.dt, spec.t_end).steps()?;
    let model = &inst.model;
    let symbols = DiracSymbols::new(model.grid().clone(), model.eps())?;
    let record = |step: usize, t: f64, phi: &SpinorField| -> Result<DiagnosticsRecord> {
        let (mass, energy) = if spec.conserved {
            (model.mass(phi)?, model.energy(phi)?)
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(DiagnosticsRecord { step, t, mass, energy, iterations: 0 })
    };
    let mut phi = inst.initial.clone();
    let mut records = vec![record(0, 0.0, &phi)?];
    observe(0, 0.0, &phi)?;
    let mut failure = None;
    let mut done = 0;
    for n in 1..=steps {
        let next = strang_step(model, &symbols, &phi, spec.dt)?;
        if !next.is_finite() {
            failure = Some(Error::Numerical(format!("non-finite state after step {n}")));
            break;
        }
        phi = next;
        done = n;
        let t = n as f64 * spec.dt;
        if n == steps || (spec.cadence > 0 && n % spec.cadence == 0) {
            records.push(record(n, t, &phi)?);
            observe(n, t, &phi)?;
        }
    }
    Ok(RunOutcome {
        records,
        final_field: phi,
        final_time: done as f64 * spec.dt,
        steps: done,
        max_iterations: 0,
        failure,
    })
}
