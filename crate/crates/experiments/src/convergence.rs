//! Temporal, spatial and τ convergence sweeps.

use std::time::Instant;

use dirac_ua_core::diagnostics::{fitted_order, pairwise_orders, relative_h1_error, relative_linf_error};
use dirac_ua_core::reference::run_reference;
use dirac_ua_core::spectral::SpinorField;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ReferenceStrategy, SchemeChoice};
use crate::output::{fmt_f64, CsvRow};
use crate::problem::{build_grid, closed_form, instance, restrict, Instance};
use crate::runner::{run, RunSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Time,
    Space,
    Tau,
}

impl Sweep {
    pub fn name(&self) -> &'static str {
        match self {
            Sweep::Time => "time",
            Sweep::Space => "space",
            Sweep::Tau => "tau",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub study: Sweep,
    pub problem: String,
    pub scheme: SchemeChoice,
    pub eps: f64,
    pub dt: f64,
    pub nx: usize,
    pub ntau: usize,
    pub t_end: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub reference: String,
    pub error_linf: f64,
    pub error_h1: f64,
    /// Order against the previous row of the same (scheme, ε); NaN for the first.
    pub observed_order: f64,
    pub runtime_s: f64,
    /// `ok` or the failure message.
    pub status: String,
}

impl ConvergenceRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }

    /// The swept parameter as a step size (Δt, 1/Nx or 1/Nτ).
    fn h(&self) -> f64 {
        match self.study {
            Sweep::Time => self.dt,
            Sweep::Space => 1.0 / self.nx as f64,
            Sweep::Tau => 1.0 / self.ntau as f64,
        }
    }
}

impl CsvRow for ConvergenceRow {
    fn header() -> &'static [&'static str] {
        &[
            "study", "problem", "scheme", "eps", "dt", "nx", "ntau", "t_end", "lambda1", "lambda2", "reference",
            "error_linf", "error_h1", "observed_order", "runtime_s", "status",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.study.name().into(),
            self.problem.clone(),
            self.scheme.name().into(),
            fmt_f64(self.eps),
            fmt_f64(self.dt),
            self.nx.to_string(),
            self.ntau.to_string(),
            fmt_f64(self.t_end),
            fmt_f64(self.lambda1),
            fmt_f64(self.lambda2),
            self.reference.clone(),
            fmt_f64(self.error_linf),
            fmt_f64(self.error_h1),
            fmt_f64(self.observed_order),
            format!("{:.3}", self.runtime_s),
            self.status.clone(),
        ]
    }
}

/// Least-squares order of one (scheme, ε) series.
#[derive(Debug, Clone)]
pub struct OrderSummary {
    pub scheme: SchemeChoice,
    pub eps: f64,
    /// Fitted slope of `log e∞` against `log h`; NaN if any row failed.
    pub slope: f64,
    pub max_error: f64,
    pub min_error: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub study: Sweep,
    pub rows: Vec<ConvergenceRow>,
    pub summaries: Vec<OrderSummary>,
}

impl ConvergenceReport {
    pub fn summary(&self, scheme: SchemeChoice, eps: f64) -> Option<&OrderSummary> {
        self.summaries.iter().find(|s| s.scheme == scheme && s.eps == eps)
    }

    /// Rows of one series in sweep order.
    pub fn series(&self, scheme: SchemeChoice, eps: f64) -> Vec<&ConvergenceRow> {
        self.rows.iter().filter(|r| r.scheme == scheme && r.eps == eps).collect()
    }
}

struct Task {
    eps_idx: usize,
    scheme: SchemeChoice,
    dt: f64,
    nx: usize,
    ntau: usize,
}

pub fn run_convergence_study(cfg: &ExperimentConfig, study: Sweep) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let m = &cfg.model;
    let (t_end, tasks): (f64, Vec<Task>) = {
        let mut tasks = Vec::new();
        for (eps_idx, _) in m.eps.iter().enumerate() {
            for &scheme in &cfg.schemes {
                match study {
                    Sweep::Time => {
                        for &dt in &cfg.time.dt {
                            tasks.push(Task { eps_idx, scheme, dt, nx: m.nx[0], ntau: m.ntau });
                        }
                    }
                    Sweep::Space => {
                        for &nx in &cfg.space.nx {
                            tasks.push(Task { eps_idx, scheme, dt: cfg.space.dt, nx, ntau: m.ntau });
                        }
                    }
                    Sweep::Tau => {
                        if scheme == SchemeChoice::StrangRef {
                            continue;
                        }
                        for &ntau in &cfg.tau.ntau {
                            tasks.push(Task { eps_idx, scheme, dt: cfg.tau.dt, nx: m.nx[0], ntau });
                        }
                    }
                }
            }
        }
        let t = match study {
            Sweep::Time => cfg.time.t_end,
            Sweep::Space => cfg.space.t_end,
            Sweep::Tau => cfg.tau.t_end,
        };
        (t, tasks)
    };

    // Time and τ sweeps share one reference per ε; space sweeps need one per scheme.
    let references: Vec<Result<(Instance, SpinorField, String)>> = m
        .eps
        .par_iter()
        .map(|&eps| match study {
            Sweep::Time => {
                let inst = instance(m, eps, build_grid(m, None)?)?;
                let (r, label) = time_reference(cfg, &inst, t_end)?;
                Ok((inst, r, label))
            }
            Sweep::Tau => {
                let inst = instance(m, eps, build_grid(m, None)?)?;
                let scheme = cfg.schemes.iter().find_map(|s| s.two_scale()).unwrap_or(dirac_ua_core::expint::Scheme::SepTs4);
                let spec = RunSpec {
                    scheme: scheme.into(),
                    ntau: cfg.tau.reference_ntau,
                    dt: cfg.tau.dt,
                    t_end,
                    cadence: 0,
                    conserved: false,
                };
                let r = run(&inst, &spec, &cfg.solver)?.into_result()?;
                let label = format!("{}(ntau={})", scheme, cfg.tau.reference_ntau);
                Ok((inst, r, label))
            }
            Sweep::Space => {
                let inst = instance(m, eps, build_grid(m, Some(cfg.space.reference_nx))?)?;
                let placeholder = inst.initial.clone();
                Ok((inst, placeholder, String::new()))
            }
        })
        .collect();
    let references = references.into_iter().collect::<Result<Vec<_>>>()?;

    let space_refs: Vec<Vec<Result<SpinorField>>> = if study == Sweep::Space {
        references
            .par_iter()
            .map(|(inst, _, _)| {
                cfg.schemes
                    .par_iter()
                    .map(|&scheme| {
                        let spec = RunSpec {
                            scheme,
                            ntau: m.ntau,
                            dt: cfg.space.dt,
                            t_end,
                            cadence: 0,
                            conserved: false,
                        };
                        run(inst, &spec, &cfg.solver)?.into_result()
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut rows: Vec<ConvergenceRow> = tasks
        .par_iter()
        .map(|task| {
            let eps = m.eps[task.eps_idx];
            let start = Instant::now();
            let measured = (|| -> Result<(f64, f64, String)> {
                let (ref_inst, ref_field, label) = &references[task.eps_idx];
                let (inst, reference, label) = match study {
                    Sweep::Space => {
                        let k = cfg.schemes.iter().position(|s| *s == task.scheme).expect("scheme in list");
                        let fine = match &space_refs[task.eps_idx][k] {
                            Ok(f) => f,
                            Err(e) => return Err(Error::Numerical(format!("reference run failed: {e}"))),
                        };
                        let g = build_grid(m, Some(task.nx))?;
                        let inst = instance(m, eps, g.clone())?;
                        (inst, restrict(fine, &g)?, format!("{}(nx={})", task.scheme, cfg.space.reference_nx))
                    }
                    _ => (ref_inst.clone(), ref_field.clone(), label.clone()),
                };
                let spec = RunSpec {
                    scheme: task.scheme,
                    ntau: task.ntau,
                    dt: task.dt,
                    t_end,
                    cadence: 0,
                    conserved: false,
                };
                let phi = run(&inst, &spec, &cfg.solver)?.into_result()?;
                Ok((relative_linf_error(&phi, &reference)?, relative_h1_error(&phi, &reference)?, label))
            })();
            let runtime_s = start.elapsed().as_secs_f64();
            let (error_linf, error_h1, reference, status) = match measured {
                Ok((a, b, l)) => (a, b, l, "ok".to_string()),
                Err(e) => (f64::NAN, f64::NAN, String::new(), e.to_string()),
            };
            ConvergenceRow {
                study,
                problem: cfg.problem.name().into(),
                scheme: task.scheme,
                eps,
                dt: task.dt,
                nx: task.nx,
                ntau: task.ntau,
                t_end,
                lambda1: m.lambda1,
                lambda2: m.lambda2,
                reference,
                error_linf,
                error_h1,
                observed_order: f64::NAN,
                runtime_s,
                status,
            }
        })
        .collect();

    let mut summaries = Vec::new();
    for &eps in &m.eps {
        for &scheme in &cfg.schemes {
            let idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].scheme == scheme && rows[i].eps == eps).collect();
            if idx.is_empty() {
                continue;
            }
            let h: Vec<f64> = idx.iter().map(|&i| rows[i].h()).collect();
            let e: Vec<f64> = idx.iter().map(|&i| rows[i].error_linf).collect();
            for (k, p) in pairwise_orders(&h, &e).into_iter().enumerate() {
                rows[idx[k + 1]].observed_order = p;
            }
            let slope = if idx.iter().all(|&i| rows[i].ok()) && idx.len() >= 2 {
                fitted_order(&h, &e).unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            summaries.push(OrderSummary {
                scheme,
                eps,
                slope,
                max_error: e.iter().cloned().fold(f64::NAN, f64::max),
                min_error: e.iter().cloned().fold(f64::NAN, f64::min),
            });
        }
    }
    for r in rows.iter().filter(|r| !r.ok()) {
        log::warn!("{} ε={} Δt={} failed: {}", r.scheme, r.eps, r.dt, r.status);
    }
    Ok(ConvergenceReport { study, rows, summaries })
}

/// Reference field at `t_end` for a temporal sweep.
fn time_reference(cfg: &ExperimentConfig, inst: &Instance, t_end: f64) -> Result<(SpinorField, String)> {
    let label = cfg.time.reference.label();
    let field = match cfg.time.reference {
        ReferenceStrategy::Strang { dt } => run_reference(&inst.model, &inst.initial, dt, &[t_end])?.remove(0),
        ReferenceStrategy::SelfRefine { factor, scheme } => {
            let dt_min = cfg.time.dt.iter().cloned().fold(f64::INFINITY, f64::min);
            let spec = RunSpec {
                scheme: scheme.into(),
                ntau: cfg.model.ntau,
                dt: dt_min / factor as f64,
                t_end,
                cadence: 0,
                conserved: false,
            };
            run(inst, &spec, &cfg.solver)?.into_result()?
        }
        ReferenceStrategy::ClosedForm => closed_form(&cfg.model, inst.eps(), inst.grid().clone(), t_end)?,
    };
    Ok((field, label))
}
