//! Long-time mass and energy drift.

use dirac_ua_core::diagnostics::least_squares_slope;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, SchemeChoice};
use crate::output::{fmt_f64, CsvRow};
use crate::problem::{build_grid, instance};
use crate::runner::{run, RunSpec};
use crate::Result;

#[derive(Debug, Clone)]
pub struct ConservationRow {
    pub problem: String,
    pub scheme: SchemeChoice,
    pub eps: f64,
    pub dt: f64,
    pub nx: usize,
    pub ntau: usize,
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub err_m: f64,
    pub err_h: f64,
}

impl CsvRow for ConservationRow {
    fn header() -> &'static [&'static str] {
        &["problem", "scheme", "eps", "dt", "nx", "ntau", "t", "mass", "energy", "err_M", "err_H"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.problem.clone(),
            self.scheme.name().into(),
            fmt_f64(self.eps),
            fmt_f64(self.dt),
            self.nx.to_string(),
            self.ntau.to_string(),
            fmt_f64(self.t),
            fmt_f64(self.mass),
            fmt_f64(self.energy),
            fmt_f64(self.err_m),
            fmt_f64(self.err_h),
        ]
    }
}

/// Drift statistics of one run.
#[derive(Debug, Clone)]
pub struct DriftSummary {
    pub scheme: SchemeChoice,
    pub eps: f64,
    pub dt: f64,
    pub t_end: f64,
    pub max_drift_mass: f64,
    pub max_drift_energy: f64,
    /// Least-squares slope of the drift against t, times the final time.
    pub trend_mass: f64,
    pub trend_energy: f64,
    pub max_iterations: usize,
    /// `ok` or the failure message (rows up to the failure are kept).
    pub status: String,
}

impl DriftSummary {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

impl CsvRow for DriftSummary {
    fn header() -> &'static [&'static str] {
        &[
            "scheme", "eps", "dt", "t_end", "max_drift_M", "max_drift_H", "trend_M", "trend_H", "max_iterations",
            "status",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.scheme.name().into(),
            fmt_f64(self.eps),
            fmt_f64(self.dt),
            fmt_f64(self.t_end),
            fmt_f64(self.max_drift_mass),
            fmt_f64(self.max_drift_energy),
            fmt_f64(self.trend_mass),
            fmt_f64(self.trend_energy),
            self.max_iterations.to_string(),
            self.status.clone(),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct ConservationReport {
    pub rows: Vec<ConservationRow>,
    pub summaries: Vec<DriftSummary>,
}

impl ConservationReport {
    pub fn summary(&self, scheme: SchemeChoice, eps: f64) -> Option<&DriftSummary> {
        self.summaries.iter().find(|s| s.scheme == scheme && s.eps == eps)
    }
}

pub fn run_conservation_study(cfg: &ExperimentConfig) -> Result<ConservationReport> {
    cfg.validate()?;
    let m = &cfg.model;
    let grid = build_grid(m, None)?;
    let mut tasks = Vec::new();
    for &eps in &m.eps {
        for &scheme in &cfg.schemes {
            for &dt in &cfg.conserve.dt {
                tasks.push((eps, scheme, dt));
            }
        }
    }
    let results: Vec<Result<(Vec<ConservationRow>, DriftSummary)>> = tasks
        .par_iter()
        .map(|&(eps, scheme, dt)| {
            let inst = instance(m, eps, grid.clone())?;
            let spec = RunSpec {
                scheme,
                ntau: m.ntau,
                dt,
                t_end: cfg.conserve.t_end,
                cadence: cfg.conserve.cadence,
                conserved: true,
            };
            let out = run(&inst, &spec, &cfg.solver)?;
            let first = out.records[0];
            let rows: Vec<ConservationRow> = out
                .records
                .iter()
                .map(|r| {
                    let (err_m, err_h) = r.drift_from(&first);
                    ConservationRow {
                        problem: cfg.problem.name().into(),
                        scheme,
                        eps,
                        dt,
                        nx: m.nx[0],
                        ntau: m.ntau,
                        t: r.t,
                        mass: r.mass,
                        energy: r.energy,
                        err_m,
                        err_h,
                    }
                })
                .collect();
            let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
            let t_last = ts.last().copied().unwrap_or(0.0);
            let trend = |v: Vec<f64>| least_squares_slope(&ts, &v).map(|s| s * t_last).unwrap_or(f64::NAN);
            let summary = DriftSummary {
                scheme,
                eps,
                dt,
                t_end: t_last,
                max_drift_mass: rows.iter().map(|r| r.err_m).fold(0.0, f64::max),
                max_drift_energy: rows.iter().map(|r| r.err_h).fold(0.0, f64::max),
                trend_mass: trend(rows.iter().map(|r| r.err_m).collect()),
                trend_energy: trend(rows.iter().map(|r| r.err_h).collect()),
                max_iterations: out.max_iterations,
                status: out.failure.map_or_else(|| "ok".to_string(), |e| e.to_string()),
            };
            Ok((rows, summary))
        })
        .collect();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for r in results {
        let (r, s) = r?;
        rows.extend(r);
        summaries.push(s);
    }
    Ok(ConservationReport { rows, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ProblemId;

    #[test]
    fn drifts_are_small_and_rows_follow_cadence() {
        let mut cfg = ExperimentConfig::preset(ProblemId::P1Nonlinear1d, false);
        cfg.model.nx = vec![256];
        cfg.model.ntau = 16;
        cfg.model.eps = vec![0.1];
        cfg.schemes = vec![SchemeChoice::SepTs4, SchemeChoice::StrangRef];
        cfg.conserve.dt = vec![0.01];
        cfg.conserve.t_end = 0.2;
        cfg.conserve.cadence = 5;
        let rep = run_conservation_study(&cfg).unwrap();
        assert_eq!(rep.summaries.len(), 2);
        assert_eq!(rep.rows.len(), 2 * 5);
        let s = rep.summary(SchemeChoice::SepTs4, 0.1).unwrap();
        assert!(s.ok());
        assert!(s.max_drift_mass < 1e-6 && s.max_drift_energy < 1e-5, "{s:?}");
        assert_eq!(rep.rows[0].err_m, 0.0);
    }
}
