use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dirac_ua_core::expint::EepReading;
use dirac_ua_experiments::config::{ExperimentConfig, ProblemId, SchemeChoice};
use dirac_ua_experiments::conservation::{run_conservation_study, ConservationRow, DriftSummary};
use dirac_ua_experiments::convergence::{run_convergence_study, ConvergenceRow, Sweep};
use dirac_ua_experiments::dynamics::run_dynamics;
use dirac_ua_experiments::output::write_csv;
use dirac_ua_experiments::tableau_check::{imaginary_samples, residual_reports, residual_rows, ResidualRow};
use dirac_ua_experiments::{Error, Result};

/// Convergence, conservation and dynamics experiments for the two-scale Dirac integrators.
#[derive(Parser)]
#[command(name = "dirac-ua", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON config; sections not given fall back to the problem preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Preset to start from when no config file is given.
    #[arg(long, global = true, default_value = "p1_nonlinear_1d")]
    problem: ProblemId,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use the large grids (1D Nx=1024, 2D up to 320²) instead of the desk-scale defaults.
    #[arg(long, global = true)]
    full_scale: bool,
    /// Comma-separated schemes: sep_ts4, eep_ts4, strang_ref.
    #[arg(long, global = true, value_delimiter = ',')]
    scheme: Option<Vec<SchemeChoice>>,
    /// Comma-separated ε values.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Comma-separated Δt values (a single value also sets the fixed Δt of the other studies).
    #[arg(long, global = true, value_delimiter = ',')]
    dt: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Temporal convergence sweep.
    ConvergeTime,
    /// Spatial convergence sweep.
    ConvergeSpace,
    /// τ-resolution sweep.
    ConvergeTau,
    /// Long-time mass and energy drift.
    Conserve,
    /// Density snapshots at the configured times.
    Dynamics,
    /// Order-condition and symmetry residuals of both tableaux.
    TableauCheck {
        /// Samples iy with |y| up to this value.
        #[arg(long, default_value_t = 50.0)]
        y_max: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Use the printed reading of the EEP-TS4 fifth stage.
        #[arg(long)]
        literal: bool,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::from_file(p, common.full_scale)?,
        None => ExperimentConfig::preset(common.problem, common.full_scale),
    };
    cfg.apply_overrides(common.eps.clone(), common.scheme.clone(), common.dt.clone(), common.out.clone())?;
    Ok(cfg)
}

fn converge(cfg: &ExperimentConfig, study: Sweep) -> Result<()> {
    let rep = run_convergence_study(cfg, study)?;
    let path = cfg.out.join(format!("convergence_{}.csv", study.name()));
    write_csv::<ConvergenceRow>(&path, &rep.rows)?;
    for s in &rep.summaries {
        println!(
            "{:<10} eps={:<8} slope={:>6.3}  error {:.3e} .. {:.3e}",
            s.scheme.name(),
            s.eps,
            s.slope,
            s.max_error,
            s.min_error
        );
    }
    println!("wrote {}", path.display());
    if let Some(bad) = rep.rows.iter().find(|r| !r.ok()) {
        return Err(Error::Numerical(format!(
            "{} of {} sweep points failed; first: {} ε={} Δt={}: {}",
            rep.rows.iter().filter(|r| !r.ok()).count(),
            rep.rows.len(),
            bad.scheme.name(),
            bad.eps,
            bad.dt,
            bad.status
        )));
    }
    Ok(())
}

fn conserve(cfg: &ExperimentConfig) -> Result<()> {
    let rep = run_conservation_study(cfg)?;
    let series = cfg.out.join("conservation.csv");
    let summary = cfg.out.join("conservation_summary.csv");
    write_csv::<ConservationRow>(&series, &rep.rows)?;
    write_csv::<DriftSummary>(&summary, &rep.summaries)?;
    for s in &rep.summaries {
        println!(
            "{:<10} eps={:<6} dt={:<6} max drift M={:.3e} H={:.3e}  trend·T M={:.3e} H={:.3e}  {}",
            s.scheme.name(),
            s.eps,
            s.dt,
            s.max_drift_mass,
            s.max_drift_energy,
            s.trend_mass,
            s.trend_energy,
            s.status
        );
    }
    println!("wrote {} and {}", series.display(), summary.display());
    match rep.summaries.iter().find(|s| !s.ok()) {
        Some(s) => Err(Error::Numerical(format!("{} ε={} Δt={}: {}", s.scheme.name(), s.eps, s.dt, s.status))),
        None => Ok(()),
    }
}

fn dynamics(cfg: &ExperimentConfig) -> Result<()> {
    let out = run_dynamics(cfg, true)?;
    for (s, p) in out.snapshots.iter().zip(&out.files) {
        println!("eps={} t={} mass={:.12} -> {}", s.eps, s.time, s.mass(), p.display());
    }
    Ok(())
}

fn tableau(cfg: &ExperimentConfig, y_max: f64, samples: usize, literal: bool) -> Result<()> {
    if !(y_max > 0.0) || samples < 2 {
        return Err(Error::Config("tableau-check needs --y-max > 0 and at least 2 samples".into()));
    }
    let reading = if literal { EepReading::Literal } else { EepReading::Classical };
    let reports = residual_reports(reading, &imaginary_samples(y_max, samples))?;
    for r in &reports {
        println!(
            "{:<8} Psi1..4 max = {:.2e} {:.2e} {:.2e} {:.2e}  symmetry defect {:.2e}  |Psi4(i)| = {:.6e}",
            r.scheme.name(),
            r.max_psi(1),
            r.max_psi(2),
            r.max_psi(3),
            r.max_psi(4),
            r.max_symmetry_defect(),
            r.psi_at(4, 1.0).unwrap_or(f64::NAN)
        );
    }
    let path = cfg.out.join("tableau_residuals.csv");
    write_csv::<ResidualRow>(&path, &residual_rows(&reports))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load(&cli.common)?;
    log::info!("problem {} -> {}", cfg.problem, cfg.out.display());
    match cli.cmd {
        Cmd::ConvergeTime => converge(&cfg, Sweep::Time),
        Cmd::ConvergeSpace => converge(&cfg, Sweep::Space),
        Cmd::ConvergeTau => converge(&cfg, Sweep::Tau),
        Cmd::Conserve => conserve(&cfg),
        Cmd::Dynamics => dynamics(&cfg),
        Cmd::TableauCheck { y_max, samples, literal } => tableau(&cfg, y_max, samples, literal),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dirac-ua: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
