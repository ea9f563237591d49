//! Experiment configuration and the built-in problem presets.
//!
//! Configs are plain JSON. Every section has defaults taken from the preset of
//! the named problem, so a file only needs to list what it overrides:
//!
//! ```json
//! { "problem": "p1_nonlinear_1d", "model": { "eps": [1.0, 0.1] }, "time": { "dt": [0.1, 0.05] } }
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dirac_ua_core::expint::{EepReading, Scheme};
use dirac_ua_core::integrator::FixedPointSettings;
use dirac_ua_core::twoscale::H3Term;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    #[serde(rename = "p1_nonlinear_1d")]
    P1Nonlinear1d,
    P2Soliton,
    #[serde(rename = "p3_linear_magnetic_1d")]
    P3LinearMagnetic1d,
    #[serde(rename = "p4_nonlinear_2d")]
    P4Nonlinear2d,
    #[serde(rename = "p5_linear_2d")]
    P5Linear2d,
    Custom,
}

impl ProblemId {
    pub const ALL: [ProblemId; 6] = [
        ProblemId::P1Nonlinear1d,
        ProblemId::P2Soliton,
        ProblemId::P3LinearMagnetic1d,
        ProblemId::P4Nonlinear2d,
        ProblemId::P5Linear2d,
        ProblemId::Custom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemId::P1Nonlinear1d => "p1_nonlinear_1d",
            ProblemId::P2Soliton => "p2_soliton",
            ProblemId::P3LinearMagnetic1d => "p3_linear_magnetic_1d",
            ProblemId::P4Nonlinear2d => "p4_nonlinear_2d",
            ProblemId::P5Linear2d => "p5_linear_2d",
            ProblemId::Custom => "custom",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown problem `{s}`")))
    }
}

/// Time integrator used for a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeChoice {
    SepTs4,
    EepTs4,
    /// Second-order Strang splitting on the original equation.
    StrangRef,
}

impl SchemeChoice {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeChoice::SepTs4 => "sep_ts4",
            SchemeChoice::EepTs4 => "eep_ts4",
            SchemeChoice::StrangRef => "strang_ref",
        }
    }

    /// The two-scale scheme, if this is one.
    pub fn two_scale(&self) -> Option<Scheme> {
        match self {
            SchemeChoice::SepTs4 => Some(Scheme::SepTs4),
            SchemeChoice::EepTs4 => Some(Scheme::EepTs4),
            SchemeChoice::StrangRef => None,
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sep_ts4" => Ok(SchemeChoice::SepTs4),
            "eep_ts4" => Ok(SchemeChoice::EepTs4),
            "strang_ref" | "strang" => Ok(SchemeChoice::StrangRef),
            _ => Err(Error::Config(format!("unknown scheme `{s}`"))),
        }
    }
}

impl From<Scheme> for SchemeChoice {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::SepTs4 => SchemeChoice::SepTs4,
            Scheme::EepTs4 => SchemeChoice::EepTs4,
        }
    }
}

/// Initial spinor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialSpec {
    /// Registered initial data, e.g. `p1_gaussian`.
    Builtin { name: String },
    /// Single traveling soliton at `t = 0`.
    Soliton { omega: f64, velocity: f64, x0: f64 },
    /// Two solitons `Φ_l(x - x_l) + Φ_r(x - x_r)`.
    Collision {
        omega: f64,
        x_l: f64,
        x_r: f64,
        v_l: f64,
        v_r: f64,
    },
}

/// How the reference solution of a temporal sweep is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceStrategy {
    /// Strang splitting with step `dt`.
    Strang { dt: f64 },
    /// The two-scale scheme at `min(Δt)/factor` on the same grids.
    SelfRefine {
        factor: usize,
        #[serde(default = "default_ref_scheme")]
        scheme: Scheme,
    },
    /// Closed-form soliton (ε = 1, V = 0, λ2 = 0 only).
    ClosedForm,
}

fn default_ref_scheme() -> Scheme {
    Scheme::SepTs4
}

impl ReferenceStrategy {
    pub fn label(&self) -> String {
        match self {
            ReferenceStrategy::Strang { dt } => format!("strang(dt={dt})"),
            ReferenceStrategy::SelfRefine { factor, scheme } => format!("self_refine({scheme},/{factor})"),
            ReferenceStrategy::ClosedForm => "closed_form".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub eps: Vec<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Registered potential name.
    pub potential: String,
    /// Registered magnetic component names, one per axis; empty selects the nonlinear equation.
    #[serde(default)]
    pub magnetic: Vec<String>,
    pub initial: InitialSpec,
    /// `[a, b)` per axis.
    pub domain: Vec<[f64; 2]>,
    /// Points per axis.
    pub nx: Vec<usize>,
    pub ntau: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSweep {
    pub dt: Vec<f64>,
    pub t_end: f64,
    pub reference: ReferenceStrategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSweep {
    /// Points per axis at each level (same count on every axis).
    pub nx: Vec<usize>,
    pub reference_nx: usize,
    pub dt: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauSweep {
    pub ntau: Vec<usize>,
    pub reference_ntau: usize,
    pub dt: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConserveSpec {
    pub dt: Vec<f64>,
    pub t_end: f64,
    /// Record every `cadence` steps.
    pub cadence: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    pub dt: f64,
    /// Snapshot times; each must be a multiple of `dt`.
    pub times: Vec<f64>,
}

/// Solver knobs shared by all studies.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    #[serde(default)]
    pub reading: EepReading,
    #[serde(default)]
    pub h3: H3Term,
    #[serde(default)]
    pub fixed_point: FixedPointSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    pub model: ModelConfig,
    pub schemes: Vec<SchemeChoice>,
    pub time: TimeSweep,
    pub space: SpaceSweep,
    pub tau: TauSweep,
    pub conserve: ConserveSpec,
    pub dynamics: DynamicsSpec,
    #[serde(default)]
    pub solver: SolverSettings,
    pub out: PathBuf,
}

fn halvings(first: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| first / f64::powi(2.0, k as i32)).collect()
}

fn builtin(name: &str) -> InitialSpec {
    InitialSpec::Builtin { name: name.into() }
}

impl ExperimentConfig {
    /// Desk-scale preset of a problem; `full_scale` restores the full grids.
    pub fn preset(problem: ProblemId, full_scale: bool) -> Self {
        let pick = |desk: usize, full: usize| if full_scale { full } else { desk };
        let one_d = |a: f64, b: f64, n: usize| (vec![[a, b]], vec![n]);
        let ((domain, nx), ntau) = match problem {
            ProblemId::P1Nonlinear1d | ProblemId::P3LinearMagnetic1d | ProblemId::Custom => {
                (one_d(-32.0, 32.0, pick(256, 1024)), pick(32, 64))
            }
            ProblemId::P2Soliton => (one_d(-32.0, 32.0, pick(512, 1024)), 64),
            ProblemId::P4Nonlinear2d => {
                let n = pick(128, 256);
                ((vec![[-16.0, 16.0]; 2], vec![n; 2]), pick(32, 64))
            }
            ProblemId::P5Linear2d => {
                let n = pick(128, 320);
                ((vec![[-10.0, 10.0]; 2], vec![n; 2]), pick(32, 64))
            }
        };
        let (lambda1, lambda2, potential, magnetic, initial, eps) = match problem {
            ProblemId::P1Nonlinear1d | ProblemId::Custom => (
                1.0,
                0.0,
                "p1_electric",
                vec![],
                builtin("p1_gaussian"),
                vec![1.0, 0.5, 0.1, 0.05, 0.01],
            ),
            ProblemId::P2Soliton => (
                -1.0,
                0.0,
                "zero",
                vec![],
                InitialSpec::Soliton { omega: 0.8, velocity: 0.2, x0: -5.0 },
                vec![1.0],
            ),
            ProblemId::P3LinearMagnetic1d => (
                0.0,
                0.0,
                "p3_electric",
                vec!["p3_magnetic".to_string()],
                builtin("p3_gaussian"),
                vec![1.0, 0.5, 0.1, 0.05, 0.01],
            ),
            ProblemId::P4Nonlinear2d => {
                (-1.0, 0.0, "honeycomb", vec![], builtin("p4_gaussian"), vec![1.0, 0.1, 0.01])
            }
            ProblemId::P5Linear2d => (
                0.0,
                0.0,
                "honeycomb",
                vec!["zero".to_string(); 2],
                builtin("p4_gaussian"),
                vec![1.0, 0.1, 0.01],
            ),
        };
        let reference = match problem {
            ProblemId::P2Soliton => ReferenceStrategy::ClosedForm,
            _ => ReferenceStrategy::SelfRefine { factor: 16, scheme: Scheme::SepTs4 },
        };
        let two_d = domain.len() == 2;
        Self {
            problem,
            model: ModelConfig {
                eps,
                lambda1,
                lambda2,
                potential: potential.into(),
                magnetic,
                initial,
                domain,
                nx,
                ntau,
            },
            schemes: vec![SchemeChoice::SepTs4, SchemeChoice::EepTs4],
            time: TimeSweep {
                dt: halvings(0.1, 5),
                t_end: 1.0,
                reference,
            },
            space: SpaceSweep {
                nx: if two_d { vec![16, 32, 64] } else { vec![64, 128, 256] },
                reference_nx: if two_d { 128 } else { 1024 },
                dt: 0.01,
                t_end: 1.0,
            },
            tau: TauSweep {
                ntau: vec![8, 16, 32],
                reference_ntau: 128,
                dt: 0.01,
                t_end: 1.0,
            },
            conserve: ConserveSpec {
                dt: vec![0.05],
                t_end: if two_d { 10.0 } else { 100.0 },
                cadence: 20,
            },
            dynamics: DynamicsSpec {
                dt: 0.01,
                times: vec![0.0, 1.0, 2.0, 4.0],
            },
            solver: SolverSettings::default(),
            out: PathBuf::from("out").join(problem.name()),
        }
    }

    /// Reads a JSON config. Sections omitted from the file come from the
    /// preset of its `problem`.
    pub fn from_json(text: &str, full_scale: bool) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let problem: ProblemId = match raw.get("problem") {
            Some(v) => serde_json::from_value(v.clone())?,
            None => return Err(Error::Config("config needs a `problem` field".into())),
        };
        let mut base = serde_json::to_value(Self::preset(problem, full_scale))?;
        merge(&mut base, raw);
        let cfg: Self = serde_json::from_value(base)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, full_scale: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text, full_scale)
    }

    /// Checks the invariants: ε ∈ (0, 1], every Δt divides its horizon, grids are even.
    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        if m.eps.is_empty() {
            return Err(Error::Config("ε list is empty".into()));
        }
        if let Some(e) = m.eps.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return Err(Error::Config(format!("ε must lie in (0, 1], got {e}")));
        }
        let d = m.domain.len();
        if !(1..=2).contains(&d) || m.nx.len() != d {
            return Err(Error::Config(format!(
                "domain has {d} axes and nx has {} entries; need 1 or 2 of each",
                m.nx.len()
            )));
        }
        if !m.magnetic.is_empty() && m.magnetic.len() != d {
            return Err(Error::Config(format!("need {d} magnetic components, got {}", m.magnetic.len())));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("scheme list is empty".into()));
        }
        check_divides("time", &self.time.dt, self.time.t_end)?;
        check_divides("space", &[self.space.dt], self.space.t_end)?;
        check_divides("tau", &[self.tau.dt], self.tau.t_end)?;
        check_divides("conserve", &self.conserve.dt, self.conserve.t_end)?;
        for &t in &self.dynamics.times {
            check_divides("dynamics", &[self.dynamics.dt], t)?;
        }
        if let ReferenceStrategy::SelfRefine { factor: 0, .. } = self.time.reference {
            return Err(Error::Config("self-refinement factor must be positive".into()));
        }
        if let Some(n) = self.space.nx.iter().find(|n| self.space.reference_nx % **n != 0) {
            return Err(Error::Config(format!(
                "reference Nx {} is not a multiple of {n}",
                self.space.reference_nx
            )));
        }
        Ok(())
    }

    /// Replaces the ε list, scheme list or Δt list (command-line overrides).
    pub fn apply_overrides(
        &mut self,
        eps: Option<Vec<f64>>,
        schemes: Option<Vec<SchemeChoice>>,
        dt: Option<Vec<f64>>,
        out: Option<PathBuf>,
    ) -> Result<()> {
        if let Some(e) = eps {
            self.model.eps = e;
        }
        if let Some(s) = schemes {
            self.schemes = s;
        }
        if let Some(dt) = dt {
            self.time.dt = dt.clone();
            self.conserve.dt = dt.clone();
            if let [single] = dt[..] {
                self.space.dt = single;
                self.tau.dt = single;
                self.dynamics.dt = single;
            }
        }
        if let Some(o) = out {
            self.out = o;
        }
        self.validate()
    }
}

fn check_divides(section: &str, dts: &[f64], t_end: f64) -> Result<()> {
    for &dt in dts {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Config(format!("{section}: Δt must be positive, got {dt}")));
        }
        let n = t_end / dt;
        if (n - n.round()).abs() > 1e-8 * n.max(1.0) {
            return Err(Error::Config(format!("{section}: Δt = {dt} does not divide T = {t_end}")));
        }
    }
    Ok(())
}

/// Recursive object merge; arrays and scalars in `patch` replace those in `base`.
fn merge(base: &mut serde_json::Value, patch: serde_json::Value) {
    use serde_json::Value;
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() && !is_tagged(&v) => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, p) => *slot = p,
    }
}

/// Tagged enums (`"kind": ...`) are replaced whole rather than merged.
fn is_tagged(v: &serde_json::Value) -> bool {
    v.get("kind").is_some()
}
