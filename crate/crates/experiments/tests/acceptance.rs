//! Acceptance suite: one `criterion N: PASS|FAIL` line per criterion.
//!
//! `cargo test -p dirac-ua-experiments --test acceptance [-- 1 4 8]` runs all
//! criteria or the listed ones. The process exits 0 after reporting; set
//! `ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use dirac_ua_core::diagnostics::relative_linf_error;
use dirac_ua_core::expint::{order_and_symmetry_residuals, residuals_at, EepReading, Scheme, SchemeTableau};
use dirac_ua_core::model::ModelSpec;
use dirac_ua_core::spectral::{DiracSymbols, Mat2, SpatialGrid, SpinorField};
use dirac_ua_core::twoscale::{average, AugmentedField, Derivative, H3Term, TauGrid, TwoScale};
use dirac_ua_core::Complex64;
use dirac_ua_experiments::config::{ExperimentConfig, InitialSpec, ProblemId, ReferenceStrategy, SchemeChoice};
use dirac_ua_experiments::conservation::run_conservation_study;
use dirac_ua_experiments::convergence::{run_convergence_study, Sweep};
use dirac_ua_experiments::problem::{build_grid, closed_form, instance};
use dirac_ua_experiments::runner::{run, RunSpec};
use dirac_ua_experiments::tableau_check::imaginary_samples;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

/// Collects sub-check results; the criterion passes if every sub-check does.
#[derive(Default)]
struct Report {
    ok: bool,
    lines: String,
}

impl Report {
    fn new() -> Self {
        Self { ok: true, lines: String::new() }
    }

    fn check(&mut self, pass: bool, msg: impl AsRef<str>) {
        self.ok &= pass;
        let _ = write!(self.lines, "\n    [{}] {}", if pass { "ok" } else { "FAIL" }, msg.as_ref());
    }

    fn finish(self) -> Check {
        if self.ok {
            Ok(self.lines)
        } else {
            Err(self.lines)
        }
    }
}

const SCHEMES: [SchemeChoice; 2] = [SchemeChoice::SepTs4, SchemeChoice::EepTs4];
const DT_SWEEP: [f64; 5] = [1.0 / 10.0, 1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0];

fn c1_uniform_fourth_order() -> Check {
    let mut cfg = ExperimentConfig::preset(ProblemId::P1Nonlinear1d, false);
    cfg.model.domain = vec![[-32.0, 32.0]];
    cfg.model.nx = vec![256];
    cfg.model.ntau = 32;
    cfg.model.eps = vec![1.0, 0.5, 0.1, 0.05, 0.01];
    cfg.schemes = SCHEMES.to_vec();
    cfg.time.dt = DT_SWEEP.to_vec();
    cfg.time.t_end = 1.0;
    cfg.time.reference = ReferenceStrategy::SelfRefine { factor: 16, scheme: Scheme::SepTs4 };
    let rep = run_convergence_study(&cfg, Sweep::Time).map_err(|e| e.to_string())?;
    let mut r = Report::new();
    for scheme in SCHEMES {
        let mut finest = Vec::new();
        for &eps in &cfg.model.eps {
            let s = rep.summary(scheme, eps).expect("summary");
            r.check(s.slope >= 3.8, format!("{} ε={eps}: slope {:.3} (≥ 3.8)", scheme.name(), s.slope));
            finest.push(rep.series(scheme, eps).last().expect("rows").error_linf);
        }
        let (lo, hi) = finest.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
        r.check(
            hi <= 20.0 * lo,
            format!("{} Δt=1/160 errors {:.2e} .. {:.2e}, ratio {:.1} (≤ 20)", scheme.name(), lo, hi, hi / lo),
        );
    }
    r.finish()
}

fn c2_spectral_accuracy() -> Check {
    let mut cfg = ExperimentConfig::preset(ProblemId::P1Nonlinear1d, false);
    cfg.model.domain = vec![[-32.0, 32.0]];
    cfg.model.nx = vec![256];
    cfg.model.eps = vec![1.0, 0.01];
    cfg.schemes = vec![SchemeChoice::SepTs4];
    cfg.tau.ntau = vec![8, 16, 32];
    cfg.tau.reference_ntau = 128;
    cfg.tau.dt = 0.01;
    cfg.tau.t_end = 1.0;
    cfg.model.ntau = 32;
    cfg.space.nx = vec![64, 128, 256];
    cfg.space.reference_nx = 1024;
    cfg.space.dt = 0.01;
    cfg.space.t_end = 1.0;
    let mut r = Report::new();
    let tau = run_convergence_study(&cfg, Sweep::Tau).map_err(|e| e.to_string())?;
    let space = run_convergence_study(&cfg, Sweep::Space).map_err(|e| e.to_string())?;
    for &eps in &cfg.model.eps {
        let t: Vec<f64> = tau.series(SchemeChoice::SepTs4, eps).iter().map(|row| row.error_linf).collect();
        r.check(t[2] <= 1e-10, format!("τ sweep ε={eps}: errors {t:?} (Nτ=32 ≤ 1e-10)"));
        let x: Vec<f64> = space.series(SchemeChoice::SepTs4, eps).iter().map(|row| row.error_linf).collect();
        r.check(x[2] <= 1e-8, format!("x sweep ε={eps}: errors {x:?} (Nx=256 ≤ 1e-8)"));
    }
    r.finish()
}

fn soliton_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::preset(ProblemId::P2Soliton, false);
    cfg.model.domain = vec![[-64.0, 64.0]];
    cfg.model.nx = vec![512];
    cfg.model.ntau = 32;
    cfg.model.eps = vec![1.0];
    cfg.model.lambda1 = -1.0;
    cfg.model.initial = InitialSpec::Soliton { omega: 0.8, velocity: 0.2, x0: 0.0 };
    cfg
}

fn c3_exact_solution() -> Check {
    let mut cfg = soliton_config();
    cfg.schemes = SCHEMES.to_vec();
    cfg.time.dt = DT_SWEEP.to_vec();
    cfg.time.t_end = 1.0;
    cfg.time.reference = ReferenceStrategy::ClosedForm;
    let rep = run_convergence_study(&cfg, Sweep::Time).map_err(|e| e.to_string())?;
    let g = build_grid(&cfg.model, None).map_err(|e| e.to_string())?;
    let scale = closed_form(&cfg.model, 1.0, g, 1.0).map_err(|e| e.to_string())?.norm_linf();
    let mut r = Report::new();
    for scheme in SCHEMES {
        let s = rep.summary(scheme, 1.0).expect("summary");
        r.check(s.slope >= 3.8, format!("{}: slope {:.3} (≥ 3.8)", scheme.name(), s.slope));
        let abs = rep.series(scheme, 1.0).last().expect("rows").error_linf * scale;
        r.check(abs <= 1e-7, format!("{}: |error|∞ at Δt=1/160 = {abs:.2e} (≤ 1e-7)", scheme.name()));
    }
    r.finish()
}

fn c4_long_time_conservation() -> Check {
    let mut cfg = ExperimentConfig::preset(ProblemId::P1Nonlinear1d, false);
    cfg.model.domain = vec![[-32.0, 32.0]];
    cfg.model.nx = vec![256];
    cfg.model.ntau = 32;
    cfg.model.eps = vec![0.5, 0.1];
    cfg.schemes = SCHEMES.to_vec();
    cfg.conserve.dt = vec![0.05];
    cfg.conserve.t_end = 100.0;
    cfg.conserve.cadence = 20;
    let rep = run_conservation_study(&cfg).map_err(|e| e.to_string())?;
    let mut r = Report::new();
    for &eps in &cfg.model.eps {
        let sep = rep.summary(SchemeChoice::SepTs4, eps).expect("sep");
        let eep = rep.summary(SchemeChoice::EepTs4, eps).expect("eep");
        r.check(sep.ok() && eep.ok(), format!("ε={eps}: runs completed ({} / {})", sep.status, eep.status));
        for (what, max, trend, eep_max) in [
            ("energy", sep.max_drift_energy, sep.trend_energy, eep.max_drift_energy),
            ("mass", sep.max_drift_mass, sep.trend_mass, eep.max_drift_mass),
        ] {
            r.check(
                trend.abs() <= max,
                format!("ε={eps} SEP {what}: |slope|·T = {:.3e} vs max drift {max:.3e}", trend.abs()),
            );
            r.check(max <= 1e-4, format!("ε={eps} SEP {what}: max drift {max:.3e} (≤ 1e-4)"));
            r.check(
                eep_max >= 10.0 * max,
                format!("ε={eps} EEP/SEP {what} max drift {eep_max:.3e} / {max:.3e} = {:.1} (≥ 10)", eep_max / max),
            );
        }
    }
    r.finish()
}

/// Classical (non-stiff) order-4 conditions of a tableau evaluated at z = 0.
fn classical_order_defects(t: &SchemeTableau) -> Vec<(&'static str, f64)> {
    let s = t.stages();
    let c = t.nodes();
    let a = |j: usize, k: usize| t.a(j, k)[0];
    let b = |j: usize| t.b(j)[0];
    let sum = |f: &dyn Fn(usize) -> Complex64| (0..s).map(f).sum::<Complex64>();
    let ac = |j: usize, p: i32| sum(&|k| a(j, k) * c[k].powi(p));
    let conds: Vec<(&'static str, Complex64, f64)> = vec![
        ("Σb = 1", sum(&b), 1.0),
        ("Σbc = 1/2", sum(&|j| b(j) * c[j]), 0.5),
        ("Σbc² = 1/3", sum(&|j| b(j) * c[j] * c[j]), 1.0 / 3.0),
        ("Σbc³ = 1/4", sum(&|j| b(j) * c[j].powi(3)), 0.25),
        ("Σb·Ac = 1/6", sum(&|j| b(j) * ac(j, 1)), 1.0 / 6.0),
        ("Σbc·Ac = 1/8", sum(&|j| b(j) * c[j] * ac(j, 1)), 0.125),
        ("Σb·Ac² = 1/12", sum(&|j| b(j) * ac(j, 2)), 1.0 / 12.0),
        ("Σb·A·Ac = 1/24", sum(&|j| b(j) * sum(&|k| a(j, k) * ac(k, 1))), 1.0 / 24.0),
    ];
    let mut out: Vec<(&'static str, f64)> = conds.into_iter().map(|(n, v, want)| (n, (v - want).norm())).collect();
    let row_sums = (0..s).map(|j| (ac(j, 0) - c[j]).norm()).fold(0.0, f64::max);
    out.push(("ΣA = c", row_sums));
    out
}

fn c5_tableaux() -> Check {
    let mut r = Report::new();
    let ys = imaginary_samples(50.0, 100);
    let sep = order_and_symmetry_residuals(Scheme::SepTs4, EepReading::Classical, &ys).map_err(|e| e.to_string())?;
    for rho in 1..=3 {
        let m = sep.max_psi(rho);
        r.check(m <= 1e-12, format!("SEP max |Ψ{rho}| over {} samples on iℝ = {m:.2e} (≤ 1e-12)", ys.len()));
    }
    let at = |z: f64| residuals_at(Scheme::SepTs4, EepReading::Classical, Complex64::new(z, 0.0));
    let psi4_0 = at(0.0).map_err(|e| e.to_string())?.psi[3];
    r.check(psi4_0 <= 1e-14, format!("SEP |Ψ4(0)| = {psi4_0:.2e} (≤ 1e-14)"));
    let psi4_1 = at(1.0).map_err(|e| e.to_string())?.psi[3];
    r.check(
        (psi4_1 - 2.32e-3).abs() <= 1e-5,
        format!("SEP |Ψ4(1)| = {psi4_1:.7e} (2.32e-3 ± 1e-5)"),
    );
    let sym = sep.max_symmetry_defect();
    r.check(sym <= 1e-12, format!("SEP symmetry defect {sym:.2e} (≤ 1e-12)"));
    let eep = SchemeTableau::build_with(Scheme::EepTs4, EepReading::Classical, &[Complex64::new(0.0, 0.0)])
        .map_err(|e| e.to_string())?;
    let worst = classical_order_defects(&eep).into_iter().fold(("", 0.0), |w, d| if d.1 > w.1 { d } else { w });
    r.check(
        worst.1 <= 1e-14,
        format!("EEP classical order-4 conditions at z=0: worst {} off by {:.2e} (≤ 1e-14)", worst.0, worst.1),
    );
    r.finish()
}

fn random_spinor(rng: &mut StdRng, grid: &Arc<SpatialGrid>) -> SpinorField {
    let mut cplx = |s: f64| Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
    let (c1, c2) = (cplx(1.0), cplx(1.0));
    let (x0, w, k) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.7..2.0), rng.gen_range(-1.0..1.0));
    SpinorField::from_fn(grid.clone(), |x| {
        let r2: f64 = x.iter().map(|xi| (xi - x0) * (xi - x0)).sum();
        let env = (-r2 / (2.0 * w * w)).exp();
        let phase = Complex64::from_polar(1.0, k * x[0]);
        [c1 * env * phase, c2 * env]
    })
}

/// Smooth random τ-dependent field with modes 0, 1 and -2.
fn random_augmented(rng: &mut StdRng, tau: &TauGrid, grid: &Arc<SpatialGrid>) -> AugmentedField {
    let parts = [random_spinor(rng, grid), random_spinor(rng, grid), random_spinor(rng, grid)];
    let nodes: Vec<SpinorField> = (0..tau.len())
        .map(|k| {
            let t = tau.node(k);
            let mut f = parts[0].clone();
            f.axpy(Complex64::from_polar(0.5, t), &parts[1]);
            f.axpy(Complex64::from_polar(0.3, -2.0 * t), &parts[2]);
            f
        })
        .collect();
    AugmentedField::from_nodes(tau.clone(), &nodes).expect("nodes")
}

fn rel(a: &AugmentedField, b: &AugmentedField) -> f64 {
    a.sub(b).expect("compatible").norm_linf() / b.norm_linf().max(1e-300)
}

fn lin(terms: &[(f64, &AugmentedField)]) -> AugmentedField {
    let mut out = terms[0].1.clone();
    out.scale(Complex64::new(terms[0].0, 0.0));
    for (c, f) in &terms[1..] {
        out.axpy(Complex64::new(*c, 0.0), f).expect("compatible");
    }
    out
}

fn c6_two_scale_machinery() -> Check {
    let mut r = Report::new();
    let mut rng = StdRng::seed_from_u64(20240611);
    let grid = Arc::new(SpatialGrid::one_d(-16.0, 16.0, 64).map_err(|e| e.to_string())?);
    let tau = TauGrid::new(16).map_err(|e| e.to_string())?;

    let (mut prep, mut mean) = (0.0f64, 0.0f64);
    let mut worst = [0.0f64; 7];
    for _ in 0..20 {
        let eps = rng.gen_range(0.05..1.0);
        let potential: Vec<f64> = (0..grid.len()).map(|i| (grid.point(i)[0] - 1.0) / (grid.point(i)[0].powi(2) + 1.0)).collect();
        let model = ModelSpec::nonlinear(grid.clone(), eps, potential, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            .map_err(|e| e.to_string())?;
        let sys = TwoScale::new(model.clone(), tau.clone()).map_err(|e| e.to_string())?;

        let phi0 = random_spinor(&mut rng, &grid);
        let u0 = sys.prepare_initial_data(&phi0, H3Term::Composition).map_err(|e| e.to_string())?;
        prep = prep.max(u0.to_nodal().slice(0).sub(&phi0).norm_linf());
        let corr = sys.corrections(&phi0, 3, H3Term::Composition).map_err(|e| e.to_string())?;
        for l in 1..=3 {
            mean = mean.max(average(corr.level(l)).norm_linf() / corr.level(l).norm_linf().max(1e-300));
        }

        // derivatives of G against central differences (fourth-order stencils)
        let u = random_augmented(&mut rng, &tau, &grid);
        let v = random_augmented(&mut rng, &tau, &grid);
        let w = random_augmented(&mut rng, &tau, &grid);
        let g = |t: f64, x: &AugmentedField| sys.g_eval(t, x).expect("G");
        let shift = |x: &AugmentedField, d: &AugmentedField, s: f64| lin(&[(1.0, x), (s, d)]);
        let d1 = |f: &dyn Fn(f64) -> AugmentedField, h: f64| {
            lin(&[(-1.0 / (12.0 * h), &f(2.0 * h)), (8.0 / (12.0 * h), &f(h)), (-8.0 / (12.0 * h), &f(-h)), (1.0 / (12.0 * h), &f(-2.0 * h))])
        };
        let d = |which| sys.g_derivative(0.0, &u, which).expect("derivative");

        let fd_u = d1(&|s| g(0.0, &shift(&u, &v, s)), 1e-3);
        worst[0] = worst[0].max(rel(&fd_u, &d(Derivative::U(&v))));
        let fd_uu = d1(&|s| sys.g_derivative(0.0, &shift(&u, &w, s), Derivative::U(&v)).expect("∂u"), 1e-3);
        worst[1] = worst[1].max(rel(&fd_uu, &d(Derivative::UU(&v, &w))));
        let fd_t = d1(&|t| g(t, &u), 1e-3);
        worst[2] = worst[2].max(rel(&fd_t, &d(Derivative::T)));
        let h = 2e-3;
        let fd_tt = lin(&[
            (-1.0 / (12.0 * h * h), &g(2.0 * h, &u)),
            (16.0 / (12.0 * h * h), &g(h, &u)),
            (-30.0 / (12.0 * h * h), &g(0.0, &u)),
            (16.0 / (12.0 * h * h), &g(-h, &u)),
            (-1.0 / (12.0 * h * h), &g(-2.0 * h, &u)),
        ]);
        worst[3] = worst[3].max(rel(&fd_tt, &d(Derivative::TT)));
        let du_at = |t: f64| d1(&|s| g(t, &shift(&u, &v, s)), 1e-3);
        let fd_tu = d1(&du_at, 1e-3);
        worst[4] = worst[4].max(rel(&fd_tu, &d(Derivative::TU(&v))));

        // the pointwise nonlinearity itself
        let (p, a, b) = (random_spinor(&mut rng, &grid), random_spinor(&mut rng, &grid), random_spinor(&mut rng, &grid));
        let sp = |x: &SpinorField, dir: &SpinorField, s: f64| {
            let mut o = x.clone();
            o.axpy(Complex64::new(s, 0.0), dir);
            o
        };
        let fd_s = |f: &dyn Fn(f64) -> SpinorField, h: f64| {
            let mut o = f(h).sub(&f(-h));
            o.scale(Complex64::new(0.5 / h, 0.0));
            o
        };
        let dg = model.g_derivative(&p, &a).map_err(|e| e.to_string())?;
        let fd = fd_s(&|s| model.g_eval(&sp(&p, &a, s)).expect("g"), 1e-4);
        worst[5] = worst[5].max(fd.sub(&dg).norm_linf() / dg.norm_linf());
        let d2g = model.g_second_derivative(&p, &a, &b).map_err(|e| e.to_string())?;
        let fd = fd_s(&|s| model.g_derivative(&sp(&p, &b, s), &a).expect("Dg"), 1e-4);
        worst[6] = worst[6].max(fd.sub(&d2g).norm_linf() / d2g.norm_linf().max(1e-300));
    }
    r.check(prep <= 1e-13, format!("max |U0(τ=0) - Φ0|∞ over 20 inputs = {prep:.2e} (≤ 1e-13)"));
    r.check(mean <= 1e-14, format!("max ‖Π h_l‖/‖h_l‖, l = 1..3 = {mean:.2e} (≤ 1e-14)"));
    let names = ["∂uG", "∂u²G", "∂tG", "∂t²G", "∂t∂uG", "Dg", "D²g"];
    for (n, e) in names.iter().zip(worst) {
        r.check(e <= 1e-6, format!("{n}: worst relative FD mismatch over 20 inputs {e:.2e} (≤ 1e-6)"));
    }
    r.finish()
}

fn c7_operator_layer() -> Check {
    let mut r = Report::new();
    let mut rng = StdRng::seed_from_u64(7);
    let grids = [
        Arc::new(SpatialGrid::one_d(-16.0, 16.0, 64).map_err(|e| e.to_string())?),
        Arc::new(SpatialGrid::two_d((-4.0, 4.0, 16), (-6.0, 6.0, 16)).map_err(|e| e.to_string())?),
    ];
    for grid in &grids {
        for eps in [1.0, 1e-2, 1e-4] {
            let sy = DiracSymbols::new(grid.clone(), eps).map_err(|e| e.to_string())?;
            let (mut sum, mut idem, mut cross, mut herm, mut dbound) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
            let mut pairs = Vec::new();
            for k in 0..sy.len() {
                let (p, m) = (sy.pi_plus(k), sy.pi_minus(k));
                sum = sum.max((p + m - Mat2::identity()).norm());
                idem = idem.max((p * p - p).norm()).max((m * m - m).norm());
                cross = cross.max((p * m).norm());
                herm = herm.max((p - p.adjoint()).norm()).max((m - m.adjoint()).norm());
                let xi = grid.wavevector(k);
                let xi2 = xi[0] * xi[0] + xi[1] * xi[1];
                let dk = sy.d(k);
                if dk < 0.0 || dk > 0.5 * xi2 * (1.0 + 1e-15) {
                    dbound = dbound.max(1.0);
                }
                pairs.push((xi2, dk));
            }
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let monotone = pairs.windows(2).all(|w| w[1].1 >= w[0].1 || w[1].0 == w[0].0);
            let tag = format!("d={} ε={eps:e}", grid.dim());
            r.check(sum <= 1e-14, format!("{tag}: ‖Π+ + Π- - I‖ = {sum:.1e}"));
            r.check(idem <= 1e-13, format!("{tag}: ‖Π±² - Π±‖ = {idem:.1e}"));
            r.check(cross <= 1e-13, format!("{tag}: ‖Π+Π-‖ = {cross:.1e}"));
            r.check(herm <= 1e-14, format!("{tag}: Hermitian defect {herm:.1e}"));
            r.check(dbound == 0.0 && monotone, format!("{tag}: 0 ≤ dε ≤ |ξ|²/2 and monotone in |ξ|"));

            let u = random_spinor(&mut rng, grid);
            let mut unit = 0.0f64;
            let mut group = 0.0f64;
            // At ε = 1e-4 a phase t/ε² carries an absolute rounding of ~1e-8 on its own. These pairs
            // make t1 + t2 a power-of-two multiple of t1, so the phases add exactly.
            for (t1, t2) in [(0.5, 0.5), (0.5, -0.25), (0.125, 0.125)] {
                for sign in [1, -1] {
                    let a = sy.apply_free_flow(&u, t1, sign).map_err(|e| e.to_string())?;
                    unit = unit.max((a.norm_l2() - u.norm_l2()).abs() / u.norm_l2());
                    let ab = sy.apply_free_flow(&a, t2, sign).map_err(|e| e.to_string())?;
                    let direct = sy.apply_free_flow(&u, t1 + t2, sign).map_err(|e| e.to_string())?;
                    group = group.max(relative_linf_error(&ab, &direct).map_err(|e| e.to_string())?);
                }
            }
            r.check(unit <= 1e-13, format!("{tag}: free flow l² defect {unit:.1e}"));
            r.check(group <= 1e-12, format!("{tag}: flow(t1)∘flow(t2) vs flow(t1+t2) {group:.1e}"));
        }
    }
    let sy = DiracSymbols::new(grids[0].clone(), 1e-8).map_err(|e| e.to_string())?;
    let lim = (0..sy.len())
        .filter(|&k| grids[0].wavevector(k)[0] != 0.0)
        .map(|k| {
            let xi2 = grids[0].wavevector(k)[0].powi(2);
            (sy.d(k) - 0.5 * xi2).abs() / (0.5 * xi2)
        })
        .fold(0.0, f64::max);
    r.check(lim <= 1e-6, format!("ε=1e-8: dε vs |ξ|²/2 relative {lim:.1e} (≤ 1e-6)"));
    r.finish()
}

fn c8_two_d_smoke() -> Check {
    let mut cfg = ExperimentConfig::preset(ProblemId::P4Nonlinear2d, false);
    cfg.model.domain = vec![[-8.0, 8.0]; 2];
    cfg.model.nx = vec![64, 64];
    cfg.model.ntau = 32;
    let t_end = 0.5;
    let dts = [1.0 / 20.0, 1.0 / 40.0, 1.0 / 80.0];
    let mut r = Report::new();
    let grid = build_grid(&cfg.model, None).map_err(|e| e.to_string())?;
    for eps in [1.0, 0.1] {
        let inst = instance(&cfg.model, eps, grid.clone()).map_err(|e| e.to_string())?;
        let mut diffs = Vec::new();
        let mut failed = None;
        let mut drift = 0.0f64;
        for dt in dts {
            let mut finals = Vec::new();
            for scheme in SCHEMES {
                let spec = RunSpec { scheme, ntau: cfg.model.ntau, dt, t_end, cadence: 5, conserved: true };
                match run(&inst, &spec, &cfg.solver) {
                    Ok(out) if out.failure.is_none() => {
                        let m0 = out.records[0];
                        drift = out.records.iter().map(|rec| rec.drift_from(&m0).0).fold(drift, f64::max);
                        finals.push(out.final_field);
                    }
                    Ok(out) => {
                        failed.get_or_insert(format!("{} Δt={dt}: {}", scheme.name(), out.failure.expect("failure")));
                    }
                    Err(e) => {
                        failed.get_or_insert(format!("{} Δt={dt}: {e}", scheme.name()));
                    }
                }
            }
            if let [a, b] = &finals[..] {
                diffs.push(relative_linf_error(b, a).map_err(|e| e.to_string())?);
            }
        }
        r.check(failed.is_none(), format!("ε={eps}: runs complete{}", failed.map(|f| format!(" (failed: {f})")).unwrap_or_default()));
        if diffs.len() == dts.len() {
            r.check(drift <= 1e-3, format!("ε={eps}: max relative mass drift {drift:.2e} (≤ 1e-3)"));
            let ratios: Vec<f64> = diffs.windows(2).map(|w| w[0] / w[1]).collect();
            r.check(
                ratios.iter().all(|q| (8.0..=32.0).contains(q)),
                format!("ε={eps}: SEP/EEP differences {diffs:?}, ratios {ratios:?} (each in 16×[0.5, 2])"),
            );
        }
    }
    r.finish()
}

type Criterion = (u32, &'static str, fn() -> Check);

const CRITERIA: [Criterion; 8] = [
    (1, "uniform fourth-order temporal accuracy", c1_uniform_fourth_order),
    (2, "spectral accuracy in x and τ", c2_spectral_accuracy),
    (3, "exact soliton solution", c3_exact_solution),
    (4, "long-time conservation", c4_long_time_conservation),
    (5, "tableau residuals", c5_tableaux),
    (6, "two-scale machinery", c6_two_scale_machinery),
    (7, "operator layer", c7_operator_layer),
    (8, "2D smoke test", c8_two_d_smoke),
];

fn main() {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).try_init();
    // libtest-style flags (e.g. --nocapture) are ignored; bare numbers select criteria
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut failures = 0;
    for (n, name, f) in CRITERIA {
        if !picked.is_empty() && !picked.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("\n    panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(details) => println!("criterion {n}: PASS  {name} ({secs:.1} s){details}"),
            Err(details) => {
                failures += 1;
                println!("criterion {n}: FAIL  {name} ({secs:.1} s){details}");
            }
        }
    }
    println!("acceptance: {failures} criteria failed");
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
