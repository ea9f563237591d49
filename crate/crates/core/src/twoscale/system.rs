use num_complex::Complex64;
use rayon::prelude::*;

use super::{AugmentedField, Representation, TauGrid};
use crate::model::ModelSpec;
use crate::spectral::{DiracSymbols, SpinorField};
use crate::{Error, Result};

/// Which of the two conjugation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `C+(t,τ) = e^{-iτ} e^{-itD} Π+ + e^{iτ} e^{itD} Π-`.
    Plus,
    /// `C-(t,τ) = e^{iτ} e^{itD} Π+ + e^{-iτ} e^{-itD} Π-`.
    Minus,
}

/// Derivative of `G(t, τ, u)` requested from [`TwoScale::g_derivative`].
#[derive(Debug, Clone, Copy)]
pub enum Derivative<'a> {
    /// `∂t G`.
    T,
    /// `∂t² G`.
    TT,
    /// `∂u G · v`.
    U(&'a AugmentedField),
    /// `∂u² G · (v, w)`.
    UU(&'a AugmentedField, &'a AugmentedField),
    /// `∂t ∂u G · v`.
    TU(&'a AugmentedField),
}

/// The augmented system `∂t U + ε^{-2} ∂τ U = G(t, τ, U)` with
/// `G(t, τ, U) = C-(t,τ) g(C+(t,τ) U)`.
#[derive(Debug, Clone)]
pub struct TwoScale {
    model: ModelSpec,
    symbols: DiracSymbols,
    tau: TauGrid,
}

impl TwoScale {
    pub fn new(model: ModelSpec, tau: TauGrid) -> Result<Self> {
        let symbols = DiracSymbols::new(model.grid().clone(), model.eps())?;
        Ok(Self { model, symbols, tau })
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn symbols(&self) -> &DiracSymbols {
        &self.symbols
    }

    pub fn tau(&self) -> &TauGrid {
        &self.tau
    }

    pub fn eps(&self) -> f64 {
        self.model.eps()
    }

    pub(crate) fn check(&self, f: &AugmentedField) -> Result<()> {
        if *f.tau() != self.tau || **f.grid() != **self.model.grid() {
            return Err(Error::Shape("augmented field does not match the system grids".into()));
        }
        Ok(())
    }

    /// `d^k/dt^k C±(t, τ) u`.
    pub fn conjugate(&self, u: &SpinorField, t: f64, tau: f64, side: Side, order: u32) -> Result<SpinorField> {
        u.ensure_same_grid(self.symbols.grid())?;
        let mut hat = u.to_spectral();
        let d = self.symbols.d_table();
        self.symbols.apply_branches(&mut hat, |k| {
            let theta = tau + t * d[k];
            let down = Complex64::from_polar(1.0, -theta) * Complex64::new(0.0, -d[k]).powu(order);
            let up = Complex64::from_polar(1.0, theta) * Complex64::new(0.0, d[k]).powu(order);
            match side {
                Side::Plus => (down, up),
                Side::Minus => (up, down),
            }
        });
        SpinorField::from_spectral(u.grid().clone(), hat)
    }

    fn per_node<F>(&self, f: F) -> Result<AugmentedField>
    where
        F: Fn(usize, f64) -> Result<SpinorField> + Sync,
    {
        let nodes = (0..self.tau.len())
            .into_par_iter()
            .map(|k| f(k, self.tau.node(k)))
            .collect::<Result<Vec<_>>>()?;
        AugmentedField::from_nodes(self.tau.clone(), &nodes)
    }

    /// `G(t, τ_k, U(τ_k))` at every τ node; nodal output.
    pub fn g_eval(&self, t: f64, u: &AugmentedField) -> Result<AugmentedField> {
        self.check(u)?;
        let u = u.to_nodal();
        self.per_node(|k, tau| {
            let w = self.conjugate(&u.slice(k), t, tau, Side::Plus, 0)?;
            let gw = self.model.g_eval(&w)?;
            self.conjugate(&gw, t, tau, Side::Minus, 0)
        })
    }

    /// Derivatives of `G` in `t` and `u` at `t = 0`; nodal output.
    ///
    /// `t`-derivatives act on the `e^{±itD}` factors of both conjugations;
    /// `u`-derivatives are the real-linear derivatives of `g`.
    pub fn g_derivative(&self, t: f64, u: &AugmentedField, which: Derivative<'_>) -> Result<AugmentedField> {
        if t != 0.0 {
            return Err(Error::Unsupported(format!(
                "derivatives of G are only available at t = 0, requested t = {t}"
            )));
        }
        self.check(u)?;
        let nodal = |f: &AugmentedField| -> Result<AugmentedField> {
            self.check(f)?;
            Ok(f.to_nodal())
        };
        let u = u.to_nodal();
        let (v, w) = match which {
            Derivative::U(v) | Derivative::TU(v) => (Some(nodal(v)?), None),
            Derivative::UU(v, w) => (Some(nodal(v)?), Some(nodal(w)?)),
            _ => (None, None),
        };
        let one = Complex64::new(1.0, 0.0);
        let m = &self.model;
        self.per_node(|k, tau| {
            let cp = |f: &SpinorField, ord| self.conjugate(f, 0.0, tau, Side::Plus, ord);
            let cm = |f: &SpinorField, ord| self.conjugate(f, 0.0, tau, Side::Minus, ord);
            let uk = u.slice(k);
            let wk = cp(&uk, 0)?;
            match which {
                Derivative::T => {
                    let mut out = cm(&m.g_eval(&wk)?, 1)?;
                    out.axpy(one, &cm(&m.g_derivative(&wk, &cp(&uk, 1)?)?, 0)?);
                    Ok(out)
                }
                Derivative::TT => {
                    let u1 = cp(&uk, 1)?;
                    let mut out = cm(&m.g_eval(&wk)?, 2)?;
                    out.axpy(one * 2.0, &cm(&m.g_derivative(&wk, &u1)?, 1)?);
                    let mut inner = m.g_second_derivative(&wk, &u1, &u1)?;
                    inner.axpy(one, &m.g_derivative(&wk, &cp(&uk, 2)?)?);
                    out.axpy(one, &cm(&inner, 0)?);
                    Ok(out)
                }
                Derivative::U(_) => {
                    let vk = cp(&v.as_ref().expect("direction").slice(k), 0)?;
                    cm(&m.g_derivative(&wk, &vk)?, 0)
                }
                Derivative::UU(..) => {
                    let vk = cp(&v.as_ref().expect("direction").slice(k), 0)?;
                    let wv = cp(&w.as_ref().expect("direction").slice(k), 0)?;
                    cm(&m.g_second_derivative(&wk, &vk, &wv)?, 0)
                }
                Derivative::TU(_) => {
                    let vraw = v.as_ref().expect("direction").slice(k);
                    let vk = cp(&vraw, 0)?;
                    let mut out = cm(&m.g_derivative(&wk, &vk)?, 1)?;
                    let mut inner = m.g_second_derivative(&wk, &cp(&uk, 1)?, &vk)?;
                    inner.axpy(one, &m.g_derivative(&wk, &cp(&vraw, 1)?)?);
                    out.axpy(one, &cm(&inner, 0)?);
                    Ok(out)
                }
            }
        })
    }

    /// The modal right-hand side `Ξ(t, Ẑ)`: inverse τ-transform, `C+`, `g`,
    /// `C-`, forward τ-transform. Input and output are modal.
    pub fn xi(&self, t: f64, zhat: &AugmentedField) -> Result<AugmentedField> {
        self.check(zhat)?;
        let nodal = zhat.to_nodal();
        let nt = self.tau.len();
        let grid = self.model.grid().clone();
        let nx = grid.len();
        let d = self.symbols.d_table();
        let phase: Vec<Complex64> = d.iter().map(|dk| Complex64::from_polar(1.0, -t * dk)).collect();
        let data = nodal.data();
        let per_node: Vec<[Vec<Complex64>; 2]> = (0..nt)
            .into_par_iter()
            .map(|k| {
                let gather = |c: usize| (0..nx).map(|x| data[c][x * nt + k]).collect::<Vec<_>>();
                let mut hat = [gather(0), gather(1)];
                let e = Complex64::from_polar(1.0, -self.tau.node(k));
                hat.iter_mut().for_each(|c| grid.forward(c));
                self.symbols.apply_branches(&mut hat, |m| {
                    let down = e * phase[m];
                    (down, down.conj())
                });
                hat.iter_mut().for_each(|c| grid.inverse(c));
                let [a, b] = &mut hat;
                self.model.g_in_place(a, b);
                hat.iter_mut().for_each(|c| grid.forward(c));
                self.symbols.apply_branches(&mut hat, |m| {
                    let down = e * phase[m];
                    (down.conj(), down)
                });
                hat.iter_mut().for_each(|c| grid.inverse(c));
                hat
            })
            .collect();
        let mut out = [vec![Complex64::default(); nx * nt], vec![Complex64::default(); nx * nt]];
        for (k, node) in per_node.iter().enumerate() {
            for c in 0..2 {
                for x in 0..nx {
                    out[c][x * nt + k] = node[c][x];
                }
            }
        }
        Ok(AugmentedField::from_raw(self.tau.clone(), grid, Representation::Nodal, out)?.into_modal())
    }
}
