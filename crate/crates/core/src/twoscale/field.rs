use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::spectral::{SpatialGrid, SpinorField};
use crate::{Error, Result};

/// Uniform grid on the fast-time torus `[0, 2π)`.
///
/// Mode amplitudes are stored in FFT slot order: slot `j` carries mode
/// `j` for `j < Nτ/2` and `j - Nτ` otherwise, so the modes are `{-Nτ/2, ..., Nτ/2 - 1}`.
#[derive(Clone)]
pub struct TauGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TauGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TauGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for TauGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl TauGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::Config(format!("Nτ must be even and at least 4, got {n}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dtau(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// `τ_k = 2πk/Nτ`.
    pub fn node(&self, k: usize) -> f64 {
        self.dtau() * k as f64
    }

    /// Mode number stored in slot `j`.
    pub fn mode(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Slot of mode `l`, if represented.
    pub fn slot(&self, l: i64) -> Option<usize> {
        let h = (self.n / 2) as i64;
        if l < -h || l >= h {
            None
        } else if l >= 0 {
            Some(l as usize)
        } else {
            Some((l + self.n as i64) as usize)
        }
    }

    pub fn modes(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.mode(j)).collect()
    }
}

/// Nodal values or mode amplitudes in τ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Nodal,
    Modal,
}

/// A spinor field depending on `(τ, x)`.
///
/// Storage is `data[c][x * Nτ + j]` with `c` the spinor component, `x` the
/// flat spatial index and `j` the τ node or mode slot, so τ varies fastest.
/// The stacked `2Nx × Nτ` matrix is `row = c * Nx + x`, `column = j`.
/// Spatial values are always physical (not Fourier transformed).
#[derive(Debug, Clone)]
pub struct AugmentedField {
    tau: TauGrid,
    grid: Arc<SpatialGrid>,
    repr: Representation,
    data: [Vec<Complex64>; 2],
}

impl AugmentedField {
    pub fn zeros(tau: TauGrid, grid: Arc<SpatialGrid>, repr: Representation) -> Self {
        let n = tau.len() * grid.len();
        Self {
            tau,
            grid,
            repr,
            data: [vec![Complex64::default(); n], vec![Complex64::default(); n]],
        }
    }

    /// The τ-independent lift of `f`, in nodal form.
    pub fn constant(tau: TauGrid, f: &SpinorField) -> Self {
        let nt = tau.len();
        let mut out = Self::zeros(tau, f.grid().clone(), Representation::Nodal);
        for c in 0..2 {
            for (x, v) in f.component(c).iter().enumerate() {
                out.data[c][x * nt..(x + 1) * nt].fill(*v);
            }
        }
        out
    }

    /// Builds a nodal field from one spatial field per τ node.
    pub fn from_nodes(tau: TauGrid, nodes: &[SpinorField]) -> Result<Self> {
        let first = nodes
            .first()
            .ok_or_else(|| Error::Shape("no τ nodes supplied".into()))?;
        if nodes.len() != tau.len() {
            return Err(Error::Shape(format!("{} τ nodes supplied, grid has {}", nodes.len(), tau.len())));
        }
        let mut out = Self::zeros(tau, first.grid().clone(), Representation::Nodal);
        for (k, f) in nodes.iter().enumerate() {
            out.set_slice(k, f)?;
        }
        Ok(out)
    }

    pub(crate) fn from_raw(
        tau: TauGrid,
        grid: Arc<SpatialGrid>,
        repr: Representation,
        data: [Vec<Complex64>; 2],
    ) -> Result<Self> {
        let n = tau.len() * grid.len();
        if data[0].len() != n || data[1].len() != n {
            return Err(Error::Shape(format!("augmented data must have {n} entries per component")));
        }
        Ok(Self { tau, grid, repr, data })
    }

    pub fn tau(&self) -> &TauGrid {
        &self.tau
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn repr(&self) -> Representation {
        self.repr
    }

    pub fn data(&self) -> &[Vec<Complex64>; 2] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Vec<Complex64>; 2] {
        &mut self.data
    }

    pub fn ensure_compatible(&self, other: &AugmentedField) -> Result<()> {
        if self.tau != other.tau || *self.grid != *other.grid {
            return Err(Error::Shape("augmented fields live on different grids".into()));
        }
        Ok(())
    }

    /// Spatial field in τ slot `j` (a node or a mode depending on the representation).
    pub fn slice(&self, j: usize) -> SpinorField {
        let nt = self.tau.len();
        let nx = self.grid.len();
        let pick = |c: usize| (0..nx).map(|x| self.data[c][x * nt + j]).collect::<Vec<_>>();
        SpinorField::from_components(self.grid.clone(), pick(0), pick(1)).expect("matching lengths")
    }

    pub fn set_slice(&mut self, j: usize, f: &SpinorField) -> Result<()> {
        f.ensure_same_grid(&self.grid)?;
        let nt = self.tau.len();
        for c in 0..2 {
            for (x, v) in f.component(c).iter().enumerate() {
                self.data[c][x * nt + j] = *v;
            }
        }
        Ok(())
    }

    /// Nodal value at `τ_k`; converts if needed.
    pub fn node(&self, k: usize) -> SpinorField {
        match self.repr {
            Representation::Nodal => self.slice(k),
            Representation::Modal => self.evaluate_at(self.tau.node(k)),
        }
    }

    /// Amplitude of τ-mode `l` (zero if not represented).
    pub fn mode(&self, l: i64) -> SpinorField {
        match self.tau.slot(l) {
            None => SpinorField::zeros(self.grid.clone()),
            Some(j) => match self.repr {
                Representation::Modal => self.slice(j),
                Representation::Nodal => self.clone().into_modal().slice(j),
            },
        }
    }

    pub fn into_modal(mut self) -> Self {
        if self.repr == Representation::Nodal {
            let scale = 1.0 / self.tau.len() as f64;
            for c in self.data.iter_mut() {
                self.tau.forward.process(c);
                c.iter_mut().for_each(|z| *z *= scale);
            }
            self.repr = Representation::Modal;
        }
        self
    }

    pub fn into_nodal(mut self) -> Self {
        if self.repr == Representation::Modal {
            for c in self.data.iter_mut() {
                self.tau.inverse.process(c);
            }
            self.repr = Representation::Nodal;
        }
        self
    }

    pub fn to_modal(&self) -> Self {
        self.clone().into_modal()
    }

    pub fn to_nodal(&self) -> Self {
        self.clone().into_nodal()
    }

    /// `Σ_l Û_l e^{ilτ}` by direct summation at an arbitrary `τ`.
    pub fn evaluate_at(&self, tau: f64) -> SpinorField {
        let modal;
        let m = match self.repr {
            Representation::Modal => self,
            Representation::Nodal => {
                modal = self.to_modal();
                &modal
            }
        };
        let nt = self.tau.len();
        let phases: Vec<Complex64> = (0..nt)
            .map(|j| Complex64::from_polar(1.0, self.tau.mode(j) as f64 * tau))
            .collect();
        let nx = self.grid.len();
        let sum = |c: usize| {
            (0..nx)
                .map(|x| {
                    m.data[c][x * nt..(x + 1) * nt]
                        .iter()
                        .zip(&phases)
                        .map(|(a, p)| a * p)
                        .sum::<Complex64>()
                })
                .collect::<Vec<_>>()
        };
        SpinorField::from_components(self.grid.clone(), sum(0), sum(1)).expect("matching lengths")
    }

    /// Maximum over τ slots and grid points of the pointwise spinor length.
    pub fn norm_linf(&self) -> f64 {
        self.data[0]
            .iter()
            .zip(&self.data[1])
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of all stored entries.
    pub fn norm_flat(&self) -> f64 {
        self.data.iter().flatten().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&mut self, s: Complex64) {
        self.data.iter_mut().flatten().for_each(|z| *z *= s);
    }

    /// `self += s * other`; both must share the representation.
    pub fn axpy(&mut self, s: Complex64, other: &AugmentedField) -> Result<()> {
        self.ensure_compatible(other)?;
        if self.repr != other.repr {
            return Err(Error::Shape("axpy between nodal and modal fields".into()));
        }
        for (d, o) in self.data.iter_mut().zip(&other.data) {
            d.iter_mut().zip(o).for_each(|(a, b)| *a += s * b);
        }
        Ok(())
    }

    pub fn sub(&self, other: &AugmentedField) -> Result<AugmentedField> {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    /// Largest non-zero-mode amplitude relative to the field size.
    pub fn tau_variation(&self) -> f64 {
        let m = self.to_modal();
        let nt = self.tau.len();
        let mut var: f64 = 0.0;
        for c in 0..2 {
            for (i, z) in m.data[c].iter().enumerate() {
                if i % nt != 0 {
                    var = var.max(z.norm());
                }
            }
        }
        var
    }
}
