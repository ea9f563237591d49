use std::sync::Arc;

use num_complex::Complex64;

use super::SpatialGrid;
use crate::{Error, Result};

/// Two-component complex field sampled on a [`SpatialGrid`].
#[derive(Debug, Clone)]
pub struct SpinorField {
    grid: Arc<SpatialGrid>,
    comps: [Vec<Complex64>; 2],
}

impl SpinorField {
    pub fn zeros(grid: Arc<SpatialGrid>) -> Self {
        let n = grid.len();
        Self {
            grid,
            comps: [vec![Complex64::default(); n], vec![Complex64::default(); n]],
        }
    }

    pub fn from_components(
        grid: Arc<SpatialGrid>,
        phi1: Vec<Complex64>,
        phi2: Vec<Complex64>,
    ) -> Result<Self> {
        let n = grid.len();
        if phi1.len() != n || phi2.len() != n {
            return Err(Error::Shape(format!(
                "components have lengths {} and {}, grid has {n} points",
                phi1.len(),
                phi2.len()
            )));
        }
        Ok(Self {
            grid,
            comps: [phi1, phi2],
        })
    }

    /// Samples `f(x)` at every grid point; `x` has one entry per axis.
    pub fn from_fn(grid: Arc<SpatialGrid>, f: impl Fn(&[f64]) -> [Complex64; 2]) -> Self {
        let d = grid.dim();
        let (mut a, mut b) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for i in 0..grid.len() {
            let x = grid.point(i);
            let [u, v] = f(&x[..d]);
            a.push(u);
            b.push(v);
        }
        Self { grid, comps: [a, b] }
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    /// Number of grid points (half the number of complex entries).
    pub fn len(&self) -> usize {
        self.comps[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>; 2] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>; 2] {
        &mut self.comps
    }

    pub fn into_components(self) -> [Vec<Complex64>; 2] {
        self.comps
    }

    /// Value `(φ1, φ2)` at flat index `i`.
    pub fn at(&self, i: usize) -> [Complex64; 2] {
        [self.comps[0][i], self.comps[1][i]]
    }

    pub fn ensure_same_grid(&self, grid: &SpatialGrid) -> Result<()> {
        if *self.grid != *grid {
            return Err(Error::Shape(format!(
                "field lives on {:?}, expected {:?}",
                self.grid.axes(),
                grid.axes()
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Discrete l² norm `sqrt(Δx^d Σ |Φ_j|²)`.
    pub fn norm_l2(&self) -> f64 {
        (self.grid.cell_volume() * self.sum_sq()).sqrt()
    }

    /// `Σ_j |Φ_j|²` without the quadrature weight.
    pub fn sum_sq(&self) -> f64 {
        self.comps.iter().flatten().map(Complex64::norm_sqr).sum()
    }

    /// Max over grid points of the pointwise spinor length `|Φ(x_j)|`.
    pub fn norm_linf(&self) -> f64 {
        self.comps[0]
            .iter()
            .zip(&self.comps[1])
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }

    /// Discrete H¹ norm from the `(1 + |ξ|²)`-weighted mode amplitudes.
    pub fn norm_h1(&self) -> f64 {
        let hat = self.to_spectral();
        let mut s = 0.0;
        for k in 0..self.len() {
            let xi = self.grid.wavevector(k);
            let w = 1.0 + xi[0] * xi[0] + xi[1] * xi[1];
            s += w * (hat[0][k].norm_sqr() + hat[1][k].norm_sqr());
        }
        (self.grid.volume() * s).sqrt()
    }

    /// Forward transform of both components (mode amplitudes).
    pub fn to_spectral(&self) -> [Vec<Complex64>; 2] {
        let mut hat = self.comps.clone();
        for c in hat.iter_mut() {
            self.grid.forward(c);
        }
        hat
    }

    /// Builds a field from mode amplitudes produced by [`Self::to_spectral`].
    pub fn from_spectral(grid: Arc<SpatialGrid>, mut hat: [Vec<Complex64>; 2]) -> Result<Self> {
        for c in hat.iter_mut() {
            if c.len() != grid.len() {
                return Err(Error::Shape(format!(
                    "spectral data has {} entries, grid has {}",
                    c.len(),
                    grid.len()
                )));
            }
            grid.inverse(c);
        }
        let [a, b] = hat;
        Self::from_components(grid, a, b)
    }

    pub fn scale(&mut self, s: Complex64) {
        self.comps.iter_mut().flatten().for_each(|z| *z *= s);
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &SpinorField) {
        for (dst, src) in self.comps.iter_mut().zip(&other.comps) {
            dst.iter_mut().zip(src).for_each(|(d, x)| *d += s * x);
        }
    }

    pub fn sub(&self, other: &SpinorField) -> SpinorField {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out
    }

    /// Translation by whole grid cells along the first axis (periodic).
    pub fn shift_cells(&self, cells: usize) -> SpinorField {
        let n0 = self.grid.axis(0).n;
        let stride = self.len() / n0;
        let mut out = self.clone();
        for (dst, src) in out.comps.iter_mut().zip(&self.comps) {
            for i in 0..n0 {
                let j = (i + cells) % n0;
                dst[j * stride..(j + 1) * stride].copy_from_slice(&src[i * stride..(i + 1) * stride]);
            }
        }
        out
    }
}
