use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// One periodic axis `[a, b)` sampled at `n` points.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Axis {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        Self { a, b, n }
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.a + j as f64 * self.dx()
    }

    /// Signed mode number of FFT slot `k`: slots `0..n/2` hold modes `0..n/2`,
    /// slots `n/2..n` hold modes `-n/2..-1`.
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Wavenumber `2πm/(b-a)` of FFT slot `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        2.0 * PI * self.mode(k) as f64 / self.length()
    }
}

/// Periodic tensor grid in one or two dimensions with cached FFT plans.
///
/// Points are stored row-major: flat index `i0 * n1 + i1` in 2D. Transforms
/// use the native FFT slot order (see [`Axis::mode`]); the forward transform
/// divides by the point count so coefficients are mode amplitudes, and the
/// inverse transform is unnormalized.
#[derive(Clone)]
pub struct SpatialGrid {
    axes: Vec<Axis>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl fmt::Debug for SpatialGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpatialGrid").field("axes", &self.axes).finish()
    }
}

impl PartialEq for SpatialGrid {
    fn eq(&self, other: &Self) -> bool {
        self.axes == other.axes
    }
}

impl SpatialGrid {
    /// Builds a grid from one or two axes.
    pub fn new(axes: &[Axis]) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Config(format!(
                "grid dimension must be 1 or 2, got {}",
                axes.len()
            )));
        }
        for (i, ax) in axes.iter().enumerate() {
            if !(ax.a.is_finite() && ax.b.is_finite()) || ax.b <= ax.a {
                return Err(Error::Config(format!(
                    "axis {i}: empty or invalid interval [{}, {})",
                    ax.a, ax.b
                )));
            }
            if ax.n < 4 || ax.n % 2 != 0 {
                return Err(Error::Config(format!(
                    "axis {i}: point count must be even and >= 4, got {}",
                    ax.n
                )));
            }
        }
        let mut planner = FftPlanner::new();
        let forward = axes.iter().map(|ax| planner.plan_fft_forward(ax.n)).collect();
        let inverse = axes.iter().map(|ax| planner.plan_fft_inverse(ax.n)).collect();
        Ok(Self {
            axes: axes.to_vec(),
            forward,
            inverse,
        })
    }

    pub fn one_d(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(&[Axis::new(a, b, n)])
    }

    pub fn two_d(x: (f64, f64, usize), y: (f64, f64, usize)) -> Result<Self> {
        Self::new(&[Axis::new(x.0, x.1, x.2), Axis::new(y.0, y.1, y.2)])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Product of the grid spacings, the rectangle-rule weight `Δx^d`.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::dx).product()
    }

    /// Measure of the periodic box.
    pub fn volume(&self) -> f64 {
        self.axes.iter().map(Axis::length).product()
    }

    /// Splits a flat index into per-axis indices.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        match self.axes.len() {
            1 => [idx, 0],
            _ => [idx / self.axes[1].n, idx % self.axes[1].n],
        }
    }

    /// Physical coordinates of the point with flat index `idx` (unused entries are zero).
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let ij = self.unflatten(idx);
        let mut x = [0.0; 2];
        for (d, ax) in self.axes.iter().enumerate() {
            x[d] = ax.point(ij[d]);
        }
        x
    }

    /// Wave vector of the FFT slot with flat index `idx`.
    pub fn wavevector(&self, idx: usize) -> [f64; 2] {
        let ij = self.unflatten(idx);
        let mut xi = [0.0; 2];
        for (d, ax) in self.axes.iter().enumerate() {
            xi[d] = ax.wavenumber(ij[d]);
        }
        xi
    }

    /// All wave vectors in FFT slot order.
    pub fn wavevectors(&self) -> Vec<[f64; 2]> {
        (0..self.len()).map(|i| self.wavevector(i)).collect()
    }

    /// In-place forward transform, normalized by `1/len`.
    pub fn forward(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.len());
        self.transform(data, &self.forward);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }

    /// In-place inverse transform (no normalization).
    pub fn inverse(&self, data: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.len());
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        match self.axes.len() {
            1 => plans[0].process(data),
            _ => {
                let (n0, n1) = (self.axes[0].n, self.axes[1].n);
                // contiguous rows along axis 1
                plans[1].process(data);
                let mut t = vec![Complex64::default(); data.len()];
                transpose(data, &mut t, n0, n1);
                plans[0].process(&mut t);
                transpose(&t, data, n1, n0);
            }
        }
    }
}

/// Writes the `rows x cols` row-major matrix `src` transposed into `dst`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}
