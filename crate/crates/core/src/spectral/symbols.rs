use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::{SpatialGrid, SpinorField};
use crate::{Error, Result};

pub type Mat2 = Matrix2<Complex64>;

/// Per-mode symbols of the scaled Dirac operator `Qε = -iε Σ σj ∂j + σ3`.
///
/// In Fourier space `Q̂(ξ) = ε(ξ1 σ1 + ξ2 σ2) + σ3` has eigenvalues `±s(ξ)` with
/// `s = sqrt(1 + ε²|ξ|²)`; the spectral projectors are `Π± = (I ± Q̂/s)/2` and
/// `Dε = (s - 1)/ε² = |ξ|²/(s + 1)`.
#[derive(Debug, Clone)]
pub struct DiracSymbols {
    eps: f64,
    grid: Arc<SpatialGrid>,
    s: Vec<f64>,
    d: Vec<f64>,
    /// `Q̂(ξ)/s(ξ)`, a Hermitian involution.
    q: Vec<Mat2>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `Q̂(ξ) = ε(ξ1 σ1 + ξ2 σ2) + σ3`.
pub fn dirac_symbol(eps: f64, xi: [f64; 2]) -> Mat2 {
    let off_lo = Complex64::new(eps * xi[0], eps * xi[1]);
    Mat2::new(c(1.0), off_lo.conj(), off_lo, c(-1.0))
}

impl DiracSymbols {
    pub fn new(grid: Arc<SpatialGrid>, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Config(format!("ε must be positive, got {eps}")));
        }
        let n = grid.len();
        let (mut s, mut d, mut q) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for k in 0..n {
            let xi = grid.wavevector(k);
            let xi2 = xi[0] * xi[0] + xi[1] * xi[1];
            let sk = (1.0 + eps * eps * xi2).sqrt();
            s.push(sk);
            d.push(xi2 / (sk + 1.0));
            q.push(dirac_symbol(eps, xi).unscale(sk));
        }
        Ok(Self { eps, grid, s, d, q })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn grid(&self) -> &Arc<SpatialGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `s(ξ_k) = sqrt(1 + ε²|ξ_k|²)`.
    pub fn s(&self, k: usize) -> f64 {
        self.s[k]
    }

    /// `Dε(ξ_k)`.
    pub fn d(&self, k: usize) -> f64 {
        self.d[k]
    }

    pub fn d_table(&self) -> &[f64] {
        &self.d
    }

    pub fn pi_plus(&self, k: usize) -> Mat2 {
        (Mat2::identity() + self.q[k]).scale(0.5)
    }

    pub fn pi_minus(&self, k: usize) -> Mat2 {
        (Mat2::identity() - self.q[k]).scale(0.5)
    }

    /// `Q̂(ξ_k)`.
    pub fn q_hat(&self, k: usize) -> Mat2 {
        self.q[k].scale(self.s[k])
    }

    /// Applies `α+(k) Π+(k) + α-(k) Π-(k)` to mode amplitudes in place.
    pub fn apply_branches(
        &self,
        hat: &mut [Vec<Complex64>; 2],
        coeff: impl Fn(usize) -> (Complex64, Complex64),
    ) {
        let [a, b] = hat;
        for k in 0..self.s.len() {
            let (ap, am) = coeff(k);
            let mean = (ap + am) * 0.5;
            let half_diff = (ap - am) * 0.5;
            let v = Vector2::new(a[k], b[k]);
            let w = self.q[k] * v;
            a[k] = mean * v[0] + half_diff * w[0];
            b[k] = mean * v[1] + half_diff * w[1];
        }
    }

    /// `e^{±i t Qε/ε²}` for `sign = ±1`, applied through the branch factorization
    /// `e^{±it/ε²} e^{±it Dε} Π+ + e^{∓it/ε²} e^{∓it Dε} Π-`. Unitary in the discrete l² norm.
    pub fn apply_free_flow(&self, field: &SpinorField, t: f64, sign: i32) -> Result<SpinorField> {
        if sign != 1 && sign != -1 {
            return Err(Error::Parameter(format!("free-flow sign must be ±1, got {sign}")));
        }
        field.ensure_same_grid(&self.grid)?;
        let sigma = sign as f64;
        let inv_eps2 = 1.0 / (self.eps * self.eps);
        let mut hat = field.to_spectral();
        self.apply_branches(&mut hat, |k| {
            let phase = sigma * t * (inv_eps2 + self.d[k]);
            let p = Complex64::from_polar(1.0, phase);
            (p, p.conj())
        });
        SpinorField::from_spectral(self.grid.clone(), hat)
    }
}

/// Per-mode multiplier for [`apply_mode_multiplier`].
#[derive(Debug, Clone)]
pub enum ModeSymbol {
    /// Same scalar on both components.
    Scalar(Vec<Complex64>),
    /// A 2×2 matrix acting on the spinor amplitudes.
    Matrix(Vec<Mat2>),
}

impl ModeSymbol {
    fn len(&self) -> usize {
        match self {
            ModeSymbol::Scalar(v) => v.len(),
            ModeSymbol::Matrix(v) => v.len(),
        }
    }

    /// Builds a scalar table from a function of the wave vector.
    pub fn scalar_from(grid: &SpatialGrid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        ModeSymbol::Scalar((0..grid.len()).map(|k| f(grid.wavevector(k))).collect())
    }
}

/// Forward transform, per-mode multiply, inverse transform.
pub fn apply_mode_multiplier(field: &SpinorField, symbol: &ModeSymbol) -> Result<SpinorField> {
    if symbol.len() != field.len() {
        return Err(Error::Shape(format!(
            "symbol table has {} entries, field has {} points",
            symbol.len(),
            field.len()
        )));
    }
    let mut hat = field.to_spectral();
    match symbol {
        ModeSymbol::Scalar(m) => {
            for comp in hat.iter_mut() {
                comp.iter_mut().zip(m).for_each(|(z, s)| *z *= s);
            }
        }
        ModeSymbol::Matrix(m) => {
            let [a, b] = &mut hat;
            for k in 0..m.len() {
                let w = m[k] * Vector2::new(a[k], b[k]);
                a[k] = w[0];
                b[k] = w[1];
            }
        }
    }
    SpinorField::from_spectral(field.grid().clone(), hat)
}

/// Spectral partial derivative along `axis`.
pub fn partial(field: &SpinorField, axis: usize) -> Result<SpinorField> {
    let sym = ModeSymbol::scalar_from(field.grid(), |xi| Complex64::new(0.0, xi[axis]));
    apply_mode_multiplier(field, &sym)
}
