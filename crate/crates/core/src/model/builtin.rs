use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::spectral::{SpatialGrid, SpinorField};
use crate::{Error, Result};

/// Registry of sampled potentials used by the built-in problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinPotential {
    /// `V ≡ 0`.
    Zero,
    /// `V(x) = (x - 1)/(x² + 1)`.
    P1Electric,
    /// `V(x) = (1 - x)/(1 + x²)`.
    P3Electric,
    /// `A(x) = (x + 1)²/(1 + x²)`.
    P3Magnetic,
    /// Sum of three cosines along unit vectors at 120°.
    Honeycomb,
}

impl BuiltinPotential {
    pub const ALL: [BuiltinPotential; 5] = [
        BuiltinPotential::Zero,
        BuiltinPotential::P1Electric,
        BuiltinPotential::P3Electric,
        BuiltinPotential::P3Magnetic,
        BuiltinPotential::Honeycomb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinPotential::Zero => "zero",
            BuiltinPotential::P1Electric => "p1_electric",
            BuiltinPotential::P3Electric => "p3_electric",
            BuiltinPotential::P3Magnetic => "p3_magnetic",
            BuiltinPotential::Honeycomb => "honeycomb",
        }
    }

    /// Pointwise value; `x` has one entry per axis.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            BuiltinPotential::Zero => 0.0,
            BuiltinPotential::P1Electric => (x[0] - 1.0) / (x[0] * x[0] + 1.0),
            BuiltinPotential::P3Electric => (1.0 - x[0]) / (1.0 + x[0] * x[0]),
            BuiltinPotential::P3Magnetic => (x[0] + 1.0).powi(2) / (1.0 + x[0] * x[0]),
            BuiltinPotential::Honeycomb => {
                let (px, py) = (x[0], x.get(1).copied().unwrap_or(0.0));
                let k = 4.0 * PI / 3f64.sqrt();
                let h = 3f64.sqrt() / 2.0;
                [(-1.0, 0.0), (0.5, h), (0.5, -h)]
                    .iter()
                    .map(|(ex, ey)| (k * (ex * px + ey * py)).cos())
                    .sum()
            }
        }
    }
}

impl FromStr for BuiltinPotential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Registry of initial spinors used by the built-in problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinInitial {
    /// `(e^{-x²/2}, e^{-(x-1)²/2})`.
    P1Gaussian,
    /// `(e^{-x²/2}, e^{-3(x-1)²/2})`.
    P3Gaussian,
    /// `(e^{-(x²+y²)/2}, e^{-((x-1)²+y²)/2})`.
    P4Gaussian,
}

impl BuiltinInitial {
    pub const ALL: [BuiltinInitial; 3] =
        [BuiltinInitial::P1Gaussian, BuiltinInitial::P3Gaussian, BuiltinInitial::P4Gaussian];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinInitial::P1Gaussian => "p1_gaussian",
            BuiltinInitial::P3Gaussian => "p3_gaussian",
            BuiltinInitial::P4Gaussian => "p4_gaussian",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BuiltinInitial::P4Gaussian => 2,
            _ => 1,
        }
    }

    pub fn value(&self, x: &[f64]) -> [Complex64; 2] {
        let re = |v: f64| Complex64::new(v, 0.0);
        match self {
            BuiltinInitial::P1Gaussian => {
                [re((-x[0] * x[0] / 2.0).exp()), re((-(x[0] - 1.0).powi(2) / 2.0).exp())]
            }
            BuiltinInitial::P3Gaussian => {
                [re((-x[0] * x[0] / 2.0).exp()), re((-3.0 * (x[0] - 1.0).powi(2) / 2.0).exp())]
            }
            BuiltinInitial::P4Gaussian => {
                let y2 = x[1] * x[1];
                [re((-(x[0] * x[0] + y2) / 2.0).exp()), re((-((x[0] - 1.0).powi(2) + y2) / 2.0).exp())]
            }
        }
    }
}

impl FromStr for BuiltinInitial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Samples a registered potential by name.
pub fn builtin_potential(name: &str, grid: &SpatialGrid) -> Result<Vec<f64>> {
    let p: BuiltinPotential = name.parse()?;
    let d = grid.dim();
    Ok((0..grid.len()).map(|i| p.value(&grid.point(i)[..d])).collect())
}

/// Samples a registered initial spinor by name.
pub fn builtin_initial(name: &str, grid: Arc<SpatialGrid>) -> Result<SpinorField> {
    let init: BuiltinInitial = name.parse()?;
    if init.dim() != grid.dim() {
        return Err(Error::Config(format!(
            "initial data `{name}` is {}-dimensional, grid is {}-dimensional",
            init.dim(),
            grid.dim()
        )));
    }
    Ok(SpinorField::from_fn(grid, |x| init.value(x)))
}
