use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::PhiEvaluator;
use crate::{Error, Result};

/// The two fourth-order exponential two-scale schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Three-stage symmetric (implicit) scheme.
    SepTs4,
    /// Five-stage explicit scheme.
    EepTs4,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::SepTs4 => "sep_ts4",
            Scheme::EepTs4 => "eep_ts4",
        }
    }

    pub fn stages(&self) -> usize {
        match self {
            Scheme::SepTs4 => 3,
            Scheme::EepTs4 => 5,
        }
    }

    /// Nodes `c_j`.
    ///
    /// For SEP-TS4, `Σ_j b_j c_j^{ρ-1}/(ρ-1)! = φ_ρ` for `ρ = 2, 3` with the
    /// given weights forces `c = (1, 1/2, 0)`; this also satisfies
    /// `c_ρ = 1 - c_{4-ρ}` and is consistent with `a_{1k} = b_k`, `a_{3k} = 0`.
    pub fn nodes(&self) -> &'static [f64] {
        match self {
            Scheme::SepTs4 => &[1.0, 0.5, 0.0],
            Scheme::EepTs4 => &[0.0, 0.5, 0.5, 1.0, 0.5],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sep_ts4" => Ok(Scheme::SepTs4),
            "eep_ts4" => Ok(Scheme::EepTs4),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// Reading of the fifth-stage coefficients of EEP-TS4.
///
/// The printed table has `a52 = φ2,5/2 - φ3,4 + φ2,4/2 - φ3,5/2` and
/// `a54 = φ2,5/4 - φ5,2`; the five-stage fourth-order exponential Runge–Kutta
/// method it is built on uses `φ2,4/4` in `a52` and `a54 = φ2,5/4 - a52`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EepReading {
    #[default]
    Classical,
    Literal,
}

/// Coefficient functions of a scheme evaluated on a set of arguments `z`
/// (the diagonal of `iΘΔt`).
#[derive(Debug, Clone)]
pub struct SchemeTableau {
    scheme: Scheme,
    reading: EepReading,
    z: Vec<Complex64>,
    /// `a[j][k][m] = a_jk(z_m)`.
    a: Vec<Vec<Vec<Complex64>>>,
    /// `b[j][m] = b_j(z_m)`.
    b: Vec<Vec<Complex64>>,
    /// `stage_exp[j][m] = e^{c_j z_m}`.
    stage_exp: Vec<Vec<Complex64>>,
}

/// `(a, b)` at a single argument.
pub(crate) type Coefficients = (Vec<Vec<Complex64>>, Vec<Complex64>);

pub(crate) fn coefficients(
    scheme: Scheme,
    reading: EepReading,
    phi: &PhiEvaluator,
    z: Complex64,
) -> Result<Coefficients> {
    let full = phi.eval_all(5, z)?;
    let half = phi.eval_all(5, z * 0.5)?;
    let zero = Complex64::default();
    match scheme {
        Scheme::SepTs4 => {
            let b = vec![
                4.0 * full[3] - full[2],
                4.0 * full[2] - 8.0 * full[3],
                full[1] - 3.0 * full[2] + 4.0 * full[3],
            ];
            let a2 = vec![
                -0.25 * half[2] + 0.5 * half[3],
                half[2] - half[3],
                0.5 * half[1] - 0.75 * half[2] + 0.5 * half[3],
            ];
            Ok((vec![b.clone(), a2, vec![zero; 3]], b))
        }
        Scheme::EepTs4 => {
            // φ_{i,j} = φ_i(c_j z): c4 = 1 uses `full`, c2 = c3 = c5 = 1/2 use `half`
            let mut a = vec![vec![zero; 5]; 5];
            a[1][0] = 0.5 * half[1];
            a[2][0] = 0.5 * half[1] - half[2];
            a[2][1] = half[2];
            a[3][0] = full[1] - 2.0 * full[2];
            a[3][1] = full[2];
            a[3][2] = full[2];
            let (a52, a54) = match reading {
                EepReading::Classical => {
                    let a52 = 0.5 * half[2] - full[3] + 0.25 * full[2] - 0.5 * half[3];
                    (a52, 0.25 * half[2] - a52)
                }
                EepReading::Literal => {
                    let a52 = 0.5 * half[2] - full[3] + 0.5 * full[2] - 0.5 * half[3];
                    (a52, 0.25 * half[2] - half[5])
                }
            };
            a[4][1] = a52;
            a[4][2] = a52;
            a[4][3] = a54;
            a[4][0] = 0.5 * half[1] - 2.0 * a52 - a54;
            let b = vec![
                full[1] - 3.0 * full[2] + 4.0 * full[3],
                zero,
                zero,
                -full[2] + 4.0 * full[3],
                4.0 * full[2] - 8.0 * full[3],
            ];
            Ok((a, b))
        }
    }
}

impl SchemeTableau {
    /// Evaluates the coefficient functions at every entry of `z` (expected purely imaginary).
    pub fn build(scheme: Scheme, z: &[Complex64]) -> Result<Self> {
        Self::build_with(scheme, EepReading::default(), z)
    }

    pub fn build_with(scheme: Scheme, reading: EepReading, z: &[Complex64]) -> Result<Self> {
        if let Some(bad) = z.iter().find(|v| v.re != 0.0 || !v.im.is_finite()) {
            return Err(Error::Parameter(format!("tableau arguments must be purely imaginary, got {bad}")));
        }
        let phi = PhiEvaluator::default();
        let s = scheme.stages();
        let nodes = scheme.nodes();
        let mut a = vec![vec![Vec::with_capacity(z.len()); s]; s];
        let mut b = vec![Vec::with_capacity(z.len()); s];
        for &zm in z {
            let (am, bm) = coefficients(scheme, reading, &phi, zm)?;
            for j in 0..s {
                b[j].push(bm[j]);
                for k in 0..s {
                    a[j][k].push(am[j][k]);
                }
            }
        }
        let stage_exp = nodes
            .iter()
            .map(|&c| z.iter().map(|&zm| (zm * c).exp()).collect())
            .collect();
        Ok(Self {
            scheme,
            reading,
            z: z.to_vec(),
            a,
            b,
            stage_exp,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn reading(&self) -> EepReading {
        self.reading
    }

    pub fn stages(&self) -> usize {
        self.scheme.stages()
    }

    pub fn nodes(&self) -> &'static [f64] {
        self.scheme.nodes()
    }

    pub fn is_symmetric(&self) -> bool {
        self.scheme == Scheme::SepTs4
    }

    pub fn is_explicit(&self) -> bool {
        self.scheme == Scheme::EepTs4
    }

    pub fn arguments(&self) -> &[Complex64] {
        &self.z
    }

    /// `a_jk(z_m)` for all `m`.
    pub fn a(&self, j: usize, k: usize) -> &[Complex64] {
        &self.a[j][k]
    }

    /// `b_j(z_m)` for all `m`.
    pub fn b(&self, j: usize) -> &[Complex64] {
        &self.b[j]
    }

    /// `e^{c_j z_m}` for all `m`.
    pub fn stage_exp(&self, j: usize) -> &[Complex64] {
        &self.stage_exp[j]
    }

    /// True if `a_jk` vanishes at every argument.
    pub fn a_is_zero(&self, j: usize, k: usize) -> bool {
        self.a[j][k].iter().all(|v| *v == Complex64::default())
    }
}
