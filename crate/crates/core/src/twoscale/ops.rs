use num_complex::Complex64;

use super::{AugmentedField, Representation};
use crate::spectral::SpinorField;

/// `Π`: the τ-average (mode 0).
pub fn average(f: &AugmentedField) -> SpinorField {
    f.mode(0)
}

/// `Aᵖ`: multiplies mode `l ≠ 0` by `(il)^{-p}` and removes mode 0.
///
/// The output has the representation of the input.
pub fn a_power(f: &AugmentedField, p: u32) -> AugmentedField {
    let repr = f.repr();
    let mut m = f.to_modal();
    let nt = m.tau().len();
    let factors: Vec<Complex64> = (0..nt)
        .map(|j| {
            let l = m.tau().mode(j);
            if l == 0 {
                Complex64::default()
            } else {
                Complex64::new(0.0, l as f64).powi(-(p as i32))
            }
        })
        .collect();
    for c in m.data_mut().iter_mut() {
        for chunk in c.chunks_mut(nt) {
            chunk.iter_mut().zip(&factors).for_each(|(z, s)| *z *= s);
        }
    }
    match repr {
        Representation::Modal => m,
        Representation::Nodal => m.into_nodal(),
    }
}

/// `∂τ` applied modally (`il` on mode `l`).
pub fn tau_derivative(f: &AugmentedField) -> AugmentedField {
    let repr = f.repr();
    let mut m = f.to_modal();
    let nt = m.tau().len();
    let factors: Vec<Complex64> = (0..nt).map(|j| Complex64::new(0.0, m.tau().mode(j) as f64)).collect();
    for c in m.data_mut().iter_mut() {
        for chunk in c.chunks_mut(nt) {
            chunk.iter_mut().zip(&factors).for_each(|(z, s)| *z *= s);
        }
    }
    match repr {
        Representation::Modal => m,
        Representation::Nodal => m.into_nodal(),
    }
}
