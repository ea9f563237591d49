//! The augmented two-scale formulation in `(t, τ)`.

mod chapman;
mod field;
mod ops;
mod system;

pub use chapman::{Corrections, H3Term};
pub use field::{AugmentedField, Representation, TauGrid};
pub use ops::{a_power, average, tau_derivative};
pub use system::{Derivative, Side, TwoScale};
