//! φ-functions and exponential Runge–Kutta tableaux on the imaginary axis.

mod phi;
mod residuals;
mod tableau;

pub use phi::PhiEvaluator;
pub use residuals::{order_and_symmetry_residuals, residuals_at, ResidualReport, SampleResiduals};
pub use tableau::{EepReading, Scheme, SchemeTableau};
