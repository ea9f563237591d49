//! Uniformly accurate fourth-order two-scale exponential integrators for the
//! nonlinear Dirac equation in the nonrelativistic regime
//!
//! ```text
//! i ∂t Φ = (-(i/ε) Σ σj ∂j + σ3/ε²) Φ + V Φ + F(Φ) Φ,   F(Φ) = λ1 (Φ*σ3Φ) σ3 + λ2 |Φ|² I
//! ```
//!
//! on periodic boxes in one or two space dimensions.
//!
//! The layers, bottom up:
//!
//! * [`spectral`]: periodic grids, FFTs, and the per-mode symbols of the Dirac
//!   operator (projectors, the regularized half-Laplacian, the free flow).
//! * [`model`]: the right-hand side `g`, its real-linear derivatives, mass and
//!   energy, closed-form solitons and the built-in problem data.
//! * [`twoscale`]: the augmented `(t, τ)` system, the averaging operators,
//!   the Chapman–Enskog corrections and well-prepared initial data.
//! * [`expint`]: φ-functions and the SEP-TS4 / EEP-TS4 tableaux with their
//!   order and symmetry residuals.
//! * [`integrator`]: time stepping of the τ-modal system and reconstruction of
//!   the physical solution.
//! * [`reference`]: a Strang splitting reference solver with exact sub-flows.

pub mod diagnostics;
pub mod error;
pub mod expint;
pub mod integrator;
pub mod model;
pub mod reference;
pub mod spectral;
pub mod twoscale;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);
