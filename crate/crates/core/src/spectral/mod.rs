//! Periodic Fourier grids and per-mode application of the ε-dependent Dirac
//! operator symbols.

mod field;
mod grid;
mod symbols;

pub use field::SpinorField;
pub use grid::{Axis, SpatialGrid};
pub use symbols::{apply_mode_multiplier, dirac_symbol, partial, DiracSymbols, Mat2, ModeSymbol};
