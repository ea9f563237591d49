//! Convergence, conservation and dynamics experiments for the two-scale
//! integrators, plus the `dirac-ua` command-line driver.

pub mod config;
pub mod conservation;
pub mod convergence;
pub mod dynamics;
pub mod error;
pub mod output;
pub mod problem;
pub mod runner;
pub mod snapshot;
pub mod tableau_check;

pub use error::{Error, Result};
