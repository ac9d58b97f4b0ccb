//! Hybrid time-dependent Ginzburg-Landau solver with a BCS gap-equation
//! nonlinearity, a stabilized IMEX scheme preserving the discrete maximum
//! modulus bound and energy dissipation, and a desk-scale experiment harness.

pub mod asymptotics;
pub mod config;
pub mod convergence;
pub mod diagnostics;
pub mod error;
pub mod gap;
pub mod grid;
pub mod inhomogeneity;
pub mod ops;
pub mod output;
pub mod quad;
pub mod runner;
pub mod solver;
pub(crate) mod system;
pub mod stepper;

pub use error::{Error, Result};
