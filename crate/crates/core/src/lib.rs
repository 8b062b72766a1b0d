//! Numerical laboratory for the focusing generalized Hartree equation
//!
//! ```text
//! i u_t + Δu + (|x|^{-b} * |u|^p) |u|^{p-2} u = 0,   x ∈ R^N.
//! ```

pub mod eqparams;
pub mod evolve;
pub mod error;
pub mod field;
pub mod cli;
pub mod criteria;
pub mod groundstate;
pub mod numerics;
pub mod observables;

pub use eqparams::{classify, scaling_index, Criticality, CriticalityReport, EquationParams};
pub use error::{GhError, Result};
pub use field::{ComplexField, Grid, Nonlinearity, RealField, RieszKernel, Spectral};
