//! Numerical laboratory for sup-norm growth of Laplace and Schrödinger
//! eigenfunctions on model surfaces, their phase-space defect measures, and
//! the flow-out admissibility condition that controls maximal growth.

pub mod bounds;
pub mod eigenmodes;
pub mod error;
pub mod export;
pub mod flowout;
pub mod geometry;
pub mod microlocal;
pub mod numeric;
pub mod schrodinger;
pub mod suite;
pub mod tolerances;

pub use error::{LabError, Result};
