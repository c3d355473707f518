//! Small numerical kernels shared across the crate.

pub mod ode;
pub mod quad;
pub mod tridiag;
