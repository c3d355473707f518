//! Numerical machinery for double-tower solutions of the nonlinear
//! Schrödinger equation −Δu + V(|y|)u = u^p in R^N.
//!
//! The crate builds, from first principles, every quantitative object
//! that the construction of such solutions rests on:
//!
//! - [`profile`] — the radial ground state U of −ΔU + U = U^p by
//!   shooting, with derivatives and the decay constant C0 of
//!   U ~ C0 e^(−r) r^(−(N−1)/2);
//! - [`geometry`] — double-tower and nested-tower center
//!   configurations, their distances and symmetry orbits;
//! - [`coefficients`] — the interaction coefficients A1, A2, B1 by
//!   quadrature against the profile;
//! - [`energy`] — the reduced energies F(r,h) and G(t,l), their exact
//!   gradients, interior critical points, and the balance / scaling /
//!   interaction-derivative diagnostics;
//! - [`field`] — the bubble-sum ansatz, its residual, and the weighted
//!   sup norm ‖·‖_* with decay sweeps in the bubble count;
//! - [`pohozaev`] — boundary-integral bilinear forms and the
//!   integration-by-parts identity they satisfy, verified on grids;
//! - [`spectrum`] — linearized spectra sector-by-sector in spherical
//!   harmonics, plus a 1D multi-soliton toy linearization.
//!
//! All routines are deterministic, pure functions of immutable inputs,
//! and safe to call concurrently.

pub mod coefficients;
pub mod energy;
pub mod error;
pub mod field;
pub mod geometry;
pub mod model;
pub mod numerics;
pub mod pohozaev;
pub mod profile;
pub mod spectrum;

pub use error::{Error, Result};
