//! Crate-wide error type.
//!
//! Variants map one-to-one onto the failure modes of the numerical
//! pipeline; the CLI groups them into exit codes (config = 2,
//! numerical = 3, I/O = 4).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter combination rejected at construction.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The concrete potential family is non-positive somewhere.
    #[error("invalid potential: min V(r) = {min_v:.6e} at r = {at_r:.6e} is not positive")]
    InvalidPotential { min_v: f64, at_r: f64 },

    /// Shooting bisection never bracketed the decaying separatrix.
    #[error("no ground state bracketed in s ∈ [{lo:.6e}, {hi:.6e}]")]
    NoGroundState { lo: f64, hi: f64 },

    /// ODE integration failed (step size underflow or non-finite state).
    #[error("ODE integration failure at r = {at_r:.6e}: {reason}")]
    Integration { at_r: f64, reason: String },

    /// The far-field plateau of U e^r r^{(N-1)/2} did not settle.
    #[error("tail not converged: plateau variation {variation:.3e} exceeds 1%; increase r_max")]
    NonConvergedTail { variation: f64 },

    /// Quadrature refinement failed to settle below the required tolerance.
    #[error("quadrature not converged: estimated relative error {estimate:.3e}")]
    QuadratureNonConvergent { estimate: f64 },

    /// Layer separation 2rh is numerically indistinguishable from zero.
    #[error("degenerate layer: 2rh = {separation:.6e} below resolvable scale")]
    DegenerateLayer { separation: f64 },

    /// Critical-point search did not converge or left the search rectangle.
    #[error("critical-point search failed: {0}")]
    SearchFailure(String),

    /// Eigenvalue did not settle under grid refinement.
    #[error("insufficient spectral resolution: eigenvalue moved {delta:.3e} under refinement")]
    Resolution { delta: f64 },

    /// Grid fields with incompatible domains or node counts.
    #[error("grid shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Operation requires a higher ambient dimension.
    #[error("dimension error: need N ≥ {required}, got N = {actual}")]
    Dimension { required: usize, actual: usize },

    /// Malformed run configuration (CLI / config file).
    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
