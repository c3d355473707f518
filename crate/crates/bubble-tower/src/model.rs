//! Global model parameters and the concrete radial potential family.
//!
//! The potential is fixed as
//!
//! ```text
//! V(r) = 1 + a1/(1 + r^m) + a2/(1 + r^(m+1))
//! ```
//!
//! which is smooth on [0, ∞) and has the far-field expansion
//! `V(r) = 1 + a1/r^m + a2/r^(m+1) + O(1/r^(2m))`; since `m > 4` the
//! remainder is `o(1/r^(m+2))`, so both the value and the derivative
//! match the assumed tails exactly to the orders the reduced-energy
//! expansions use.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Model parameters for −Δu + V(|y|)u = u^p.
///
/// `N ≥ 1` suffices for the radial ODE machinery; tower routines
/// require `N ≥ 3` and nested-tower routines `N ≥ 6` (checked by
/// [`ModelParams::validate_tower`] / [`ModelParams::validate_nested`],
/// not at construction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_dim: usize,
    pub p: f64,
    pub a1: f64,
    pub a2: f64,
    pub m: f64,
    pub tau: f64,
}

/// Default weight exponent for the ‖·‖_* norm.
pub const DEFAULT_TAU: f64 = 0.1;

impl ModelParams {
    /// Validates `p > 1` (subcritical when `N ≥ 3`), `a1 > 0`,
    /// `tau ∈ (0,1)`, and positivity of the resulting potential.
    pub fn new(n_dim: usize, p: f64, a1: f64, a2: f64, m: f64, tau: f64) -> Result<Self> {
        if n_dim < 1 {
            return Err(Error::InvalidParams("N must be ≥ 1".into()));
        }
        if !(p > 1.0) {
            return Err(Error::InvalidParams(format!("p must be > 1, got {p}")));
        }
        if n_dim >= 3 {
            let p_crit = (n_dim as f64 + 2.0) / (n_dim as f64 - 2.0);
            if p >= p_crit {
                return Err(Error::InvalidParams(format!(
                    "p must be < (N+2)/(N−2) = {p_crit} for N = {n_dim}, got {p}"
                )));
            }
        }
        if !(a1 > 0.0) {
            return Err(Error::InvalidParams(format!("a1 must be > 0, got {a1}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidParams(format!("m must be positive, got {m}")));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidParams(format!("tau must be in (0,1), got {tau}")));
        }
        let params = Self { n_dim, p, a1, a2, m, tau };
        params.check_positivity()?;
        Ok(params)
    }

    /// Tower-level assumption `m > max{4/(p−1), 4}`; the CLI reports a
    /// violation by name.
    pub fn validate_tower(&self) -> Result<()> {
        if self.n_dim < 3 {
            return Err(Error::Dimension { required: 3, actual: self.n_dim });
        }
        let m_min = (4.0 / (self.p - 1.0)).max(4.0);
        if self.m <= m_min {
            return Err(Error::InvalidParams(format!(
                "decay exponent must satisfy m > max{{4/(p−1), 4}} = {m_min}, got m = {}",
                self.m
            )));
        }
        Ok(())
    }

    /// Nested-tower routines additionally need `N ≥ 6`.
    pub fn validate_nested(&self) -> Result<()> {
        if self.n_dim < 6 {
            return Err(Error::Dimension { required: 6, actual: self.n_dim });
        }
        self.validate_tower()
    }

    fn check_positivity(&self) -> Result<()> {
        // a2 ≥ 0 cannot break positivity; otherwise scan a log grid.
        if self.a2 >= 0.0 {
            return Ok(());
        }
        let (mut min_v, mut at_r) = (f64::INFINITY, 0.0);
        for i in 0..=4000 {
            // r from 0 to 10^4, log-spaced after the first node
            let r = if i == 0 { 0.0 } else { 1e-3 * 10f64.powf(7.0 * (i as f64 - 1.0) / 3999.0) };
            let v = potential_value(self, r);
            if v < min_v {
                min_v = v;
                at_r = r;
            }
        }
        if min_v <= 0.0 {
            return Err(Error::InvalidPotential { min_v, at_r });
        }
        Ok(())
    }
}

/// V(r) = 1 + a1/(1+r^m) + a2/(1+r^(m+1)).
pub fn potential_value(params: &ModelParams, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    1.0 + params.a1 / (1.0 + r.powf(params.m)) + params.a2 / (1.0 + r.powf(params.m + 1.0))
}

/// Exact radial derivative of the concrete family:
/// V'(r) = −a1 m r^(m−1)/(1+r^m)² − a2 (m+1) r^m/(1+r^(m+1))².
///
/// As r → ∞ this is −a1 m/r^(m+1) − a2 (m+1)/r^(m+2) + O(1/r^(2m+1)).
pub fn potential_grad_radial(params: &ModelParams, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    if r == 0.0 {
        // m > 1 makes r^(m-1) vanish at the origin
        return 0.0;
    }
    let m = params.m;
    let rm = r.powf(m);
    let rm1 = r.powf(m + 1.0);
    let d1 = 1.0 + rm;
    let d2 = 1.0 + rm1;
    -params.a1 * m * rm / r / (d1 * d1) - params.a2 * (m + 1.0) * rm1 / r / (d2 * d2)
}
