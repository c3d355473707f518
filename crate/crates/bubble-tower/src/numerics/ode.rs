//! Adaptive Dormand–Prince 5(4) integrator for small first-order systems.
//!
//! Step-size control follows the usual PI-free elementary controller:
//! `h_new = h · clamp(0.9 · (tol/err)^(1/5), 0.2, 5)`. Callers can cap
//! the step so that output lands exactly on requested radii.

use crate::error::{Error, Result};

/// Butcher tableau of Dormand–Prince 5(4).
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights (same as last A row) and 4th-order embedded weights.
const B5: [f64; 7] = [
    35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
    -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0,
];

pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub min_step: f64,
}

impl Default for DormandPrince {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, max_step: 0.1, min_step: 1e-12 }
    }
}

/// What the step-by-step driver should do after inspecting a state.
pub enum Control {
    Continue,
    Stop,
}

impl DormandPrince {
    /// Integrates y' = f(x, y) from `x0` to `x_end`, invoking `observe`
    /// after every accepted step. `observe` may cap the next step via
    /// the returned bound (used to land exactly on grid nodes) and may
    /// stop the integration early.
    pub fn integrate<const D: usize>(
        &self,
        f: impl Fn(f64, &[f64; D]) -> [f64; D],
        x0: f64,
        x_end: f64,
        y0: [f64; D],
        mut observe: impl FnMut(f64, &[f64; D]) -> (Control, f64),
    ) -> Result<(f64, [f64; D])> {
        let mut x = x0;
        let mut y = y0;
        let mut k0 = f(x, &y);
        let (ctrl, mut cap) = observe(x, &y);
        if matches!(ctrl, Control::Stop) {
            return Ok((x, y));
        }
        let mut h = self.max_step.min(cap).min(x_end - x0).max(self.min_step);
        let mut ks = [[0.0; D]; 7];

        while x < x_end {
            h = h.min(x_end - x).min(cap).min(self.max_step);
            ks[0] = k0;
            for stage in 0..6 {
                let mut yi = y;
                for (j, kj) in ks.iter().enumerate().take(stage + 1) {
                    let aij = A[stage][j];
                    if aij != 0.0 {
                        for d in 0..D {
                            yi[d] += h * aij * kj[d];
                        }
                    }
                }
                ks[stage + 1] = f(x + C[stage] * h, &yi);
            }
            let mut y5 = y;
            let mut err = 0.0f64;
            for d in 0..D {
                let mut s5 = 0.0;
                let mut s4 = 0.0;
                for j in 0..7 {
                    s5 += B5[j] * ks[j][d];
                    s4 += B4[j] * ks[j][d];
                }
                y5[d] += h * s5;
                let sc = self.atol + self.rtol * y[d].abs().max(y5[d].abs());
                err = err.max((h * (s5 - s4)).abs() / sc);
            }
            if !err.is_finite() {
                return Err(Error::Integration { at_r: x, reason: "non-finite error estimate".into() });
            }
            if err <= 1.0 {
                x += h;
                y = y5;
                k0 = ks[6]; // FSAL
                let (ctrl, new_cap) = observe(x, &y);
                cap = new_cap;
                if matches!(ctrl, Control::Stop) {
                    return Ok((x, y));
                }
            }
            let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
            h *= factor.clamp(0.2, 5.0);
            if h < self.min_step {
                return Err(Error::Integration { at_r: x, reason: format!("step underflow (h = {h:.3e})") });
            }
        }
        Ok((x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let dp = DormandPrince::default();
        let (_, y) = dp
            .integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, 5.0, [1.0], |_, _| (Control::Continue, f64::INFINITY))
            .unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let dp = DormandPrince { max_step: 0.05, ..Default::default() };
        let (_, y) = dp
            .integrate(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                20.0 * std::f64::consts::PI,
                [1.0, 0.0],
                |_, _| (Control::Continue, f64::INFINITY),
            )
            .unwrap();
        let energy = y[0] * y[0] + y[1] * y[1];
        assert!((energy - 1.0).abs() < 1e-10);
    }
}
