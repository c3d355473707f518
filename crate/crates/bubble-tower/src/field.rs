//! The bubble-sum ansatz W = Σ U(|y − c|), its residual as an exact
//! solution, and the center-weighted sup norm ‖·‖_*.
//!
//! The residual of the pure sum under −Δu + V u = u^p splits into a
//! potential-tail term and a nonlinear cross term:
//!
//! ```text
//! l(y) = −(V(|y|) − 1) Σ U_c  +  ( W^p − Σ U_c^p ).
//! ```
//!
//! ‖·‖_* weighs the sup by Σ_c e^(−τ|y−c|), anchoring it to the
//! centers; the true sup over R^N is approximated on a structured,
//! refinement-nested sample set targeting the known extremal regions
//! (center neighborhoods, neighbor midlines, the origin spokes) plus a
//! Halton fill.

use crate::coefficients::compute_all;
use crate::energy::critical_config;
use crate::error::Result;
use crate::geometry::{tower_points, Point, TowerConfig};
use crate::model::{potential_value, ModelParams};
use crate::profile::RadialProfile;
use serde::{Deserialize, Serialize};

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// W(y) = Σ_c U(|y − c|).
pub fn sum_of_bubbles(profile: &RadialProfile, centers: &[Point], y: &[f64]) -> f64 {
    centers.iter().map(|c| profile.value(distance(y, c))).sum()
}

/// W and ∇W by the chain rule on the radial profile.
pub fn sum_of_bubbles_grad(
    profile: &RadialProfile,
    centers: &[Point],
    y: &[f64],
) -> (f64, Vec<f64>) {
    let mut value = 0.0;
    let mut grad = vec![0.0; y.len()];
    for c in centers {
        let rho = distance(y, c);
        let (u, du, _) = profile.eval(rho);
        value += u;
        if rho > 0.0 {
            for i in 0..y.len() {
                grad[i] += du * (y[i] - c[i]) / rho;
            }
        }
    }
    (value, grad)
}

/// Pointwise residual of the bubble sum for an arbitrary center list
/// (tower, nested, or their union).
pub fn residual_at(
    profile: &RadialProfile,
    params: &ModelParams,
    centers: &[Point],
    y: &[f64],
) -> f64 {
    let p = params.p;
    let mut w = 0.0;
    let mut sum_up = 0.0;
    for c in centers {
        let u = profile.value(distance(y, c));
        w += u;
        sum_up += u.powf(p);
    }
    let radius = y.iter().map(|x| x * x).sum::<f64>().sqrt();
    -(potential_value(params, radius) - 1.0) * w + (w.powf(p) - sum_up)
}

/// Residual of a double-tower configuration at y.
pub fn residual_lk(
    profile: &RadialProfile,
    params: &ModelParams,
    cfg: &TowerConfig,
    y: &[f64],
) -> f64 {
    residual_at(profile, params, &tower_points(cfg), y)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarNormReport {
    pub value: f64,
    pub argmax_point: Point,
    pub tau: f64,
    pub sample_count: usize,
}

/// Deterministic sample set; level L+1 is a superset of level L, so
/// the reported sup is nondecreasing under refinement.
#[derive(Debug, Clone, Copy)]
pub struct SamplingStrategy {
    pub level: u32,
    /// Half-width of the center-anchored boxes and rays.
    pub reach: f64,
}

impl Default for SamplingStrategy {
    fn default() -> Self {
        Self { level: 1, reach: 8.0 }
    }
}

fn halton(index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index + 1;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn sample_points(centers: &[Point], strategy: &SamplingStrategy) -> Vec<Point> {
    let dim = centers[0].len();
    let reach = strategy.reach;
    let ray_n = (1usize << (4 + strategy.level)) + 1;
    let mut pts: Vec<Point> = Vec::new();

    let unit = |v: &[f64]| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            None
        } else {
            Some(v.iter().map(|x| x / n).collect::<Vec<f64>>())
        }
    };

    for (ci, c) in centers.iter().enumerate() {
        // rays: radial spoke, vertical axis, and the in-plane tangent
        let mut dirs: Vec<Point> = Vec::new();
        if let Some(rad) = unit(c) {
            dirs.push(rad);
        }
        let mut ez = vec![0.0; dim];
        ez[2.min(dim - 1)] = 1.0;
        dirs.push(ez);
        if dim >= 2 {
            let mut tan = vec![0.0; dim];
            tan[0] = -c[1];
            tan[1] = c[0];
            if let Some(t) = unit(&tan) {
                dirs.push(t);
            }
        }
        for dir in &dirs {
            for i in 0..ray_n {
                let t = -reach + 2.0 * reach * i as f64 / (ray_n - 1) as f64;
                pts.push(c.iter().zip(dir).map(|(a, d)| a + t * d).collect());
            }
        }
        // segments to the next center in the list, the mirror partner
        // (offset by half the list), and the origin
        let half = centers.len() / 2;
        let partners = [
            &centers[(ci + 1) % centers.len()],
            &centers[(ci + half) % centers.len()],
        ];
        for partner in partners {
            for i in 0..ray_n {
                let lam = i as f64 / (ray_n - 1) as f64;
                pts.push(c.iter().zip(partner.iter()).map(|(a, b)| a + lam * (b - a)).collect());
            }
        }
        for i in 0..ray_n {
            let lam = i as f64 / (ray_n - 1) as f64;
            pts.push(c.iter().map(|a| a * lam).collect());
        }
    }
    // low-discrepancy fill around the first center
    let fill = 1usize << (9 + strategy.level);
    let bases = [2usize, 3, 5, 7, 11, 13, 17];
    for i in 0..fill {
        let mut p = centers[0].clone();
        for (d, slot) in p.iter_mut().enumerate().take(dim.min(bases.len())) {
            *slot += reach * (2.0 * halton(i, bases[d]) - 1.0);
        }
        pts.push(p);
    }
    pts
}

/// Approximates sup_y |f(y)| / Σ_c e^(−τ|y−c|) over the structured
/// sample set; ties broken toward the lexicographically smaller point.
pub fn star_norm(
    f: impl Fn(&[f64]) -> f64,
    centers: &[Point],
    tau: f64,
    strategy: &SamplingStrategy,
) -> StarNormReport {
    assert!(!centers.is_empty(), "star norm needs at least one center");
    assert!(tau > 0.0 && tau < 1.0, "tau must lie in (0,1)");
    let pts = sample_points(centers, strategy);
    let mut best = f64::NEG_INFINITY;
    let mut best_point = pts[0].clone();
    for p in &pts {
        let weight: f64 = centers.iter().map(|c| (-tau * distance(p, c)).exp()).sum();
        let v = f(p).abs() / weight;
        let lex_smaller = |a: &[f64], b: &[f64]| {
            for (x, y) in a.iter().zip(b) {
                if x < y {
                    return true;
                }
                if x > y {
                    return false;
                }
            }
            false
        };
        if v > best || (v == best && lex_smaller(p, &best_point)) {
            best = v;
            best_point = p.clone();
        }
    }
    StarNormReport { value: best, argmax_point: best_point, tau, sample_count: pts.len() }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LkDecayPoint {
    pub k: usize,
    pub star_norm: f64,
    pub argmax_point: Point,
    pub r: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LkDecaySweep {
    pub points: Vec<LkDecayPoint>,
    /// Least-squares slope of ln‖l_k‖_* against ln k.
    pub slope: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
    /// Normal-approximation 95% confidence interval.
    pub slope_ci95: (f64, f64),
}

/// ‖l_k‖_* at the critical configuration of each k, with the fitted
/// log–log decay slope.
pub fn lk_decay_sweep(
    profile: &RadialProfile,
    params: &ModelParams,
    k_list: &[usize],
) -> Result<LkDecaySweep> {
    if k_list.len() < 4 {
        return Err(crate::error::Error::InvalidParams(
            "decay fit needs at least four bubble counts".into(),
        ));
    }
    let coeffs = compute_all(profile, params.a1)?;
    let strategy = SamplingStrategy::default();
    let mut points = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let (cfg, _) = critical_config(&coeffs, params, k)?;
        let centers = tower_points(&cfg);
        let report = star_norm(
            |y| residual_at(profile, params, &centers, y),
            &centers,
            params.tau,
            &strategy,
        );
        points.push(LkDecayPoint {
            k,
            star_norm: report.value,
            argmax_point: report.argmax_point,
            r: cfg.r,
            h: cfg.h,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.k as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.star_norm.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let stderr = (ss_res / (n - 2.0).max(1.0) / sxx).sqrt();
    Ok(LkDecaySweep {
        points,
        slope,
        slope_stderr: stderr,
        slope_ci95: (slope - 1.96 * stderr, slope + 1.96 * stderr),
    })
}
