//! Tower and nested-tower center configurations.
//!
//! A double tower places 2k bubbles on the top and bottom circles of a
//! cylinder: for j = 1..k,
//!
//! ```text
//! x_j^± = r (√(1−h²) cos(2(j−1)π/k), √(1−h²) sin(2(j−1)π/k), ±h, 0, …, 0).
//! ```
//!
//! A nested tower repeats the pattern in coordinates (4,5,6) with
//! parameters (n, t, l). Points are materialized in full N-dimensional
//! coordinates so downstream field evaluation needs no special-casing.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One point in R^N.
pub type Point = Vec<f64>;

/// Double-tower configuration (k bubbles per layer, radius r, height
/// parameter h ∈ [0,1), ambient dimension N ≥ 3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TowerConfig {
    pub k: usize,
    pub r: f64,
    pub h: f64,
    pub n_dim: usize,
}

impl TowerConfig {
    pub fn new(k: usize, r: f64, h: f64, n_dim: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("tower needs k ≥ 2, got {k}")));
        }
        if !(r > 0.0) {
            return Err(Error::InvalidParams(format!("tower radius must be > 0, got {r}")));
        }
        if !(0.0..1.0).contains(&h) {
            return Err(Error::InvalidParams(format!("height parameter must be in [0,1), got {h}")));
        }
        if n_dim < 3 {
            return Err(Error::Dimension { required: 3, actual: n_dim });
        }
        Ok(Self { k, r, h, n_dim })
    }
}

/// Nested configuration (n bubbles per layer in coordinates 4–6).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedConfig {
    pub n: usize,
    pub t: f64,
    pub l: f64,
    pub n_dim: usize,
}

impl NestedConfig {
    pub fn new(n: usize, t: f64, l: f64, n_dim: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("nested tower needs n ≥ 2, got {n}")));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidParams(format!("nested radius must be > 0, got {t}")));
        }
        if !(0.0..1.0).contains(&l) {
            return Err(Error::InvalidParams(format!("height parameter must be in [0,1), got {l}")));
        }
        if n_dim < 6 {
            return Err(Error::Dimension { required: 6, actual: n_dim });
        }
        Ok(Self { n, t, l, n_dim })
    }
}

/// The 2k tower centers, upper layer first (j = 1..k), then the lower.
pub fn tower_points(cfg: &TowerConfig) -> Vec<Point> {
    let rho = cfg.r * (1.0 - cfg.h * cfg.h).sqrt();
    let z = cfg.r * cfg.h;
    let mut points = Vec::with_capacity(2 * cfg.k);
    for sign in [1.0, -1.0] {
        for j in 0..cfg.k {
            let theta = 2.0 * j as f64 * std::f64::consts::PI / cfg.k as f64;
            let mut pt = vec![0.0; cfg.n_dim];
            pt[0] = rho * theta.cos();
            pt[1] = rho * theta.sin();
            pt[2] = sign * z;
            points.push(pt);
        }
    }
    points
}

/// The 2n nested centers in coordinates (4,5,6).
pub fn nested_points(cfg: &NestedConfig) -> Vec<Point> {
    let rho = cfg.t * (1.0 - cfg.l * cfg.l).sqrt();
    let z = cfg.t * cfg.l;
    let mut points = Vec::with_capacity(2 * cfg.n);
    for sign in [1.0, -1.0] {
        for j in 0..cfg.n {
            let theta = 2.0 * j as f64 * std::f64::consts::PI / cfg.n as f64;
            let mut pt = vec![0.0; cfg.n_dim];
            pt[3] = rho * theta.cos();
            pt[4] = rho * theta.sin();
            pt[5] = sign * z;
            points.push(pt);
        }
    }
    points
}

/// Closed-form nearest distances of a tower:
/// `d_neighbor = 2r√(1−h²) sin(π/k)` within a layer and
/// `d_layer = 2rh` across layers.
pub fn nearest_distances(cfg: &TowerConfig) -> (f64, f64) {
    let d_neighbor =
        2.0 * cfg.r * (1.0 - cfg.h * cfg.h).sqrt() * (std::f64::consts::PI / cfg.k as f64).sin();
    let d_layer = 2.0 * cfg.r * cfg.h;
    (d_neighbor, d_layer)
}

/// Same distances for a nested configuration.
pub fn nested_nearest_distances(cfg: &NestedConfig) -> (f64, f64) {
    let d_neighbor =
        2.0 * cfg.t * (1.0 - cfg.l * cfg.l).sqrt() * (std::f64::consts::PI / cfg.n as f64).sin();
    let d_layer = 2.0 * cfg.t * cfg.l;
    (d_neighbor, d_layer)
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// True iff the point set is invariant (as a set, to 1e−12) under the
/// three generators of the tower symmetry class: rotation by 2π/k in
/// the (y1,y2)-plane, reflection y2 ↦ −y2, and reflection y3 ↦ −y3.
pub fn symmetry_orbit_check(points: &[Point], k: usize) -> bool {
    if points.is_empty() {
        return false;
    }
    let theta = 2.0 * std::f64::consts::PI / k as f64;
    let (c, s) = (theta.cos(), theta.sin());
    let rotate = |p: &Point| {
        let mut q = p.clone();
        q[0] = c * p[0] - s * p[1];
        q[1] = s * p[0] + c * p[1];
        q
    };
    let reflect2 = |p: &Point| {
        let mut q = p.clone();
        if q.len() > 1 {
            q[1] = -q[1];
        }
        q
    };
    let reflect3 = |p: &Point| {
        let mut q = p.clone();
        if q.len() > 2 {
            q[2] = -q[2];
        }
        q
    };
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1.0);
    let contains = |q: &Point| {
        points.iter().any(|p| {
            p.iter().zip(q).all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
        })
    };
    for transform in [&rotate as &dyn Fn(&Point) -> Point, &reflect2, &reflect3] {
        for p in points {
            if !contains(&transform(p)) {
                return false;
            }
        }
    }
    true
}

/// Admissible rectangle in the (r, h) plane: the search window for the
/// tower critical point,
/// `[(m−α1)/2π · k ln k, (m+α1)/2π · k ln k] × [(π(m+2)−α2)/(mk), (π(m+2)+α2)/(mk)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRect {
    pub r_lo: f64,
    pub r_hi: f64,
    pub h_lo: f64,
    pub h_hi: f64,
}

impl ParamRect {
    pub fn contains(&self, r: f64, h: f64) -> bool {
        r > self.r_lo && r < self.r_hi && h > self.h_lo && h < self.h_hi
    }
}

/// Default half-width α1 of the radial window.
pub fn default_alpha1(m: f64) -> f64 {
    m / 4.0
}

/// Default half-width α2 of the height window.
pub fn default_alpha2(m: f64) -> f64 {
    std::f64::consts::PI * (m + 2.0) / (2.0 * m)
}

/// The window 𝒮_k (or 𝒯_n — the nested family uses the same shape)
/// with user-chosen half-widths.
pub fn admissible_rect(m: f64, k: usize, alpha1: f64, alpha2: f64) -> ParamRect {
    let kf = k as f64;
    let scale = kf * kf.ln();
    let two_pi = 2.0 * std::f64::consts::PI;
    ParamRect {
        r_lo: (m - alpha1) / two_pi * scale,
        r_hi: (m + alpha1) / two_pi * scale,
        h_lo: (std::f64::consts::PI * (m + 2.0) - alpha2) / (m * kf),
        h_hi: (std::f64::consts::PI * (m + 2.0) + alpha2) / (m * kf),
    }
}

/// Writes a point set as CSV, one point per row.
pub fn points_to_csv(points: &[Point]) -> String {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
