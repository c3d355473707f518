//! Boundary bilinear forms and the integration-by-parts identity
//! behind the local Pohozaev argument.
//!
//! For a direction j and a bounded domain Ω the form
//!
//! ```text
//! I_j(u, ξ, Ω) = −∮ u_ν ξ_j − ∮ ξ_ν u_j + ∮ ⟨∇u,∇ξ⟩ ν_j + ∮ u ξ ν_j
//! ```
//!
//! ties to the volume through a relation that holds for *any* smooth
//! pair (pure integration by parts):
//!
//! ```text
//! −∮ u_ν ξ_j − ∮ ξ_ν u_j + ∮ ⟨∇u,∇ξ⟩ν_j + ∮ V uξ ν_j − ∮ u^p ξ ν_j
//!   = ∫ uξ ∂V/∂y_j + ∫ (−Δu + Vu − u^p) ξ_j + ∫ (−Δξ + Vξ − pu^(p−1)ξ) u_j .
//! ```
//!
//! When u solves the equation and ξ its linearization, the two volume
//! PDE terms vanish and the classical identity remains; on a grid the
//! assembled defect of the general relation is pure discretization
//! error and must shrink at second order — that is the testable
//! surrogate this module verifies.
//!
//! Domains are axis-aligned boxes with vertex-centered uniform grids
//! (midpoint surface quadrature, one-sided second-order boundary
//! gradients, 7-point/5-point Laplacians) and, for bubble-pair
//! estimates, balls with a Gauss–Legendre latitude × uniform longitude
//! product rule evaluated against analytic profile fields.

use crate::error::{Error, Result};
use crate::geometry::{nearest_distances, tower_points, TowerConfig};
use crate::model::{potential_grad_radial, potential_value, ModelParams};
use crate::numerics::quad::gauss_legendre;
use crate::profile::RadialProfile;
use serde::{Deserialize, Serialize};

/// Axis-aligned box with `cells[a]` uniform cells along axis a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub cells: Vec<usize>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, cells: Vec<usize>) -> Result<Self> {
        let dim = lo.len();
        if !(dim == 2 || dim == 3) || hi.len() != dim || cells.len() != dim {
            return Err(Error::ShapeMismatch("box must be 2- or 3-dimensional".into()));
        }
        if cells.iter().any(|&n| n < 16) {
            return Err(Error::InvalidParams(
                "domain boundary must be resolved by at least 16 cells per side".into(),
            ));
        }
        let h0 = (hi[0] - lo[0]) / cells[0] as f64;
        for a in 0..dim {
            if !(hi[a] > lo[a]) {
                return Err(Error::InvalidParams("box must have positive extent".into()));
            }
            let h = (hi[a] - lo[a]) / cells[a] as f64;
            if ((h - h0) / h0).abs() > 1e-12 {
                return Err(Error::InvalidParams("grid spacing must be uniform across axes".into()));
            }
        }
        Ok(Self { lo, hi, cells })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn spacing(&self) -> f64 {
        (self.hi[0] - self.lo[0]) / self.cells[0] as f64
    }

    fn nodes(&self) -> Vec<usize> {
        self.cells.iter().map(|n| n + 1).collect()
    }

    fn node_count(&self) -> usize {
        self.nodes().iter().product()
    }

    fn point(&self, idx: &[usize]) -> Vec<f64> {
        let h = self.spacing();
        idx.iter().enumerate().map(|(a, &i)| self.lo[a] + i as f64 * h).collect()
    }
}

/// Nodal scalar field on a box grid.
#[derive(Debug, Clone)]
pub struct GridField {
    pub domain: BoxDomain,
    pub values: Vec<f64>,
}

impl GridField {
    /// Samples `f` at every grid node.
    pub fn from_fn(domain: BoxDomain, f: impl Fn(&[f64]) -> f64) -> Self {
        let nodes = domain.nodes();
        let mut values = Vec::with_capacity(domain.node_count());
        let mut idx = vec![0usize; domain.dim()];
        loop {
            values.push(f(&domain.point(&idx)));
            // odometer increment
            let mut a = 0;
            loop {
                idx[a] += 1;
                if idx[a] < nodes[a] {
                    break;
                }
                idx[a] = 0;
                a += 1;
                if a == domain.dim() {
                    return Self { domain, values };
                }
            }
        }
    }


}

/// Nodal gradient (per axis) and Laplacian tables: central stencils in
/// the interior, one-sided second-order formulas (3-point gradients,
/// 4-point second derivatives) on the boundary. One sweep per field.
struct NodalTables {
    grad: Vec<Vec<f64>>,
    lap: Vec<f64>,
}

fn precompute(field: &GridField) -> NodalTables {
    let domain = &field.domain;
    let dim = domain.dim();
    let nodes = domain.nodes();
    let count = domain.node_count();
    let h = domain.spacing();
    let h2 = h * h;
    let mut strides = vec![1usize; dim];
    for a in 1..dim {
        strides[a] = strides[a - 1] * nodes[a - 1];
    }
    let v = &field.values;
    let mut grad = vec![vec![0.0; count]; dim];
    let mut lap = vec![0.0; count];
    let mut idx = vec![0usize; dim];
    for lin in 0..count {
        for a in 0..dim {
            let s = strides[a];
            let i = idx[a];
            let n = nodes[a];
            let (d1, d2) = if i == 0 {
                (
                    (-3.0 * v[lin] + 4.0 * v[lin + s] - v[lin + 2 * s]) / (2.0 * h),
                    (2.0 * v[lin] - 5.0 * v[lin + s] + 4.0 * v[lin + 2 * s] - v[lin + 3 * s]) / h2,
                )
            } else if i == n - 1 {
                (
                    (3.0 * v[lin] - 4.0 * v[lin - s] + v[lin - 2 * s]) / (2.0 * h),
                    (2.0 * v[lin] - 5.0 * v[lin - s] + 4.0 * v[lin - 2 * s] - v[lin - 3 * s]) / h2,
                )
            } else {
                (
                    (v[lin + s] - v[lin - s]) / (2.0 * h),
                    (v[lin - s] - 2.0 * v[lin] + v[lin + s]) / h2,
                )
            };
            grad[a][lin] = d1;
            lap[lin] += d2;
        }
        for a in 0..dim {
            idx[a] += 1;
            if idx[a] < nodes[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    NodalTables { grad, lap }
}

fn check_same_grid(u: &GridField, xi: &GridField) -> Result<()> {
    if u.domain != xi.domain {
        return Err(Error::ShapeMismatch("fields live on different grids".into()));
    }
    if !(1..=u.domain.dim()).contains(&usize::MAX) && u.values.len() != xi.values.len() {
        return Err(Error::ShapeMismatch("node counts differ".into()));
    }
    Ok(())
}

/// Iterates the face cells of the box: calls `visit(face_nodes)` with
/// the 2^(d−1) node indices of each surface cell, together with the
/// face axis and the outward sign.
fn for_each_face_cell(
    domain: &BoxDomain,
    mut visit: impl FnMut(usize, f64, &[Vec<usize>]),
) {
    let dim = domain.dim();
    let nodes = domain.nodes();
    for axis in 0..dim {
        for (side_idx, sign) in [(0usize, -1.0), (nodes[axis] - 1, 1.0)] {
            let others: Vec<usize> = (0..dim).filter(|&a| a != axis).collect();
            let mut counter = vec![0usize; others.len()];
            loop {
                // corners of this face cell
                let mut corners: Vec<Vec<usize>> = Vec::with_capacity(1 << others.len());
                for bits in 0..(1usize << others.len()) {
                    let mut idx = vec![0usize; dim];
                    idx[axis] = side_idx;
                    for (b, &a) in others.iter().enumerate() {
                        idx[a] = counter[b] + ((bits >> b) & 1);
                    }
                    corners.push(idx);
                }
                visit(axis, sign, &corners);
                let mut a = 0;
                loop {
                    if a == others.len() {
                        break;
                    }
                    counter[a] += 1;
                    if counter[a] < nodes[others[a]] - 1 {
                        break;
                    }
                    counter[a] = 0;
                    a += 1;
                }
                if a == others.len() {
                    break;
                }
            }
        }
    }
}

/// Per-term surface integrals of the bilinear form and the volume
/// pieces of the generalized identity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PohozaevReport {
    pub direction: usize,
    /// −∮ (∂u/∂ν)(∂ξ/∂y_j)
    pub surf_normal_u: f64,
    /// −∮ (∂ξ/∂ν)(∂u/∂y_j)
    pub surf_normal_xi: f64,
    /// +∮ ⟨∇u, ∇ξ⟩ ν_j
    pub surf_grad_dot: f64,
    /// +∮ u ξ ν_j (the zeroth-order term of the bilinear form)
    pub surf_plain: f64,
    /// +∮ V u ξ ν_j
    pub surf_v_weighted: f64,
    /// −∮ u^p ξ ν_j
    pub surf_up_weighted: f64,
    /// ∫ uξ ∂V/∂y_j
    pub vol_dv: f64,
    /// ∫ (−Δu + Vu − u^p) ∂ξ/∂y_j
    pub vol_pde_u: f64,
    /// ∫ (−Δξ + Vξ − pu^(p−1)ξ) ∂u/∂y_j
    pub vol_pde_xi: f64,
    /// (five Lemma-form surface terms) − (three volume terms); pure
    /// discretization error for smooth fields.
    pub residual: f64,
}

/// Radial potential driving the identity: the concrete model family
/// or an exactly constant background (whose gradient term vanishes
/// identically).
#[derive(Debug, Clone, Copy)]
pub enum Potential<'a> {
    Model(&'a ModelParams),
    Constant(f64),
}

impl Potential<'_> {
    fn value(&self, radius: f64) -> f64 {
        match self {
            Potential::Model(p) => potential_value(p, radius),
            Potential::Constant(c) => *c,
        }
    }

    fn grad_component(&self, point: &[f64], j: usize) -> f64 {
        match self {
            Potential::Model(p) => {
                let radius = point.iter().map(|x| x * x).sum::<f64>().sqrt();
                if radius == 0.0 {
                    0.0
                } else {
                    potential_grad_radial(p, radius) * point[j] / radius
                }
            }
            Potential::Constant(_) => 0.0,
        }
    }
}

/// The bilinear form I_j(u, ξ, Ω) over the box boundary, by midpoint
/// surface quadrature with one-sided second-order boundary gradients.
pub fn bilinear_form_ij(u: &GridField, xi: &GridField, j: usize) -> Result<f64> {
    let t = assemble(u, xi, &Potential::Constant(1.0), 2.0, j, false)?;
    Ok(t.surf_normal_u + t.surf_normal_xi + t.surf_grad_dot + t.surf_plain)
}

/// Assembles every term of the generalized identity; `residual` must
/// converge to zero at second order for any smooth pair.
pub fn generalized_identity_residual(
    u: &GridField,
    xi: &GridField,
    potential: &Potential,
    p: f64,
    j: usize,
) -> Result<PohozaevReport> {
    assemble(u, xi, potential, p, j, false)
}

fn assemble(
    u: &GridField,
    xi: &GridField,
    potential: &Potential,
    p: f64,
    j: usize,
    symmetric_coupling: bool,
) -> Result<PohozaevReport> {
    check_same_grid(u, xi)?;
    let domain = &u.domain;
    let dim = domain.dim();
    if j >= dim {
        return Err(Error::InvalidParams(format!("direction {j} out of range for dim {dim}")));
    }
    let h = domain.spacing();
    let face_weight = h.powi(dim as i32 - 1);
    let nodes = domain.nodes();
    let count = domain.node_count();
    let mut strides = vec![1usize; dim];
    for a in 1..dim {
        strides[a] = strides[a - 1] * nodes[a - 1];
    }
    let tu = precompute(u);
    let txi = precompute(xi);
    // potential value and j-gradient, one sweep
    let mut v_table = vec![0.0; count];
    let mut dv_table = vec![0.0; count];
    {
        let mut idx = vec![0usize; dim];
        for lin in 0..count {
            let pt = domain.point(&idx);
            let radius = pt.iter().map(|x| x * x).sum::<f64>().sqrt();
            v_table[lin] = potential.value(radius);
            dv_table[lin] = potential.grad_component(&pt, j);
            for a in 0..dim {
                idx[a] += 1;
                if idx[a] < nodes[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
    let linear_of = |idx: &[usize]| -> usize {
        idx.iter().zip(&strides).map(|(i, s)| i * s).sum()
    };

    let mut surf_normal_u = 0.0;
    let mut surf_normal_xi = 0.0;
    let mut surf_grad_dot = 0.0;
    let mut surf_plain = 0.0;
    let mut surf_v = 0.0;
    let mut surf_up = 0.0;

    for_each_face_cell(domain, |axis, sign, corners| {
        // cell-center values as corner means (second order at midpoints)
        let lins: Vec<usize> = corners.iter().map(|c| linear_of(c)).collect();
        let w = 1.0 / lins.len() as f64;
        let mean = |table: &[f64]| lins.iter().map(|&l| table[l]).sum::<f64>() * w;
        let uval = mean(&u.values);
        let xival = mean(&xi.values);
        let vval = mean(&v_table);
        let ugrad: Vec<f64> = (0..dim).map(|a| mean(&tu.grad[a])).collect();
        let xigrad: Vec<f64> = (0..dim).map(|a| mean(&txi.grad[a])).collect();
        let nu_j = if axis == j { sign } else { 0.0 };
        let u_nu = sign * ugrad[axis];
        let xi_nu = sign * xigrad[axis];
        let dot: f64 = ugrad.iter().zip(&xigrad).map(|(a, b)| a * b).sum();

        surf_normal_u += -u_nu * xigrad[j] * face_weight;
        surf_normal_xi += -xi_nu * ugrad[j] * face_weight;
        surf_grad_dot += dot * nu_j * face_weight;
        surf_plain += uval * xival * nu_j * face_weight;
        surf_v += vval * uval * xival * nu_j * face_weight;
        surf_up += -uval.abs().powf(p - 1.0) * uval * xival * nu_j * face_weight;
    });

    // volume terms by cell-midpoint rule over corner means
    let mut vol_dv = 0.0;
    let mut vol_pde_u = 0.0;
    let mut vol_pde_xi = 0.0;
    let cell_weight = h.powi(dim as i32);
    let corners = 1usize << dim;
    let corner_w = 1.0 / corners as f64;
    // linear offsets of the 2^dim cell corners
    let offsets: Vec<usize> = (0..corners)
        .map(|bits| (0..dim).map(|a| ((bits >> a) & 1) * strides[a]).sum())
        .collect();
    let mut counter = vec![0usize; dim];
    'cells: loop {
        let base = linear_of(&counter);
        let mut uval = 0.0;
        let mut xival = 0.0;
        let mut du_j = 0.0;
        let mut dxi_j = 0.0;
        let mut lap_u = 0.0;
        let mut lap_xi = 0.0;
        let mut dv_j = 0.0;
        let mut vval = 0.0;
        for off in &offsets {
            let l = base + off;
            uval += u.values[l];
            xival += xi.values[l];
            du_j += tu.grad[j][l];
            dxi_j += txi.grad[j][l];
            lap_u += tu.lap[l];
            lap_xi += txi.lap[l];
            vval += v_table[l];
            dv_j += dv_table[l];
        }
        uval *= corner_w;
        xival *= corner_w;
        du_j *= corner_w;
        dxi_j *= corner_w;
        lap_u *= corner_w;
        lap_xi *= corner_w;
        vval *= corner_w;
        dv_j *= corner_w;

        vol_dv += uval * xival * dv_j * cell_weight;
        let up = uval.abs().powf(p - 1.0) * uval;
        vol_pde_u += (-lap_u + vval * uval - up) * dxi_j * cell_weight;
        let coupling = if symmetric_coupling {
            xival.abs().powf(p - 1.0) * xival
        } else {
            p * uval.abs().powf(p - 1.0) * xival
        };
        vol_pde_xi += (-lap_xi + vval * xival - coupling) * du_j * cell_weight;

        let mut a = 0;
        loop {
            if a == dim {
                break 'cells;
            }
            counter[a] += 1;
            if counter[a] < nodes[a] - 1 {
                break;
            }
            counter[a] = 0;
            a += 1;
        }
    }

    let lhs = surf_normal_u + surf_normal_xi + surf_grad_dot + surf_v + surf_up;
    let rhs = vol_dv + vol_pde_u + vol_pde_xi;
    Ok(PohozaevReport {
        direction: j,
        surf_normal_u,
        surf_normal_xi,
        surf_grad_dot,
        surf_plain,
        surf_v_weighted: surf_v,
        surf_up_weighted: surf_up,
        vol_dv,
        vol_pde_u,
        vol_pde_xi,
        residual: lhs - rhs,
    })
}

/// Analytic scalar field with gradient, for ball-surface quadrature.
pub trait AnalyticField {
    fn value(&self, y: &[f64; 3]) -> f64;
    fn gradient(&self, y: &[f64; 3]) -> [f64; 3];
}

/// Ball with a Gauss–Legendre latitude rule (nodes clustered toward
/// the poles in arclength) × uniform longitude rule.
#[derive(Debug, Clone, Copy)]
pub struct Ball {
    pub center: [f64; 3],
    pub radius: f64,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Ball {
    pub fn new(center: [f64; 3], radius: f64) -> Self {
        Self { center, radius, n_theta: 64, n_phi: 128 }
    }
}

/// I_j(u, ξ, ball) by surface quadrature of analytic fields.
pub fn bilinear_form_ij_ball(
    u: &dyn AnalyticField,
    xi: &dyn AnalyticField,
    j: usize,
    ball: &Ball,
) -> f64 {
    assert!(j < 3);
    let (ct_nodes, ct_weights) = gauss_legendre(ball.n_theta);
    let dphi = 2.0 * std::f64::consts::PI / ball.n_phi as f64;
    let mut total = 0.0;
    for (ct, wt) in ct_nodes.iter().zip(&ct_weights) {
        let st = (1.0 - ct * ct).sqrt();
        for iphi in 0..ball.n_phi {
            let phi = (iphi as f64 + 0.5) * dphi;
            let nu = [st * phi.cos(), st * phi.sin(), *ct];
            let y = [
                ball.center[0] + ball.radius * nu[0],
                ball.center[1] + ball.radius * nu[1],
                ball.center[2] + ball.radius * nu[2],
            ];
            let gu = u.gradient(&y);
            let gxi = xi.gradient(&y);
            let u_nu = gu[0] * nu[0] + gu[1] * nu[1] + gu[2] * nu[2];
            let xi_nu = gxi[0] * nu[0] + gxi[1] * nu[1] + gxi[2] * nu[2];
            let dot = gu[0] * gxi[0] + gu[1] * gxi[1] + gu[2] * gxi[2];
            let integrand = -u_nu * gxi[j] - xi_nu * gu[j]
                + dot * nu[j]
                + u.value(&y) * xi.value(&y) * nu[j];
            total += integrand * wt * dphi;
        }
    }
    total * ball.radius * ball.radius
}

/// A translated bubble U(|y − c|) as an analytic field.
pub struct BubbleField<'a> {
    pub profile: &'a RadialProfile,
    pub center: [f64; 3],
}

impl AnalyticField for BubbleField<'_> {
    fn value(&self, y: &[f64; 3]) -> f64 {
        let d = dist3(y, &self.center);
        self.profile.value(d)
    }

    fn gradient(&self, y: &[f64; 3]) -> [f64; 3] {
        let d = dist3(y, &self.center);
        let (_, du, _) = self.profile.eval(d);
        if d == 0.0 {
            return [0.0; 3];
        }
        [
            du * (y[0] - self.center[0]) / d,
            du * (y[1] - self.center[1]) / d,
            du * (y[2] - self.center[2]) / d,
        ]
    }
}

/// The parameter derivative −U′(|y−c|)⟨e, w⟩ of a translated bubble
/// (w is the velocity of the center under the configuration
/// parameter).
pub struct BubbleParamDerivative<'a> {
    pub profile: &'a RadialProfile,
    pub center: [f64; 3],
    pub velocity: [f64; 3],
}

impl AnalyticField for BubbleParamDerivative<'_> {
    fn value(&self, y: &[f64; 3]) -> f64 {
        let d = dist3(y, &self.center);
        if d == 0.0 {
            return 0.0;
        }
        let (_, du, _) = self.profile.eval(d);
        let e = unit3(y, &self.center, d);
        -du * (e[0] * self.velocity[0] + e[1] * self.velocity[1] + e[2] * self.velocity[2])
    }

    fn gradient(&self, y: &[f64; 3]) -> [f64; 3] {
        let d = dist3(y, &self.center);
        let (_, du, ddu) = self.profile.eval(d);
        let e = unit3(y, &self.center, d);
        let ew = e[0] * self.velocity[0] + e[1] * self.velocity[1] + e[2] * self.velocity[2];
        let mut g = [0.0; 3];
        for a in 0..3 {
            g[a] = -(ddu * ew * e[a] + du * (self.velocity[a] - ew * e[a]) / d);
        }
        g
    }
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn unit3(a: &[f64; 3], b: &[f64; 3], d: f64) -> [f64; 3] {
    [(a[0] - b[0]) / d, (a[1] - b[1]) / d, (a[2] - b[2]) / d]
}

/// Which configuration parameter differentiates the second bubble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamDirection {
    Radius,
    Height,
}

/// Bubble-pair boundary estimate over Ω = B(x₁⁺, |x₂⁺−x₁⁺|/2): the
/// form I_ℓ(U_{x_i}, ∂U_{x_j}/∂(r|h), Ω) against the exponential
/// smallness bound e^(−((p+1)/2 − σ) d_neighbor), σ = 0.05.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BubblePairReport {
    pub i_ell: f64,
    /// ∮ U_{x_j}^p ξ ν_ℓ — the single term the form collapses to when
    /// both constituents solve their equations (i = j case).
    pub up_surface_term: f64,
    pub bound: f64,
    pub d_neighbor: f64,
}

/// `pair` = (i, sign_i, j, sign_j) with 1-based in-layer indices and
/// layer signs; `ell` ∈ {1, 3} is the Pohozaev direction (1-based
/// coordinate axis).
pub fn bubble_pair_boundary_estimates(
    profile: &RadialProfile,
    cfg: &TowerConfig,
    pair: (usize, bool, usize, bool),
    ell: usize,
    direction: ParamDirection,
) -> Result<BubblePairReport> {
    if !(ell == 1 || ell == 3) {
        return Err(Error::InvalidParams(format!("Pohozaev direction must be 1 or 3, got {ell}")));
    }
    let (bi, si, bj, sj) = pair;
    if bi == 0 || bi > cfg.k || bj == 0 || bj > cfg.k {
        return Err(Error::InvalidParams("bubble indices must lie in 1..=k".into()));
    }
    let points = tower_points(cfg);
    let pick = |idx: usize, upper: bool| {
        let p = &points[if upper { idx - 1 } else { cfg.k + idx - 1 }];
        [p[0], p[1], p[2]]
    };
    let ci = pick(bi, si);
    let cj = pick(bj, sj);
    let (d_neighbor, _) = nearest_distances(cfg);

    let theta_j = 2.0 * (bj as f64 - 1.0) * std::f64::consts::PI / cfg.k as f64;
    let root = (1.0 - cfg.h * cfg.h).sqrt();
    let layer_sign = if sj { 1.0 } else { -1.0 };
    let velocity = match direction {
        ParamDirection::Radius => {
            [root * theta_j.cos(), root * theta_j.sin(), layer_sign * cfg.h]
        }
        ParamDirection::Height => [
            -cfg.r * cfg.h / root * theta_j.cos(),
            -cfg.r * cfg.h / root * theta_j.sin(),
            layer_sign * cfg.r,
        ],
    };

    let u = BubbleField { profile, center: ci };
    let xi = BubbleParamDerivative { profile, center: cj, velocity };
    let x1_upper = pick(1, true);
    let ball = Ball::new(x1_upper, 0.5 * d_neighbor);
    let i_ell = bilinear_form_ij_ball(&u, &xi, ell - 1, &ball);

    // ∮ u^p ξ ν_ℓ on the same sphere
    let (ct_nodes, ct_weights) = gauss_legendre(ball.n_theta);
    let dphi = 2.0 * std::f64::consts::PI / ball.n_phi as f64;
    let mut up_term = 0.0;
    for (ct, wt) in ct_nodes.iter().zip(&ct_weights) {
        let st = (1.0 - ct * ct).sqrt();
        for iphi in 0..ball.n_phi {
            let phi = (iphi as f64 + 0.5) * dphi;
            let nu = [st * phi.cos(), st * phi.sin(), *ct];
            let y = [
                ball.center[0] + ball.radius * nu[0],
                ball.center[1] + ball.radius * nu[1],
                ball.center[2] + ball.radius * nu[2],
            ];
            up_term += u.value(&y).powf(profile.p) * xi.value(&y) * nu[ell - 1] * wt * dphi;
        }
    }
    up_term *= ball.radius * ball.radius;

    let sigma = 0.05;
    let bound = (-((profile.p + 1.0) / 2.0 - sigma) * d_neighbor).exp();
    Ok(BubblePairReport { i_ell, up_surface_term: up_term, bound, d_neighbor })
}
