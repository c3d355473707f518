//! Spectra of the linearized operator −Δ + 1 − pU^(p−1).
//!
//! Separation of variables in spherical harmonics reduces the operator
//! to one radial problem per angular sector ℓ:
//!
//! ```text
//! L_ℓ = −∂rr − (N−1)/r ∂r + ℓ(ℓ+N−2)/r² + 1 − p U^(p−1),
//! ```
//!
//! and the substitution v = r^((N−1)/2) φ symmetrizes it into
//!
//! ```text
//! −v'' + [ (ℓ(ℓ+N−2) + (N−1)(N−3)/4)/r² + 1 − p U^(p−1) ] v
//! ```
//!
//! with Dirichlet conditions at 0 and r_max (bound states decay like
//! e^(−√(1−λ) r), so the truncation error is exponentially small).
//! Eigenvalues come from bisection on the Sturm count of the discrete
//! tridiagonal operator — deterministic and dependency-free — at two
//! grid levels, with the reported values Richardson-extrapolated.
//!
//! The kernel of the full operator is spanned by the translation modes
//! ∂U/∂y_i, which live in the ℓ = 1 sector; certifying non-degeneracy
//! of the bubble therefore means: ℓ=1 carries a zero mode aligned with
//! U′, ℓ=0 has no zero mode (one strictly negative direction), and all
//! sectors ℓ ≥ 2 are strictly positive.

use crate::error::{Error, Result};
use crate::numerics::tridiag::SymTridiag;
use crate::profile::{soliton_1d, RadialProfile};
use serde::{Deserialize, Serialize};

/// Radial grid for the sector eigenproblems.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub r_max: f64,
    pub spacing: f64,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self { r_max: 25.0, spacing: 0.002 }
    }
}

/// Eigenvalues below this magnitude do not count as negative.
pub const NEGATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Angular sector (for the 1D toy: 0 = even class, 1 = odd class).
    pub ell: usize,
    /// Richardson-extrapolated lowest eigenvalues, ascending.
    pub lowest_eigenvalues: Vec<f64>,
    /// |cos| similarity of the near-zero eigenvector against U′
    /// samples; populated for ℓ = 1 (and the toy's odd class).
    pub zero_mode_alignment: Option<f64>,
    pub negative_count: usize,
    pub grid: (f64, f64),
}

fn assemble_sector(
    profile: &RadialProfile,
    ell: usize,
    r_max: f64,
    spacing: f64,
    potential_scale: f64,
) -> SymTridiag {
    let n_dim = profile.n_dim as f64;
    let angular = (ell * (ell + profile.n_dim - 2)) as f64 + (n_dim - 1.0) * (n_dim - 3.0) / 4.0;
    let m = (r_max / spacing).round() as usize;
    let inv_h2 = 1.0 / (spacing * spacing);
    let p = profile.p;
    let mut diag = Vec::with_capacity(m - 1);
    for i in 1..m {
        let r = i as f64 * spacing;
        let u = profile.value(r);
        diag.push(2.0 * inv_h2 + angular / (r * r) + 1.0 - potential_scale * p * u.powf(p - 1.0));
    }
    SymTridiag { diag, off: vec![-inv_h2; m - 2] }
}

fn sector_spectrum_scaled(
    profile: &RadialProfile,
    ell: usize,
    grid: &SpectralGrid,
    potential_scale: f64,
    n_eigs: usize,
) -> Result<SpectralReport> {
    if grid.spacing > 0.02 {
        return Err(Error::InvalidParams(format!(
            "spectral grid must resolve the core: spacing ≤ 0.02, got {}",
            grid.spacing
        )));
    }
    if grid.r_max < 25.0 {
        return Err(Error::InvalidParams(format!(
            "spectral grid needs r_max ≥ 25, got {}",
            grid.r_max
        )));
    }
    let coarse = assemble_sector(profile, ell, grid.r_max, grid.spacing, potential_scale);
    let fine = assemble_sector(profile, ell, grid.r_max, grid.spacing / 2.0, potential_scale);
    let ev_c = coarse.smallest_eigenvalues(n_eigs);
    let ev_f = fine.smallest_eigenvalues(n_eigs);
    let mut extrapolated = Vec::with_capacity(n_eigs);
    for (c, f) in ev_c.iter().zip(&ev_f) {
        if (f - c).abs() > 1e-4 {
            return Err(Error::Resolution { delta: (f - c).abs() });
        }
        extrapolated.push((4.0 * f - c) / 3.0);
    }

    let zero_mode_alignment = (ell == 1).then(|| {
        // similarity of the smallest-|λ| mode against v = r^((N−1)/2) U′
        let target = extrapolated
            .iter()
            .copied()
            .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
            .unwrap();
        let raw = *ev_f
            .iter()
            .min_by(|a, b| {
                (*a - target).abs().partial_cmp(&(*b - target).abs()).unwrap()
            })
            .unwrap();
        let vec = fine.eigenvector(raw);
        let h = grid.spacing / 2.0;
        let nu = profile.nu();
        let mut dot = 0.0;
        let mut norm = 0.0;
        for (i, v) in vec.iter().enumerate() {
            let r = (i + 1) as f64 * h;
            let (_, du, _) = profile.eval(r);
            let w = du * r.powf(nu);
            dot += v * w;
            norm += w * w;
        }
        (dot / norm.sqrt()).abs()
    });

    let negative_count = extrapolated.iter().filter(|&&x| x < -NEGATIVE_TOLERANCE).count();
    Ok(SpectralReport {
        ell,
        lowest_eigenvalues: extrapolated,
        zero_mode_alignment,
        negative_count,
        grid: (grid.r_max, grid.spacing),
    })
}

/// Lowest eigenvalues of the sector operator L_ℓ.
pub fn radial_linearized_spectrum(
    profile: &RadialProfile,
    ell: usize,
    grid: &SpectralGrid,
) -> Result<SpectralReport> {
    sector_spectrum_scaled(profile, ell, grid, 1.0, 5)
}

/// Same with the pU^(p−1) well multiplied by `scale` — scale 1 is the
/// true linearization (the translation identity L₁U′ = 0 holds only
/// there), scale 0 the free operator −Δ + 1.
pub fn radial_linearized_spectrum_scaled(
    profile: &RadialProfile,
    ell: usize,
    grid: &SpectralGrid,
    scale: f64,
) -> Result<SpectralReport> {
    sector_spectrum_scaled(profile, ell, grid, scale, 5)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NondegeneracyVerdict {
    pub pass: bool,
    pub sectors: Vec<SpectralReport>,
    /// Human-readable description of each broken condition.
    pub failures: Vec<String>,
}

/// Certifies non-degeneracy of the single bubble: the ℓ=1 sector must
/// carry a zero mode aligned with U′, ℓ=0 exactly one negative and no
/// zero eigenvalue, and every sector ℓ ∈ {2,3,4} must be strictly
/// positive.
pub fn nondegeneracy_check(profile: &RadialProfile) -> Result<NondegeneracyVerdict> {
    nondegeneracy_check_with(profile, &SpectralGrid::default())
}

pub fn nondegeneracy_check_with(
    profile: &RadialProfile,
    grid: &SpectralGrid,
) -> Result<NondegeneracyVerdict> {
    let mut sectors = Vec::with_capacity(5);
    let mut failures = Vec::new();
    for ell in 0..=4 {
        sectors.push(radial_linearized_spectrum(profile, ell, grid)?);
    }

    let l0 = &sectors[0];
    if l0.negative_count != 1 {
        failures.push(format!("sector 0: expected exactly one negative eigenvalue, found {}", l0.negative_count));
    }
    if l0.lowest_eigenvalues.iter().any(|x| x.abs() <= 1e-4) {
        failures.push("sector 0: eigenvalue within ±1e-4 of zero (radial zero mode)".into());
    }
    if l0.lowest_eigenvalues.iter().any(|&x| x > -1e-4 && x < 1e-3) {
        failures.push("sector 0: non-negative eigenvalue below the 1e-3 margin".into());
    }

    let l1 = &sectors[1];
    let lambda1 = l1
        .lowest_eigenvalues
        .iter()
        .copied()
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .unwrap();
    if lambda1.abs() > 1e-6 {
        failures.push(format!(
            "sector 1: translation identity broken, |λ| = {:.3e} exceeds 1e-6",
            lambda1.abs()
        ));
    }
    match l1.zero_mode_alignment {
        Some(a) if a >= 0.999 => {}
        Some(a) => failures.push(format!("sector 1: zero mode misaligned with U′ (cos = {a:.6})")),
        None => failures.push("sector 1: no alignment computed".into()),
    }

    for sector in &sectors[2..] {
        if sector.lowest_eigenvalues[0] <= 1e-4 {
            failures.push(format!(
                "sector {}: lowest eigenvalue {:.3e} not strictly positive",
                sector.ell, sector.lowest_eigenvalues[0]
            ));
        }
    }

    Ok(NondegeneracyVerdict { pass: failures.is_empty(), sectors, failures })
}

/// 1D grid for the toy tower.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ToyGrid {
    /// Padding beyond the outermost centers.
    pub pad: f64,
    pub spacing: f64,
}

impl Default for ToyGrid {
    fn default() -> Self {
        Self { pad: 12.0, spacing: 0.005 }
    }
}

/// Spectrum of −∂xx + 1 − pW^(p−1) for W = Σ soliton(x − c), split by
/// parity about the configuration center: element 0 is the even class,
/// element 1 the odd class. The odd-class alignment field compares the
/// smallest-|λ| mode against the translation combination Σ U′(x − c).
pub fn toy_tower_spectrum_1d(
    p: f64,
    centers: &[f64],
    grid: &ToyGrid,
) -> Result<Vec<SpectralReport>> {
    if centers.is_empty() {
        return Err(Error::InvalidParams("need at least one soliton center".into()));
    }
    let mut sorted = centers.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for pair in sorted.windows(2) {
        if pair[1] - pair[0] < 2.0 {
            return Err(Error::InvalidParams(format!(
                "centers must be separated by ≥ 2, got gap {}",
                pair[1] - pair[0]
            )));
        }
    }
    let mid = 0.5 * (sorted[0] + sorted[sorted.len() - 1]);
    let half_width = 0.5 * (sorted[sorted.len() - 1] - sorted[0]) + grid.pad;

    let eigs_at = |h: f64| -> (Vec<f64>, Vec<Vec<f64>>, SymTridiag, usize) {
        // symmetric node layout about the configuration center
        let m = 2 * ((half_width / h).round() as usize);
        let a = mid - 0.5 * m as f64 * h;
        let inv_h2 = 1.0 / (h * h);
        let mut diag = Vec::with_capacity(m - 1);
        for i in 1..m {
            let x = a + i as f64 * h;
            let w: f64 = sorted.iter().map(|c| soliton_1d(p, x - c)).sum();
            diag.push(2.0 * inv_h2 + 1.0 - p * w.powf(p - 1.0));
        }
        let t = SymTridiag { diag, off: vec![-inv_h2; m - 2] };
        let vals = t.smallest_eigenvalues(8);
        let vecs: Vec<Vec<f64>> = vals.iter().map(|&l| t.eigenvector(l)).collect();
        (vals, vecs, t, m)
    };

    let (vc, _, _, _) = eigs_at(grid.spacing);
    let (vf, vecs_f, _, m_f) = eigs_at(grid.spacing / 2.0);

    // split by parity of the fine-grid eigenvectors, extrapolating
    // matching indices (parity is exact, so coarse/fine orderings agree)
    let mut classes: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut class_vec: [Option<(f64, Vec<f64>)>; 2] = [None, None];
    for (idx, (&c, &f)) in vc.iter().zip(&vf).enumerate() {
        if (f - c).abs() > 1e-4 {
            return Err(Error::Resolution { delta: (f - c).abs() });
        }
        let v = &vecs_f[idx];
        let parity: f64 = v
            .iter()
            .enumerate()
            .map(|(i, x)| x * v[m_f - 2 - i])
            .sum();
        let class = if parity >= 0.0 { 0 } else { 1 };
        let lambda = (4.0 * f - c) / 3.0;
        classes[class].push(lambda);
        let best = class_vec[class].as_ref().map(|(l, _)| l.abs());
        if best.is_none_or(|b| lambda.abs() < b) {
            class_vec[class] = Some((lambda, v.clone()));
        }
    }

    let h_f = grid.spacing / 2.0;
    let a = mid - 0.5 * m_f as f64 * h_f;
    let reports = [0usize, 1]
        .into_iter()
        .map(|class| {
            let alignment = (class == 1).then(|| {
                class_vec[1]
                    .as_ref()
                    .map(|(_, v)| {
                        let mut dot = 0.0;
                        let mut norm = 0.0;
                        for (i, vi) in v.iter().enumerate() {
                            let x = a + (i + 1) as f64 * h_f;
                            let step = 1e-6;
                            let w: f64 = sorted
                                .iter()
                                .map(|c| {
                                    (soliton_1d(p, x - c + step) - soliton_1d(p, x - c - step))
                                        / (2.0 * step)
                                })
                                .sum();
                            dot += vi * w;
                            norm += w * w;
                        }
                        (dot / norm.sqrt()).abs()
                    })
                    .unwrap_or(0.0)
            });
            SpectralReport {
                ell: class,
                lowest_eigenvalues: classes[class].clone(),
                zero_mode_alignment: alignment,
                negative_count: classes[class]
                    .iter()
                    .filter(|&&x| x < -NEGATIVE_TOLERANCE)
                    .count(),
                grid: (half_width * 2.0, grid.spacing),
            }
        })
        .collect();
    Ok(reports)
}

/// Near-kernel pair of a two-soliton toy versus separation, with the
/// per-class log-linear decay fits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToyKernelSweep {
    /// (separation, smallest-|λ| in even class, smallest-|λ| in odd class)
    pub per_separation: Vec<(f64, f64, f64)>,
    pub slope_even: f64,
    pub slope_odd: f64,
    pub r2_even: f64,
    pub r2_odd: f64,
}

pub fn toy_near_kernel_sweep(p: f64, separations: &[f64], grid: &ToyGrid) -> Result<ToyKernelSweep> {
    if separations.len() < 3 {
        return Err(Error::InvalidParams("sweep needs ≥ 3 separations".into()));
    }
    let mut per = Vec::with_capacity(separations.len());
    for &d in separations {
        let reports = toy_tower_spectrum_1d(p, &[-d / 2.0, d / 2.0], grid)?;
        let smallest = |r: &SpectralReport| {
            r.lowest_eigenvalues
                .iter()
                .copied()
                .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
                .unwrap()
        };
        per.push((d, smallest(&reports[0]), smallest(&reports[1])));
    }
    let fit = |take: &dyn Fn(&(f64, f64, f64)) -> f64| -> (f64, f64) {
        let xs: Vec<f64> = per.iter().map(|t| t.0).collect();
        let ys: Vec<f64> = per.iter().map(|t| take(t).abs().ln()).collect();
        let n = xs.len() as f64;
        let xbar = xs.iter().sum::<f64>() / n;
        let ybar = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
        let slope = sxy / sxx;
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let e = y - ybar - slope * (x - xbar);
                e * e
            })
            .sum();
        let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
        (slope, 1.0 - ss_res / ss_tot)
    };
    let (slope_even, r2_even) = fit(&|t| t.1);
    let (slope_odd, r2_odd) = fit(&|t| t.2);
    Ok(ToyKernelSweep { per_separation: per, slope_even, slope_odd, r2_even, r2_odd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::solve_ground_state;

    fn profile33() -> RadialProfile {
        solve_ground_state(3, 3.0, 1e-12).unwrap()
    }

    #[test]
    fn translation_sector_has_zero_mode() {
        let prof = profile33();
        let rep = radial_linearized_spectrum(&prof, 1, &SpectralGrid::default()).unwrap();
        let smallest = rep.lowest_eigenvalues[0];
        assert!(smallest.abs() <= 1e-6, "λ = {smallest:.3e}");
        assert!(rep.zero_mode_alignment.unwrap() >= 0.999);
    }

    #[test]
    fn radial_sector_morse_index_one() {
        let prof = profile33();
        let rep = radial_linearized_spectrum(&prof, 0, &SpectralGrid::default()).unwrap();
        assert_eq!(rep.negative_count, 1);
        // golden values from an independent Sturm-count oracle on a
        // refined grid: λ0 ≈ −15.2925, λ1 ≈ +1.0092
        assert!((rep.lowest_eigenvalues[0] + 15.2925).abs() < 0.01);
        assert!((rep.lowest_eigenvalues[1] - 1.0092).abs() < 0.005);
    }

    #[test]
    fn higher_sectors_positive_and_monotone() {
        let prof = profile33();
        let mut last = f64::NEG_INFINITY;
        for ell in 0..=4 {
            let rep = radial_linearized_spectrum(&prof, ell, &SpectralGrid::default()).unwrap();
            let lowest = rep.lowest_eigenvalues[0];
            assert!(lowest >= last, "sector {ell} broke monotonicity");
            if ell >= 2 {
                assert!(lowest > 1.0, "sector {ell} lowest {lowest}");
            }
            last = lowest;
        }
    }

    #[test]
    fn free_operator_spectrum_above_one() {
        let prof = profile33();
        let rep =
            radial_linearized_spectrum_scaled(&prof, 0, &SpectralGrid::default(), 0.0).unwrap();
        assert!(rep.lowest_eigenvalues.iter().all(|&l| l >= 1.0 - 1e-9));
    }

    #[test]
    fn scaled_potential_breaks_translation_identity() {
        let prof = profile33();
        let rep =
            radial_linearized_spectrum_scaled(&prof, 1, &SpectralGrid::default(), 0.5).unwrap();
        assert!(rep.lowest_eigenvalues[0].abs() > 1e-3);
    }

    #[test]
    fn nondegeneracy_passes_for_both_parameter_points() {
        for (n, p) in [(3usize, 3.0), (4, 2.0)] {
            let prof = solve_ground_state(n, p, 1e-12).unwrap();
            let verdict = nondegeneracy_check(&prof).unwrap();
            assert!(verdict.pass, "N={n} p={p}: {:?}", verdict.failures);
        }
    }

    #[test]
    fn applying_sector_one_to_du_gives_small_residual() {
        // L₁ U′ = 0 in the continuum; the discrete image is pure O(h²)
        // stencil truncation. Sample on the profile's own nodes so no
        // interpolation noise enters, and refine until the relative
        // norm drops under 1e-4.
        let rel_at = |spacing: f64| -> f64 {
            let prof = crate::profile::solve_ground_state_with(
                3,
                3.0,
                crate::profile::SolveOptions { spacing, ..Default::default() },
            )
            .unwrap();
            let t = super::assemble_sector(&prof, 1, 25.0, spacing, 1.0);
            let n = t.n();
            let mut v = Vec::with_capacity(n);
            for i in 1..=n {
                let r = i as f64 * spacing;
                v.push(prof.du[i] * r); // symmetrized: r^((N-1)/2) U′, N = 3
            }
            let norm_v: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut res = 0.0f64;
            for i in 0..n {
                let mut acc = t.diag[i] * v[i];
                if i > 0 {
                    acc += t.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += t.off[i] * v[i + 1];
                }
                res += acc * acc;
            }
            res.sqrt() / norm_v
        };
        let coarse = rel_at(0.005);
        let fine = rel_at(0.00125);
        let ratio = coarse / fine;
        assert!(ratio > 10.0 && ratio < 22.0, "not second order: {coarse:.3e} / {fine:.3e}");
        assert!(fine < 1e-4, "refined relative residual {fine:.3e}");
    }

    #[test]
    fn eigenvalues_converge_at_second_order() {
        // three-level ratio test on the raw (unextrapolated) sector
        // ground eigenvalue
        let prof = profile33();
        let raw = |h: f64| {
            super::assemble_sector(&prof, 0, 25.0, h, 1.0).smallest_eigenvalues(1)[0]
        };
        let (a, b, c) = (raw(0.008), raw(0.004), raw(0.002));
        let ratio = (a - b) / (b - c);
        assert!((3.5..=4.5).contains(&ratio), "three-level ratio {ratio}");
    }

    #[test]
    fn single_soliton_toy_kernel() {
        let reports = toy_tower_spectrum_1d(3.0, &[0.0], &ToyGrid::default()).unwrap();
        // even class: the −3 ground mode; odd class: the zero mode ∝ U′
        assert_eq!(reports[0].ell, 0);
        let even_lowest = reports[0].lowest_eigenvalues[0];
        assert!((even_lowest + 3.0).abs() < 1e-5, "even {even_lowest}");
        assert_eq!(reports[0].negative_count, 1);
        let odd_smallest = reports[1]
            .lowest_eigenvalues
            .iter()
            .copied()
            .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
            .unwrap();
        assert!(odd_smallest.abs() < 1e-6, "odd {odd_smallest:.3e}");
        assert!(reports[1].zero_mode_alignment.unwrap() > 0.999);
    }

    #[test]
    fn toy_spectrum_translation_invariant() {
        let a = toy_tower_spectrum_1d(3.0, &[-2.0, 2.0], &ToyGrid::default()).unwrap();
        let b = toy_tower_spectrum_1d(3.0, &[5.5, 9.5], &ToyGrid::default()).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.lowest_eigenvalues.iter().zip(&rb.lowest_eigenvalues) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn toy_rejects_close_centers() {
        assert!(toy_tower_spectrum_1d(3.0, &[0.0, 1.0], &ToyGrid::default()).is_err());
    }

    #[test]
    fn near_kernel_decays_log_linearly() {
        let sweep =
            toy_near_kernel_sweep(3.0, &[4.0, 6.0, 8.0, 10.0], &ToyGrid::default()).unwrap();
        assert!(sweep.r2_even >= 0.98, "R² even = {}", sweep.r2_even);
        assert!(sweep.r2_odd >= 0.98, "R² odd = {}", sweep.r2_odd);
        assert!(sweep.slope_even < -0.5 && sweep.slope_odd < -0.5);
        // golden magnitudes from a dense-grid eigensolver at d = 6
        let (_, even, odd) = sweep.per_separation[1];
        assert!((even.abs() - 0.0950).abs() < 0.002, "even {even}");
        assert!((odd.abs() - 0.02833).abs() < 0.001, "odd {odd}");
    }
}
