//! The `report` command: the full pipeline in one run, emitting a
//! summary JSON whose fields carry every acceptance metric, plus
//! plot-ready trend files.

use crate::config::RunConfig;
use crate::output::{fmt17, write_artifact};
use bubble_tower::coefficients::{self, CoefficientSet};
use bubble_tower::energy;
use bubble_tower::error::Result;
use bubble_tower::field;
use bubble_tower::model::ModelParams;
use bubble_tower::pohozaev::{self, BoxDomain, GridField, Potential};
use bubble_tower::profile::{self, RadialProfile};
use bubble_tower::spectrum;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct ProfileExactness {
    pub u0_error_p3: f64,
    pub c0_error_p3: f64,
    pub u0_error_p2: f64,
    pub c0_error_p2: f64,
}

#[derive(Debug, Serialize)]
pub struct DecayLaw {
    pub plateau_variation: f64,
    pub c0: f64,
    pub r_match: f64,
}

#[derive(Debug, Serialize)]
pub struct CoefficientChecks {
    pub a1_1d_value: f64,
    pub a1_1d_error: f64,
    pub refinement_rel_change: f64,
    pub b1_theta_vs_cartesian_rel: f64,
    pub set: CoefficientSet,
}

#[derive(Debug, Serialize)]
pub struct GradientCheck {
    pub samples: usize,
    pub max_rel_error_r: f64,
    pub max_rel_error_h: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub r_star: f64,
    pub h_star: f64,
    pub r_scaled: f64,
    pub h_scaled: f64,
    pub grad_residual: f64,
    pub boundary_signs_ok: bool,
    pub scaling_neighbor: f64,
    pub scaling_layer: f64,
    pub growth_factor: f64,
    pub balance_neighbor: f64,
    pub balance_layer: f64,
    pub balance_neighbor_stationarity: f64,
    pub balance_layer_stationarity: f64,
}

#[derive(Debug, Serialize)]
pub struct CriticalTrend {
    pub rows: Vec<SweepRow>,
    pub r_limit: f64,
    pub h_limit: f64,
    pub r_monotone: bool,
    pub h_monotone: bool,
    pub scaling_in_band: bool,
    pub growth_monotone: bool,
    pub balance_variation_neighbor: f64,
    pub balance_variation_layer: f64,
}

#[derive(Debug, Serialize)]
pub struct LkDecay {
    pub slope: f64,
    pub threshold: f64,
    pub slope_ci95: (f64, f64),
    pub values: Vec<(usize, f64)>,
}

#[derive(Debug, Serialize)]
pub struct PohozaevConvergence {
    pub levels: Vec<usize>,
    pub residuals: Vec<f64>,
    pub ratios: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub n_dim: usize,
    pub p: f64,
    pub pass: bool,
    pub l1_lowest: f64,
    pub l1_alignment: f64,
    pub l0_negative_count: usize,
    pub l0_second: f64,
    pub l2_lowest: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct InteractionTrend {
    pub rows: Vec<(usize, f64, f64)>,
    pub ratio_at_50: f64,
    pub monotone_tightening: bool,
    pub max_parity_companion: f64,
}

#[derive(Debug, Serialize)]
pub struct ToyKernel {
    pub separations: Vec<f64>,
    pub even_magnitudes: Vec<f64>,
    pub odd_magnitudes: Vec<f64>,
    pub r2_even: f64,
    pub r2_odd: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config_echo: String,
    pub profile_exactness: ProfileExactness,
    pub decay_law: DecayLaw,
    pub coefficients: CoefficientChecks,
    pub gradient_check: GradientCheck,
    pub critical_trend: CriticalTrend,
    pub lk_decay: LkDecay,
    pub pohozaev: PohozaevConvergence,
    pub spectrum_n3_p3: SpectrumSummary,
    pub spectrum_n4_p2: SpectrumSummary,
    pub interaction_derivative: InteractionTrend,
    pub toy_kernel: ToyKernel,
}

/// Deterministic uniform sampler (SplitMix64).
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn spectrum_summary(profile: &RadialProfile) -> Result<SpectrumSummary> {
    let verdict = spectrum::nondegeneracy_check(profile)?;
    let l1 = &verdict.sectors[1];
    let l1_lowest = l1
        .lowest_eigenvalues
        .iter()
        .copied()
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .unwrap();
    Ok(SpectrumSummary {
        n_dim: profile.n_dim,
        p: profile.p,
        pass: verdict.pass,
        l1_lowest,
        l1_alignment: l1.zero_mode_alignment.unwrap_or(0.0),
        l0_negative_count: verdict.sectors[0].negative_count,
        l0_second: verdict.sectors[0].lowest_eigenvalues[1],
        l2_lowest: verdict.sectors[2].lowest_eigenvalues[0],
        failures: verdict.failures,
    })
}

pub fn gradient_check(
    coeffs: &CoefficientSet,
    params: &ModelParams,
    seed: u64,
    samples: usize,
) -> GradientCheck {
    let mut rng = SplitMix(seed.wrapping_add(0x5ca1ab1e));
    let mut max_r = 0.0f64;
    let mut max_h = 0.0f64;
    for _ in 0..samples {
        let k = 8 + (rng.next_f64() * 992.0) as usize;
        let kf = k as f64;
        // admissible rectangle scaled around the canonical laws
        let r = (0.5 + rng.next_f64()) * params.m / (2.0 * std::f64::consts::PI) * kf * kf.ln();
        let h = (0.5 + rng.next_f64()) * std::f64::consts::PI * (params.m + 2.0)
            / (params.m * kf);
        let ((fr, fh), (sr, sh)) =
            energy::reduced_gradient_with_scale(coeffs, params, k, r, h).unwrap();
        let dr = 1e-5 * r;
        // 1e-5 against h's O(1) range, capped so the stencil resolves
        // the layer scale e^(−2rh)
        let dh = 1e-5_f64.min(0.02 / (2.0 * r));
        // difference only the terms the derivative direction sees: the
        // k·A2 offset (and, for ∂/∂h, the self-energy) are constants
        // whose rounding would otherwise drown the small interaction
        // pieces at large k
        let v_r = |r: f64, h: f64| {
            let t = energy::reduced_energy(coeffs, params, k, r, h).unwrap().terms;
            kf * (t.self_energy + t.neighbor + t.layer)
        };
        let v_h = |r: f64, h: f64| {
            let t = energy::reduced_energy(coeffs, params, k, r, h).unwrap().terms;
            kf * (t.neighbor + t.layer)
        };
        // five-point central difference: the layer scale 2rh reaches
        // ~10² at the window edges, where the three-point truncation
        // would eat the whole 1e-6 budget
        let fd_r = (-v_r(r + 2.0 * dr, h) + 8.0 * v_r(r + dr, h) - 8.0 * v_r(r - dr, h)
            + v_r(r - 2.0 * dr, h))
            / (12.0 * dr);
        let fd_h = (-v_h(r, h + 2.0 * dh) + 8.0 * v_h(r, h + dh) - 8.0 * v_h(r, h - dh)
            + v_h(r, h - 2.0 * dh))
            / (12.0 * dh);
        max_r = max_r.max(((fd_r - fr) / sr).abs());
        max_h = max_h.max(((fd_h - fh) / sh).abs());
    }
    GradientCheck { samples, max_rel_error_r: max_r, max_rel_error_h: max_h }
}

pub fn pohozaev_convergence(levels: &[usize]) -> Result<PohozaevConvergence> {
    let params = ModelParams::new(3, 3.0, 1.0, 0.0, 5.0, 0.1)?;
    let gauss = |c: [f64; 3], a: f64| {
        move |y: &[f64]| {
            let d2: f64 = y.iter().zip(&c).map(|(x, b)| (x - b) * (x - b)).sum();
            (-a * d2).exp()
        }
    };
    let mut residuals = Vec::with_capacity(levels.len());
    for &cells in levels {
        let domain = BoxDomain::new(vec![-1.5; 3], vec![1.5; 3], vec![cells; 3])?;
        let u = GridField::from_fn(domain.clone(), gauss([0.3, 0.1, -0.2], 2.0));
        let xi = GridField::from_fn(domain, gauss([-0.1, -0.3, 0.25], 1.3));
        let rep =
            pohozaev::generalized_identity_residual(&u, &xi, &Potential::Model(&params), 3.0, 0)?;
        residuals.push(rep.residual.abs());
    }
    let ratios = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(PohozaevConvergence { levels: levels.to_vec(), residuals, ratios })
}

pub fn run_report(cfg: &RunConfig, outdir: &Path) -> Result<Report> {
    let params = cfg.model_params()?;
    params.validate_tower()?;
    let prof = profile::solve_ground_state(params.n_dim, params.p, cfg.tol)?;
    let coeffs = coefficients::compute_all(&prof, params.a1)?;

    // 1. closed-form exactness at N = 1
    let p3 = profile::solve_ground_state(1, 3.0, cfg.tol)?;
    let p2 = profile::solve_ground_state(1, 2.0, cfg.tol)?;
    let profile_exactness = ProfileExactness {
        u0_error_p3: (p3.shoot_value - 2.0f64.sqrt()).abs(),
        c0_error_p3: (profile::decay_constant(&p3)? / (2.0 * 2.0f64.sqrt()) - 1.0).abs(),
        u0_error_p2: (p2.shoot_value - 1.5).abs(),
        c0_error_p2: (profile::decay_constant(&p2)? / 6.0 - 1.0).abs(),
    };

    // 2. decay-law plateau
    let nu = prof.nu();
    let plateau: Vec<f64> = (0..prof.u.len())
        .filter_map(|i| {
            let r = prof.radius(i);
            (r >= prof.r_match).then(|| prof.u[i] * r.exp() * r.powf(nu))
        })
        .collect();
    let pmin = plateau.iter().cloned().fold(f64::INFINITY, f64::min);
    let pmax = plateau.iter().cloned().fold(0.0f64, f64::max);
    let decay_law =
        DecayLaw { plateau_variation: pmax / pmin - 1.0, c0: prof.c0, r_match: prof.r_match };

    // 3. coefficient quadrature checks
    let a1_1d = coefficients::compute_a1(&p3, 1.0);
    let base = coefficients::QuadratureOptions::default();
    let fine = coefficients::QuadratureOptions {
        panels_per_unit: 2.0 * base.panels_per_unit,
        theta_panels: 2 * base.theta_panels,
        ..base
    };
    let mut refinement_rel: f64 = 0.0;
    for (coarse, refined) in [
        (coefficients::compute_a1_with(&prof, 1.0, &base), coefficients::compute_a1_with(&prof, 1.0, &fine)),
        (coefficients::compute_a2_with(&prof, &base), coefficients::compute_a2_with(&prof, &fine)),
        (coefficients::compute_b1_with(&prof, &base)?, coefficients::compute_b1_with(&prof, &fine)?),
    ] {
        refinement_rel = refinement_rel.max(((refined - coarse) / refined).abs());
    }
    // B1 through the θ-route against a Cartesian 2D brute-force slice
    let prof2 = profile::solve_ground_state(2, 3.0, cfg.tol)?;
    let b1_theta = coefficients::compute_b1(&prof2)?;
    let b1_cartesian = {
        let half = 20.0;
        let n = 900usize;
        let h = 2.0 * half / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let x = -half + i as f64 * h;
            let wx = if i == 0 || i == n { 0.5 } else { 1.0 };
            for jj in 0..=n {
                let y = -half + jj as f64 * h;
                let wy = if jj == 0 || jj == n { 0.5 } else { 1.0 };
                let r = (x * x + y * y).sqrt();
                acc += wx * wy * prof2.value(r).powi(3) * (-x).exp();
            }
        }
        prof2.c0 * acc * h * h
    };
    let coefficient_checks = CoefficientChecks {
        a1_1d_value: a1_1d,
        a1_1d_error: (a1_1d - 4.0).abs(),
        refinement_rel_change: refinement_rel,
        b1_theta_vs_cartesian_rel: (b1_theta / b1_cartesian - 1.0).abs(),
        set: coeffs,
    };

    // 4. analytic gradient vs finite differences
    let gradient_check = gradient_check(&coeffs, &params, cfg.seed, 100);

    // 5.–6., 11. critical sweep with scaling and balance diagnostics
    let mut rows = Vec::new();
    for &k in &cfg.k_list {
        let (tower, cp) = energy::critical_config(&coeffs, &params, k)?;
        let scaling = energy::scaling_relations(&prof, &params, &tower);
        let balance = energy::balance_residuals(&prof, &coeffs, &params, &tower);
        let kf = k as f64;
        rows.push(SweepRow {
            k,
            r_star: cp.r_star,
            h_star: cp.h_star,
            r_scaled: cp.r_star / (kf * kf.ln()),
            h_scaled: cp.h_star * kf,
            grad_residual: cp.grad_residual,
            boundary_signs_ok: cp.boundary_signs.iter().all(|&b| b),
            scaling_neighbor: scaling.ratio_neighbor,
            scaling_layer: scaling.ratio_layer,
            growth_factor: scaling.growth_factor,
            balance_neighbor: balance.ratio_neighbor,
            balance_layer: balance.ratio_layer.unwrap_or(f64::NAN),
            balance_neighbor_stationarity: balance.ratio_neighbor_stationarity,
            balance_layer_stationarity: balance.ratio_layer_stationarity.unwrap_or(f64::NAN),
        });
    }
    let r_limit = params.m / (2.0 * std::f64::consts::PI);
    let h_limit = std::f64::consts::PI * (params.m + 2.0) / params.m;
    let monotone = |extract: &dyn Fn(&SweepRow) -> f64, limit: f64| {
        rows.windows(2).all(|w| {
            (extract(&w[1]) - limit).abs() < (extract(&w[0]) - limit).abs()
        })
    };
    let variation = |extract: &dyn Fn(&SweepRow) -> f64| {
        let vals: Vec<f64> = rows.iter().map(extract).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi / lo - 1.0
    };
    let critical_trend = CriticalTrend {
        r_monotone: monotone(&|r| r.r_scaled, r_limit),
        h_monotone: monotone(&|r| r.h_scaled, h_limit),
        scaling_in_band: rows.iter().all(|r| {
            let band = energy::DEFAULT_SCALING_BAND;
            r.scaling_neighbor >= band.0
                && r.scaling_neighbor <= band.1
                && r.scaling_layer >= band.0
                && r.scaling_layer <= band.1
        }),
        growth_monotone: rows.windows(2).all(|w| w[1].growth_factor > w[0].growth_factor),
        balance_variation_neighbor: variation(&|r| r.balance_neighbor),
        balance_variation_layer: variation(&|r| r.balance_layer),
        r_limit,
        h_limit,
        rows,
    };

    // 7. residual decay sweep
    let sweep = field::lk_decay_sweep(&prof, &params, &cfg.lk_list)?;
    let lk_decay = LkDecay {
        slope: sweep.slope,
        threshold: -0.9 * (params.p / 2.0 - params.tau).min(1.0) * params.m,
        slope_ci95: sweep.slope_ci95,
        values: sweep.points.iter().map(|pt| (pt.k, pt.star_norm)).collect(),
    };

    // 8. Pohozaev identity convergence
    let poh = pohozaev_convergence(&cfg.levels)?;

    // 9. non-degeneracy at both parameter points
    let spectrum_n3_p3 = spectrum_summary(&prof)?;
    let prof42 = profile::solve_ground_state(4, 2.0, cfg.tol)?;
    let spectrum_n4_p2 = spectrum_summary(&prof42)?;

    // 10. interaction-derivative asymptote
    let mut inter_rows = Vec::new();
    let mut max_parity = 0.0f64;
    for k in [12usize, 25, 50] {
        let (tower, _) = energy::critical_config(&coeffs, &params, k)?;
        let rep = energy::interaction_derivative_check(&prof, &tower)?;
        max_parity = max_parity.max(rep.parity_companion.abs());
        inter_rows.push((k, rep.ratio, rep.exact));
    }
    let monotone_tightening = inter_rows
        .windows(2)
        .all(|w| (w[1].1 - 1.0).abs() < (w[0].1 - 1.0).abs());
    let interaction_derivative = InteractionTrend {
        ratio_at_50: inter_rows.last().unwrap().1,
        rows: inter_rows,
        monotone_tightening,
        max_parity_companion: max_parity,
    };

    // 12. toy tower near-kernel decay
    let toy = spectrum::toy_near_kernel_sweep(3.0, &cfg.separations, &Default::default())?;
    let toy_kernel = ToyKernel {
        separations: toy.per_separation.iter().map(|t| t.0).collect(),
        even_magnitudes: toy.per_separation.iter().map(|t| t.1.abs()).collect(),
        odd_magnitudes: toy.per_separation.iter().map(|t| t.2.abs()).collect(),
        r2_even: toy.r2_even,
        r2_odd: toy.r2_odd,
    };

    let report = Report {
        config_echo: cfg.echo(),
        profile_exactness,
        decay_law,
        coefficients: coefficient_checks,
        gradient_check,
        critical_trend,
        lk_decay,
        pohozaev: poh,
        spectrum_n3_p3,
        spectrum_n4_p2,
        interaction_derivative,
        toy_kernel,
    };

    // artifacts: summary JSON, sweep CSV, lk CSV, trend curves
    write_artifact(outdir, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
    let mut sweep_csv = String::from(
        "k,r_star,h_star,grad_residual,ratio_neighbor,ratio_layer,scaling_neighbor,scaling_layer\n",
    );
    for row in &report.critical_trend.rows {
        sweep_csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.k,
            fmt17(row.r_star),
            fmt17(row.h_star),
            fmt17(row.grad_residual),
            fmt17(row.balance_neighbor),
            fmt17(row.balance_layer),
            fmt17(row.scaling_neighbor),
            fmt17(row.scaling_layer),
        ));
    }
    write_artifact(outdir, "sweep.csv", &sweep_csv)?;
    let mut lk_csv = String::from("k,star_norm,argmax_x,argmax_y,argmax_z\n");
    for pt in &sweep.points {
        lk_csv.push_str(&format!(
            "{},{},{},{},{}\n",
            pt.k,
            fmt17(pt.star_norm),
            fmt17(pt.argmax_point[0]),
            fmt17(pt.argmax_point[1]),
            fmt17(pt.argmax_point[2]),
        ));
    }
    write_artifact(outdir, "lk_decay.csv", &lk_csv)?;
    for (name, take) in [
        ("trend_r_scaled.csv", &(|r: &SweepRow| r.r_scaled) as &dyn Fn(&SweepRow) -> f64),
        ("trend_h_scaled.csv", &|r: &SweepRow| r.h_scaled),
        ("trend_growth.csv", &|r: &SweepRow| r.growth_factor),
    ] {
        let mut curve = String::from("k,value\n");
        for row in &report.critical_trend.rows {
            curve.push_str(&format!("{},{}\n", row.k, fmt17(take(row))));
        }
        write_artifact(outdir, name, &curve)?;
    }
    write_artifact(outdir, "run_config.cfg", &report.config_echo)?;
    Ok(report)
}
