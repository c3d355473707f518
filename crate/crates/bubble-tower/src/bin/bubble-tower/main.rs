//! Batch CLI: every workflow as a subcommand with reproducible config
//! files and machine-readable CSV/JSON artifacts.
//!
//! Exit status: 0 success, 2 configuration error, 3 numerical failure,
//! 4 I/O error. The output directory comes from `--out`, the `outdir`
//! config key, or the BUBBLE_TOWER_OUT environment variable (which
//! wins).

mod config;
mod output;
mod report;

use bubble_tower::coefficients;
use bubble_tower::energy;
use bubble_tower::error::Error;
use bubble_tower::field;
use bubble_tower::profile::{self, SolveOptions};
use bubble_tower::spectrum;
use clap::{Parser, Subcommand};
use config::RunConfig;
use output::{fmt17, write_artifact};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bubble-tower", version, about = "Double-tower machinery for −Δu + V(|y|)u = u^p")]
struct Cli {
    /// Flat key=value config file (CLI flags override it).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Ambient dimension.
    #[arg(long = "N", global = true)]
    n_dim: Option<usize>,
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    a1: Option<f64>,
    #[arg(long, global = true)]
    a2: Option<f64>,
    #[arg(long, global = true)]
    m: Option<f64>,
    #[arg(long, global = true)]
    tau: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shooting bisection width target.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the ground state; writes profile.csv + profile.json.
    Profile {
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        spacing: Option<f64>,
    },
    /// Interaction coefficients A1, A2, B1; writes coefficients.json.
    Coeffs,
    /// Reduced-energy values on a grid over the admissible rectangle.
    Landscape {
        #[arg(long)]
        k: Option<usize>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
    /// Interior critical point of F for one k.
    CriticalPoint {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Balance-equation ratios along the k sweep.
    Balance {
        #[arg(long, value_delimiter = ',')]
        k_list: Option<Vec<usize>>,
    },
    /// Scaling-relation ratios along the k sweep.
    Scaling {
        #[arg(long, value_delimiter = ',')]
        k_list: Option<Vec<usize>>,
    },
    /// ‖l_k‖_* decay sweep with fitted slope.
    LkDecay {
        #[arg(long, value_delimiter = ',')]
        k_list: Option<Vec<usize>>,
    },
    /// Grid-convergence table of the integration-by-parts identity.
    Pohozaev {
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<usize>>,
    },
    /// Sector spectra of the linearized operator.
    Spectrum {
        #[arg(long)]
        ell_max: Option<usize>,
    },
    /// 1D multi-soliton toy linearization near-kernel sweep.
    ToyTower {
        #[arg(long, value_delimiter = ',')]
        separations: Option<Vec<f64>>,
    },
    /// Full pipeline; emits report.json with every acceptance metric.
    Report,
}

fn build_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.load_file(path)?;
    }
    if let Some(v) = cli.n_dim {
        cfg.n_dim = v;
    }
    if let Some(v) = cli.p {
        cfg.p = v;
    }
    if let Some(v) = cli.a1 {
        cfg.a1 = v;
    }
    if let Some(v) = cli.a2 {
        cfg.a2 = v;
    }
    if let Some(v) = cli.m {
        cfg.m = v;
    }
    if let Some(v) = cli.tau {
        cfg.tau = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.tol {
        cfg.tol = v;
    }
    if let Some(v) = &cli.out {
        cfg.outdir = v.clone();
    }
    if let Ok(v) = std::env::var("BUBBLE_TOWER_OUT") {
        if !v.is_empty() {
            cfg.outdir = v;
        }
    }
    Ok(cfg)
}

fn solve_profile(cfg: &RunConfig) -> Result<profile::RadialProfile, Error> {
    let defaults = SolveOptions::for_dimension(cfg.n_dim);
    profile::solve_ground_state_with(
        cfg.n_dim,
        cfg.p,
        SolveOptions {
            tol: cfg.tol,
            r_max: cfg.r_max.unwrap_or(defaults.r_max),
            spacing: cfg.spacing.unwrap_or(defaults.spacing),
        },
    )
}

fn run(cli: &Cli) -> Result<(), Error> {
    let mut cfg = build_config(cli)?;
    let outdir = PathBuf::from(&cfg.outdir);

    match &cli.command {
        Command::Profile { r_max, spacing } => {
            if let Some(v) = r_max {
                cfg.r_max = Some(*v);
            }
            if let Some(v) = spacing {
                cfg.spacing = Some(*v);
            }
            let prof = solve_profile(&cfg)?;
            write_artifact(&outdir, "profile.csv", &profile::profile_to_csv(&prof))?;
            write_artifact(&outdir, "profile.json", &profile::sidecar_json(&prof))?;
            println!(
                "U(0) = {}  C0 = {}  r_match = {}",
                fmt17(prof.shoot_value),
                fmt17(prof.c0),
                prof.r_match
            );
        }
        Command::Coeffs => {
            let params = cfg.model_params()?;
            let prof = solve_profile(&cfg)?;
            let set = coefficients::compute_all(&prof, params.a1)?;
            write_artifact(&outdir, "coefficients.json", &serde_json::to_string_pretty(&set).unwrap())?;
            println!(
                "A1 = {}  A2 = {}  B1 = {}  err = {}",
                fmt17(set.a1_coeff),
                fmt17(set.a2_coeff),
                fmt17(set.b1_coeff),
                fmt17(set.err)
            );
        }
        Command::Landscape { k, grid } => {
            let params = cfg.model_params()?;
            params.validate_tower()?;
            let k = k.unwrap_or(cfg.k);
            let prof = solve_profile(&cfg)?;
            let coeffs = coefficients::compute_all(&prof, params.a1)?;
            let rect = energy::sweep_rect(params.m, k);
            let mut csv = String::from("r,h,F,dF_dr,dF_dh\n");
            for i in 0..*grid {
                let r = rect.r_lo + (rect.r_hi - rect.r_lo) * i as f64 / (*grid - 1) as f64;
                for j in 0..*grid {
                    let h = rect.h_lo + (rect.h_hi - rect.h_lo) * j as f64 / (*grid - 1) as f64;
                    let rep = energy::reduced_energy(&coeffs, &params, k, r, h)?;
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt17(r),
                        fmt17(h),
                        fmt17(rep.value),
                        fmt17(rep.d_dr),
                        fmt17(rep.d_dh),
                    ));
                }
            }
            write_artifact(&outdir, "landscape.csv", &csv)?;
            println!("landscape written ({grid}×{grid} over r ∈ [{:.4e}, {:.4e}], h ∈ [{:.4e}, {:.4e}])",
                rect.r_lo, rect.r_hi, rect.h_lo, rect.h_hi);
        }
        Command::CriticalPoint { k } => {
            let params = cfg.model_params()?;
            params.validate_tower()?;
            let k = k.unwrap_or(cfg.k);
            let prof = solve_profile(&cfg)?;
            let coeffs = coefficients::compute_all(&prof, params.a1)?;
            let (_, cp) = energy::critical_config(&coeffs, &params, k)?;
            write_artifact(&outdir, "critical_point.json", &serde_json::to_string_pretty(&cp).unwrap())?;
            println!(
                "k = {k}: r* = {}  h* = {}  residual = {}  signs = {:?}",
                fmt17(cp.r_star),
                fmt17(cp.h_star),
                fmt17(cp.grad_residual),
                cp.boundary_signs
            );
        }
        Command::Balance { k_list } => {
            let params = cfg.model_params()?;
            params.validate_tower()?;
            let list = k_list.clone().unwrap_or_else(|| cfg.k_list.clone());
            let prof = solve_profile(&cfg)?;
            let coeffs = coefficients::compute_all(&prof, params.a1)?;
            let mut csv = String::from(
                "k,ratio_neighbor,ratio_layer,ratio_neighbor_stationarity,ratio_layer_stationarity\n",
            );
            for &k in &list {
                let (tower, _) = energy::critical_config(&coeffs, &params, k)?;
                let rep = energy::balance_residuals(&prof, &coeffs, &params, &tower);
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    k,
                    fmt17(rep.ratio_neighbor),
                    fmt17(rep.ratio_layer.unwrap_or(f64::NAN)),
                    fmt17(rep.ratio_neighbor_stationarity),
                    fmt17(rep.ratio_layer_stationarity.unwrap_or(f64::NAN)),
                ));
                println!(
                    "k = {k}: a(m+1)/2 → neighbor {:.6} layer {:.6}; a·m → neighbor {:.6} layer {:.6}",
                    rep.ratio_neighbor,
                    rep.ratio_layer.unwrap_or(f64::NAN),
                    rep.ratio_neighbor_stationarity,
                    rep.ratio_layer_stationarity.unwrap_or(f64::NAN)
                );
            }
            write_artifact(&outdir, "balance.csv", &csv)?;
        }
        Command::Scaling { k_list } => {
            let params = cfg.model_params()?;
            params.validate_tower()?;
            let list = k_list.clone().unwrap_or_else(|| cfg.k_list.clone());
            let prof = solve_profile(&cfg)?;
            let coeffs = coefficients::compute_all(&prof, params.a1)?;
            let mut csv = String::from("k,ratio_neighbor,ratio_layer,growth_factor,in_band\n");
            for &k in &list {
                let (tower, _) = energy::critical_config(&coeffs, &params, k)?;
                let rep = energy::scaling_relations(&prof, &params, &tower);
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    k,
                    fmt17(rep.ratio_neighbor),
                    fmt17(rep.ratio_layer),
                    fmt17(rep.growth_factor),
                    rep.in_band,
                ));
                println!(
                    "k = {k}: (k/r^(m+1))/U(dn) = {:.4}  (1/(k r^(m+1)))/U(dl) = {:.4}  growth = {:.4}",
                    rep.ratio_neighbor, rep.ratio_layer, rep.growth_factor
                );
            }
            write_artifact(&outdir, "scaling.csv", &csv)?;
        }
        Command::LkDecay { k_list } => {
            let params = cfg.model_params()?;
            params.validate_tower()?;
            let list = k_list.clone().unwrap_or_else(|| cfg.lk_list.clone());
            let prof = solve_profile(&cfg)?;
            let sweep = field::lk_decay_sweep(&prof, &params, &list)?;
            let mut csv = String::from("k,star_norm,argmax_x,argmax_y,argmax_z\n");
            for pt in &sweep.points {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    pt.k,
                    fmt17(pt.star_norm),
                    fmt17(pt.argmax_point[0]),
                    fmt17(pt.argmax_point[1]),
                    fmt17(pt.argmax_point[2]),
                ));
            }
            write_artifact(&outdir, "lk_decay.csv", &csv)?;
            write_artifact(&outdir, "lk_decay.json", &serde_json::to_string_pretty(&sweep).unwrap())?;
            println!(
                "slope = {:.4} (95% CI [{:.4}, {:.4}])",
                sweep.slope, sweep.slope_ci95.0, sweep.slope_ci95.1
            );
        }
        Command::Pohozaev { levels } => {
            let list = levels.clone().unwrap_or_else(|| cfg.levels.clone());
            let conv = report::pohozaev_convergence(&list)?;
            write_artifact(&outdir, "pohozaev.json", &serde_json::to_string_pretty(&conv).unwrap())?;
            println!("{:>8} {:>24} {:>10}", "cells", "residual", "ratio");
            for (i, cells) in conv.levels.iter().enumerate() {
                let ratio = if i > 0 { format!("{:.4}", conv.ratios[i - 1]) } else { "-".into() };
                println!("{:>8} {:>24} {:>10}", cells, fmt17(conv.residuals[i]), ratio);
            }
        }
        Command::Spectrum { ell_max } => {
            let ell_max = ell_max.unwrap_or(cfg.ell_max);
            let prof = solve_profile(&cfg)?;
            let mut sectors = Vec::new();
            println!(
                "{:>3} {:>14} {:>14} {:>14} {:>14} {:>5} {:>10}",
                "l", "lambda0", "lambda1", "lambda2", "lambda3", "neg", "alignment"
            );
            for ell in 0..=ell_max {
                let rep = spectrum::radial_linearized_spectrum(&prof, ell, &Default::default())?;
                println!(
                    "{:>3} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>5} {:>10}",
                    ell,
                    rep.lowest_eigenvalues[0],
                    rep.lowest_eigenvalues[1],
                    rep.lowest_eigenvalues[2],
                    rep.lowest_eigenvalues[3],
                    rep.negative_count,
                    rep.zero_mode_alignment.map_or("-".into(), |a| format!("{a:.6}")),
                );
                sectors.push(rep);
            }
            let verdict = spectrum::nondegeneracy_check(&prof)?;
            println!("non-degeneracy: {}", if verdict.pass { "PASS" } else { "FAIL" });
            for f in &verdict.failures {
                println!("  - {f}");
            }
            write_artifact(&outdir, "spectrum.json", &serde_json::to_string_pretty(&sectors).unwrap())?;
            write_artifact(
                &outdir,
                "nondegeneracy.json",
                &serde_json::to_string_pretty(&verdict).unwrap(),
            )?;
        }
        Command::ToyTower { separations } => {
            let seps = separations.clone().unwrap_or_else(|| cfg.separations.clone());
            let sweep = spectrum::toy_near_kernel_sweep(cfg.p, &seps, &Default::default())?;
            write_artifact(&outdir, "toy_tower.json", &serde_json::to_string_pretty(&sweep).unwrap())?;
            for (d, even, odd) in &sweep.per_separation {
                println!("d = {d}: even {even:.6e}  odd {odd:.6e}");
            }
            println!(
                "log-linear fits: even slope {:.4} R2 {:.5}; odd slope {:.4} R2 {:.5}",
                sweep.slope_even, sweep.r2_even, sweep.slope_odd, sweep.r2_odd
            );
        }
        Command::Report => {
            let rep = report::run_report(&cfg, &outdir)?;
            println!("report written to {}", outdir.join("report.json").display());
            println!(
                "profile: U0 errors ({:.2e}, {:.2e})  C0 errors ({:.2e}, {:.2e})",
                rep.profile_exactness.u0_error_p3,
                rep.profile_exactness.u0_error_p2,
                rep.profile_exactness.c0_error_p3,
                rep.profile_exactness.c0_error_p2
            );
            println!(
                "spectra: N=3 {}  N=4 {}",
                if rep.spectrum_n3_p3.pass { "PASS" } else { "FAIL" },
                if rep.spectrum_n4_p2.pass { "PASS" } else { "FAIL" }
            );
            println!("lk slope {:.3} (threshold {:.3})", rep.lk_decay.slope, rep.lk_decay.threshold);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Config(_) | Error::InvalidParams(_) | Error::Dimension { .. } => 2,
                Error::Io(_) => 4,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
