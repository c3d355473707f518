//! Independent oracles for the derived golden values: these routines
//! share no code with the production paths they check (fixed-step RK4
//! against the adaptive embedded pair, trapezoid–Richardson against
//! Gauss–Legendre panels).

use bubble_tower::coefficients;
use bubble_tower::profile::{self, soliton_1d};

/// Fixed-step classical RK4 shooting oracle at half the production
/// grid step: classifies one trajectory of U'' = -(N-1)/r U' + U - U^p.
fn rk4_classify(n_dim: usize, p: f64, s: f64) -> i32 {
    let step = 0.0025;
    let r0 = 1e-3;
    let nm1 = (n_dim - 1) as f64;
    let f = |r: f64, u: f64, du: f64| -> (f64, f64) {
        (du, -nm1 / r * du + u - u.abs().powf(p - 1.0) * u)
    };
    let mut r = r0;
    let mut u = s + (s - s.powf(p)) * r0 * r0 / (2.0 * n_dim as f64);
    let mut du = (s - s.powf(p)) * r0 / n_dim as f64;
    while r < 36.0 {
        let (k1u, k1v) = f(r, u, du);
        let (k2u, k2v) = f(r + step / 2.0, u + step / 2.0 * k1u, du + step / 2.0 * k1v);
        let (k3u, k3v) = f(r + step / 2.0, u + step / 2.0 * k2u, du + step / 2.0 * k2v);
        let (k4u, k4v) = f(r + step, u + step * k3u, du + step * k3v);
        u += step / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r += step;
        if u <= 0.0 {
            return 1; // crossed zero: s too large
        }
        if du > 0.0 && r > 0.5 {
            return -1; // turned upward: s too small
        }
    }
    0
}

fn rk4_ground_state(n_dim: usize, p: f64) -> f64 {
    let (mut lo, mut hi) = (1.0, 10.0 * ((p + 1.0) / 2.0).powf(1.0 / (p - 1.0)));
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match rk4_classify(n_dim, p, mid) {
            1 => hi = mid,
            -1 => lo = mid,
            _ => break,
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn shooting_oracle_reproduces_production_ground_state() {
    let oracle = rk4_ground_state(3, 3.0);
    // the frozen golden value and the production solver must both sit
    // on the oracle's separatrix
    assert!((oracle - 4.33738768015491).abs() < 1e-7, "oracle U(0) = {oracle:.12}");
    let prod = profile::solve_ground_state(3, 3.0, 1e-12).unwrap();
    assert!((prod.shoot_value - oracle).abs() < 1e-7, "production {} vs oracle {oracle}", prod.shoot_value);
}

#[test]
fn shooting_oracle_on_closed_form() {
    let oracle = rk4_ground_state(1, 3.0);
    assert!((oracle - 2.0f64.sqrt()).abs() < 1e-8);
}

/// Trapezoid + one Richardson step on dyadic grids — an integration
/// route with nothing in common with the Gauss–Legendre panels.
fn richardson_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let trap = |n: usize| -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = 0.5 * (f(a) + f(b));
        for i in 1..n {
            acc += f(a + i as f64 * h);
        }
        acc * h
    };
    let coarse = trap(n);
    let fine = trap(2 * n);
    (4.0 * fine - coarse) / 3.0
}

#[test]
fn quadrature_oracle_for_a1_and_a2() {
    let prof = profile::solve_ground_state(3, 3.0, 1e-12).unwrap();
    let oracle_a1 = 4.0
        * std::f64::consts::PI
        * richardson_trapezoid(|r| prof.value(r).powi(2) * r * r, 0.0, prof.r_max, 60_000);
    let a1 = coefficients::compute_a1(&prof, 1.0);
    assert!(
        ((a1 - oracle_a1) / oracle_a1).abs() < 1e-5,
        "panels {a1:.10} vs trapezoid oracle {oracle_a1:.10}"
    );
    // frozen golden value
    assert!((a1 - 18.8972513).abs() < 2e-4);
}

#[test]
fn quadrature_oracle_for_b1_in_one_dimension() {
    // ∫ (√2 sech x)³ e^(−x) dx over R against the refined-grid oracle
    let prof = profile::solve_ground_state(1, 3.0, 1e-12).unwrap();
    let exactish = richardson_trapezoid(
        |x| (2.0f64.sqrt() / x.cosh()).powi(3) * (-x).exp(),
        -30.0,
        30.0,
        40_000,
    );
    let b1 = coefficients::compute_b1(&prof).unwrap();
    let c0 = 2.0 * 2.0f64.sqrt();
    assert!(
        (b1 / (c0 * exactish) - 1.0).abs() < 1e-4,
        "B1 {b1:.8} vs oracle {:.8}",
        c0 * exactish
    );
}

#[test]
fn soliton_oracle_against_ode_residual() {
    // the closed form satisfies U'' = U − U³ pointwise
    for i in 0..200 {
        let x = -5.0 + 0.05 * i as f64;
        let step = 1e-4;
        let dd = (soliton_1d(3.0, x + step) - 2.0 * soliton_1d(3.0, x) + soliton_1d(3.0, x - step))
            / (step * step);
        let u = soliton_1d(3.0, x);
        assert!((dd - (u - u.powi(3))).abs() < 1e-6, "residual at x = {x}");
    }
}
