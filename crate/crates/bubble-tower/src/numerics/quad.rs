//! Composite Gauss–Legendre quadrature.
//!
//! Nodes and weights on [-1, 1] are computed by Newton iteration on
//! P_n with the usual cos-initial guess; panels map them affinely.

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrates `f` over [a, b] with `panels` equal panels of an
/// `n`-point Gauss–Legendre rule, summed left to right.
pub fn panel_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}

/// Surface area of the unit sphere S^{N-1} in R^N: 2 π^{N/2} / Γ(N/2).
pub fn unit_sphere_area(n_dim: usize) -> f64 {
    assert!(n_dim >= 1);
    // Γ(N/2) built up from Γ(1) = 1 or Γ(1/2) = √π
    let mut gamma = if n_dim % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut arg = if n_dim % 2 == 0 { 1.0 } else { 0.5 };
    while arg < n_dim as f64 / 2.0 - 0.25 {
        gamma *= arg;
        arg += 1.0;
    }
    2.0 * std::f64::consts::PI.powf(n_dim as f64 / 2.0) / gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exactness() {
        // 8-point rule integrates degree-15 polynomials exactly
        let val = panel_integrate(|x| x.powi(14), -1.0, 1.0, 1, 8);
        assert_relative_eq!(val, 2.0 / 15.0, max_relative = 1e-13);
    }

    #[test]
    fn decaying_exponential() {
        let val = panel_integrate(|x| (-2.0 * x).exp(), 0.0, 40.0, 80, 16);
        assert_relative_eq!(val, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(2), 2.0 * std::f64::consts::PI, max_relative = 1e-14);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * std::f64::consts::PI, max_relative = 1e-14);
        assert_relative_eq!(
            unit_sphere_area(4),
            2.0 * std::f64::consts::PI * std::f64::consts::PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            unit_sphere_area(6),
            std::f64::consts::PI.powi(3),
            max_relative = 1e-14
        );
    }
}
