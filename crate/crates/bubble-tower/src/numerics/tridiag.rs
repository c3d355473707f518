//! Eigenvalues of symmetric tridiagonal matrices by bisection on the
//! Sturm count, plus inverse iteration for eigenvectors.
//!
//! The Sturm count (number of eigenvalues below a shift) is the number
//! of negative pivots of the LDLᵀ factorization of T − λI, which is
//! robust without any balancing and fully deterministic.

/// Symmetric tridiagonal matrix: `diag.len() == n`, `off.len() == n-1`.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0usize;
        let mut d = self.diag[0] - lambda;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let e = self.off[i - 1];
            let mut denom = d;
            if denom == 0.0 {
                denom = 1e-300;
            }
            d = (self.diag[i] - lambda) - e * e / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds on the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// The `k` smallest eigenvalues, ascending, bisected to relative
    /// width ~1e-14 of the spectral scale.
    pub fn smallest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let (lo0, hi0) = self.bounds();
        let scale = lo0.abs().max(hi0.abs()).max(1.0);
        let tol = 1e-15 * scale;
        let mut out = Vec::with_capacity(k);
        for idx in 0..k.min(self.n()) {
            let mut lo = lo0;
            let mut hi = hi0;
            // invariant: count_below(lo) ≤ idx < count_below(hi)
            for _ in 0..200 {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) <= idx {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    /// Eigenvector for the eigenvalue nearest `lambda` via inverse
    /// iteration with a slightly perturbed shift; returns a unit vector.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.n();
        let (lo, hi) = self.bounds();
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let shift = lambda + 1e-12 * scale;
        // deterministic start vector
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 2654435761) % 1000) as f64 * 1e-4).collect();
        normalize(&mut v);
        for _ in 0..8 {
            let mut w = self.solve_shifted(shift, &v);
            normalize(&mut w);
            v = w;
        }
        // fix overall sign: make the largest-magnitude entry positive
        let mut imax = 0;
        for i in 0..n {
            if v[i].abs() > v[imax].abs() {
                imax = i;
            }
        }
        if v[imax] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }

    /// Solves (T − shift·I) x = b by LU with partial pivoting restricted
    /// to the tridiagonal band (stable even for near-singular shifts).
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        // working bands: d (diag), u1 (super), u2 (second super), and rhs
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - shift).collect();
        let mut u1: Vec<f64> = self.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut x: Vec<f64> = b.to_vec();
        for i in 0..n - 1 {
            let sub = self.off[i];
            if sub.abs() > d[i].abs() {
                // swap rows i, i+1
                let (di, u1i, u2i, xi) = (d[i], u1[i], u2[i], x[i]);
                d[i] = sub;
                u1[i] = d[i + 1];
                u2[i] = u1[i + 1];
                x[i] = x[i + 1];
                d[i + 1] = u1i;
                u1[i + 1] = u2i;
                x[i + 1] = xi;
                let factor = di / d[i];
                d[i + 1] -= factor * u1[i];
                u1[i + 1] -= factor * u2[i];
                x[i + 1] -= factor * x[i];
            } else {
                let pivot = if d[i] == 0.0 { 1e-300 } else { d[i] };
                let factor = sub / pivot;
                d[i + 1] -= factor * u1[i];
                u1[i + 1] -= factor * u2[i];
                x[i + 1] -= factor * x[i];
            }
        }
        // back substitution
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            let pivot = if d[i] == 0.0 { 1e-300 } else { d[i] };
            x[i] = s / pivot;
        }
        x
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
