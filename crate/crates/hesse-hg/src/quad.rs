//! Gauss-Jacobi quadrature on [-1, 1] for weights `(1-x)^alpha (1+x)^beta`
//! with `alpha, beta > -1`, built by Golub-Welsch: nodes are eigenvalues of
//! the symmetric tridiagonal Jacobi matrix (found by Sturm bisection),
//! weights come from the Christoffel sums of the orthonormal polynomials.

use crate::gamma::gamma_unchecked;
use num_complex::Complex64;

pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl GaussJacobi {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Self {
        assert!(n >= 2 && alpha > -1.0 && beta > -1.0);
        let (diag, off) = jacobi_recurrence(n, alpha, beta);
        let nodes = tridiag_eigenvalues(&diag, &off);
        let mu0 = moment_zero(alpha, beta);
        let weights: Vec<f64> = nodes
            .iter()
            .map(|&x| {
                // w_i = mu0 / sum_k ptilde_k(x_i)^2 over orthonormal polys.
                let mut p_prev = 0.0_f64;
                let mut p = 1.0 / mu0.sqrt();
                let mut sum = p * p;
                for k in 0..n - 1 {
                    let b_next = off[k];
                    let p_next = ((x - diag[k]) * p - if k == 0 { 0.0 } else { off[k - 1] } * p_prev)
                        / b_next;
                    p_prev = p;
                    p = p_next;
                    sum += p * p;
                }
                1.0 / sum
            })
            .collect();
        GaussJacobi { nodes, weights, alpha, beta }
    }

    /// Integrate `f` against the Jacobi weight over [-1, 1].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Zeroth moment `int (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+1)`.
fn moment_zero(alpha: f64, beta: f64) -> f64 {
    let g = |v: f64| gamma_unchecked(Complex64::new(v, 0.0)).re;
    2f64.powf(alpha + beta + 1.0) * g(alpha + 1.0) * g(beta + 1.0) / g(alpha + beta + 2.0)
}

/// Diagonal and off-diagonal of the symmetric Jacobi matrix for the
/// orthonormal recurrence.
fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    diag.push((b - a) / (a + b + 2.0));
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        diag.push((b * b - a * a) / (s * (s + 2.0)));
        let b2 = if k == 1 {
            // Cancelled form, valid also when a + b = -1.
            4.0 * (1.0 + a) * (1.0 + b) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off.push(b2.sqrt());
    }
    (diag, off)
}

/// Eigenvalues of a symmetric tridiagonal matrix by bisection on the Sturm
/// sequence sign-count.
fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = (if i > 0 { off[i - 1].abs() } else { 0.0 })
            + (if i < n - 1 { off[i].abs() } else { 0.0 });
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let count_below = |x: f64| -> usize {
        // Number of eigenvalues < x via the Sturm sequence of leading
        // principal minors (computed in ratio form).
        let mut count = 0;
        let mut d = diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let e2 = off[i - 1] * off[i - 1];
            d = diag[i] - x - e2 / (if d == 0.0 { 1e-300 } else { d });
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..120 {
            let m = 0.5 * (a + b);
            if count_below(m) <= k {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-15 * (1.0 + m.abs()) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_case_integrates_polynomials_exactly() {
        let q = GaussJacobi::new(8, 0.0, 0.0);
        // int_{-1}^{1} x^2 dx = 2/3, int x^6 = 2/7
        assert!((q.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-13);
        assert!((q.integrate(|x| x.powi(6)) - 2.0 / 7.0).abs() < 1e-13);
        assert!((q.integrate(|x| x.powi(3)) - 0.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_weight_case() {
        // alpha = beta = -1/2: int (1-x^2)^(-1/2) dx = pi.
        let q = GaussJacobi::new(6, -0.5, -0.5);
        assert!((q.integrate(|_| 1.0) - std::f64::consts::PI).abs() < 1e-12);
        // int x^2 / sqrt(1-x^2) = pi/2
        assert!((q.integrate(|x| x * x) - std::f64::consts::PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_endpoint_weight() {
        // alpha = -1/3, beta = 0: moment = int (1-x)^(-1/3) dx = (3/2) 2^(2/3)
        let q = GaussJacobi::new(10, -1.0 / 3.0, 0.0);
        let expect = 1.5 * 2f64.powf(2.0 / 3.0);
        assert!((q.integrate(|_| 1.0) - expect).abs() < 1e-12);
    }
}
