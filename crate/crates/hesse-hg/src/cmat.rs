//! Dense complex matrices of small size: products, LU solves, determinants,
//! eigenvalues by the shifted QR iteration on a Hessenberg form, and inverse
//! iteration for eigenvectors. Everything here targets 9x9-scale problems.

use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::Zero;

type C = Complex64;

#[derive(Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    a: Vec<C>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, a: vec![C::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        CMat::from_fn(n, |i, j| rows[i][j])
    }

    pub fn diag(d: &[C]) -> Self {
        let mut m = CMat::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        CMat::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == C::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * o[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(i, j)] + o[(i, j)])
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(i, j)] - o[(i, j)])
    }

    pub fn scale(&self, s: C) -> CMat {
        CMat::from_fn(self.n, |i, j| self[(i, j)] * s)
    }

    pub fn matvec(&self, v: &[C]) -> Vec<C> {
        let n = self.n;
        let mut out = vec![C::zero(); n];
        for i in 0..n {
            for j in 0..n {
                out[i] += self[(i, j)] * v[j];
            }
        }
        out
    }

    pub fn vecmat(&self, v: &[C]) -> Vec<C> {
        let n = self.n;
        let mut out = vec![C::zero(); n];
        for j in 0..n {
            for i in 0..n {
                out[j] += v[i] * self[(i, j)];
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-row-sum (infinity) norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, o: &CMat) -> f64 {
        self.sub(o).max_abs()
    }

    /// LU decomposition with partial pivoting; returns (LU, perm, sign-swaps).
    fn lu(&self) -> Option<(CMat, Vec<usize>, usize)> {
        let n = self.n;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (piv, mag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if mag == 0.0 {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(k, piv);
                swaps += 1;
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let s = lu[(k, j)];
                    lu[(i, j)] -= f * s;
                }
            }
        }
        Some((lu, perm, swaps))
    }

    pub fn det(&self) -> C {
        match self.lu() {
            None => C::zero(),
            Some((lu, _, swaps)) => {
                let mut d = if swaps % 2 == 0 { C::new(1.0, 0.0) } else { C::new(-1.0, 0.0) };
                for i in 0..self.n {
                    d *= lu[(i, i)];
                }
                d
            }
        }
    }

    pub fn solve(&self, b: &[C]) -> Option<Vec<C>> {
        let n = self.n;
        let (lu, perm, _) = self.lu()?;
        let mut y = vec![C::zero(); n];
        for i in 0..n {
            let mut s = b[perm[i]];
            for j in 0..i {
                s -= lu[(i, j)] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * y[j];
            }
            y[i] = s / lu[(i, i)];
        }
        Some(y)
    }

    pub fn inverse(&self) -> Result<CMat> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![C::zero(); n];
            e[j] = C::new(1.0, 0.0);
            match self.solve(&e) {
                Some(c) => cols.push(c),
                None => {
                    return Err(Error::SingularMatrix { context: "inverse", cond: f64::INFINITY })
                }
            }
        }
        Ok(CMat::from_fn(n, |i, j| cols[j][i]))
    }

    /// Condition number estimate in the infinity norm.
    pub fn cond_inf(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm_inf() * inv.norm_inf(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Reduce to upper Hessenberg form by Householder reflections
    /// (eigenvalue-preserving).
    fn hessenberg(&self) -> CMat {
        let n = self.n;
        let mut h = self.clone();
        for k in 0..n.saturating_sub(2) {
            // Build the reflector for column k below the subdiagonal.
            let mut x: Vec<C> = (k + 1..n).map(|i| h[(i, k)]).collect();
            let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if xnorm == 0.0 {
                continue;
            }
            let phase = if x[0] == C::zero() { C::new(1.0, 0.0) } else { x[0] / x[0].norm() };
            let alpha = -phase * xnorm;
            x[0] -= alpha;
            let vnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vnorm == 0.0 {
                continue;
            }
            for z in &mut x {
                *z /= vnorm;
            }
            // h = (I - 2 v v*) h (I - 2 v v*) on the trailing block.
            for j in 0..n {
                let mut s = C::zero();
                for i in k + 1..n {
                    s += x[i - k - 1].conj() * h[(i, j)];
                }
                s *= 2.0;
                for i in k + 1..n {
                    let t = x[i - k - 1];
                    h[(i, j)] -= t * s;
                }
            }
            for i in 0..n {
                let mut s = C::zero();
                for j in k + 1..n {
                    s += h[(i, j)] * x[j - k - 1];
                }
                s *= 2.0;
                for j in k + 1..n {
                    let t = x[j - k - 1].conj();
                    h[(i, j)] -= s * t;
                }
            }
        }
        h
    }

    /// All eigenvalues by the shifted QR iteration.
    pub fn eigenvalues(&self) -> Vec<C> {
        let mut h = self.hessenberg();
        let n = self.n;
        let scale = self.norm_inf().max(1e-300);
        let eps = 1e-16;
        let mut eigs: Vec<C> = Vec::with_capacity(n);
        let mut hi = n; // active block is 0..hi
        let mut stall = 0usize;
        while hi > 0 {
            // Deflate trailing entries.
            if hi == 1 {
                eigs.push(h[(0, 0)]);
                hi = 0;
                continue;
            }
            let sub = h[(hi - 1, hi - 2)].norm();
            let diag_mag = h[(hi - 1, hi - 1)].norm() + h[(hi - 2, hi - 2)].norm();
            if sub <= eps * diag_mag.max(scale * 1e-3) {
                eigs.push(h[(hi - 1, hi - 1)]);
                hi -= 1;
                stall = 0;
                continue;
            }
            // Wilkinson shift from the trailing 2x2 of the active block.
            let a = h[(hi - 2, hi - 2)];
            let b = h[(hi - 2, hi - 1)];
            let c = h[(hi - 1, hi - 2)];
            let d = h[(hi - 1, hi - 1)];
            let tr = a + d;
            let det2 = a * d - b * c;
            let disc = (tr * tr - 4.0 * det2).sqrt();
            let l1 = (tr + disc) * 0.5;
            let l2 = (tr - disc) * 0.5;
            let mut mu = if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 };
            stall += 1;
            if stall > 0 && stall % 12 == 0 {
                // Exceptional shift to break symmetry-induced stalls.
                mu += C::new(sub, sub * 0.5);
            }
            if stall > 300 {
                // Give up on further refinement; report what remains.
                for i in 0..hi {
                    eigs.push(h[(i, i)]);
                }
                break;
            }
            qr_step(&mut h, hi, mu);
        }
        eigs
    }

    /// Eigenvector for a known (approximate) eigenvalue via inverse
    /// iteration; returns a unit-norm right eigenvector of `self`.
    pub fn eigenvector_for(&self, lambda: C) -> Result<Vec<C>> {
        let n = self.n;
        // Tiny diagonal regularization keeps the shifted matrix invertible.
        let reg = (self.norm_inf() * 1e-14).max(1e-290);
        let shifted = CMat::from_fn(n, |i, j| {
            self[(i, j)]
                - if i == j { lambda + C::new(reg, reg) } else { C::zero() }
        });
        let mut v: Vec<C> = (0..n)
            .map(|i| C::new(1.0 + (i as f64) * 0.03, 0.21 - (i as f64) * 0.017))
            .collect();
        normalize(&mut v);
        for _ in 0..6 {
            let w = shifted.solve(&v).ok_or(Error::SingularMatrix {
                context: "inverse iteration",
                cond: f64::INFINITY,
            })?;
            v = w;
            normalize(&mut v);
        }
        Ok(v)
    }
}

fn normalize(v: &mut [C]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

fn givens(a: C, b: C) -> (f64, C) {
    if b == C::zero() {
        return (1.0, C::zero());
    }
    if a == C::zero() {
        return (0.0, b.conj() / b.norm());
    }
    let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / t;
    let s = (a / a.norm()) * b.conj() / t;
    (c, s)
}

/// One explicit single-shift QR sweep on the leading `m x m` active block
/// of the Hessenberg matrix `h`.
fn qr_step(h: &mut CMat, m: usize, mu: C) {
    for i in 0..m {
        h[(i, i)] -= mu;
    }
    let mut rots: Vec<(f64, C)> = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        // Left-multiply rows k, k+1 by [[c, s], [-conj(s), c]].
        for j in k..m {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c * x + s * y;
            h[(k + 1, j)] = -s.conj() * x + c * y;
        }
        rots.push((c, s));
    }
    for (k, (c, s)) in rots.iter().enumerate() {
        // Right-multiply columns k, k+1 by the adjoint rotation.
        let top = (k + 2).min(m);
        for i in 0..top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = *c * x + s.conj() * y;
            h[(i, k + 1)] = -*s * x + *c * y;
        }
    }
    for i in 0..m {
        h[(i, i)] += mu;
    }
}

/// Greedy clustering of eigenvalues: values within `tol` of a cluster
/// center join it. Returns (center, multiplicity) sorted by multiplicity.
pub fn cluster_eigenvalues(eigs: &[C], tol: f64) -> Vec<(C, usize)> {
    let mut clusters: Vec<(C, Vec<C>)> = Vec::new();
    for &e in eigs {
        match clusters.iter_mut().find(|(c, _)| (*c - e).norm() <= tol) {
            Some((_, members)) => {
                members.push(e);
            }
            None => clusters.push((e, vec![e])),
        }
    }
    let mut out: Vec<(C, usize)> = clusters
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let mean = members.iter().sum::<C>() / m as f64;
            (mean, m)
        })
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1));
    out
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.a[i * self.n + j]
    }
}

impl std::fmt::Debug for CMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> CMat {
        // Small deterministic LCG; adequate for test matrices.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let vals: Vec<C> = (0..n * n).map(|_| c(next(), next())).collect();
        CMat::from_fn(n, |i, j| vals[i * n + j])
    }

    #[test]
    fn lu_solve_and_det() {
        let m = CMat::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 1.0)],
            vec![c(0.0, -1.0), c(3.0, 0.0)],
        ]);
        // det = 6 - (1+i)(-i) = 6 - (1 - i)... compute: (1+1i)*(0-1i) = -i - i^2 = 1 - i
        let expect = c(6.0, 0.0) - c(1.0, -1.0);
        assert!((m.det() - expect).norm() < 1e-14);
        let b = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let x = m.solve(&b).unwrap();
        let back = m.matvec(&x);
        assert!((back[0] - b[0]).norm() < 1e-14 && (back[1] - b[1]).norm() < 1e-14);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).max_abs_diff(&CMat::identity(2)) < 1e-14);
    }

    #[test]
    fn eigenvalues_of_diagonal_and_triangular() {
        let d = CMat::diag(&[c(1.0, 0.0), c(2.0, -1.0), c(-0.5, 3.0)]);
        let mut eigs = d.eigenvalues();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((eigs[0] - c(-0.5, 3.0)).norm() < 1e-12);
        assert!((eigs[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((eigs[2] - c(2.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_det_random() {
        for seed in 1..6u64 {
            let m = random_matrix(7, seed);
            let eigs = m.eigenvalues();
            assert_eq!(eigs.len(), 7);
            let tr: C = (0..7).map(|i| m[(i, i)]).sum();
            let se: C = eigs.iter().sum();
            assert!((tr - se).norm() < 1e-10, "trace mismatch at seed {seed}");
            let de = eigs.iter().product::<C>();
            assert!((m.det() - de).norm() < 1e-9 * m.det().norm().max(1.0));
        }
    }

    #[test]
    fn repeated_eigenvalue_cluster() {
        // A + rank-one update: eigenvalues {1 (x4), 1 + sum} pattern via a
        // projector-style matrix similar to the circuit-matrix shape.
        let n = 5;
        let lam = c(0.3, 0.8);
        let h: Vec<C> = (0..n).map(|i| c(1.0 + i as f64 * 0.21, -0.13 * i as f64)).collect();
        let hsum: C = h.iter().sum();
        let coef = (c(1.0, 0.0) - lam) / hsum;
        let m = CMat::from_fn(n, |i, j| {
            let delta = if i == j { c(1.0, 0.0) } else { C::zero() };
            delta - coef * h[i]
        });
        let eigs = m.eigenvalues();
        let clusters = cluster_eigenvalues(&eigs, 1e-9);
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].1, n - 1);
        assert!((clusters[0].0 - c(1.0, 0.0)).norm() < 1e-10);
        assert!((clusters[1].0 - lam).norm() < 1e-10);
    }

    #[test]
    fn inverse_iteration_recovers_eigenvector() {
        let m = random_matrix(6, 42);
        let eigs = m.eigenvalues();
        let lam = eigs[2];
        let v = m.eigenvector_for(lam).unwrap();
        let mv = m.matvec(&v);
        let resid: f64 = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lam * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(resid < 1e-9, "residual {resid}");
    }
}
