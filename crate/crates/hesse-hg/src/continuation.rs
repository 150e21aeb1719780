//! Numerical monodromy: loop construction, transport of the fundamental
//! solution matrix along the first-order system, numeric circuit matrices,
//! and the gauge comparison against the closed forms.

use crate::cmat::CMat;
use crate::error::{Error, Result};
use crate::fundamental::{eval_solution_deriv, SolutionLabel};
use crate::monodromy::{lambda, m3, LABEL_ORDER};
use crate::params::{ExpParams, HgParams};
use crate::series::Truncation;
use crate::weyl::{r_polynomial, singular_factors, PfaffianSystem};
use num_complex::Complex64;
use std::f64::consts::TAU;

type C = Complex64;

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// One analytic piece of a loop, parametrized over [0, 1].
#[derive(Clone, Debug)]
pub enum Segment {
    /// One coordinate moves on a circular arc, the other is fixed.
    Arc {
        axis: usize,
        center: C,
        radius: f64,
        phi0: f64,
        phi1: f64,
        other: C,
    },
    /// Straight segment in the line coordinate of `x = (eps1 r, eps2 r)`.
    RadialLine { eps: (f64, f64), r0: C, r1: C },
    /// Circular arc in the line coordinate.
    RadialArc {
        eps: (f64, f64),
        center: C,
        radius: f64,
        phi0: f64,
        phi1: f64,
    },
}

impl Segment {
    /// Position at parameter `s`.
    pub fn at(&self, s: f64) -> (C, C) {
        match *self {
            Segment::Arc { axis, center, radius, phi0, phi1, other } => {
                let phi = phi0 + (phi1 - phi0) * s;
                let z = center + C::from_polar(radius, phi);
                if axis == 0 {
                    (z, other)
                } else {
                    (other, z)
                }
            }
            Segment::RadialLine { eps, r0, r1 } => {
                let r = r0 + (r1 - r0) * s;
                (eps.0 * r, eps.1 * r)
            }
            Segment::RadialArc { eps, center, radius, phi0, phi1 } => {
                let phi = phi0 + (phi1 - phi0) * s;
                let r = center + C::from_polar(radius, phi);
                (eps.0 * r, eps.1 * r)
            }
        }
    }

    /// Velocity at parameter `s`.
    pub fn velocity(&self, s: f64) -> (C, C) {
        match *self {
            Segment::Arc { axis, radius, phi0, phi1, .. } => {
                let phi = phi0 + (phi1 - phi0) * s;
                let dz = C::from_polar(radius, phi) * C::new(0.0, phi1 - phi0);
                if axis == 0 {
                    (dz, C::new(0.0, 0.0))
                } else {
                    (C::new(0.0, 0.0), dz)
                }
            }
            Segment::RadialLine { eps, r0, r1 } => {
                let dr = r1 - r0;
                (eps.0 * dr, eps.1 * dr)
            }
            Segment::RadialArc { eps, radius, phi0, phi1, .. } => {
                let phi = phi0 + (phi1 - phi0) * s;
                let dr = C::from_polar(radius, phi) * C::new(0.0, phi1 - phi0);
                (eps.0 * dr, eps.1 * dr)
            }
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Arc { axis, center, radius, phi0, phi1, other } => Segment::Arc {
                axis,
                center,
                radius,
                phi0: phi1,
                phi1: phi0,
                other,
            },
            Segment::RadialLine { eps, r0, r1 } => Segment::RadialLine { eps, r0: r1, r1: r0 },
            Segment::RadialArc { eps, center, radius, phi0, phi1 } => Segment::RadialArc {
                eps,
                center,
                radius,
                phi0: phi1,
                phi1: phi0,
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let c = |z: C| serde_json::json!([z.re, z.im]);
        match *self {
            Segment::Arc { axis, center, radius, phi0, phi1, other } => serde_json::json!({
                "kind": "arc", "axis": axis, "center": c(center), "radius": radius,
                "phi0": phi0, "phi1": phi1, "other": c(other),
            }),
            Segment::RadialLine { eps, r0, r1 } => serde_json::json!({
                "kind": "radial-line", "eps": [eps.0, eps.1], "r0": c(r0), "r1": c(r1),
            }),
            Segment::RadialArc { eps, center, radius, phi0, phi1 } => serde_json::json!({
                "kind": "radial-arc", "eps": [eps.0, eps.1], "center": c(center),
                "radius": radius, "phi0": phi0, "phi1": phi1,
            }),
        }
    }
}

/// Piecewise-smooth closed path based at `(eps1, eps2)`.
#[derive(Clone, Debug)]
pub struct LoopPath {
    pub segments: Vec<Segment>,
    pub base: (C, C),
    pub label: String,
}

impl LoopPath {
    pub fn reversed(&self) -> LoopPath {
        LoopPath {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
            base: self.base,
            label: format!("{}^-1", self.label),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.label,
            "base": [[self.base.0.re, self.base.0.im], [self.base.1.re, self.base.1.im]],
            "segments": self.segments.iter().map(Segment::to_json).collect::<Vec<_>>(),
        })
    }

    /// Minimal distance proxy to the singular set over sampled points: the
    /// smallest of |x1|, |x2|, |R(x)| and any extra denominator factor
    /// magnitudes along the path.
    pub fn clearance(&self, extra: &[crate::poly::Poly2], samples: usize) -> f64 {
        let r = r_polynomial();
        let mut worst = f64::INFINITY;
        for seg in &self.segments {
            for k in 0..=samples {
                let s = k as f64 / samples as f64;
                let (x1, x2) = seg.at(s);
                let mut c = x1.norm().min(x2.norm()).min(r.eval_c64(&[x1, x2]).norm());
                for f in extra {
                    c = c.min(f.eval_c64(&[x1, x2]).norm());
                }
                worst = worst.min(c);
            }
        }
        worst
    }

    pub fn require_clearance(
        &self,
        extra: &[crate::poly::Poly2],
        samples: usize,
        min_clearance: f64,
    ) -> Result<()> {
        let r = r_polynomial();
        for (si, seg) in self.segments.iter().enumerate() {
            for k in 0..=samples {
                let s = k as f64 / samples as f64;
                let (x1, x2) = seg.at(s);
                let mut c = x1.norm().min(x2.norm()).min(r.eval_c64(&[x1, x2]).norm());
                for f in extra {
                    c = c.min(f.eval_c64(&[x1, x2]).norm());
                }
                if c < min_clearance {
                    return Err(Error::Clearance {
                        segment: si,
                        s,
                        clearance: c,
                        required: min_clearance,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Smallest real root above 1 of the cubic cut out on the base line, found
/// by scan-and-bisect.
pub fn p1_coordinate(eps1: f64, eps2: f64) -> Result<f64> {
    assert!(0.0 < eps2 && eps2 < eps1 && eps1 <= 0.125);
    let r = r_polynomial();
    let f = |t: f64| r.eval_c64(&[C::new(eps1 * t, 0.0), C::new(eps2 * t, 0.0)]).re;
    let lo = 1.0_f64;
    let mut hi = lo;
    let mut step = 0.05_f64;
    let f_lo = f(lo);
    loop {
        hi += step;
        step *= 1.5;
        if hi > 1e6 {
            return Err(Error::Root { lo: 1.0, hi: 1e6 });
        }
        if f(hi) * f_lo < 0.0 {
            break;
        }
    }
    let mut a = lo;
    let mut b = hi;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(m) * f(a) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
        if b - a < 1e-15 * b.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// The three generating loops: coordinate circles around the two axes and
/// the real-axis detour around the nearest line intersection with the
/// cubic, all based at `(eps1, eps2)`.
pub fn build_loops(eps1: f64, eps2: f64, delta: f64) -> Result<(LoopPath, LoopPath, LoopPath)> {
    let base = (C::new(eps1, 0.0), C::new(eps2, 0.0));
    let r1 = p1_coordinate(eps1, eps2)?;
    assert!(
        delta < (r1 - 1.0).min(0.2),
        "detour radius {delta} too large for r1 = {r1}"
    );
    let rho1 = LoopPath {
        segments: vec![Segment::Arc {
            axis: 0,
            center: C::new(0.0, 0.0),
            radius: eps1,
            phi0: 0.0,
            phi1: TAU,
            other: base.1,
        }],
        base,
        label: "r1".into(),
    };
    let rho2 = LoopPath {
        segments: vec![Segment::Arc {
            axis: 1,
            center: C::new(0.0, 0.0),
            radius: eps2,
            phi0: 0.0,
            phi1: TAU,
            other: base.0,
        }],
        base,
        label: "r2".into(),
    };
    let eps = (eps1, eps2);
    let rho3 = LoopPath {
        segments: vec![
            Segment::RadialLine { eps, r0: C::new(1.0, 0.0), r1: C::new(r1 - delta, 0.0) },
            Segment::RadialArc {
                eps,
                center: C::new(r1, 0.0),
                radius: delta,
                phi0: std::f64::consts::PI,
                phi1: 3.0 * std::f64::consts::PI,
            },
            Segment::RadialLine { eps, r0: C::new(r1 - delta, 0.0), r1: C::new(1.0, 0.0) },
        ],
        base,
        label: "r3".into(),
    };
    Ok((rho1, rho2, rho3))
}

/// Distance, in the line coordinate, from a point of the detour loop to the
/// nearest root of the cubic on the line (used by the geometry sanity
/// check).
pub fn line_root_distance(eps1: f64, eps2: f64, r: C) -> f64 {
    // Roots of R(eps1 t, eps2 t), a cubic in t, via the eigenvalues of its
    // companion matrix.
    let rp = r_polynomial();
    let mut coeffs = [C::new(0.0, 0.0); 4];
    // Expand R(eps1 t, eps2 t) exactly enough: sample-and-solve.
    // R restricted to the line is cubic; build by interpolation at 4 points.
    let pts = [0.0, 1.0, 2.0, 3.0];
    let vals: Vec<C> = pts
        .iter()
        .map(|&t| rp.eval_c64(&[C::new(eps1 * t, 0.0), C::new(eps2 * t, 0.0)]))
        .collect();
    // Newton interpolation on integer nodes 0..3.
    let mut dd = vals.clone();
    for order in 1..4 {
        for i in (order..4).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (order as f64);
        }
    }
    // Convert Newton form to monomial coefficients.
    coeffs[0] = dd[0];
    let mut poly = vec![C::new(1.0, 0.0)]; // product (t - 0)(t - 1)...
    for (k, &node) in pts.iter().enumerate().take(3) {
        // poly *= (t - node)
        let mut next = vec![C::new(0.0, 0.0); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * node;
        }
        poly = next;
        for (i, &c) in poly.iter().enumerate() {
            coeffs[i] += dd[k + 1] * c;
        }
    }
    let roots = cubic_roots(coeffs);
    roots
        .iter()
        .map(|&t| (t - r).norm())
        .fold(f64::INFINITY, f64::min)
}

fn cubic_roots(c: [C; 4]) -> Vec<C> {
    // Durand-Kerner on the monic cubic.
    let lead = c[3];
    if lead.norm() < 1e-300 {
        return Vec::new();
    }
    let a = [c[0] / lead, c[1] / lead, c[2] / lead];
    let eval = |z: C| ((z + a[2]) * z + a[1]) * z + a[0];
    let mut roots = [
        C::new(0.4, 0.9),
        C::new(0.4, 0.9) * C::new(0.4, 0.9),
        C::new(0.4, 0.9) * C::new(0.4, 0.9) * C::new(0.4, 0.9),
    ];
    for _ in 0..200 {
        let mut moved = 0.0_f64;
        for i in 0..3 {
            let mut den = C::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    roots.to_vec()
}

// ---------------------------------------------------------------------------
// Compiled Pfaffian evaluation
// ---------------------------------------------------------------------------

struct CompiledEntry {
    num: Vec<(u16, u16, f64)>,
    den: Vec<(u16, u16, f64)>,
}

/// Float-compiled copy of the exact system for fast evaluation along paths.
pub struct CompiledPfaffian {
    n: usize,
    mats: [Vec<CompiledEntry>; 2],
    max_pow: (usize, usize),
}

impl CompiledPfaffian {
    pub fn new(pf: &PfaffianSystem) -> Self {
        let n = pf.size();
        let mut max_pow = (0usize, 0usize);
        let compile_poly = |p: &crate::poly::Poly2, mx: &mut (usize, usize)| {
            let mut v = Vec::with_capacity(p.num_terms());
            for (m, c) in p.iter_terms() {
                mx.0 = mx.0.max(m.0[0] as usize);
                mx.1 = mx.1.max(m.0[1] as usize);
                v.push((m.0[0], m.0[1], crate::scalar::q_to_f64(c)));
            }
            v
        };
        let mats = [0, 1].map(|var| {
            let mut entries = Vec::with_capacity(n * n);
            for row in &pf.p[var] {
                for e in row {
                    entries.push(CompiledEntry {
                        num: compile_poly(e.numerator(), &mut max_pow),
                        den: compile_poly(e.denominator(), &mut max_pow),
                    });
                }
            }
            entries
        });
        CompiledPfaffian { n, mats, max_pow }
    }

    /// `P1(x) dx1 + P2(x) dx2`.
    pub fn eval_connection(&self, x: (C, C), dx: (C, C)) -> CMat {
        let pow1: Vec<C> = powers(x.0, self.max_pow.0);
        let pow2: Vec<C> = powers(x.1, self.max_pow.1);
        let eval = |terms: &[(u16, u16, f64)]| -> C {
            let mut acc = C::new(0.0, 0.0);
            for &(e1, e2, c) in terms {
                acc += c * pow1[e1 as usize] * pow2[e2 as usize];
            }
            acc
        };
        let n = self.n;
        let mut out = CMat::zeros(n);
        for (var, d) in [(0, dx.0), (1, dx.1)] {
            if d.norm() == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let e = &self.mats[var][i * n + j];
                    if e.num.is_empty() {
                        continue;
                    }
                    out[(i, j)] += d * eval(&e.num) / eval(&e.den);
                }
            }
        }
        out
    }
}

fn powers(z: C, max: usize) -> Vec<C> {
    let mut v = Vec::with_capacity(max + 1);
    v.push(C::new(1.0, 0.0));
    for k in 1..=max {
        let prev = v[k - 1];
        v.push(prev * z);
    }
    v
}

// ---------------------------------------------------------------------------
// Fundamental matrix and transport
// ---------------------------------------------------------------------------

/// Matrix of basis-monomial derivatives of the nine solutions at the base
/// point: rows run over the system basis monomials, columns over the
/// solutions in label order.
pub fn initial_fundamental_matrix(
    p: &HgParams,
    pf: &PfaffianSystem,
    x0: (C, C),
    t: Truncation,
) -> Result<CMat> {
    let n = pf.size();
    let mut m = CMat::zeros(n);
    for (col, &(j, k)) in LABEL_ORDER.iter().enumerate() {
        for (row, mon) in pf.basis.iter().enumerate() {
            let order = (mon.0[0] as u32, mon.0[1] as u32);
            m[(row, col)] = eval_solution_deriv(p, SolutionLabel(j, k), x0, order, t)?;
        }
    }
    let cond = m.cond_inf();
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::SingularMatrix { context: "fundamental matrix", cond });
    }
    Ok(m)
}

/// Finite-difference residual of one solution column against the
/// first-order system at the base point (`max_i |d_i v - P_i v|` relative).
pub fn column_pfaffian_residual(
    p: &HgParams,
    pf: &PfaffianSystem,
    label: SolutionLabel,
    x0: (C, C),
    t: Truncation,
    h: f64,
) -> Result<f64> {
    let n = pf.size();
    let col_at = |x: (C, C)| -> Result<Vec<C>> {
        pf.basis
            .iter()
            .map(|mon| eval_solution_deriv(p, label, x, (mon.0[0] as u32, mon.0[1] as u32), t))
            .collect()
    };
    let v0 = col_at(x0)?;
    let scale = v0.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let mut worst = 0.0_f64;
    for var in 0..2 {
        let shift = |sgn: f64| -> (C, C) {
            if var == 0 {
                (x0.0 + sgn * h, x0.1)
            } else {
                (x0.0, x0.1 + sgn * h)
            }
        };
        let vp = col_at(shift(1.0))?;
        let vm = col_at(shift(-1.0))?;
        let pv = pf.eval(var, [x0.0, x0.1]).matvec(&v0);
        for i in 0..n {
            let fd = (vp[i] - vm[i]) / (2.0 * h);
            worst = worst.max((fd - pv[i]).norm() / scale);
        }
    }
    Ok(worst)
}

/// Transport outcome.
#[derive(Clone)]
pub struct TransportResult {
    pub end: CMat,
    pub steps: usize,
    pub max_local_error: f64,
}

/// Adaptive fifth-order transport of `dM/ds = A(s) M` along the path.
///
/// Internally the rows are equilibrated by the initial row magnitudes
/// (an exact symmetry of the problem) so the step-error control treats
/// every row at the same relative scale; the returned matrix is in the
/// original scaling.
pub fn transport(
    pf: &CompiledPfaffian,
    path: &LoopPath,
    m0: &CMat,
    rel_tol: f64,
) -> Result<TransportResult> {
    let n = m0.n;
    let row_scale: Vec<f64> = (0..n)
        .map(|i| {
            let s = (0..n).map(|j| m0[(i, j)].norm()).fold(0.0_f64, f64::max);
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let mut m = CMat::from_fn(n, |i, j| m0[(i, j)] / row_scale[i]);
    let mut steps = 0usize;
    let mut max_err = 0.0_f64;
    for seg in &path.segments {
        let rhs = |s: f64, y: &CMat| -> CMat {
            let x = seg.at(s);
            let dx = seg.velocity(s);
            let a = pf.eval_connection(x, dx);
            let scaled = CMat::from_fn(n, |i, j| a[(i, j)] * (row_scale[j] / row_scale[i]));
            scaled.mul(y)
        };
        let mut s = 0.0_f64;
        let mut h = 1e-3_f64;
        while s < 1.0 {
            if s + h > 1.0 {
                h = 1.0 - s;
            }
            let (y5, err) = rk_dopri_step(&rhs, s, &m, h);
            // Component-wise control: entries at unit scale are held to
            // rel_tol relative, small entries to rel_tol absolute.
            let mut ratio = 0.0_f64;
            for i in 0..n {
                for j in 0..n {
                    let tol = rel_tol * (1.0 + m[(i, j)].norm());
                    ratio = ratio.max(err[(i, j)].norm() / tol);
                }
            }
            if ratio <= 1.0 || h <= 1e-13 {
                if h <= 1e-13 && ratio > 1.0 {
                    return Err(Error::Step { s, step: h });
                }
                s += h;
                m = y5;
                steps += 1;
                max_err = max_err.max(ratio * rel_tol);
                let grow = 0.9 * (1.0 / ratio.max(1e-300)).powf(0.2);
                h = (h * grow.min(4.0)).min(0.05);
            } else {
                let shrink = 0.9 * (1.0 / ratio).powf(0.2);
                h *= shrink.max(0.1);
                if h < 1e-13 {
                    return Err(Error::Step { s, step: h });
                }
            }
        }
    }
    let end = CMat::from_fn(n, |i, j| m[(i, j)] * row_scale[i]);
    Ok(TransportResult { end, steps, max_local_error: max_err })
}

/// One Dormand-Prince 5(4) step; returns the fifth-order update and the
/// embedded error-estimate matrix.
fn rk_dopri_step(rhs: &dyn Fn(f64, &CMat) -> CMat, s: f64, y: &CMat, h: f64) -> (CMat, CMat) {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const CNODES: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const E: [f64; 7] = [
        35.0 / 384.0 - 5179.0 / 57600.0,
        0.0,
        500.0 / 1113.0 - 7571.0 / 16695.0,
        125.0 / 192.0 - 393.0 / 640.0,
        -2187.0 / 6784.0 + 92097.0 / 339200.0,
        11.0 / 84.0 - 187.0 / 2100.0,
        -1.0 / 40.0,
    ];
    let mut k: Vec<CMat> = Vec::with_capacity(7);
    k.push(rhs(s, y));
    for stage in 0..6 {
        let mut acc = y.clone();
        for (j, kj) in k.iter().enumerate() {
            let a = A[stage][j];
            if a != 0.0 {
                acc = acc.add(&kj.scale(C::new(a * h, 0.0)));
            }
        }
        k.push(rhs(s + CNODES[stage] * h, &acc));
    }
    // k[6] is the FSAL stage evaluated at the fifth-order solution.
    let y5 = {
        let mut acc = y.clone();
        for (j, kj) in k.iter().take(6).enumerate() {
            let a = A[5][j];
            if a != 0.0 {
                acc = acc.add(&kj.scale(C::new(a * h, 0.0)));
            }
        }
        acc
    };
    let mut err = CMat::zeros(y.n);
    for (j, kj) in k.iter().enumerate() {
        if E[j] != 0.0 {
            err = err.add(&kj.scale(C::new(E[j] * h, 0.0)));
        }
    }
    (y5, err)
}

/// Circuit matrix from the transported fundamental matrix: continuation
/// acts columnwise, so `M = (M0^-1 M1)^T` on the solution vector. Row
/// equilibration (an exact invariance of the quotient) keeps the solve
/// well conditioned.
pub fn numeric_circuit_matrix(m0: &CMat, m1: &CMat) -> Result<CMat> {
    let n = m0.n;
    let row_scale: Vec<f64> = (0..n)
        .map(|i| {
            let s = (0..n).map(|j| m0[(i, j)].norm()).fold(0.0_f64, f64::max);
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let a = CMat::from_fn(n, |i, j| m0[(i, j)] / row_scale[i]);
    let b = CMat::from_fn(n, |i, j| m1[(i, j)] / row_scale[i]);
    Ok(a.inverse()?.mul(&b).transpose())
}

/// Gauge comparison of a numeric circuit matrix along the cubic detour
/// against the closed form: normalize the distinguished left eigenvector to
/// all-ones and measure the elementwise gap.
pub fn gauge_compare_m3(m3num: &CMat, e: &ExpParams) -> Result<f64> {
    let lam = lambda(e);
    let eigs = m3num.eigenvalues();
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, ev) in eigs.iter().enumerate() {
        let d = (ev - lam).norm();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    let lam_num = eigs[best];
    for (i, ev) in eigs.iter().enumerate() {
        if i != best && (ev - lam_num).norm() < 1e-6 {
            return Err(Error::Cluster {
                context: format!("eigenvalue {ev} within 1e-6 of the distinguished one"),
            });
        }
    }
    // Left eigenvector of M is a right eigenvector of the transpose.
    let v = m3num.transpose().eigenvector_for(lam_num)?;
    let vmax = v.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let vmin = v.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if vmin / vmax < 1e-8 {
        return Err(Error::ZeroEntry { ratio: vmin / vmax });
    }
    let d = CMat::diag(&v);
    let dinv = CMat::diag(&v.iter().map(|z| 1.0 / z).collect::<Vec<_>>());
    let gauged = d.mul(m3num).mul(&dinv);
    let closed = m3(e)?.mat;
    Ok(gauged.max_abs_diff(&closed))
}

/// Extra denominator factors of the system (apparent singularities) that
/// paths must also avoid.
pub fn extra_denominator_factors(pf: &PfaffianSystem) -> Vec<crate::poly::Poly2> {
    match singular_factors(pf).extra {
        Some(f) => vec![f],
        None => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_root_at_defaults() {
        let r1 = p1_coordinate(0.1, 0.05).unwrap();
        // Frozen from an independent bisection of (1 - 0.15 r)^3 = 0.135 r^2.
        assert!((r1 - 1.732806999299154431781).abs() < 1e-12, "r1 = {r1}");
        // Defining property.
        let r = r_polynomial();
        let v = r.eval_c64(&[C::new(0.1 * r1, 0.0), C::new(0.05 * r1, 0.0)]);
        assert!(v.norm() < 1e-12);
        // Base-point value of the cubic: 3833/8000.
        let v = r.eval_c64(&[C::new(0.1, 0.0), C::new(0.05, 0.0)]);
        assert!((v.re - 0.479125).abs() < 1e-15);
    }

    #[test]
    fn loops_start_and_end_at_base() {
        let (r1, r2, r3) = build_loops(0.1, 0.05, 0.05).unwrap();
        for l in [&r1, &r2, &r3] {
            let start = l.segments.first().unwrap().at(0.0);
            let end = l.segments.last().unwrap().at(1.0);
            assert!((start.0 - l.base.0).norm() < 1e-14, "{}", l.label);
            assert!((end.0 - l.base.0).norm() < 1e-12);
            assert!((start.1 - l.base.1).norm() < 1e-14);
            assert!((end.1 - l.base.1).norm() < 1e-12);
            // Segments glue continuously.
            for w in l.segments.windows(2) {
                let a = w[0].at(1.0);
                let b = w[1].at(0.0);
                assert!((a.0 - b.0).norm() + (a.1 - b.1).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn winding_of_x1_along_first_loop() {
        let (r1, _, _) = build_loops(0.1, 0.05, 0.05).unwrap();
        let mut arg_total = 0.0;
        let n = 400;
        let mut prev = r1.segments[0].at(0.0).0;
        for k in 1..=n {
            let s = k as f64 / n as f64;
            let z = r1.segments[0].at(s).0;
            arg_total += (z / prev).arg();
            prev = z;
        }
        assert!((arg_total - TAU).abs() < 1e-10);
    }

    #[test]
    fn detour_keeps_distance_from_line_roots() {
        let delta = 0.05;
        let (_, _, r3) = build_loops(0.1, 0.05, delta).unwrap();
        // Sample the arc segment (index 1) and check the line-coordinate
        // distance to the nearest root stays at least delta / 2.
        if let Segment::RadialArc { center, radius, phi0, phi1, .. } = r3.segments[1] {
            for k in 0..=40 {
                let s = k as f64 / 40.0;
                let phi = phi0 + (phi1 - phi0) * s;
                let r = center + C::from_polar(radius, phi);
                let d = line_root_distance(0.1, 0.05, r);
                assert!(d >= delta / 2.0, "distance {d} at s = {s}");
            }
        } else {
            panic!("expected arc segment");
        }
    }

    #[test]
    fn clearance_check_accepts_defaults_and_rejects_crossings() {
        let (r1, _, r3) = build_loops(0.1, 0.05, 0.05).unwrap();
        assert!(r1.require_clearance(&[], 200, 1e-3).is_ok());
        assert!(r3.require_clearance(&[], 200, 1e-3).is_ok());
        // A path through the cubic must be rejected.
        let bad = LoopPath {
            segments: vec![Segment::RadialLine {
                eps: (0.1, 0.05),
                r0: C::new(1.0, 0.0),
                r1: C::new(2.5, 0.0),
            }],
            base: (C::new(0.1, 0.0), C::new(0.05, 0.0)),
            label: "bad".into(),
        };
        assert!(matches!(
            bad.require_clearance(&[], 400, 5e-3),
            Err(Error::Clearance { .. })
        ));
    }

    #[test]
    fn constant_path_transport_is_identity() {
        // A zero-length arc produces no motion; transport must return the
        // initial matrix to machine accuracy.
        let p = HgParams::defaults();
        let (l1, l2) = crate::weyl::system_operators(&p);
        let gb = crate::weyl::groebner(&[l1, l2], crate::weyl::GbLimits::default()).unwrap();
        let std = crate::weyl::standard_monomials(&gb).unwrap();
        let pf = crate::weyl::pfaffian(&gb, &std).unwrap();
        let cpf = CompiledPfaffian::new(&pf);
        let path = LoopPath {
            segments: vec![Segment::Arc {
                axis: 0,
                center: C::new(0.0, 0.0),
                radius: 0.1,
                phi0: 0.0,
                phi1: 0.0,
                other: C::new(0.05, 0.0),
            }],
            base: (C::new(0.1, 0.0), C::new(0.05, 0.0)),
            label: "const".into(),
        };
        let m0 = CMat::identity(9);
        let res = transport(&cpf, &path, &m0, 1e-10).unwrap();
        assert!(res.end.max_abs_diff(&m0) < 1e-12);
    }
}
