//! Evaluation of the two-variable hypergeometric series, its termwise
//! derivatives, prefactored derivatives, and the exact coefficient-level
//! verification of the differential equations.
//!
//! Summation runs over total-degree shells with recurrence-updated
//! Pochhammer ratios; no gamma evaluations appear in the hot loop.

use crate::error::{Error, Result};
use crate::params::HgParams;
use crate::scalar::HgScalar;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Truncation policy: hard total-degree cutoff plus an optional adaptive
/// stop once a whole shell drops below `tail_tol` in absolute value
/// (`0.0` disables the adaptive stop).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Truncation {
    pub n_max: u32,
    pub tail_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { n_max: 60, tail_tol: 1e-16 }
    }
}

impl Truncation {
    pub fn with_n_max(n_max: u32) -> Self {
        Truncation { n_max, ..Default::default() }
    }
}

/// A partial sum together with how it was obtained.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesValue {
    #[serde(serialize_with = "crate::report::ser_c64")]
    pub value: Complex64,
    pub terms_used: u64,
    /// Absolute sum of the last included total-degree shell.
    pub tail_estimate: f64,
}

/// Rising factorial `(c, n) = c (c+1) ... (c+n-1)`.
pub fn pochhammer(c: Complex64, n: u32) -> Complex64 {
    let mut r = Complex64::new(1.0, 0.0);
    for k in 0..n {
        r *= c + k as f64;
    }
    r
}

/// Exact rising factorial over the rationals.
pub fn pochhammer_q(c: &BigRational, n: u32) -> BigRational {
    let mut r = BigRational::one();
    for k in 0..n {
        r *= c + BigRational::from_integer(k.into());
    }
    r
}

/// Convergence test: the series converges iff
/// `|x1|^(1/3) + |x2|^(1/3) < 1`. Returns the boolean and the margin
/// `1 - |x1|^(1/3) - |x2|^(1/3)`.
pub fn in_domain(x: (Complex64, Complex64)) -> (bool, f64) {
    let margin = 1.0 - x.0.norm().cbrt() - x.1.norm().cbrt();
    (margin > 0.0, margin)
}

fn check_series_pre(p: &HgParams, x: (Complex64, Complex64)) -> Result<()> {
    if let Some(j) = p.lower_param_invalid() {
        return Err(Error::Parameter {
            conditions: vec![format!("b{} \u{2208} -\u{2115}", j + 1)],
        });
    }
    let (ok, margin) = in_domain(x);
    if !ok {
        return Err(Error::Domain { margin });
    }
    Ok(())
}

/// Generic shell-summed kernel for the termwise-differentiated series
/// `D1^m1 D2^m2 sum prod_j (a_j, n1+n2) / [prod_i (b_ij, n_i)] x^n`.
///
/// Returns `(value, terms, tail)`. The cancellation path (`tail_tol`) uses
/// `abs_f64`, so the exact-rational instantiation is only truncated by
/// `n_max` when `tail_tol == 0`.
pub fn hgf_deriv_kernel<S: HgScalar>(
    p: &HgParams,
    x: (&S, &S),
    order: (u32, u32),
    t: Truncation,
) -> (S, u64, f64) {
    let (m1, m2) = order;
    // One-step ratio recurrences: the走 walker holds whole terms
    // A(n1+n2) x1^n1 x2^n2 / (denominator Pochhammers), whose magnitudes
    // stay at the size of the actual series terms. Separate numerator and
    // axis tables overflow doubles near shell 70.
    let n_max = t.n_max;
    let a: Vec<S> = p.a.iter().map(|q| S::from_q(q)).collect();
    let b: Vec<S> = p.b.iter().map(|q| S::from_q(q)).collect();
    let int = |k: u32| S::from_q(&BigRational::from_integer(k.into()));

    // Falling factorials for the termwise derivative: n (n-1) ... (n-m+1).
    let fall = |n: u32, m: u32| -> Option<u64> {
        if n < m {
            return None;
        }
        let mut f = 1u64;
        for k in 0..m {
            f *= (n - k) as u64;
        }
        Some(f)
    };

    let mut total = S::zero();
    let mut terms: u64 = 0;
    let mut tail = 0.0_f64;
    // Term at (0, s), advanced shell to shell.
    let mut col0 = S::one();
    for s in 0..=n_max {
        let mut term = col0.clone();
        let mut shell = S::zero();
        let mut shell_abs = 0.0_f64;
        let mut any = false;
        for n1 in 0..=s {
            let n2 = s - n1;
            if let (Some(f1), Some(f2)) = (fall(n1, m1), fall(n2, m2)) {
                any = true;
                let ff = f1.checked_mul(f2).expect("falling factorial overflow");
                let contrib = if ff == 1 {
                    term.clone()
                } else {
                    term.clone() * S::from_q(&BigRational::from_integer(ff.into()))
                };
                shell_abs += contrib.abs_f64();
                shell = shell + contrib;
                terms += 1;
            }
            if n1 < s {
                // (n1, n2) -> (n1 + 1, n2 - 1) within the shell.
                let num = x.0.clone()
                    * (b[2].clone() + int(n2 - 1))
                    * (b[3].clone() + int(n2 - 1))
                    * int(n2);
                let den = x.1.clone()
                    * (b[0].clone() + int(n1))
                    * (b[1].clone() + int(n1))
                    * int(n1 + 1);
                term = term * num / den;
            }
        }
        if any {
            total = total + shell;
            tail = shell_abs;
            if t.tail_tol > 0.0 && s > m1 + m2 && shell_abs < t.tail_tol {
                break;
            }
        }
        // (0, s) -> (0, s + 1).
        let num = (a[0].clone() + int(s)) * (a[1].clone() + int(s)) * (a[2].clone() + int(s));
        let den = (b[2].clone() + int(s)) * (b[3].clone() + int(s)) * int(s + 1);
        col0 = col0 * x.1.clone() * num / den;
    }
    // The derivative shifts powers down: divide by x^m is wrong -- instead
    // the falling factorial already accounts for d^m x^n = n..(n-m+1) x^(n-m),
    // but the axis factors carry x^n, so take out x^m once at the end.
    if m1 > 0 || m2 > 0 {
        let mut shift = S::one();
        for _ in 0..m1 {
            shift = shift * x.0.clone();
        }
        for _ in 0..m2 {
            shift = shift * x.1.clone();
        }
        total = total / shift;
    }
    (total, terms, tail)
}

/// Evaluate the series at `x` inside the convergence domain.
pub fn hgf_eval(p: &HgParams, x: (Complex64, Complex64), t: Truncation) -> Result<SeriesValue> {
    hgf_deriv_eval(p, x, (0, 0), t)
}

/// Termwise derivative `D1^m1 D2^m2` of the series; order `(0,0)` agrees
/// with `hgf_eval`. Orders are limited to `m1 + m2 <= 4`.
pub fn hgf_deriv_eval(
    p: &HgParams,
    x: (Complex64, Complex64),
    order: (u32, u32),
    t: Truncation,
) -> Result<SeriesValue> {
    assert!(order.0 + order.1 <= 4, "derivative order above 4 unsupported");
    check_series_pre(p, x)?;
    if x.0.norm() == 0.0 || x.1.norm() == 0.0 {
        // The kernel divides by x^m at the end; handle axis points by the
        // shifted-series route instead.
        return Ok(eval_on_axis(p, x, order, t));
    }
    let (value, terms_used, tail_estimate) =
        hgf_deriv_kernel(p, (&x.0, &x.1), order, t);
    Ok(SeriesValue { value, terms_used, tail_estimate })
}

/// Direct term summation valid when one coordinate vanishes.
fn eval_on_axis(
    p: &HgParams,
    x: (Complex64, Complex64),
    order: (u32, u32),
    t: Truncation,
) -> SeriesValue {
    let (m1, m2) = order;
    let mut total = Complex64::zero();
    let mut terms = 0u64;
    let mut tail = 0.0;
    for s in 0..=t.n_max {
        let mut shell = Complex64::zero();
        let mut shell_abs = 0.0;
        for n1 in 0..=s {
            let n2 = s - n1;
            if n1 < m1 || n2 < m2 {
                continue;
            }
            // Powers after differentiation: x1^(n1-m1) x2^(n2-m2).
            let p1 = n1 - m1;
            let p2 = n2 - m2;
            if (x.0.norm() == 0.0 && p1 > 0) || (x.1.norm() == 0.0 && p2 > 0) {
                continue;
            }
            let mut c = Complex64::new(1.0, 0.0);
            for aj in &p.a {
                c *= pochhammer(crate::report::q_c64(aj), s);
            }
            let denom = pochhammer(crate::report::q_c64(&p.b[0]), n1)
                * pochhammer(crate::report::q_c64(&p.b[1]), n1)
                * pochhammer(Complex64::new(1.0, 0.0), n1)
                * pochhammer(crate::report::q_c64(&p.b[2]), n2)
                * pochhammer(crate::report::q_c64(&p.b[3]), n2)
                * pochhammer(Complex64::new(1.0, 0.0), n2);
            c /= denom;
            let mut fall = 1.0;
            for k in 0..m1 {
                fall *= (n1 - k) as f64;
            }
            for k in 0..m2 {
                fall *= (n2 - k) as f64;
            }
            c *= fall;
            c *= x.0.powu(p1) * x.1.powu(p2);
            shell += c;
            shell_abs += c.norm();
            terms += 1;
        }
        total += shell;
        tail = shell_abs;
        if t.tail_tol > 0.0 && s > m1 + m2 && shell_abs < t.tail_tol && shell_abs > 0.0 {
            break;
        }
    }
    SeriesValue { value: total, terms_used: terms, tail_estimate: tail }
}

/// Exact-rational series evaluation at a rational point (total-degree
/// truncation only).
pub fn hgf_eval_exact(p: &HgParams, x: (&BigRational, &BigRational), n_max: u32) -> BigRational {
    let t = Truncation { n_max, tail_tol: 0.0 };
    if x.0.is_zero() || x.1.is_zero() {
        // Restrict to the nonvanishing axis by direct summation.
        let mut total = BigRational::zero();
        for s in 0..=n_max {
            for n1 in 0..=s {
                let n2 = s - n1;
                if (x.0.is_zero() && n1 > 0) || (x.1.is_zero() && n2 > 0) {
                    continue;
                }
                let mut c = BigRational::one();
                for aj in &p.a {
                    c *= pochhammer_q(aj, s);
                }
                c /= pochhammer_q(&p.b[0], n1)
                    * pochhammer_q(&p.b[1], n1)
                    * pochhammer_q(&BigRational::one(), n1)
                    * pochhammer_q(&p.b[2], n2)
                    * pochhammer_q(&p.b[3], n2)
                    * pochhammer_q(&BigRational::one(), n2);
                total += c * x.0.pow(n1 as i32) * x.1.pow(n2 as i32);
            }
        }
        return total;
    }
    let (v, _, _) = hgf_deriv_kernel::<BigRational>(p, (x.0, x.1), (0, 0), t);
    v
}

/// Termwise derivative of `x1^p1 x2^p2 * F(x)` via the binomial Leibniz
/// rule, with principal-branch powers. `branch_args`, when given, fixes
/// `arg x1` and `arg x2` explicitly.
#[allow(clippy::too_many_arguments)]
pub fn prefactored_deriv_eval(
    p: &HgParams,
    exponents: (Complex64, Complex64),
    x: (Complex64, Complex64),
    order: (u32, u32),
    t: Truncation,
    branch_args: Option<(f64, f64)>,
) -> Result<Complex64> {
    let (m1, m2) = order;
    assert!(m1 + m2 <= 4, "derivative order above 4 unsupported");
    check_series_pre(p, x)?;
    let (arg1, arg2) = match branch_args {
        Some(args) => args,
        None => {
            for (i, xi) in [x.0, x.1].iter().enumerate() {
                if xi.im == 0.0 && xi.re < 0.0 {
                    return Err(Error::Branch {
                        what: if i == 0 { "x1 power" } else { "x2 power" },
                    });
                }
            }
            (x.0.arg(), x.1.arg())
        }
    };
    let log1 = Complex64::new(x.0.norm().ln(), arg1);
    let log2 = Complex64::new(x.1.norm().ln(), arg2);
    let cpow = |log: Complex64, e: Complex64| (e * log).exp();

    let binom = |n: u32, k: u32| -> f64 {
        let mut r = 1.0;
        for i in 0..k {
            r = r * (n - i) as f64 / (i + 1) as f64;
        }
        r
    };
    // Falling factorial of a complex exponent.
    let cfall = |c: Complex64, m: u32| -> Complex64 {
        let mut r = Complex64::new(1.0, 0.0);
        for k in 0..m {
            r *= c - k as f64;
        }
        r
    };

    let mut acc = Complex64::zero();
    for k1 in 0..=m1 {
        for k2 in 0..=m2 {
            let s = hgf_deriv_eval(p, x, (m1 - k1, m2 - k2), t)?;
            let pw = cpow(log1, exponents.0 - k1 as f64) * cpow(log2, exponents.1 - k2 as f64);
            acc += binom(m1, k1)
                * binom(m2, k2)
                * cfall(exponents.0, k1)
                * cfall(exponents.1, k2)
                * pw
                * s.value;
        }
    }
    Ok(acc)
}

/// Exact verification of the coefficient recurrences implied by the two
/// differential equations for all `n1 + n2 <= n`, in rational arithmetic.
///
/// Returns `Ok(())` on success; the error carries the first offending index.
pub fn check_pde_coefficients(p: &HgParams, n: u32) -> std::result::Result<(), (u32, u32)> {
    check_pde_coefficients_perturbed(p, n, false)
}

/// Same recurrence check, optionally with one side's `b1` bumped by one to
/// demonstrate sensitivity (used by tests).
pub fn check_pde_coefficients_perturbed(
    p: &HgParams,
    n: u32,
    perturb: bool,
) -> std::result::Result<(), (u32, u32)> {
    // Series coefficients c[n1][n2] built by recurrence along n1.
    let coeff = |n1: u32, n2: u32| -> BigRational {
        let mut c = BigRational::one();
        for aj in &p.a {
            c *= pochhammer_q(aj, n1 + n2);
        }
        c / (pochhammer_q(&p.b[0], n1)
            * pochhammer_q(&p.b[1], n1)
            * pochhammer_q(&BigRational::one(), n1)
            * pochhammer_q(&p.b[2], n2)
            * pochhammer_q(&p.b[3], n2)
            * pochhammer_q(&BigRational::one(), n2))
    };
    let int = |k: u32| BigRational::from_integer(k.into());
    for s in 0..=n {
        for n1 in 0..=s {
            let n2 = s - n1;
            // First equation: the theta side at (n1, n2) must match the
            // shifted multiplication side at (n1-1, n2).
            if n1 >= 1 {
                let b1 = if perturb { &p.b[0] + BigRational::one() } else { p.b[0].clone() };
                let lhs = int(n1)
                    * (&b1 - BigRational::one() + int(n1))
                    * (&p.b[1] - BigRational::one() + int(n1))
                    * coeff(n1, n2);
                let mut rhs = coeff(n1 - 1, n2);
                for aj in &p.a {
                    rhs *= aj + int(n1 - 1 + n2);
                }
                if lhs != rhs {
                    return Err((n1, n2));
                }
            }
            // Second equation, symmetric in the other variable.
            if n2 >= 1 {
                let lhs = int(n2)
                    * (&p.b[2] - BigRational::one() + int(n2))
                    * (&p.b[3] - BigRational::one() + int(n2))
                    * coeff(n1, n2);
                let mut rhs = coeff(n1, n2 - 1);
                for aj in &p.a {
                    rhs *= aj + int(n1 + n2 - 1);
                }
                if lhs != rhs {
                    return Err((n1, n2));
                }
            }
        }
    }
    Ok(())
}

/// Partial sum of the one-variable `3F2` series with lower parameters
/// `(c1, c2)`, matching the restriction of the two-variable series to an
/// axis, truncated at `n_max` terms.
pub fn f32_partial(
    a: &[BigRational; 3],
    c1: &BigRational,
    c2: &BigRational,
    x: Complex64,
    n_max: u32,
) -> Complex64 {
    let mut total = Complex64::zero();
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..=n_max {
        total += term;
        let nf = n as f64;
        let num = (crate::report::q_c64(&a[0]) + nf)
            * (crate::report::q_c64(&a[1]) + nf)
            * (crate::report::q_c64(&a[2]) + nf);
        let den = (crate::report::q_c64(c1) + nf)
            * (crate::report::q_c64(c2) + nf)
            * Complex64::new(nf + 1.0, 0.0);
        term = term * num / den * x;
    }
    total
}
