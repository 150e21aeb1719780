//! The nine local solutions at the origin (power prefactor times the
//! series with shifted parameters), the nine solutions in the chart at
//! infinity, and the normalized solutions obtained by dividing out the
//! gamma factors.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::integrals::{c_prime, sine_quotient};
use crate::monodromy::LABEL_ORDER;
use crate::params::HgParams;
use crate::report::q_c64;
use crate::series::{in_domain, prefactored_deriv_eval, Truncation};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

type C = Complex64;

/// Index pair (j, k) in {0,1,2}, 0 meaning the constant column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionLabel(pub usize, pub usize);

impl SolutionLabel {
    pub fn position(&self) -> usize {
        crate::monodromy::label_index((self.0, self.1))
    }
    pub fn all() -> [SolutionLabel; 9] {
        LABEL_ORDER.map(|(j, k)| SolutionLabel(j, k))
    }
}

/// Data of one local solution: the power-prefactor exponents (exact) and
/// the shifted parameter set its series carries.
#[derive(Clone, Debug)]
pub struct LocalSolution {
    pub label: SolutionLabel,
    pub exponents: (BigRational, BigRational),
    pub shifted: HgParams,
}

/// The parameter shift behind the (j,k) local solution: every upper
/// parameter moves by `2 - b_{1j} - b_{2k}`, row `i` shifts by
/// `1 - b_{i,label}` on both listed columns with the label column doubled.
pub fn shifted_params(p: &HgParams, label: SolutionLabel) -> Result<HgParams> {
    let SolutionLabel(j, k) = label;
    assert!(j < 3 && k < 3);
    let b1j = p.b_entry(1, j);
    let b2k = p.b_entry(2, k);
    let one = BigRational::one();
    let two = &one + &one;
    let ashift = &two - &b1j - &b2k;
    let a = [&p.a[0] + &ashift, &p.a[1] + &ashift, &p.a[2] + &ashift];
    let s1 = &one - &b1j;
    let s2 = &one - &b2k;
    let mut b = p.b.clone();
    for m in 0..2 {
        b[m] += &s1;
        if j == m + 1 {
            b[m] += &s1;
        }
        b[m + 2] += &s2;
        if k == m + 1 {
            b[m + 2] += &s2;
        }
    }
    let out = HgParams::new(a, b);
    if let Some(idx) = out.lower_param_invalid() {
        return Err(Error::Parameter {
            conditions: vec![format!(
                "shifted lower parameter b{} lands in -N for label ({j},{k})",
                idx + 1
            )],
        });
    }
    Ok(out)
}

/// Full data of the nine local solutions.
pub fn local_solutions(p: &HgParams) -> Result<[LocalSolution; 9]> {
    let one = BigRational::one();
    let mut out = Vec::with_capacity(9);
    for label in SolutionLabel::all() {
        let shifted = shifted_params(p, label)?;
        out.push(LocalSolution {
            label,
            exponents: (&one - p.b_entry(1, label.0), &one - p.b_entry(2, label.1)),
            shifted,
        });
    }
    Ok(out.try_into().expect("nine solutions"))
}

/// Evaluate all nine local solutions at `x` (principal branch, which
/// requires coordinates off the negative real axis; the base point use
/// case has them positive real).
pub fn eval_solution_vector(
    p: &HgParams,
    x: (C, C),
    t: Truncation,
) -> Result<[C; 9]> {
    let sols = local_solutions(p)?;
    let mut out = [C::zero(); 9];
    for (i, s) in sols.iter().enumerate() {
        out[i] = prefactored_deriv_eval(
            &s.shifted,
            (q_c64(&s.exponents.0), q_c64(&s.exponents.1)),
            x,
            (0, 0),
            t,
            None,
        )?;
    }
    Ok(out)
}

/// One local solution with an arbitrary derivative order (used to seed the
/// first-order system's fundamental matrix).
pub fn eval_solution_deriv(
    p: &HgParams,
    label: SolutionLabel,
    x: (C, C),
    order: (u32, u32),
    t: Truncation,
) -> Result<C> {
    let s = shifted_params(p, label)?;
    let one = BigRational::one();
    prefactored_deriv_eval(
        &s,
        (
            q_c64(&(&one - p.b_entry(1, label.0))),
            q_c64(&(&one - p.b_entry(2, label.1))),
        ),
        x,
        order,
        t,
        None,
    )
}

// ---------------------------------------------------------------------------
// Solutions in the chart at infinity
// ---------------------------------------------------------------------------

/// Prefactor exponents and shifted parameters of the nine solutions in the
/// coordinates `y = (-x1/x2, 1/x2)`, grouped by prefactor family (outer)
/// and upper-parameter index (inner).
pub fn infinity_solution_data(p: &HgParams) -> Result<[LocalSolution; 9]> {
    let bad: Vec<String> = {
        let mut v = Vec::new();
        let mut check = |val: BigRational, label: String| {
            if val.is_integer() {
                v.push(format!("{label} \u{2208} \u{2124}"));
            }
        };
        check(p.b[0].clone(), "b1".into());
        check(p.b[1].clone(), "b2".into());
        check(&p.b[0] - &p.b[1], "b1-b2".into());
        for i in 0..3 {
            for jj in i + 1..3 {
                check(&p.a[i] - &p.a[jj], format!("a{}-a{}", i + 1, jj + 1));
            }
        }
        v
    };
    if !bad.is_empty() {
        return Err(Error::Parameter { conditions: bad });
    }
    let one = BigRational::one();
    let two = &one + &one;
    let mut out = Vec::with_capacity(9);
    for family in 0..3usize {
        for i in 0..3usize {
            let (jj, kk) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let ai = &p.a[i];
            // Row 2 is shared by all families.
            let row2 = [ai - &p.a[jj] + &one, ai - &p.a[kk] + &one];
            let (exp1, a_row, row1) = match family {
                0 => (
                    BigRational::zero(),
                    [ai.clone(), ai - &p.b[2] + &one, ai - &p.b[3] + &one],
                    [p.b[0].clone(), p.b[1].clone()],
                ),
                1 => (
                    &one - &p.b[0],
                    [
                        ai - &p.b[0] + &one,
                        ai - &p.b[0] - &p.b[2] + &two,
                        ai - &p.b[0] - &p.b[3] + &two,
                    ],
                    [&two - &p.b[0], &p.b[1] - &p.b[0] + &one],
                ),
                _ => (
                    &one - &p.b[1],
                    [
                        ai - &p.b[1] + &one,
                        ai - &p.b[1] - &p.b[2] + &two,
                        ai - &p.b[1] - &p.b[3] + &two,
                    ],
                    [&p.b[0] - &p.b[1] + &one, &two - &p.b[1]],
                ),
            };
            let shifted = HgParams::new(
                a_row,
                [row1[0].clone(), row1[1].clone(), row2[0].clone(), row2[1].clone()],
            );
            out.push(LocalSolution {
                label: SolutionLabel(family, i),
                exponents: (exp1, ai.clone()),
                shifted,
            });
        }
    }
    Ok(out.try_into().expect("nine solutions"))
}

/// Evaluate the nine solutions at a point `y` of the far chart inside the
/// series domain.
pub fn eval_infinity_solutions(
    p: &HgParams,
    y: (C, C),
    t: Truncation,
) -> Result<[C; 9]> {
    let data = infinity_solution_data(p)?;
    let (ok, margin) = in_domain(y);
    if !ok {
        return Err(Error::Domain { margin });
    }
    let mut out = [C::zero(); 9];
    for (idx, s) in data.iter().enumerate() {
        if let Some(bidx) = s.shifted.lower_param_invalid() {
            return Err(Error::Parameter {
                conditions: vec![format!("lower parameter b{} in -N", bidx + 1)],
            });
        }
        out[idx] = prefactored_deriv_eval(
            &s.shifted,
            (q_c64(&s.exponents.0), q_c64(&s.exponents.1)),
            y,
            (0, 0),
            t,
            None,
        )?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Normalized solutions
// ---------------------------------------------------------------------------

fn check_g_conditions(p: &HgParams, label: SolutionLabel) -> Result<()> {
    let SolutionLabel(j, k) = label;
    let mut bad = Vec::new();
    for i in 0..3 {
        if i != j {
            let d = p.b_entry(1, j) - p.b_entry(1, i);
            if d.is_integer() {
                bad.push(format!("b_1{j}-b_1{i} \u{2208} \u{2124}"));
            }
        }
        if i != k {
            let d = p.b_entry(2, k) - p.b_entry(2, i);
            if d.is_integer() {
                bad.push(format!("b_2{k}-b_2{i} \u{2208} \u{2124}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Parameter { conditions: bad })
    }
}

/// Normalized solution: the (j,k) local solution divided by its gamma
/// factor, computed through the series route.
pub fn eval_g(p: &HgParams, label: SolutionLabel, x: (C, C), t: Truncation) -> Result<C> {
    check_g_conditions(p, label)?;
    let f = eval_solution_deriv(p, label, x, (0, 0), t)?;
    let cp = c_prime(p, (label.0, label.1))?;
    Ok(f / cp)
}

/// The same value from the normalized series display: sine quotient times
/// the gamma-ratio series over shifted indices.
pub fn eval_g_series(
    p: &HgParams,
    label: SolutionLabel,
    x: (C, C),
    t: Truncation,
) -> Result<C> {
    check_g_conditions(p, label)?;
    let (ok, margin) = in_domain(x);
    if !ok {
        return Err(Error::Domain { margin });
    }
    // Converting the seven gamma factors of the normalization through the
    // reflection formula leaves one net factor of pi on the sine quotient
    // (four conversions downstairs, three upstairs).
    let sq = sine_quotient(p, (label.0, label.1))? * std::f64::consts::PI;
    let one = BigRational::one();
    let base1 = &one - p.b_entry(1, label.0); // n'_1 starts here
    let base2 = &one - p.b_entry(2, label.1);

    // Term values carry products of gamma ratios that individually overflow
    // far before the terms do, so the walk below updates whole terms
    // (gamma ratios times x-powers) by one-step recurrences only.
    let av: Vec<C> = (0..3).map(|i| q_c64(&(&p.a[i] + &base1 + &base2))).collect();
    let b1v: Vec<C> = (0..3).map(|i| q_c64(&(p.b_entry(1, i) + &base1))).collect();
    let b2v: Vec<C> = (0..3).map(|i| q_c64(&(p.b_entry(2, i) + &base2))).collect();
    let mut t00 = C::new(1.0, 0.0);
    for i in 0..3 {
        t00 *= gamma(av[i])? / (gamma(b1v[i])? * gamma(b2v[i])?);
    }
    let n_max = t.n_max as usize;
    let pow1 = x.0.powc(q_c64(&base1));
    let pow2 = x.1.powc(q_c64(&base2));
    let mut total = C::zero();
    // col0 = term at (m1, m2) = (0, s), advanced shell by shell.
    let mut col0 = t00;
    for s in 0..=n_max {
        let mut term = col0;
        let mut shell = C::zero();
        let mut shell_abs = 0.0;
        for m1 in 0..=s {
            shell += term;
            shell_abs += term.norm();
            if m1 < s {
                // Move (m1, m2) -> (m1 + 1, m2 - 1) within the shell.
                let m2 = s - m1;
                let num = (b2v[0] + (m2 - 1) as f64)
                    * (b2v[1] + (m2 - 1) as f64)
                    * (b2v[2] + (m2 - 1) as f64);
                let den = (b1v[0] + m1 as f64) * (b1v[1] + m1 as f64) * (b1v[2] + m1 as f64);
                term = term * (x.0 / x.1) * num / den;
            }
        }
        total += shell;
        if t.tail_tol > 0.0 && s > 2 && shell_abs < t.tail_tol {
            break;
        }
        // Advance the first column to the next shell: (0, s) -> (0, s+1).
        let sf = s as f64;
        let num = (av[0] + sf) * (av[1] + sf) * (av[2] + sf);
        let den = (b2v[0] + sf) * (b2v[1] + sf) * (b2v[2] + sf);
        col0 = col0 * x.1 * num / den;
    }
    Ok(sq * pow1 * pow2 * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{act_on_params, act_on_point, label_action, GroupElement};
    use crate::scalar::{q, q_int, q_to_f64};
    use crate::series::hgf_eval_exact;

    fn c(re: f64, im: f64) -> C {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_examples() {
        let p = HgParams::defaults();
        // Label (0,0) is the identity shift.
        let s = shifted_params(&p, SolutionLabel(0, 0)).unwrap();
        assert_eq!(s, p);
        // Label (1,0): a_i -> a_i - b1 + 1, row1 -> (2-b1, b2-b1+1), row2 fixed.
        let s = shifted_params(&p, SolutionLabel(1, 0)).unwrap();
        let one = BigRational::one();
        for i in 0..3 {
            assert_eq!(s.a[i], &p.a[i] - &p.b[0] + &one);
        }
        let two = q_int(2);
        assert_eq!(s.b[0], &two - &p.b[0]);
        assert_eq!(s.b[1], &p.b[1] - &p.b[0] + &one);
        assert_eq!(s.b[2], p.b[2]);
        assert_eq!(s.b[3], p.b[3]);
        // Label (2,1): a_i -> a_i - b2 - b3 + 2, row1 -> (b1-b2+1, 2-b2),
        // row2 -> (2-b3, b4-b3+1).
        let s = shifted_params(&p, SolutionLabel(2, 1)).unwrap();
        for i in 0..3 {
            assert_eq!(s.a[i], &p.a[i] - &p.b[1] - &p.b[2] + &two);
        }
        assert_eq!(s.b[0], &p.b[0] - &p.b[1] + &one);
        assert_eq!(s.b[1], &two - &p.b[1]);
        assert_eq!(s.b[2], &two - &p.b[2]);
        assert_eq!(s.b[3], &p.b[3] - &p.b[2] + &one);
    }

    #[test]
    fn shift_error_on_bad_lower_parameter() {
        // Choose b so that a shifted lower parameter is a nonpositive integer:
        // b2 - b1 + 1 = 0 <=> b2 = b1 - 1.
        let mut p = HgParams::defaults();
        p.b[1] = &p.b[0] - q_int(1);
        assert!(matches!(
            shifted_params(&p, SolutionLabel(1, 0)),
            Err(Error::Parameter { .. })
        ));
    }

    #[test]
    fn vector_at_small_point_against_exact_oracle() {
        let p = HgParams::defaults();
        let t = Truncation { n_max: 60, tail_tol: 0.0 };
        let x = (c(0.1, 0.0), c(0.05, 0.0));
        let vals = eval_solution_vector(&p, x, t).unwrap();
        // Component (0,0) is the plain series.
        let exact = hgf_eval_exact(&p, (&q(1, 10), &q(1, 20)), 60);
        assert!((vals[0].re - q_to_f64(&exact)).abs() < 1e-13);
        // Each component: prefactor times the exact shifted series.
        let sols = local_solutions(&p).unwrap();
        for (i, s) in sols.iter().enumerate() {
            let series = hgf_eval_exact(&s.shifted, (&q(1, 10), &q(1, 20)), 60);
            let pf = 0.1f64.powf(q_to_f64(&s.exponents.0))
                * 0.05f64.powf(q_to_f64(&s.exponents.1));
            let expect = pf * q_to_f64(&series);
            assert!(
                (vals[i].re - expect).abs() < 1e-10 * expect.abs().max(1.0),
                "component {i}: {} vs {expect}",
                vals[i].re
            );
            assert!(vals[i].im.abs() < 1e-12);
        }
    }

    #[test]
    fn origin_limit_components_vanish() {
        let p = HgParams::defaults();
        let t = Truncation::default();
        // At a tiny positive point every nonconstant component scales like
        // the prefactor, hence goes to zero (positive exponents here).
        let x = (c(1e-8, 0.0), c(1e-8, 0.0));
        let vals = eval_solution_vector(&p, x, t).unwrap();
        assert!((vals[0] - 1.0).norm() < 1e-6);
        for v in vals.iter().skip(1) {
            assert!(v.norm() < 0.01, "nonzero limit {v}");
        }
    }

    #[test]
    fn symmetry_maps_solution_set_onto_itself() {
        let p = HgParams::defaults();
        let t = Truncation { n_max: 48, tail_tol: 0.0 };
        let x = (c(0.07, 0.0), c(0.04, 0.0));
        let base = eval_solution_vector(&p, x, t).unwrap();
        for g in GroupElement::all() {
            let tp = act_on_params(&g, &p);
            let tx = act_on_point(&g, x);
            let tv = eval_solution_vector(&tp, tx, t).unwrap();
            for (idx, &(j, k)) in LABEL_ORDER.iter().enumerate() {
                let target = label_action(&g, (j, k));
                let pos = crate::monodromy::label_index(target);
                assert!(
                    (tv[idx] - base[pos]).norm() < 1e-10 * base[pos].norm().max(1.0),
                    "g={g:?} label ({j},{k}) -> {target:?}"
                );
            }
        }
    }

    #[test]
    fn infinity_data_matches_displays() {
        let p = HgParams::defaults();
        let data = infinity_solution_data(&p).unwrap();
        let one = BigRational::one();
        // First family, i = 1: prefactor exponents (0, a1).
        assert_eq!(data[0].exponents.0, BigRational::zero());
        assert_eq!(data[0].exponents.1, p.a[0]);
        // Row 2 for i = 1: (a1 - a2 + 1, a1 - a3 + 1).
        assert_eq!(data[0].shifted.b[2], &p.a[0] - &p.a[1] + &one);
        assert_eq!(data[0].shifted.b[3], &p.a[0] - &p.a[2] + &one);
        // Second family prefactor: y1^(1-b1) y2^(a_i).
        assert_eq!(data[3].exponents.0, &one - &p.b[0]);
        // Its upper parameters: a_i - b1 + 1, a_i - b1 - b3 + 2, a_i - b1 - b4 + 2.
        let two = q_int(2);
        assert_eq!(data[3].shifted.a[0], &p.a[0] - &p.b[0] + &one);
        assert_eq!(data[3].shifted.a[1], &p.a[0] - &p.b[0] - &p.b[2] + &two);
        assert_eq!(data[3].shifted.a[2], &p.a[0] - &p.b[0] - &p.b[3] + &two);
    }

    #[test]
    fn infinity_conditions_enforced() {
        let mut p = HgParams::defaults();
        p.a[1] = p.a[0].clone();
        assert!(matches!(
            infinity_solution_data(&p),
            Err(Error::Parameter { .. })
        ));
    }

    #[test]
    fn g_routes_agree() {
        let p = HgParams::defaults();
        let t = Truncation { n_max: 60, tail_tol: 0.0 };
        let x = (c(0.1, 0.0), c(0.05, 0.0));
        for label in SolutionLabel::all() {
            let a = eval_g(&p, label, x, t).unwrap();
            let b = eval_g_series(&p, label, x, t).unwrap();
            assert!(
                (a - b).norm() < 1e-10 * a.norm().max(1e-3),
                "label {label:?}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn g_normalization_against_direct_gammas() {
        // G_00 / F_00 = 1 / C'_00 with C'_00 expressed through the direct
        // gamma product over the constant column.
        let p = HgParams::defaults();
        let t = Truncation::default();
        let x = (c(0.08, 0.0), c(0.03, 0.0));
        let f00 = eval_solution_deriv(&p, SolutionLabel(0, 0), x, (0, 0), t).unwrap();
        let g00 = eval_g(&p, SolutionLabel(0, 0), x, t).unwrap();
        let one = BigRational::one();
        let mut num = C::new(1.0, 0.0);
        for ai in &p.a {
            num *= gamma(q_c64(&(&one + &one - ai - &one))).unwrap();
        }
        let mut den = C::new(1.0, 0.0);
        for bj in &p.b {
            den *= gamma(q_c64(&(&one - bj))).unwrap();
        }
        let cp00 = num / den;
        assert!((g00 / f00 - 1.0 / cp00).norm() < 1e-12);
    }

    #[test]
    fn g_sine_vanishing_is_reported() {
        // b1 - b2 integer makes a denominator sine vanish for label (1,0).
        let mut p = HgParams::defaults();
        p.b[1] = &p.b[0] + q_int(1);
        assert!(matches!(
            eval_g(&p, SolutionLabel(1, 0), (c(0.05, 0.0), c(0.02, 0.0)), Truncation::default()),
            Err(Error::Parameter { .. })
        ));
    }
}
