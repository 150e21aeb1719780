//! Self-pairings of the nine twisted cycles attached to the local
//! solutions, and their proportionality to the diagonal invariant form.
//!
//! Four pairings have displayed product formulas; the remaining five are
//! produced by the symmetry action on the ratio to the base pairing,
//! using the specific group elements that build those cycles.

use crate::error::Result;
use crate::monodromy::{h_entry, label_index, LABEL_ORDER};
use crate::params::{act_on_params, GroupElement, HgParams};
use num_complex::Complex64;

type C = Complex64;

/// The nine self-pairings in label order (off-diagonal pairings vanish).
#[derive(Clone, Debug)]
pub struct IntersectionVector {
    pub values: [C; 9],
}

impl IntersectionVector {
    pub fn get(&self, label: (usize, usize)) -> C {
        self.values[label_index(label)]
    }
}

/// Displayed product formula for the base cycle pairing, label (0,0).
fn i00(p: &HgParams) -> C {
    let e = p.exp();
    let (al, be) = (e.alpha, e.beta);
    let f1 = (al[0] - 1.0) * be[0] * be[2]
        / ((1.0 - be[0]) * (1.0 - be[2]) * (al[0] - be[0] * be[2]));
    let f2 = (al[1] - 1.0) * be[1] * be[3]
        / ((1.0 - be[1]) * (1.0 - be[3]) * (al[1] - be[1] * be[3]));
    f1 * f2
}

/// Displayed formula for label (1,0): product of the square-times-triangle
/// pairings in the two coordinate planes.
fn i10(p: &HgParams) -> C {
    let e = p.exp();
    let (al, be) = (e.alpha, e.beta);
    let f1 = (al[0] - be[0]) * (al[2] - be[0]) * be[2]
        / ((al[0] - be[0] * be[2]) * (al[2] - 1.0) * (1.0 - be[0]) * (1.0 - be[2]));
    let f2 = (al[1] - be[0]) * be[1] * be[3]
        / ((al[1] - be[1] * be[3]) * (be[1] - be[0]) * (1.0 - be[3]));
    f1 * f2
}

/// Displayed formula for label (1,1).
fn i11(p: &HgParams) -> C {
    let e = p.exp();
    let (al, be) = (e.alpha, e.beta);
    let f1 = (al[2] - be[0] * be[2]) / ((1.0 - be[0]) * (1.0 - be[2]) * (al[2] - 1.0));
    let f2 = (al[1] - be[0] * be[2]) * be[1] * be[3]
        / ((be[1] - be[0]) * (be[3] - be[2]) * (al[1] - be[1] * be[3]));
    f1 * f2
}

/// Displayed formula for label (2,1).
fn i21(p: &HgParams) -> C {
    let e = p.exp();
    let (al, be) = (e.alpha, e.beta);
    let f1 = (al[0] - be[1] * be[2]) * (al[1] - be[1] * be[2]) * be[0] * be[3]
        / ((al[0] - be[0] * be[2])
            * (al[1] - be[1] * be[3])
            * (be[0] - be[1])
            * (be[3] - be[2]));
    let f2 = (al[2] - be[1] * be[2]) / ((al[2] - 1.0) * (1.0 - be[1]) * (1.0 - be[2]));
    f1 * f2
}

/// Explicit product for label (2,0), as displayed in the proportionality
/// proof (used as a cross-check of the action-derived value).
pub fn i20_displayed(p: &HgParams) -> C {
    let e = p.exp();
    let (al, be) = (e.alpha, e.beta);
    let f1 = (al[1] - be[1]) * (al[2] - be[1]) * be[3]
        / ((al[1] - be[1] * be[3]) * (al[2] - 1.0) * (1.0 - be[1]) * (1.0 - be[3]));
    let f2 = (al[0] - be[1]) * be[0] * be[2]
        / ((al[0] - be[0] * be[2]) * (be[0] - be[1]) * (1.0 - be[2]));
    f1 * f2
}

/// The four directly displayed self-pairings.
pub fn base_self_intersections(p: &HgParams) -> Result<[(usize, usize, C); 4]> {
    crate::params::require_nonresonant(p)?;
    Ok([
        (0, 0, i00(p)),
        (1, 0, i10(p)),
        (1, 1, i11(p)),
        (2, 1, i21(p)),
    ])
}

/// Transported ratio: the pairing for the image label under `g` equals the
/// transformed ratio times the base pairing.
fn via_ratio(p: &HgParams, g: &GroupElement, base: fn(&HgParams) -> C) -> C {
    let tp = act_on_params(g, p);
    base(&tp) / i00(&tp) * i00(p)
}

/// All nine self-pairings in label order.
pub fn all_self_intersections(p: &HgParams) -> Result<IntersectionVector> {
    crate::params::require_nonresonant(p)?;
    let g100 = GroupElement::swap_row1();
    let g001 = GroupElement::swap_rows();
    let g110 = GroupElement::new([0, 1, 2], true, true, false);
    let g101 = g100.compose(&g001);
    let mut values = [C::new(0.0, 0.0); 9];
    for (idx, &label) in LABEL_ORDER.iter().enumerate() {
        values[idx] = match label {
            (0, 0) => i00(p),
            (1, 0) => i10(p),
            (1, 1) => i11(p),
            (2, 1) => i21(p),
            // The transported cycles: row-1 swap sends (1,0) to (2,0);
            // the row swap sends (j,0) to (0,j); both column swaps send
            // (1,1) to (2,2) and (2,1) to (1,2).
            (2, 0) => via_ratio(p, &g100, i10),
            (0, 1) => via_ratio(p, &g001, i10),
            (0, 2) => via_ratio(p, &g101, i10),
            (2, 2) => via_ratio(p, &g110, i11),
            (1, 2) => via_ratio(p, &g110, i21),
            _ => unreachable!(),
        };
    }
    Ok(IntersectionVector { values })
}

/// Max deviation of the ratios `I_jk / I_00` from the diagonal entries of
/// the invariant form.
pub fn proportionality_residual(p: &HgParams) -> Result<f64> {
    let iv = all_self_intersections(p)?;
    let e = p.exp();
    let base = iv.values[0];
    let mut worst = 0.0_f64;
    for (idx, &label) in LABEL_ORDER.iter().enumerate() {
        let h = h_entry(&e, label)?;
        worst = worst.max((iv.values[idx] / base - h).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::{h_matrix, verify_relations_with, HMatrix};
    use crate::params::HgParams;

    #[test]
    fn base_values_match_reference() {
        let p = HgParams::defaults();
        let base = base_self_intersections(&p).unwrap();
        // Frozen from direct high-precision evaluation of the displays.
        assert!((base[0].2 - C::new(-0.6258400641122449530598, 0.0)).norm() < 1e-13);
        assert!((base[1].2 - C::new(0.1389360729839959217964, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn factorization_into_plane_pairings() {
        // The base pairing is the product of the two displayed 2-plane
        // pairings; check each factor separately.
        let p = HgParams::defaults();
        let e = p.exp();
        let (al, be) = (e.alpha, e.beta);
        let t1 = (1.0 - 1.0 / al[0])
            / ((1.0 - 1.0 / be[0]) * (1.0 - 1.0 / be[2]) * (1.0 - be[0] * be[2] / al[0]));
        let t2 = (1.0 - 1.0 / al[1])
            / ((1.0 - 1.0 / be[1]) * (1.0 - 1.0 / be[3]) * (1.0 - be[1] * be[3] / al[1]));
        let v = i00(&p);
        assert!((v - t1 * t2).norm() < 1e-13 * v.norm());
    }

    #[test]
    fn twenty_matches_displayed_product() {
        let p = HgParams::defaults();
        let iv = all_self_intersections(&p).unwrap();
        let direct = i20_displayed(&p);
        assert!((iv.get((2, 0)) - direct).norm() < 1e-13 * direct.norm());
    }

    #[test]
    fn ratios_equal_h_entries() {
        let p = HgParams::defaults();
        assert!(proportionality_residual(&p).unwrap() < 1e-12);
        assert_eq!(
            all_self_intersections(&p).unwrap().get((0, 0))
                / all_self_intersections(&p).unwrap().get((0, 0)),
            C::new(1.0, 0.0)
        );
    }

    #[test]
    fn dual_parameters_invert_exponential_patterns() {
        // At real parameters the dual pairing is the complex conjugate.
        let p = HgParams::defaults();
        let v = i00(&p);
        let vd = i00(&p.dual());
        assert!((vd - v.conj()).norm() < 1e-13 * v.norm());
    }

    #[test]
    fn intersection_route_reproduces_invariance() {
        // Feeding H = diag(I_jk / I_00) into the invariance identities ties
        // the pairings to the circuit matrices independently of the
        // closed-form entries.
        let p = HgParams::defaults();
        let iv = all_self_intersections(&p).unwrap();
        let base = iv.values[0];
        let mut entries = iv.values;
        for v in &mut entries {
            *v /= base;
        }
        let h = HMatrix { entries };
        let e = p.exp();
        let rep = verify_relations_with(&e, &h).unwrap();
        assert!(rep.h_invariance.iter().all(|&r| r < 1e-12), "{rep:?}");
        // Sanity: it agrees with the closed form too.
        let hc = h_matrix(&e).unwrap();
        for i in 0..9 {
            assert!((h.entries[i] - hc.entries[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn resonant_parameters_are_rejected() {
        let mut p = HgParams::defaults();
        p.a[0] = crate::scalar::q_int(2);
        assert!(all_self_intersections(&p).is_err());
    }
}
