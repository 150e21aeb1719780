//! Exponent parameters, their exponential avatars, the sign-change dual and
//! the S3 x D4 symmetry action.
//!
//! The seven parameters are kept as exact rationals so that the
//! integrality checks behind the nonresonance conditions are exact; complex
//! views are derived on demand.

use crate::error::{Error, Result};
use crate::scalar::{q_int, q_to_f64};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::TAU;
use std::fmt;

/// The seven exponent parameters `a = (a1,a2,a3)`, `b = (b1,b2,b3,b4)`.
///
/// The associated 2x3 parameter matrix has rows `(b1, b2, 1)` and
/// `(b3, b4, 1)`; the fixed third column is implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HgParams {
    pub a: [BigRational; 3],
    pub b: [BigRational; 4],
}

/// Unit-modulus exponentials of the parameters: `alpha_i = e^{2 pi i a_i}`,
/// `beta_j = e^{2 pi i b_j}`.
#[derive(Clone, Debug)]
pub struct ExpParams {
    pub alpha: [Complex64; 3],
    pub beta: [Complex64; 4],
}

fn exp_2pi(r: &BigRational) -> Complex64 {
    // Reduce mod 1 first so huge numerators cost no accuracy.
    let frac = r - r.floor();
    Complex64::from_polar(1.0, TAU * q_to_f64(&frac))
}

impl HgParams {
    pub fn new(a: [BigRational; 3], b: [BigRational; 4]) -> Self {
        HgParams { a, b }
    }

    /// Default workbench parameters: `a = (1/2, 1/3, 1/5)`,
    /// `b = (1/7, 3/7, 1/11, 5/11)`.
    pub fn defaults() -> Self {
        use crate::scalar::q;
        HgParams::new([q(1, 2), q(1, 3), q(1, 5)], [q(1, 7), q(3, 7), q(1, 11), q(5, 11)])
    }

    /// Row `i` (1 or 2) of the parameter matrix, third entry fixed to 1.
    pub fn row(&self, i: usize) -> [BigRational; 3] {
        match i {
            1 => [self.b[0].clone(), self.b[1].clone(), q_int(1)],
            2 => [self.b[2].clone(), self.b[3].clone(), q_int(1)],
            _ => panic!("row index must be 1 or 2"),
        }
    }

    /// Entry `b_{i,j}` with `j` a solution label in {0,1,2}: label 0 refers
    /// to the constant third column, labels 1,2 to the listed parameters.
    pub fn b_entry(&self, i: usize, j: usize) -> BigRational {
        assert!((1..=2).contains(&i) && j < 3);
        match (i, j) {
            (_, 0) => q_int(1),
            (1, j) => self.b[j - 1].clone(),
            (2, j) => self.b[j + 1].clone(),
            _ => unreachable!(),
        }
    }

    pub fn exp(&self) -> ExpParams {
        ExpParams {
            alpha: [exp_2pi(&self.a[0]), exp_2pi(&self.a[1]), exp_2pi(&self.a[2])],
            beta: [
                exp_2pi(&self.b[0]),
                exp_2pi(&self.b[1]),
                exp_2pi(&self.b[2]),
                exp_2pi(&self.b[3]),
            ],
        }
    }

    /// The sign-change involution: all seven parameters negated.
    pub fn dual(&self) -> HgParams {
        HgParams {
            a: [-&self.a[0], -&self.a[1], -&self.a[2]],
            b: [-&self.b[0], -&self.b[1], -&self.b[2], -&self.b[3]],
        }
    }

    /// True when some lower parameter lies in `{0,-1,-2,...}`, which makes
    /// the series undefined.
    pub fn lower_param_invalid(&self) -> Option<usize> {
        self.b
            .iter()
            .position(|bj| bj.is_integer() && *bj.numer() <= Zero::zero())
    }

    /// Parse the text form `a=1/2,1/3,1/5 b=1/7,3/7,1/11,5/11`.
    pub fn parse_text(s: &str) -> Result<Self> {
        let mut a: Option<Vec<BigRational>> = None;
        let mut b: Option<Vec<BigRational>> = None;
        for chunk in s.split_whitespace() {
            let (key, vals) = chunk
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=v1,v2,... in {chunk:?}")))?;
            let parsed: Result<Vec<BigRational>> = vals.split(',').map(parse_rational).collect();
            match key {
                "a" => a = Some(parsed?),
                "b" => b = Some(parsed?),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let a = a.ok_or_else(|| Error::Parse("missing a=...".into()))?;
        let b = b.ok_or_else(|| Error::Parse("missing b=...".into()))?;
        if a.len() != 3 || b.len() != 4 {
            return Err(Error::Parse(format!(
                "need 3 upper and 4 lower parameters, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(HgParams::new(
            [a[0].clone(), a[1].clone(), a[2].clone()],
            [b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()],
        ))
    }
}

/// Parse `p/q` or integer strings into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.parse::<num_bigint::BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Serialize for HgParams {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            a: Vec<String>,
            b: Vec<String>,
        }
        Wire {
            a: self.a.iter().map(rational_to_string).collect(),
            b: self.b.iter().map(rational_to_string).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for HgParams {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            a: Vec<String>,
            b: Vec<String>,
        }
        let w = Wire::deserialize(de)?;
        if w.a.len() != 3 || w.b.len() != 4 {
            return Err(D::Error::custom("need 3 upper and 4 lower parameters"));
        }
        let conv = |v: &[String]| -> std::result::Result<Vec<BigRational>, D::Error> {
            v.iter()
                .map(|s| parse_rational(s).map_err(|e| D::Error::custom(e.to_string())))
                .collect()
        };
        let a = conv(&w.a)?;
        let b = conv(&w.b)?;
        Ok(HgParams::new(
            [a[0].clone(), a[1].clone(), a[2].clone()],
            [b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()],
        ))
    }
}

impl fmt::Display for HgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={},{},{} b={},{},{},{}",
            rational_to_string(&self.a[0]),
            rational_to_string(&self.a[1]),
            rational_to_string(&self.a[2]),
            rational_to_string(&self.b[0]),
            rational_to_string(&self.b[1]),
            rational_to_string(&self.b[2]),
            rational_to_string(&self.b[3]),
        )
    }
}

impl ExpParams {
    /// Dual exponentials: every alpha and beta inverted.
    pub fn dual(&self) -> ExpParams {
        ExpParams {
            alpha: self.alpha.map(|z| 1.0 / z),
            beta: self.beta.map(|z| 1.0 / z),
        }
    }

    /// Exponential attached to the matrix entry `b_{i,label}` (label 0 maps
    /// to the constant column, hence to 1).
    pub fn beta_entry(&self, i: usize, label: usize) -> Complex64 {
        match (i, label) {
            (_, 0) => Complex64::new(1.0, 0.0),
            (1, j) => self.beta[j - 1],
            (2, k) => self.beta[k + 1],
            _ => panic!("bad beta entry index"),
        }
    }
}

// ---------------------------------------------------------------------------
// Symmetry group
// ---------------------------------------------------------------------------

/// The eight legal permutations of the four lower parameters, i.e. the
/// dihedral subgroup of S4 preserving the partition {{1,2},{3,4}} (as
/// 0-based arrays `p` with slot `i` receiving old entry `p[i]`).
const D4_PERMS: [[usize; 4]; 8] = [
    [0, 1, 2, 3], // e000: identity
    [1, 0, 2, 3], // e100: (12)
    [0, 1, 3, 2], // e010: (34)
    [1, 0, 3, 2], // e110: (12)(34)
    [2, 3, 0, 1], // e001: (13)(24)
    [3, 2, 0, 1], // e101: (1423)
    [2, 3, 1, 0], // e011: (1324)
    [3, 2, 1, 0], // e111: (14)(23)
];

/// An element of the S3 x D4 symmetry group.
///
/// `s3` permutes the upper parameters (`(g.a)_i = a_{s3(i)}`); `d4` is an
/// index into the fixed eight-element table of lower-parameter permutations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct GroupElement {
    s3: [usize; 3],
    d4: usize,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { s3: [0, 1, 2], d4: 0 }
    }

    /// Build from an S3 permutation (as `i -> s3[i]`) and generator bits
    /// `(e1, e2, e3)` for the three lower-parameter involutions: column swap
    /// in row 1, column swap in row 2, row swap.
    pub fn new(s3: [usize; 3], e1: bool, e2: bool, e3: bool) -> Self {
        let mut sorted = s3;
        sorted.sort_unstable();
        assert_eq!(sorted, [0, 1, 2], "not a permutation of 0..3");
        GroupElement {
            s3,
            d4: (e1 as usize) | (e2 as usize) << 1 | (e3 as usize) << 2,
        }
    }

    pub fn d4_bits(&self) -> (bool, bool, bool) {
        (self.d4 & 1 != 0, self.d4 & 2 != 0, self.d4 & 4 != 0)
    }

    /// Whether this element swaps the two variables.
    pub fn swaps_variables(&self) -> bool {
        self.d4 & 4 != 0
    }

    /// The lower-parameter permutation as an element of S4 (0-based,
    /// slot `i` receives old entry `perm[i]`).
    pub fn d4_to_s4(&self) -> [usize; 4] {
        D4_PERMS[self.d4]
    }

    /// All 48 group elements.
    pub fn all() -> Vec<GroupElement> {
        const S3: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(48);
        for s3 in S3 {
            for d4 in 0..8 {
                out.push(GroupElement { s3, d4 });
            }
        }
        out
    }

    /// Composition `self o other`: `other` acts first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut s3 = [0usize; 3];
        for i in 0..3 {
            s3[i] = other.s3[self.s3[i]];
        }
        let pg = D4_PERMS[self.d4];
        let ph = D4_PERMS[other.d4];
        let mut p = [0usize; 4];
        for i in 0..4 {
            p[i] = ph[pg[i]];
        }
        let d4 = D4_PERMS
            .iter()
            .position(|q| *q == p)
            .expect("D4 is closed under composition");
        GroupElement { s3, d4 }
    }

    pub fn inverse(&self) -> GroupElement {
        let mut s3 = [0usize; 3];
        for i in 0..3 {
            s3[self.s3[i]] = i;
        }
        let pg = D4_PERMS[self.d4];
        let mut p = [0usize; 4];
        for i in 0..4 {
            p[pg[i]] = i;
        }
        let d4 = D4_PERMS.iter().position(|q| *q == p).unwrap();
        GroupElement { s3, d4 }
    }

    /// Column swap acting on row 1 only.
    pub fn swap_row1() -> Self {
        GroupElement::new([0, 1, 2], true, false, false)
    }
    /// Column swap acting on row 2 only.
    pub fn swap_row2() -> Self {
        GroupElement::new([0, 1, 2], false, true, false)
    }
    /// Row swap (also swaps the variables).
    pub fn swap_rows() -> Self {
        GroupElement::new([0, 1, 2], false, false, true)
    }
}

/// Apply a group element to the parameters.
pub fn act_on_params(g: &GroupElement, p: &HgParams) -> HgParams {
    let a = [
        p.a[g.s3[0]].clone(),
        p.a[g.s3[1]].clone(),
        p.a[g.s3[2]].clone(),
    ];
    let perm = D4_PERMS[g.d4];
    let b = [
        p.b[perm[0]].clone(),
        p.b[perm[1]].clone(),
        p.b[perm[2]].clone(),
        p.b[perm[3]].clone(),
    ];
    HgParams { a, b }
}

/// Apply a group element to a point: coordinates swap iff the element swaps
/// the variable pair.
pub fn act_on_point(g: &GroupElement, x: (Complex64, Complex64)) -> (Complex64, Complex64) {
    if g.swaps_variables() {
        (x.1, x.0)
    } else {
        x
    }
}

/// Label transport: `F_label(g.p, g.x) = F_{label_action(g,label)}(p, x)`.
///
/// Labels live in {0,1,2}^2 with 0 the constant column. Note this is a right
/// action: `label_action(g o h) = label_action(h) o label_action(g)`.
pub fn label_action(g: &GroupElement, label: (usize, usize)) -> (usize, usize) {
    let (e1, e2, e3) = g.d4_bits();
    let sw = |l: usize, on: bool| -> usize {
        match (l, on) {
            (1, true) => 2,
            (2, true) => 1,
            _ => l,
        }
    };
    let j = sw(label.0, e1);
    let k = sw(label.1, e2);
    if e3 {
        (k, j)
    } else {
        (j, k)
    }
}

// ---------------------------------------------------------------------------
// Nonresonance
// ---------------------------------------------------------------------------

/// Check the full list of non-integrality conditions required by the
/// monodromy theory plus the distinctness conditions needed by the
/// fundamental system. Returns the violated conditions (empty = all good).
pub fn check_nonresonance(p: &HgParams) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |val: BigRational, label: String| {
        if val.is_integer() {
            bad.push(format!("{label} \u{2208} \u{2124}"));
        }
    };
    for (i, ai) in p.a.iter().enumerate() {
        check(ai.clone(), format!("a{}", i + 1));
    }
    for (j, bj) in p.b.iter().enumerate() {
        check(bj.clone(), format!("b{}", j + 1));
    }
    check(&p.b[0] - &p.b[1], "b1-b2".into());
    check(&p.b[2] - &p.b[3], "b3-b4".into());
    for (i, ai) in p.a.iter().enumerate() {
        for j in 0..2 {
            check(ai - &p.b[j], format!("a{}-b{}", i + 1, j + 1));
        }
        for k in 2..4 {
            check(ai - &p.b[k], format!("a{}-b{}", i + 1, k + 1));
        }
        for j in 0..2 {
            for k in 2..4 {
                check(
                    ai - &p.b[j] - &p.b[k],
                    format!("a{}-b{}-b{}", i + 1, j + 1, k + 1),
                );
            }
        }
    }
    let sum = p.a.iter().sum::<BigRational>() - p.b.iter().sum::<BigRational>();
    check(sum, "a1+a2+a3-b1-b2-b3-b4".into());
    bad
}

/// Subset of conditions under which the nine local solutions exist and are
/// independent.
pub fn check_fundamental_conditions(p: &HgParams) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |val: BigRational, label: &str| {
        if val.is_integer() {
            bad.push(format!("{label} \u{2208} \u{2124}"));
        }
    };
    for (j, bj) in p.b.iter().enumerate() {
        check(bj.clone(), &format!("b{}", j + 1));
    }
    check(&p.b[0] - &p.b[1], "b1-b2");
    check(&p.b[2] - &p.b[3], "b3-b4");
    bad
}

pub fn require_nonresonant(p: &HgParams) -> Result<()> {
    let bad = check_nonresonance(p);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Parameter { conditions: bad })
    }
}

/// The three orbits of the solution labels under the symmetry action.
pub fn solution_orbits() -> [Vec<(usize, usize)>; 3] {
    [
        vec![(0, 0)],
        vec![(1, 0), (2, 0), (0, 1), (0, 2)],
        vec![(1, 1), (2, 1), (1, 2), (2, 2)],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn generator_actions_match_the_defining_displays() {
        let p = HgParams::defaults();
        let g100 = GroupElement::swap_row1();
        let p1 = act_on_params(&g100, &p);
        assert_eq!(p1.b, [p.b[1].clone(), p.b[0].clone(), p.b[2].clone(), p.b[3].clone()]);
        let g001 = GroupElement::swap_rows();
        let p3 = act_on_params(&g001, &p);
        assert_eq!(p3.b, [p.b[2].clone(), p.b[3].clone(), p.b[0].clone(), p.b[1].clone()]);
        let id = GroupElement::identity();
        assert_eq!(act_on_params(&id, &p), p);
    }

    #[test]
    fn point_action() {
        let x = (Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0));
        let g001 = GroupElement::swap_rows();
        assert_eq!(act_on_point(&g001, x), (x.1, x.0));
        let g100 = GroupElement::swap_row1();
        assert_eq!(act_on_point(&g100, x), x);
        assert_eq!(act_on_point(&GroupElement::identity(), x), x);
    }

    #[test]
    fn d4_sits_in_s4_as_the_fixed_table() {
        // e101 must be the 4-cycle 1->4->2->3->1, e011 the 4-cycle 1->3->2->4->1
        // (1-based), and e000 the identity.
        let g101 = GroupElement::new([0, 1, 2], true, false, true);
        assert_eq!(g101.d4_to_s4(), [3, 2, 0, 1]);
        let g011 = GroupElement::new([0, 1, 2], false, true, true);
        assert_eq!(g011.d4_to_s4(), [2, 3, 1, 0]);
        assert_eq!(GroupElement::identity().d4_to_s4(), [0, 1, 2, 3]);
        // e101 = e100 o e001 (apply row swap first), e011 = e001 o e100.
        let c = GroupElement::swap_row1().compose(&GroupElement::swap_rows());
        assert_eq!(c, g101);
        let c = GroupElement::swap_rows().compose(&GroupElement::swap_row1());
        assert_eq!(c, g011);
    }

    #[test]
    fn group_closure_and_inverse() {
        let all = GroupElement::all();
        assert_eq!(all.len(), 48);
        for g in &all {
            for h in &all {
                let gh = g.compose(h);
                assert!(all.contains(&gh));
            }
            assert_eq!(g.compose(&g.inverse()), GroupElement::identity());
        }
    }

    #[test]
    fn dual_is_an_involution_and_inverts_exponentials() {
        let p = HgParams::defaults();
        assert_eq!(p.dual().dual(), p);
        let all_half = HgParams::new(
            [q(1, 2), q(1, 2), q(1, 2)],
            [q(1, 2), q(1, 2), q(1, 2), q(1, 2)],
        );
        let d = all_half.dual();
        assert!(d.a.iter().chain(d.b.iter()).all(|v| *v == q(-1, 2)));
        // alpha = i at a = 1/4; dual alpha = 1/i = -i.
        let p4 = HgParams::new([q(1, 4), q(1, 3), q(1, 5)], HgParams::defaults().b);
        let e = p4.exp();
        let ed = p4.dual().exp();
        assert!((e.alpha[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((ed.alpha[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((e.alpha[0] * ed.alpha[0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn nonresonance_at_defaults_and_violations() {
        assert!(check_nonresonance(&HgParams::defaults()).is_empty());

        let mut p = HgParams::defaults();
        p.b[1] = p.b[0].clone();
        let bad = check_nonresonance(&p);
        assert!(bad.iter().any(|c| c.starts_with("b1-b2")));

        let mut p = HgParams::defaults();
        p.a[0] = q_int(1);
        let bad = check_nonresonance(&p);
        assert!(bad.iter().any(|c| c.starts_with("a1 ")));
    }

    #[test]
    fn nonresonance_is_symmetry_invariant() {
        let p = HgParams::defaults();
        for g in GroupElement::all() {
            assert!(check_nonresonance(&act_on_params(&g, &p)).is_empty());
        }
        // A resonant set stays resonant across the orbit.
        let mut r = HgParams::defaults();
        r.a[2] = &r.b[0] + q_int(1);
        assert!(!check_nonresonance(&r).is_empty());
        for g in GroupElement::all() {
            assert!(!check_nonresonance(&act_on_params(&g, &r)).is_empty());
        }
    }

    #[test]
    fn orbits() {
        let orbits = solution_orbits();
        assert_eq!(orbits[0], vec![(0, 0)]);
        assert!(orbits[1].contains(&(1, 0)) && orbits[1].len() == 4);
        assert!(orbits[2].contains(&(2, 2)) && orbits[2].len() == 4);
    }

    #[test]
    fn label_action_matches_the_stated_moves() {
        let g100 = GroupElement::swap_row1();
        let g001 = GroupElement::swap_rows();
        let g101 = g100.compose(&g001);
        let g110 = GroupElement::new([0, 1, 2], true, true, false);
        assert_eq!(label_action(&g100, (1, 0)), (2, 0));
        assert_eq!(label_action(&g001, (1, 0)), (0, 1));
        assert_eq!(label_action(&g101, (1, 0)), (0, 2));
        assert_eq!(label_action(&g110, (1, 1)), (2, 2));
        assert_eq!(label_action(&g110, (2, 1)), (1, 2));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let p = HgParams::parse_text("a=1/2,1/3,1/5 b=1/7,3/7,1/11,5/11").unwrap();
        assert_eq!(p, HgParams::defaults());
        let q = HgParams::parse_text(&p.to_string()).unwrap();
        assert_eq!(p, q);
        let js = serde_json::to_string(&p).unwrap();
        let back: HgParams = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
