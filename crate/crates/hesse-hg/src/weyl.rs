//! Exact operator algebra: canonical forms in the rational Weyl algebra in
//! two variables, left Groebner bases over the rational-function field,
//! holonomic rank and standard monomials, extraction of the first-order
//! (Pfaffian) system, and the exact polynomial identities for the cubic
//! component of the singular locus.

use crate::error::{Error, Result};
use crate::params::HgParams;
use crate::poly::{
    discriminant, gcd2, lcm2, ExactDiv, Poly, Poly1, Poly2, QOmega, Ring, UPoly,
};
use crate::ratfun::RatFun;
use num_complex::Complex64;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Monomial in the two derivations, ordered by graded lex with the second
/// derivation dominant (the order whose staircase matches the nine-element
/// basis of the quotient).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct DMon(pub [u16; 2]);

impl DMon {
    pub fn deg(&self) -> u32 {
        self.0[0] as u32 + self.0[1] as u32
    }
    pub fn divides(&self, other: &DMon) -> bool {
        self.0[0] <= other.0[0] && self.0[1] <= other.0[1]
    }
    pub fn div(&self, other: &DMon) -> Option<DMon> {
        if other.divides(self) {
            Some(DMon([self.0[0] - other.0[0], self.0[1] - other.0[1]]))
        } else {
            None
        }
    }
    pub fn lcm(&self, other: &DMon) -> DMon {
        DMon([self.0[0].max(other.0[0]), self.0[1].max(other.0[1])])
    }
}

impl Ord for DMon {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg()
            .cmp(&other.deg())
            .then(self.0[1].cmp(&other.0[1]))
            .then(self.0[0].cmp(&other.0[0]))
    }
}

impl PartialOrd for DMon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical-form element of the rational Weyl algebra: a finite sum of
/// rational-function coefficients times derivation monomials. The
/// commutation rule is `d_i x_i = x_i d_i + 1`; all other generator pairs
/// commute.
#[derive(Clone, PartialEq)]
pub struct OreOperator {
    terms: BTreeMap<DMon, RatFun>,
}

impl OreOperator {
    pub fn zero() -> Self {
        OreOperator { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        OreOperator::from_coeff(RatFun::one())
    }

    pub fn from_coeff(c: RatFun) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(DMon([0, 0]), c);
        }
        OreOperator { terms: t }
    }

    pub fn term(m: DMon, c: RatFun) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        OreOperator { terms: t }
    }

    /// The derivation in variable `i` (0-based).
    pub fn d(i: usize) -> Self {
        assert!(i < 2);
        let mut e = [0u16; 2];
        e[i] = 1;
        OreOperator::term(DMon(e), RatFun::one())
    }

    /// Multiplication by the coordinate `x_i` from the left.
    pub fn x(i: usize) -> Self {
        OreOperator::from_coeff(RatFun::var(i))
    }

    /// Euler operator `x_i d_i`.
    pub fn theta(i: usize) -> Self {
        let mut e = [0u16; 2];
        e[i] = 1;
        OreOperator::term(DMon(e), RatFun::var(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&DMon, &RatFun)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &DMon) -> RatFun {
        self.terms.get(m).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn leading(&self) -> Option<(&DMon, &RatFun)> {
        self.terms.iter().next_back()
    }

    pub fn d_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg()).max()
    }

    fn insert_add(&mut self, m: DMon, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    /// Left multiplication by a rational function.
    pub fn scale(&self, c: &RatFun) -> Self {
        if c.is_zero() {
            return OreOperator::zero();
        }
        let mut out = OreOperator::zero();
        for (m, v) in &self.terms {
            out.insert_add(*m, v.mul(c));
        }
        out
    }

    /// Product in the algebra: derivations act on the right factor's
    /// coefficients by the Leibniz rule.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = OreOperator::zero();
        for (m, c) in &self.terms {
            let (m1, m2) = (m.0[0] as usize, m.0[1] as usize);
            for (k, dcf) in &o.terms {
                // Partial-derivative table of dcf up to (m1, m2).
                let mut table: Vec<Vec<RatFun>> = vec![vec![RatFun::zero(); m2 + 1]; m1 + 1];
                table[0][0] = dcf.clone();
                for j1 in 1..=m1 {
                    table[j1][0] = table[j1 - 1][0].derivative(0);
                }
                for j2 in 1..=m2 {
                    for j1 in 0..=m1 {
                        table[j1][j2] = table[j1][j2 - 1].derivative(1);
                    }
                }
                for (j1, row) in table.iter().enumerate() {
                    for (j2, dv) in row.iter().enumerate() {
                        if dv.is_zero() {
                            continue;
                        }
                        let bin = binom(m1, j1) * binom(m2, j2);
                        let target = DMon([
                            (m1 - j1 + k.0[0] as usize) as u16,
                            (m2 - j2 + k.0[1] as usize) as u16,
                        ]);
                        let coeff = c
                            .mul(dv)
                            .scale(&BigRational::from_integer(bin.into()));
                        out.insert_add(target, coeff);
                    }
                }
            }
        }
        out
    }

    /// Normalize so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => OreOperator::zero(),
            Some((_, lc)) => {
                let inv = lc.inv();
                self.scale(&inv)
            }
        }
    }

    /// Terms of maximal total derivation degree, i.e. the initial form for
    /// the weight that grades derivations by one and coordinates by zero.
    pub fn weight_initial_form(&self) -> OreOperator {
        let d = match self.d_degree() {
            Some(d) => d,
            None => return OreOperator::zero(),
        };
        let mut out = OreOperator::zero();
        for (m, c) in &self.terms {
            if m.deg() == d {
                out.insert_add(*m, c.clone());
            }
        }
        out
    }

    /// The coefficient picked up when the operator acts on the constant 1.
    pub fn apply_to_one(&self) -> RatFun {
        self.coeff(&DMon([0, 0]))
    }
}

fn binom(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

impl std::fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{:?}]", c)?;
            if m.0[0] > 0 {
                write!(f, " d1^{}", m.0[0])?;
            }
            if m.0[1] > 0 {
                write!(f, " d2^{}", m.0[1])?;
            }
        }
        Ok(())
    }
}

/// The two generators of the system: for each variable, the Euler-operator
/// product of the lower parameters minus the coordinate times the product
/// of the shifted upper parameters.
pub fn system_operators(p: &HgParams) -> (OreOperator, OreOperator) {
    let theta = |i: usize| OreOperator::theta(i);
    let shift = |op: &OreOperator, c: BigRational| {
        op.add(&OreOperator::from_coeff(RatFun::from_q(c)))
    };
    let one: BigRational = num_traits::one();

    let build = |i: usize| -> OreOperator {
        let (blo, bhi) = if i == 0 { (0, 1) } else { (2, 3) };
        let lhs = theta(i)
            .mul(&shift(&theta(i), &p.b[blo] - &one))
            .mul(&shift(&theta(i), &p.b[bhi] - &one));
        let euler = theta(0).add(&theta(1));
        let mut rhs = shift(&euler, p.a[0].clone());
        rhs = rhs.mul(&shift(&euler, p.a[1].clone()));
        // Multiply from the left so the x factor stays a plain coefficient.
        rhs = shift(&euler, p.a[2].clone()).mul(&rhs);
        rhs = OreOperator::x(i).mul(&rhs);
        lhs.sub(&rhs)
    };
    (build(0), build(1))
}

// ---------------------------------------------------------------------------
// Left Groebner bases
// ---------------------------------------------------------------------------

/// Reduction/S-pair budget for the Buchberger loop.
#[derive(Clone, Copy, Debug)]
pub struct GbLimits {
    pub max_reduction_steps: usize,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits { max_reduction_steps: 200_000 }
    }
}

/// Internal operator form with plain polynomial coefficients. All the
/// Buchberger arithmetic is pseudo-reduction here (multiply through by
/// leading coefficients, strip integer/polynomial content), which avoids
/// per-step rational-function gcds entirely.
#[derive(Clone, PartialEq, Debug)]
struct PolyOp {
    terms: BTreeMap<DMon, Poly2>,
}

impl PolyOp {
    fn zero() -> Self {
        PolyOp { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn leading(&self) -> Option<(&DMon, &Poly2)> {
        self.terms.iter().next_back()
    }
    fn insert_add(&mut self, m: DMon, c: Poly2) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert_add(*m, c.neg());
        }
        out
    }
    fn scale_poly(&self, c: &Poly2) -> Self {
        let mut out = PolyOp::zero();
        for (m, v) in &self.terms {
            out.insert_add(*m, v.mul(c));
        }
        out
    }

    /// Left multiplication by a derivation monomial, Leibniz rule on the
    /// polynomial coefficients.
    fn d_mono_mul(&self, delta: DMon) -> Self {
        let (m1, m2) = (delta.0[0] as usize, delta.0[1] as usize);
        let mut out = PolyOp::zero();
        for (k, c) in &self.terms {
            let mut table: Vec<Vec<Poly2>> = vec![vec![Poly2::new(); m2 + 1]; m1 + 1];
            table[0][0] = c.clone();
            for j1 in 1..=m1 {
                table[j1][0] = table[j1 - 1][0].derivative(0);
            }
            for j2 in 1..=m2 {
                for j1 in 0..=m1 {
                    table[j1][j2] = table[j1][j2 - 1].derivative(1);
                }
            }
            for (j1, row) in table.iter().enumerate() {
                for (j2, dv) in row.iter().enumerate() {
                    if dv.is_zero() {
                        continue;
                    }
                    let bin = binom(m1, j1) * binom(m2, j2);
                    let target = DMon([
                        (m1 - j1 + k.0[0] as usize) as u16,
                        (m2 - j2 + k.0[1] as usize) as u16,
                    ]);
                    out.insert_add(
                        target,
                        dv.scale(&BigRational::from_integer(bin.into())),
                    );
                }
            }
        }
        out
    }

    /// Divide out the polynomial content (gcd of all coefficients) and
    /// clear rational denominators; returns the removed factor.
    fn strip_content(&mut self) -> RatFun {
        if self.is_zero() {
            return RatFun::one();
        }
        let mut content = Poly2::new();
        for c in self.terms.values() {
            content = gcd2(&content, c);
            if content.is_constant() {
                break;
            }
        }
        let mut removed = RatFun::one();
        if !content.is_constant() {
            for c in self.terms.values_mut() {
                *c = c.exact_div(&content).expect("content divides");
            }
            removed = RatFun::from_poly(content);
        }
        // Normalize rational scalars: make all coefficients integral and
        // primitive as one unit.
        let mut den_lcm = num_bigint::BigInt::from(1);
        let mut num_gcd = num_bigint::BigInt::from(0);
        for c in self.terms.values() {
            for (_, q) in c.iter_terms() {
                den_lcm = num_integer::Integer::lcm(&den_lcm, q.denom());
            }
        }
        for c in self.terms.values() {
            for (_, q) in c.iter_terms() {
                let int_c = q.numer() * (&den_lcm / q.denom());
                num_gcd = num_integer::Integer::gcd(&num_gcd, &int_c);
            }
        }
        if num_gcd != num_bigint::BigInt::from(0) {
            let scalar = BigRational::new(num_gcd, den_lcm);
            if !num_traits::One::is_one(&scalar) {
                let inv = num_traits::one::<BigRational>() / scalar.clone();
                for c in self.terms.values_mut() {
                    *c = c.scale(&inv);
                }
                removed = removed.scale(&scalar);
            }
        }
        removed
    }

    fn from_ore(op: &OreOperator) -> Self {
        // Clear all denominators by their least common multiple.
        let mut l = Poly2::one();
        for (_, c) in op.iter_terms() {
            if !c.is_polynomial() {
                l = lcm2(&l, c.denominator());
            }
        }
        let mut out = PolyOp::zero();
        for (m, c) in op.iter_terms() {
            let cof = l.exact_div(c.denominator()).expect("lcm divides");
            out.insert_add(*m, c.numerator().mul(&cof));
        }
        out
    }

    /// Convert to a monic rational-function operator (single division by
    /// the leading coefficient).
    fn to_ore_monic(&self) -> OreOperator {
        let lc = match self.leading() {
            None => return OreOperator::zero(),
            Some((_, lc)) => lc.clone(),
        };
        let mut out = OreOperator::zero();
        for (m, c) in &self.terms {
            out.insert_add(*m, RatFun::new(c.clone(), lc.clone()));
        }
        out
    }
}

/// Pseudo normal form: returns `r` and a rational multiplier `mult` with
/// `mult * f = r (mod ideal)`, `r` supported only on monomials outside the
/// initial ideal of `basis`. With `head_only`, stops once the leading
/// monomial is irreducible.
fn pseudo_nf(
    f: &PolyOp,
    basis: &[PolyOp],
    head_only: bool,
    steps: &mut usize,
    limits: &GbLimits,
) -> Result<(PolyOp, RatFun)> {
    let mut rest = f.clone();
    let mut mult = RatFun::one();
    let stripped = rest.strip_content();
    mult = mult.div(&stripped);
    let mut out = PolyOp::zero();
    'outer: while let Some((m, c)) = rest.leading().map(|(m, c)| (*m, c.clone())) {
        *steps += 1;
        if *steps > limits.max_reduction_steps {
            return Err(Error::ResourceLimit(format!(
                "reduction exceeded {} steps",
                limits.max_reduction_steps
            )));
        }
        for g in basis {
            let (lm, _) = g.leading().expect("basis elements nonzero");
            if let Some(delta) = m.div(lm) {
                let shifted = g.d_mono_mul(delta);
                let lg = shifted.leading().unwrap().1.clone();
                // lg * rest - c * shifted cancels the head exactly.
                rest = rest.scale_poly(&lg).sub(&shifted.scale_poly(&c));
                // The already-output tail must track the same scaling.
                if !out.is_zero() {
                    out = out.scale_poly(&lg);
                }
                mult = mult.mul(&RatFun::from_poly(lg));
                let stripped = joint_strip(&mut rest, &mut out);
                mult = mult.div(&stripped);
                continue 'outer;
            }
        }
        if head_only {
            // Remaining part is fully irreducible at the head; return as is.
            for (m2, c2) in rest.terms {
                out.insert_add(m2, c2);
            }
            return Ok((out, mult));
        }
        out.insert_add(m, c.clone());
        rest.terms.remove(&m);
    }
    Ok((out, mult))
}

/// Strip the common content of the pair (rest, out) so the tracked
/// multiplier stays a single rational function.
fn joint_strip(rest: &mut PolyOp, out: &mut PolyOp) -> RatFun {
    if out.is_zero() {
        return rest.strip_content();
    }
    let mut content = Poly2::new();
    for c in rest.terms.values().chain(out.terms.values()) {
        content = gcd2(&content, c);
        if content.is_constant() {
            break;
        }
    }
    let mut removed = RatFun::one();
    if !content.is_constant() {
        for c in rest.terms.values_mut().chain(out.terms.values_mut()) {
            *c = c.exact_div(&content).expect("content divides");
        }
        removed = RatFun::from_poly(content);
    }
    // Joint scalar normalization.
    let mut den_lcm = num_bigint::BigInt::from(1);
    let mut num_gcd = num_bigint::BigInt::from(0);
    for c in rest.terms.values().chain(out.terms.values()) {
        for (_, q) in c.iter_terms() {
            den_lcm = num_integer::Integer::lcm(&den_lcm, q.denom());
        }
    }
    for c in rest.terms.values().chain(out.terms.values()) {
        for (_, q) in c.iter_terms() {
            let int_c = q.numer() * (&den_lcm / q.denom());
            num_gcd = num_integer::Integer::gcd(&num_gcd, &int_c);
        }
    }
    if num_gcd != num_bigint::BigInt::from(0) {
        let scalar = BigRational::new(num_gcd, den_lcm);
        if !num_traits::One::is_one(&scalar) {
            let inv = num_traits::one::<BigRational>() / scalar.clone();
            for c in rest.terms.values_mut().chain(out.terms.values_mut()) {
                *c = c.scale(&inv);
            }
            removed = removed.scale(&scalar);
        }
    }
    removed
}

/// Buchberger completion of the left ideal generated by `gens`, returning
/// the reduced monic basis.
pub fn groebner(gens: &[OreOperator], limits: GbLimits) -> Result<Vec<OreOperator>> {
    let mut basis: Vec<PolyOp> = Vec::new();
    let mut steps = 0usize;
    for g in gens {
        if !g.is_zero() {
            let mut p = PolyOp::from_ore(g);
            p.strip_content();
            basis.push(p);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // Normal selection: smallest lcm first.
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, &(i1, j1)), (_, &(i2, j2))| {
                let l1 = basis[i1].leading().unwrap().0.lcm(basis[j1].leading().unwrap().0);
                let l2 = basis[i2].leading().unwrap().0.lcm(basis[j2].leading().unwrap().0);
                l1.cmp(&l2)
            })
            .map(|(idx, _)| idx)
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        let (lmi, lci) = {
            let (m, c) = basis[i].leading().unwrap();
            (*m, c.clone())
        };
        let (lmj, lcj) = {
            let (m, c) = basis[j].leading().unwrap();
            (*m, c.clone())
        };
        let l = lmi.lcm(&lmj);
        let si = basis[i].d_mono_mul(l.div(&lmi).unwrap()).scale_poly(&lcj);
        let sj = basis[j].d_mono_mul(l.div(&lmj).unwrap()).scale_poly(&lci);
        let s = si.sub(&sj);
        if s.is_zero() {
            continue;
        }
        let (nf, _) = pseudo_nf(&s, &basis, true, &mut steps, &limits)?;
        if !nf.is_zero() {
            let mut nf = nf;
            nf.strip_content();
            let idx = basis.len();
            for k in 0..idx {
                pairs.push((k, idx));
            }
            basis.push(nf);
        }
    }
    // Reduced basis: keep elements with minimal leads, tail-reduce each
    // against the others, then convert to monic rational-function form.
    let mut keep: Vec<PolyOp> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = *g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && {
                let lh = *h.leading().unwrap().0;
                lh.divides(&lm) && (lh != lm || j < i)
            }
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<OreOperator> = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<PolyOp> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (nf, _) = pseudo_nf(&keep[i], &others, false, &mut steps, &limits)?;
        reduced.push(nf.to_ore_monic());
    }
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    Ok(reduced)
}

/// Unique normal form of an operator against a (Groebner) basis: the
/// remainder supported on the standard monomials, with exact
/// rational-function coefficients.
pub fn normal_form(op: &OreOperator, basis: &[OreOperator]) -> Result<OreOperator> {
    let limits = GbLimits::default();
    let mut steps = 0usize;
    let poly_basis: Vec<PolyOp> = basis
        .iter()
        .map(|g| {
            let mut p = PolyOp::from_ore(g);
            p.strip_content();
            p
        })
        .collect();
    let f = PolyOp::from_ore(op);
    // Denominators cleared on entry contribute to the multiplier too.
    let mut entry_den = Poly2::one();
    for (_, c) in op.iter_terms() {
        if !c.is_polynomial() {
            entry_den = lcm2(&entry_den, c.denominator());
        }
    }
    let (nf, mult) = pseudo_nf(&f, &poly_basis, false, &mut steps, &limits)?;
    let scale = RatFun::from_poly(entry_den).mul(&mult).inv();
    let mut out = OreOperator::zero();
    for (m, c) in &nf.terms {
        out.insert_add(*m, RatFun::from_poly(c.clone()).mul(&scale));
    }
    Ok(out)
}

/// Initial (leading) monomials of a basis.
pub fn initial_monomials(basis: &[OreOperator]) -> Vec<DMon> {
    let mut v: Vec<DMon> = basis
        .iter()
        .filter_map(|g| g.leading().map(|(m, _)| *m))
        .collect();
    v.sort();
    v
}

/// Monomials outside the initial ideal, listed with the second derivation
/// grouped outermost: 1, d1, d1^2, ..., d2, d1 d2, ... (the listing
/// convention the nine-element basis is always written in).
pub fn standard_monomials(basis: &[OreOperator]) -> Result<Vec<DMon>> {
    let initials = initial_monomials(basis);
    let bound1 = initials
        .iter()
        .find(|m| m.0[1] == 0)
        .map(|m| m.0[0])
        .ok_or_else(|| {
            Error::Internal("no pure power of the first derivation in the initial ideal".into())
        })?;
    let bound2 = initials
        .iter()
        .find(|m| m.0[0] == 0)
        .map(|m| m.0[1])
        .ok_or_else(|| {
            Error::Internal("no pure power of the second derivation in the initial ideal".into())
        })?;
    let mut out = Vec::new();
    for i2 in 0..bound2 {
        for i1 in 0..bound1 {
            let m = DMon([i1, i2]);
            if !initials.iter().any(|lm| lm.divides(&m)) {
                out.push(m);
            }
        }
    }
    out.sort_by_key(|m| (m.0[1], m.0[0]));
    Ok(out)
}

/// Dimension of the quotient as a vector space over the rational functions.
pub fn holonomic_rank(basis: &[OreOperator]) -> Result<usize> {
    Ok(standard_monomials(basis)?.len())
}

// ---------------------------------------------------------------------------
// Pfaffian system
// ---------------------------------------------------------------------------

/// First-order form of the system: the derivative of the basis-monomial
/// vector is `P_i` times the vector.
#[derive(Clone)]
pub struct PfaffianSystem {
    pub basis: Vec<DMon>,
    /// `p[i]` is the matrix for the derivative in variable `i`, rows and
    /// columns indexed by `basis`.
    pub p: [Vec<Vec<RatFun>>; 2],
}

pub fn pfaffian(gb: &[OreOperator], std_monomials: &[DMon]) -> Result<PfaffianSystem> {
    let n = std_monomials.len();
    let limits = GbLimits::default();
    let mut steps = 0usize;
    let poly_basis: Vec<PolyOp> = gb
        .iter()
        .map(|g| {
            let mut p = PolyOp::from_ore(g);
            p.strip_content();
            p
        })
        .collect();
    let mut p = [vec![vec![RatFun::zero(); n]; n], vec![vec![RatFun::zero(); n]; n]];
    for (var, pm) in p.iter_mut().enumerate() {
        for (row, m) in std_monomials.iter().enumerate() {
            let mut e = m.0;
            e[var] += 1;
            let mut probe = PolyOp::zero();
            probe.insert_add(DMon(e), Poly2::one());
            let (nf, mult) = pseudo_nf(&probe, &poly_basis, false, &mut steps, &limits)?;
            // mult * d^e = nf (mod ideal), so the true row is nf / mult.
            for (mon, c) in &nf.terms {
                let col = std_monomials
                    .iter()
                    .position(|s| s == mon)
                    .ok_or_else(|| {
                        Error::Internal(format!(
                            "normal form escaped the standard monomials at {mon:?}"
                        ))
                    })?;
                pm[row][col] = RatFun::from_poly(c.clone()).div(&mult);
            }
        }
    }
    Ok(PfaffianSystem { basis: std_monomials.to_vec(), p })
}

impl PfaffianSystem {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Exact flatness check: `d2 P1 - d1 P2 + P1 P2 - P2 P1 = 0`.
    ///
    /// Everything is scaled to the least common denominator first so the
    /// whole verification runs on plain polynomials.
    pub fn integrability_holds(&self) -> bool {
        let n = self.size();
        let mut den = Poly2::one();
        for pm in &self.p {
            for row in pm {
                for e in row {
                    if !e.is_zero() && !e.is_polynomial() {
                        den = lcm2(&den, e.denominator());
                    }
                }
            }
        }
        let scaled = |pm: &Vec<Vec<RatFun>>| -> Vec<Vec<Poly2>> {
            pm.iter()
                .map(|row| {
                    row.iter()
                        .map(|e| {
                            if e.is_zero() {
                                Poly2::new()
                            } else {
                                let cof = den.exact_div(e.denominator()).expect("lcm divides");
                                e.numerator().mul(&cof)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let n1 = scaled(&self.p[0]);
        let n2 = scaled(&self.p[1]);
        let d1den = den.derivative(0);
        let d2den = den.derivative(1);
        for i in 0..n {
            for j in 0..n {
                // Residual numerator over den^2.
                let mut acc = n1[i][j].derivative(1).mul(&den).sub(&n1[i][j].mul(&d2den));
                acc = acc.sub(&n2[i][j].derivative(0).mul(&den)).add(&n2[i][j].mul(&d1den));
                for k in 0..n {
                    if !n1[i][k].is_zero() && !n2[k][j].is_zero() {
                        acc = acc.add(&n1[i][k].mul(&n2[k][j]));
                    }
                    if !n2[i][k].is_zero() && !n1[k][j].is_zero() {
                        acc = acc.sub(&n2[i][k].mul(&n1[k][j]));
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Numeric evaluation of `P_i` at a point.
    pub fn eval(&self, var: usize, x: [Complex64; 2]) -> crate::cmat::CMat {
        let n = self.size();
        crate::cmat::CMat::from_fn(n, |i, j| self.p[var][i][j].eval_c64(&x))
    }

    /// Machine-readable form: basis as exponent pairs, entries as
    /// numerator/denominator coefficient lists in ascending graded-lex
    /// order, coefficients as exact rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let poly_json = |p: &Poly2| -> serde_json::Value {
            serde_json::Value::Array(
                p.iter_terms()
                    .map(|(m, c)| {
                        serde_json::json!([
                            m.0[0],
                            m.0[1],
                            crate::params::rational_to_string(c)
                        ])
                    })
                    .collect(),
            )
        };
        let mat_json = |pm: &Vec<Vec<RatFun>>| -> serde_json::Value {
            serde_json::Value::Array(
                pm.iter()
                    .map(|row| {
                        serde_json::Value::Array(
                            row.iter()
                                .map(|e| {
                                    serde_json::json!({
                                        "num": poly_json(e.numerator()),
                                        "den": poly_json(e.denominator()),
                                    })
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        serde_json::json!({
            "basis": self.basis.iter().map(|m| [m.0[0], m.0[1]]).collect::<Vec<_>>(),
            "p1": mat_json(&self.p[0]),
            "p2": mat_json(&self.p[1]),
            "denominator_factors": singular_factors(self).to_json(),
        })
    }
}

// ---------------------------------------------------------------------------
// Singular locus
// ---------------------------------------------------------------------------

/// The cubic `(1 - x1 - x2)^3 - 27 x1 x2`.
pub fn r_polynomial() -> Poly2 {
    let one = Poly2::one();
    let x1 = Poly2::var(0);
    let x2 = Poly2::var(1);
    let lin = one.sub(&x1).sub(&x2);
    lin.pow(3)
        .sub(&x1.mul(&x2).scale(&BigRational::from_integer(27.into())))
}

/// Multiplicity report of the denominator factors of a Pfaffian system.
#[derive(Clone, Debug)]
pub struct SingularFactors {
    pub x1_mult: u32,
    pub x2_mult: u32,
    pub r_mult: u32,
    /// Any cofactor beyond the expected three factors (apparent-singularity
    /// candidate), in squarefree form.
    pub extra: Option<Poly2>,
    pub lcm_total_degree: u32,
}

impl SingularFactors {
    pub fn contains_expected(&self) -> bool {
        self.x1_mult > 0 && self.x2_mult > 0 && self.r_mult > 0
    }
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x1_mult": self.x1_mult,
            "x2_mult": self.x2_mult,
            "r_mult": self.r_mult,
            "apparent_candidate": self.extra.as_ref().map(crate::poly::poly_to_string),
            "lcm_total_degree": self.lcm_total_degree,
        })
    }
}

/// Squarefree-factor structure of the least common multiple of all the
/// denominators appearing in the system.
pub fn singular_factors(pf: &PfaffianSystem) -> SingularFactors {
    let mut l = Poly2::one();
    for pm in &pf.p {
        for row in pm {
            for e in row {
                if !e.is_zero() && !e.is_polynomial() {
                    l = lcm2(&l, e.denominator());
                }
            }
        }
    }
    let lcm_total_degree = l.total_degree().unwrap_or(0);
    let strip = |f: &Poly2, l: &mut Poly2| -> u32 {
        let mut mult = 0;
        while let Some(q) = l.exact_div(f) {
            *l = q;
            mult += 1;
        }
        mult
    };
    let mut rest = l;
    let x1_mult = strip(&Poly2::var(0), &mut rest);
    let x2_mult = strip(&Poly2::var(1), &mut rest);
    let r_mult = strip(&r_polynomial().monic(), &mut rest);
    let extra = if rest.is_constant() {
        None
    } else {
        // Report the squarefree part of whatever remains.
        let g = gcd2(&rest, &gcd2(&rest.derivative(0), &rest.derivative(1)));
        Some(rest.exact_div(&g).unwrap_or(rest).monic())
    };
    SingularFactors { x1_mult, x2_mult, r_mult, extra, lcm_total_degree }
}

// ---------------------------------------------------------------------------
// Exact identities for the cubic
// ---------------------------------------------------------------------------

/// Nine-line factorization: the product of `1 - w^k1 z1 - w^k2 z2` over all
/// cube-root pairs equals `(1 - z1^3 - z2^3)^3 - 27 z1^3 z2^3`.
pub fn nine_line_identity() -> bool {
    type PW = Poly<QOmega, 2>;
    let one = PW::one();
    let z1 = PW::var(0);
    let z2 = PW::var(1);
    let mut prod = one.clone();
    for k1 in 0..3 {
        for k2 in 0..3 {
            let t1 = z1.scale(&QOmega::omega_pow(k1));
            let t2 = z2.scale(&QOmega::omega_pow(k2));
            prod = prod.mul(&one.sub(&t1).sub(&t2));
        }
    }
    let c1 = one.sub(&z1.pow(3)).sub(&z2.pow(3));
    let twenty7 = QOmega::from_q(BigRational::from_integer(27.into()));
    let rhs = c1.pow(3).sub(&z1.pow(3).mul(&z2.pow(3)).scale(&twenty7));
    prod == rhs
}

/// Rational parametrization: substituting `(t^3, (1-t)^3)` into the cubic
/// gives the zero polynomial.
pub fn parametrization_identity() -> bool {
    let t = Poly1::var(0);
    let one = Poly1::one();
    let x1 = t.pow(3);
    let x2 = one.sub(&t).pow(3);
    let r = r_polynomial();
    let val = r.eval_in(&[x1, x2], |c| Poly1::constant(c.clone()));
    val.is_zero()
}

/// The contact quartic in the fiber coordinate: its discriminant equals
/// `256 x1^3 x2^3 R(x1, x2)` exactly. Also checks that the displayed
/// expansion of the quartic agrees with its defining elimination.
pub fn quartic_discriminant_identity() -> (bool, bool) {
    let x1 = Poly2::var(0);
    let x2 = Poly2::var(1);
    let one = Poly2::one();
    let c2 = |n: i64| Poly2::constant(BigRational::from_integer(n.into()));

    // q4(t1, 1 - t1): ((t1 t3 - x1 t3 - x2 t1)^2 - 4 x1 x2 t1 t3) at t3 = 1 - t1,
    // expanded as a quartic in t1 with coefficients in the parameters.
    // u = -t1^2 + (1 + x1 - x2) t1 - x1, extra = 4 x1 x2 (t1^2 - t1).
    let b = one.add(&x1).sub(&x2);
    let quartic = UPoly::new(vec![
        // constant through t1^4 of u^2 + extra
        x1.pow(2),
        b.mul(&x1).scale(&BigRational::from_integer((-2).into())).sub(&x1.mul(&x2).scale(
            &BigRational::from_integer(4.into()),
        )),
        b.mul(&b)
            .add(&x1.scale(&BigRational::from_integer(2.into())))
            .add(&x1.mul(&x2).scale(&BigRational::from_integer(4.into()))),
        b.scale(&BigRational::from_integer((-2).into())),
        Poly2::one(),
    ]);

    // The displayed expansion.
    let displayed = UPoly::new(vec![
        x1.pow(2),
        x1.mul(&x1.add(&x2).add(&one)).scale(&BigRational::from_integer((-2).into())),
        x1.pow(2)
            .add(&x2.pow(2))
            .add(&one)
            .add(&x1.mul(&x2).scale(&BigRational::from_integer(2.into())))
            .add(&x1.scale(&BigRational::from_integer(4.into())))
            .sub(&x2.scale(&BigRational::from_integer(2.into()))),
        x1.add(&c2(1)).sub(&x2).scale(&BigRational::from_integer((-2).into())),
        Poly2::one(),
    ]);
    let display_matches = quartic == displayed;

    let disc = discriminant(&quartic);
    let expect = c2(256).mul(&x1.pow(3)).mul(&x2.pow(3)).mul(&r_polynomial());
    (disc == expect, display_matches)
}

/// All three exact identities for the cubic.
pub fn verify_r_identities() -> bool {
    let (disc_ok, display_ok) = quartic_discriminant_identity();
    nine_line_identity() && parametrization_identity() && disc_ok && display_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_int};

    #[test]
    fn ore_commutation_rule() {
        // d1 x1 = x1 d1 + 1, d1 x2 = x2 d1.
        let d1 = OreOperator::d(0);
        let x1 = OreOperator::x(0);
        let x2 = OreOperator::x(1);
        let lhs = d1.mul(&x1);
        let rhs = x1.mul(&d1).add(&OreOperator::one());
        assert_eq!(lhs, rhs);
        assert_eq!(d1.mul(&x2), x2.mul(&d1));
    }

    #[test]
    fn ore_associativity_on_random_small_operators() {
        let mk = |a: i64, b: i64, m: DMon| {
            OreOperator::term(
                m,
                RatFun::new(
                    Poly2::var(0).scale(&q_int(a)).add(&Poly2::constant(q_int(b))),
                    Poly2::var(1).add(&Poly2::constant(q_int(1))),
                ),
            )
        };
        let ops = [
            mk(1, 2, DMon([1, 0])).add(&mk(3, 1, DMon([0, 1]))),
            mk(-2, 5, DMon([2, 0])).add(&OreOperator::x(0)),
            mk(4, -1, DMon([0, 2])).add(&OreOperator::theta(1)),
        ];
        for a in &ops {
            for b in &ops {
                for c in &ops {
                    let lhs = a.mul(b).mul(c);
                    let rhs = a.mul(&b.mul(c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn theta_expansion() {
        // theta^2 = x^2 d^2 + x d.
        let t1 = OreOperator::theta(0);
        let t2 = t1.mul(&t1);
        let x1sq = RatFun::from_poly(Poly2::var(0).pow(2));
        assert_eq!(t2.coeff(&DMon([2, 0])), x1sq);
        assert_eq!(t2.coeff(&DMon([1, 0])), RatFun::var(0));
    }

    #[test]
    fn system_operator_shape() {
        let p = HgParams::defaults();
        let (l1, l2) = system_operators(&p);
        assert_eq!(l1.d_degree(), Some(3));
        assert_eq!(l2.d_degree(), Some(3));
        // Leading coefficient of d1^3 in L1 is x1^3 (1 - x1).
        let c = l1.coeff(&DMon([3, 0]));
        let x1 = Poly2::var(0);
        let expect = RatFun::from_poly(x1.pow(3).sub(&x1.pow(4)));
        assert_eq!(c, expect);
        // Applying L1 to the constant picks out -x1 a1 a2 a3.
        let v = l1.apply_to_one();
        let a123 = &p.a[0] * &p.a[1] * &p.a[2];
        assert_eq!(v, RatFun::from_poly(Poly2::var(0).scale(&(-a123))));
        // L1 and L2 swap under the row swap combined with x1 <-> x2 and the
        // upper parameters are symmetric, so the pure-theta parts mirror:
        let swapped = crate::params::act_on_params(&crate::params::GroupElement::swap_rows(), &p);
        let (m1, m2) = system_operators(&swapped);
        // L1 at swapped parameters equals L2 with variables exchanged.
        let swap_vars = |op: &OreOperator| -> OreOperator {
            let mut out = OreOperator::zero();
            for (m, c) in op.iter_terms() {
                let pn = c.numerator().map_coeffs(|v| v.clone());
                let pd = c.denominator().map_coeffs(|v| v.clone());
                let sw = |pp: &Poly2| -> Poly2 {
                    let mut o = Poly2::new();
                    for (mm, cc) in pp.iter_terms() {
                        o.insert_add(crate::poly::Mon([mm.0[1], mm.0[0]]), cc.clone());
                    }
                    o
                };
                out.insert_add(DMon([m.0[1], m.0[0]]), RatFun::new(sw(&pn), sw(&pd)));
            }
            out
        };
        assert_eq!(swap_vars(&m1), l2);
        assert_eq!(swap_vars(&m2), l1);
        // Permuting the upper parameters leaves both operators unchanged.
        let g = crate::params::GroupElement::new([2, 0, 1], false, false, false);
        let pp = crate::params::act_on_params(&g, &p);
        let (k1, k2) = system_operators(&pp);
        assert_eq!(k1, l1);
        assert_eq!(k2, l2);
    }

    #[test]
    fn groebner_trivial_cases() {
        // {d1, d2}: already a basis, rank 1.
        let gens = [OreOperator::d(0), OreOperator::d(1)];
        let gb = groebner(&gens, GbLimits::default()).unwrap();
        assert_eq!(gb.len(), 2);
        let std = standard_monomials(&gb).unwrap();
        assert_eq!(std, vec![DMon([0, 0])]);
        assert_eq!(holonomic_rank(&gb).unwrap(), 1);

        // A single second-order operator in one variable embedded: d1^2 - 1
        // together with d2 (to keep the quotient finite).
        let g1 = OreOperator::term(DMon([2, 0]), RatFun::one()).sub(&OreOperator::one());
        let gens = [g1, OreOperator::d(1)];
        let gb = groebner(&gens, GbLimits::default()).unwrap();
        let std = standard_monomials(&gb).unwrap();
        assert_eq!(std, vec![DMon([0, 0]), DMon([1, 0])]);
    }

    #[test]
    fn rank_nine_with_expected_staircase() {
        let p = HgParams::defaults();
        let (l1, l2) = system_operators(&p);
        let gb = groebner(&[l1, l2], GbLimits::default()).unwrap();
        let init = initial_monomials(&gb);
        assert_eq!(
            init,
            vec![DMon([1, 2]), DMon([0, 3]), DMon([3, 1]), DMon([5, 0])],
            "unexpected initial ideal {init:?}"
        );
        let std = standard_monomials(&gb).unwrap();
        assert_eq!(
            std,
            vec![
                DMon([0, 0]),
                DMon([1, 0]),
                DMon([2, 0]),
                DMon([3, 0]),
                DMon([4, 0]),
                DMon([0, 1]),
                DMon([1, 1]),
                DMon([2, 1]),
                DMon([0, 2]),
            ]
        );
        assert_eq!(holonomic_rank(&gb).unwrap(), 9);
    }

    #[test]
    fn pfaffian_rows_and_integrability() {
        let p = HgParams::defaults();
        let (l1, l2) = system_operators(&p);
        let gb = groebner(&[l1, l2], GbLimits::default()).unwrap();
        let std = standard_monomials(&gb).unwrap();
        let pf = pfaffian(&gb, &std).unwrap();
        // Row of P1 for the basis element 1 selects d1 (still standard).
        let row = &pf.p[0][0];
        for (j, m) in std.iter().enumerate() {
            let expect = if *m == DMon([1, 0]) { RatFun::one() } else { RatFun::zero() };
            assert_eq!(row[j], expect, "entry {j}");
        }
        // The deepest reductions (of d1^5 and d1^4 d2, i.e. the rows for
        // d1^4) are the ones whose coefficients carry the cubic in their
        // denominators; the d2^3 reduction needs only coordinate factors.
        let r = r_polynomial().monic();
        let row_has_r = |row: &Vec<RatFun>| {
            row.iter().any(|e| {
                !e.is_zero() && !e.is_polynomial() && gcd2(e.denominator(), &r) == r
            })
        };
        let d14 = std.iter().position(|m| *m == DMon([4, 0])).unwrap();
        assert!(row_has_r(&pf.p[0][d14]), "cubic missing from the deep row of P1");
        assert!(row_has_r(&pf.p[1][d14]), "cubic missing from the deep row of P2");
        let d22 = std.iter().position(|m| *m == DMon([0, 2])).unwrap();
        assert!(
            pf.p[1][d22].iter().all(|e| e.is_zero() || e.is_polynomial()
                || gcd2(e.denominator(), &r).is_constant()),
            "unexpected cubic factor in the d2^2 row"
        );
        // Exact flatness.
        assert!(pf.integrability_holds());
    }

    #[test]
    fn singular_factor_report() {
        let p = HgParams::defaults();
        let (l1, l2) = system_operators(&p);
        let gb = groebner(&[l1, l2], GbLimits::default()).unwrap();
        let std = standard_monomials(&gb).unwrap();
        let pf = pfaffian(&gb, &std).unwrap();
        let sf = singular_factors(&pf);
        assert!(sf.contains_expected(), "{sf:?}");
        // Point checks on the cubic itself.
        let r = r_polynomial();
        assert!(r.eval_q(&[q(-1, 1), q(-1, 1)]).is_zero());
        assert!(r.eval_q(&[q(1, 1), q(0, 1)]).is_zero());
        assert_eq!(r.eval_q(&[q(1, 10), q(1, 20)]), q(3833, 8000));
    }

    #[test]
    fn weight_initial_form_keeps_top_degree() {
        let p = HgParams::defaults();
        let (l1, _) = system_operators(&p);
        let init = l1.weight_initial_form();
        assert_eq!(init.d_degree(), Some(3));
        assert!(init.num_terms() <= l1.num_terms());
        assert_eq!(init.coeff(&DMon([3, 0])), l1.coeff(&DMon([3, 0])));
        assert!(init.coeff(&DMon([0, 0])).is_zero());
    }

    #[test]
    fn r_identities_all_hold() {
        assert!(nine_line_identity());
        assert!(parametrization_identity());
        let (disc_ok, display_ok) = quartic_discriminant_identity();
        assert!(disc_ok, "discriminant identity failed");
        assert!(display_ok, "displayed quartic does not match its elimination");
    }

    #[test]
    fn normal_form_is_idempotent() {
        let p = HgParams::defaults();
        let (l1, l2) = system_operators(&p);
        let gb = groebner(&[l1, l2], GbLimits::default()).unwrap();
        let probe = OreOperator::term(DMon([4, 1]), RatFun::one())
            .add(&OreOperator::term(DMon([2, 2]), RatFun::var(0)));
        let nf1 = normal_form(&probe, &gb).unwrap();
        let nf2 = normal_form(&nf1, &gb).unwrap();
        assert_eq!(nf1, nf2);
        assert_ne!(nf1, probe);
    }
}
