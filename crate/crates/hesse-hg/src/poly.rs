//! Exact polynomial arithmetic over generic coefficient rings.
//!
//! Multivariate polynomials are sparse maps from exponent vectors to
//! coefficients, canonically ordered by graded lexicographic order. The
//! engine is generic over the coefficient ring so the same code serves
//! rationals, the rationals with a primitive cube root of unity adjoined,
//! and polynomial rings themselves (for fraction-free determinants).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Debug};

/// Commutative ring operations by reference.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Rings with exact division of multiples (integral domains in practice).
pub trait ExactDiv: Ring {
    /// `self / other` when `other` divides `self` exactly.
    fn exact_div(&self, other: &Self) -> Option<Self>;
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactDiv for BigRational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals with a primitive cube root of unity adjoined
// ---------------------------------------------------------------------------

/// Elements `a + b w` with `w^2 + w + 1 = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QOmega {
    pub re: BigRational,
    pub om: BigRational,
}

impl QOmega {
    pub fn new(re: BigRational, om: BigRational) -> Self {
        QOmega { re, om }
    }
    pub fn from_q(re: BigRational) -> Self {
        QOmega { re, om: Zero::zero() }
    }
    pub fn omega() -> Self {
        QOmega { re: Zero::zero(), om: One::one() }
    }
    /// `w^k` for k mod 3.
    pub fn omega_pow(k: usize) -> Self {
        match k % 3 {
            0 => Ring::one(),
            1 => Self::omega(),
            // w^2 = -1 - w
            _ => QOmega::new(-num_traits::one::<BigRational>(), -num_traits::one::<BigRational>()),
        }
    }
    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.om)
    }
}

impl Ring for QOmega {
    fn zero() -> Self {
        QOmega::new(Zero::zero(), Zero::zero())
    }
    fn one() -> Self {
        QOmega::new(One::one(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.om)
    }
    fn add(&self, other: &Self) -> Self {
        QOmega::new(&self.re + &other.re, &self.om + &other.om)
    }
    fn sub(&self, other: &Self) -> Self {
        QOmega::new(&self.re - &other.re, &self.om - &other.om)
    }
    fn mul(&self, other: &Self) -> Self {
        // (a + b w)(c + d w) = ac - bd + (ad + bc - bd) w
        let bd = &self.om * &other.om;
        QOmega::new(
            &self.re * &other.re - &bd,
            &self.re * &other.om + &self.om * &other.re - &bd,
        )
    }
    fn neg(&self) -> Self {
        QOmega::new(-&self.re, -&self.om)
    }
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Exponent vector with graded lexicographic order (total degree first,
/// then the exponent of the first variable, and so on).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mon<const N: usize>(pub [u16; N]);

impl<const N: usize> Mon<N> {
    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
    pub fn mul(&self, other: &Self) -> Self {
        let mut e = [0u16; N];
        for i in 0..N {
            e[i] = self.0[i] + other.0[i];
        }
        Mon(e)
    }
    pub fn divides(&self, other: &Self) -> bool {
        (0..N).all(|i| self.0[i] <= other.0[i])
    }
    pub fn div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let mut e = [0u16; N];
        for i in 0..N {
            e[i] = self.0[i] - other.0[i];
        }
        Some(Mon(e))
    }
}

impl<const N: usize> Ord for Mon<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg()
            .cmp(&other.deg())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<const N: usize> PartialOrd for Mon<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---------------------------------------------------------------------------
// Multivariate polynomials
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial in `N` variables over `R`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<R: Ring, const N: usize> {
    terms: BTreeMap<Mon<N>, R>,
}

pub type Poly1 = Poly<BigRational, 1>;
pub type Poly2 = Poly<BigRational, 2>;

impl<R: Ring, const N: usize> Poly<R, N> {
    pub fn new() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: R) -> Self {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.terms.insert(Mon([0u16; N]), c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        assert!(i < N);
        let mut e = [0u16; N];
        e[i] = 1;
        Poly::term(Mon(e), R::one())
    }

    pub fn term(m: Mon<N>, c: R) -> Self {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.deg() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Mon<N>, &R)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lex order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Mon<N>, &R)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Mon<N>) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg()).max()
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Mon<N>, &R)> {
        self.terms.iter().next_back()
    }

    pub fn insert_add(&mut self, m: Mon<N>, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S, N> {
        let mut out = Poly::new();
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(*m, v);
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Poly::new();
        }
        let mut out = Poly::new();
        for (m, v) in &self.terms {
            let t = v.mul(c);
            if !t.is_zero() {
                out.terms.insert(*m, t);
            }
        }
        out
    }

    pub fn mul_mon(&self, m: &Mon<N>) -> Self {
        let mut out = Poly::new();
        for (k, v) in &self.terms {
            out.terms.insert(k.mul(m), v.clone());
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::constant(R::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `i`. The coefficient
    /// ring only needs repeated addition, so this stays `Ring`-generic.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut k = m.0;
            k[i] -= 1;
            out.insert_add(Mon(k), mul_usize(c, e as usize));
        }
        out
    }

    /// Evaluate with all variables substituted by elements of a ring `S`.
    pub fn eval_in<S: Ring>(&self, pts: &[S; N], embed: impl Fn(&R) -> S) -> S {
        // Power tables per variable.
        let mut pows: Vec<Vec<S>> = Vec::with_capacity(N);
        for (i, pt) in pts.iter().enumerate() {
            let maxe = self.degree_in(i) as usize;
            let mut v = Vec::with_capacity(maxe + 1);
            v.push(S::one());
            for k in 1..=maxe {
                let prev = v[k - 1].clone();
                v.push(prev.mul(pt));
            }
            pows.push(v);
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for i in 0..N {
                t = t.mul(&pows[i][m.0[i] as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }
}

fn mul_usize<R: Ring>(c: &R, mut n: usize) -> R {
    let mut acc = R::zero();
    let mut add = c.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.add(&add);
        }
        n >>= 1;
        if n > 0 {
            add = add.add(&add);
        }
    }
    acc
}

impl<R: Ring, const N: usize> Default for Poly<R, N> {
    fn default() -> Self {
        Poly::new()
    }
}

impl<R: Ring, const N: usize> Ring for Poly<R, N> {
    fn zero() -> Self {
        Poly::new()
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.neg());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }
}

impl<R: Ring + ExactDiv, const N: usize> ExactDiv for Poly<R, N> {
    /// Multivariate exact division: succeeds iff `other` divides `self`.
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (lm, lc) = other.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::new();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            let qm = m.div(lm)?;
            let qc = c.exact_div(lc)?;
            let t = Poly::term(qm, qc);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

impl<const N: usize> Poly<BigRational, N> {
    pub fn eval_q(&self, pts: &[BigRational; N]) -> BigRational {
        self.eval_in(pts, |c| c.clone())
    }

    pub fn eval_c64(&self, pts: &[num_complex::Complex64; N]) -> num_complex::Complex64 {
        use crate::scalar::q_to_f64;
        let mut pows: Vec<Vec<num_complex::Complex64>> = Vec::with_capacity(N);
        for (i, pt) in pts.iter().enumerate() {
            let maxe = self.degree_in(i) as usize;
            let mut v = Vec::with_capacity(maxe + 1);
            v.push(num_complex::Complex64::new(1.0, 0.0));
            for k in 1..=maxe {
                let prev = v[k - 1];
                v.push(prev * pt);
            }
            pows.push(v);
        }
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = num_complex::Complex64::new(q_to_f64(c), 0.0);
            for i in 0..N {
                t *= pows[i][m.0[i] as usize];
            }
            acc += t;
        }
        acc
    }

    /// Clear denominators and integer content; returns the primitive scaled
    /// polynomial `p` and the rational `s` with `self = s * p`.
    pub fn primitive_part(&self) -> (Poly<BigRational, N>, BigRational) {
        if self.is_zero() {
            return (Poly::new(), One::one());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let int_c = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&int_c);
        }
        if num_gcd.is_zero() {
            num_gcd = BigInt::one();
        }
        // Fix the sign so the graded-lex leading coefficient is positive.
        if self.leading().unwrap().1.is_negative() {
            num_gcd = -num_gcd;
        }
        let s = BigRational::new(num_gcd.clone(), den_lcm.clone());
        let inv = BigRational::new(den_lcm, num_gcd);
        (self.scale(&inv), s)
    }

    /// Make the graded-lex leading coefficient 1.
    pub fn monic(&self) -> Poly<BigRational, N> {
        match self.leading() {
            None => Poly::new(),
            Some((_, lc)) => {
                let inv = num_traits::one::<BigRational>() / lc.clone();
                self.scale(&inv)
            }
        }
    }
}

impl<R: Ring, const N: usize> Debug for Poly<R, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}", c)?;
            for i in 0..N {
                if m.0[i] > 0 {
                    write!(f, "*x{}^{}", i + 1, m.0[i])?;
                }
            }
        }
        Ok(())
    }
}

/// Pretty form for rational-coefficient polynomials (x1, x2, ... naming).
pub fn poly_to_string<const N: usize>(p: &Poly<BigRational, N>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms_desc().enumerate() {
        let neg = c.is_negative();
        let mag = if neg { -c } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if !mag.is_one() || m.deg() == 0 {
            factors.push(crate::params::rational_to_string(&mag));
        }
        for i in 0..N {
            match m.0[i] {
                0 => {}
                1 => factors.push(format!("x{}", i + 1)),
                e => factors.push(format!("x{}^{}", i + 1, e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials (helpers for gcd / resultants)
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over `R`, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly<R: Ring> {
    pub c: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    pub fn new(mut c: Vec<R>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }
    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }
    pub fn lc(&self) -> Option<&R> {
        self.c.last()
    }
    pub fn scale(&self, s: &R) -> Self {
        UPoly::new(self.c.iter().map(|x| x.mul(s)).collect())
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(R::zero);
            let b = o.c.get(i).cloned().unwrap_or_else(R::zero);
            out.push(a.add(&b));
        }
        UPoly::new(out)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&R::one().neg()))
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![R::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out)
    }
    pub fn shift_mul(&self, k: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![R::zero(); k];
        out.extend(self.c.iter().cloned());
        UPoly::new(out)
    }

    /// Pseudo-remainder: the remainder in
    /// `lc(d)^(deg n - deg d + 1) * n = q d + r`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc_d = d.lc().unwrap().clone();
        let mut r = self.clone();
        if r.degree().map_or(true, |dn| dn < dd) {
            return r;
        }
        let steps = r.degree().unwrap() - dd + 1;
        let mut done = 0;
        while let Some(dn) = r.degree() {
            if dn < dd {
                break;
            }
            let lr = r.lc().unwrap().clone();
            r = r.scale(&lc_d).sub(&d.scale(&lr).shift_mul(dn - dd));
            done += 1;
        }
        for _ in done..steps {
            r = r.scale(&lc_d);
        }
        r
    }
}

/// Univariate gcd over the rationals (monic result), computed through the
/// primitive pseudo-remainder sequence over the integers to keep
/// coefficient growth polynomial.
pub fn upoly_gcd_q(a: &UPoly<BigRational>, b: &UPoly<BigRational>) -> UPoly<BigRational> {
    if a.is_zero() || b.is_zero() {
        let f = if a.is_zero() { b.clone() } else { a.clone() };
        return match f.lc() {
            None => f,
            Some(lc) => {
                let inv = num_traits::one::<BigRational>() / lc.clone();
                f.scale(&inv)
            }
        };
    }
    let to_int_primitive = |p: &UPoly<BigRational>| -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &p.c {
            den = den.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = p.c.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut g = BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        if !g.is_zero() && g != BigInt::one() {
            for c in &mut v {
                *c /= &g;
            }
        }
        v
    };
    let strip = |v: &mut Vec<BigInt>| {
        while v.last().map_or(false, |x| x.is_zero()) {
            v.pop();
        }
        let mut g = BigInt::zero();
        for c in v.iter() {
            g = g.gcd(c);
        }
        if !g.is_zero() && g != BigInt::one() {
            for c in v.iter_mut() {
                *c /= &g;
            }
        }
    };
    let mut f = to_int_primitive(a);
    let mut g = to_int_primitive(b);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        // Integer pseudo-remainder of f by g: each step cancels the top
        // term exactly, so the degree strictly decreases.
        let dg = g.len() - 1;
        let lc_g = g.last().unwrap().clone();
        let mut r = f.clone();
        while r.len() > dg {
            let dr = r.len() - 1;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lc_g;
            }
            for (i, gc) in g.iter().enumerate() {
                r[dr - dg + i] -= &lr * gc;
            }
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
        }
        strip(&mut r);
        f = g;
        g = r;
    }
    let lead = f.last().cloned().unwrap_or_else(BigInt::one);
    UPoly::new(
        f.into_iter()
            .map(|c| BigRational::new(c, lead.clone()))
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Bivariate gcd over Q via primitive pseudo-remainder sequences
// ---------------------------------------------------------------------------

/// View a bivariate polynomial as univariate in `x2` with coefficients in
/// `Q[x1]`.
fn to_nested(p: &Poly2) -> UPoly<Poly1> {
    let d2 = p.degree_in(1) as usize;
    let mut coeffs: Vec<Poly1> = vec![Poly::new(); d2 + 1];
    for (m, c) in p.iter_terms() {
        coeffs[m.0[1] as usize].insert_add(Mon([m.0[0]]), c.clone());
    }
    UPoly::new(coeffs)
}

fn from_nested(u: &UPoly<Poly1>) -> Poly2 {
    let mut out = Poly2::new();
    for (e2, c) in u.c.iter().enumerate() {
        for (m, v) in c.iter_terms() {
            out.insert_add(Mon([m.0[0], e2 as u16]), v.clone());
        }
    }
    out
}

impl Poly1 {
    fn to_upoly(&self) -> UPoly<BigRational> {
        UPoly::new((0..=self.degree_in(0)).map(|e| self.coeff(&Mon([e]))).collect())
    }
    fn from_upoly(u: &UPoly<BigRational>) -> Self {
        let mut out = Poly::new();
        for (e, c) in u.c.iter().enumerate() {
            out.insert_add(Mon([e as u16]), c.clone());
        }
        out
    }
    /// Embed `Q[x1]` into `Q[x1,x2]`.
    pub fn embed2(&self) -> Poly2 {
        let mut out = Poly2::new();
        for (m, c) in self.iter_terms() {
            out.insert_add(Mon([m.0[0], 0]), c.clone());
        }
        out
    }
}

fn content_x1(u: &UPoly<Poly1>) -> Poly1 {
    let mut g = UPoly::<BigRational>::zero();
    for c in &u.c {
        g = upoly_gcd_q(&g, &c.to_upoly());
        if g.degree() == Some(0) {
            break;
        }
    }
    Poly1::from_upoly(&g)
}

fn divide_content(u: &UPoly<Poly1>, cont: &Poly1) -> UPoly<Poly1> {
    if cont.is_constant() && cont.coeff(&Mon([0])).is_one() {
        return u.clone();
    }
    UPoly::new(
        u.c.iter()
            .map(|c| c.exact_div(cont).expect("content divides"))
            .collect(),
    )
}

fn make_primitive(u: &UPoly<Poly1>) -> UPoly<Poly1> {
    if u.is_zero() {
        return u.clone();
    }
    let c = content_x1(u);
    divide_content(u, &c)
}

fn primitive_prs(mut f: UPoly<Poly1>, mut g: UPoly<Poly1>) -> UPoly<Poly1> {
    if f.degree() < g.degree() {
        std::mem::swap(&mut f, &mut g);
    }
    f = make_primitive(&f);
    g = make_primitive(&g);
    while !g.is_zero() {
        let r = f.pseudo_rem(&g);
        f = g;
        g = make_primitive(&r);
    }
    f
}

/// Gcd of bivariate rational-coefficient polynomials, normalized so the
/// graded-lex leading coefficient is 1.
pub fn gcd2(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::constant(num_traits::one::<BigRational>());
    }
    let fa = to_nested(a);
    let fb = to_nested(b);
    let ca = content_x1(&fa);
    let cb = content_x1(&fb);
    let cont = upoly_gcd_q(&ca.to_upoly(), &cb.to_upoly());
    let pa = divide_content(&fa, &ca);
    let pb = divide_content(&fb, &cb);
    let g = primitive_prs(pa, pb);
    let out = from_nested(&g).mul(&Poly1::from_upoly(&cont).embed2());
    out.monic()
}

/// Least common multiple (monic).
pub fn lcm2(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() || b.is_zero() {
        return Poly::new();
    }
    let g = gcd2(a, b);
    a.mul(b).exact_div(&g).expect("gcd divides product").monic()
}

// ---------------------------------------------------------------------------
// Determinants and resultants
// ---------------------------------------------------------------------------

/// Fraction-free Bareiss determinant over an exact-division ring.
pub fn det_bareiss<R: ExactDiv>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

/// Resultant of two univariate polynomials over `R` via the Sylvester
/// determinant.
pub fn resultant<R: ExactDiv>(f: &UPoly<R>, g: &UPoly<R>) -> R {
    let (df, dg) = match (f.degree(), g.degree()) {
        (Some(df), Some(dg)) => (df, dg),
        _ => return R::zero(),
    };
    let n = df + dg;
    if n == 0 {
        return R::one();
    }
    let mut m = vec![vec![R::zero(); n]; n];
    for row in 0..dg {
        for (i, c) in f.c.iter().enumerate() {
            m[row][row + df - i] = c.clone();
        }
    }
    for row in 0..df {
        for (i, c) in g.c.iter().enumerate() {
            m[dg + row][row + dg - i] = c.clone();
        }
    }
    det_bareiss(m)
}

/// Discriminant of a univariate polynomial with respect to its variable:
/// `(-1)^(d(d-1)/2) res(f, f') / lc(f)`.
pub fn discriminant<R: ExactDiv>(f: &UPoly<R>) -> R {
    let d = f.degree().expect("discriminant of zero polynomial");
    let fp = UPoly::new(
        f.c.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| mul_usize(c, i))
            .collect(),
    );
    let r = resultant(f, &fp);
    let r = r.exact_div(f.lc().unwrap()).expect("lc divides resultant");
    if (d * (d - 1) / 2) % 2 == 1 {
        r.neg()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_int};

    fn x() -> Poly2 {
        Poly::var(0)
    }
    fn y() -> Poly2 {
        Poly::var(1)
    }
    fn c2(n: i64) -> Poly2 {
        Poly::constant(q_int(n))
    }

    #[test]
    fn mul_and_pow() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let s = x().add(&y()).pow(2);
        assert_eq!(s.coeff(&Mon([2, 0])), q_int(1));
        assert_eq!(s.coeff(&Mon([1, 1])), q_int(2));
        assert_eq!(s.coeff(&Mon([0, 2])), q_int(1));
        assert_eq!(s.num_terms(), 3);
    }

    #[test]
    fn exact_division() {
        let f = x().add(&y()).pow(3).mul(&x().sub(&c2(1)).pow(2));
        let g = x().add(&y()).pow(2).mul(&x().sub(&c2(1)));
        let q = f.exact_div(&g).unwrap();
        assert_eq!(q, x().add(&y()).mul(&x().sub(&c2(1))));
        assert!(f.exact_div(&y().sub(&c2(3))).is_none());
    }

    #[test]
    fn bivariate_gcd_and_lcm() {
        let p = x().add(&y());
        let q1 = x().sub(&y().pow(2)).mul(&p.pow(2));
        let q2 = x().mul(&y()).add(&c2(1)).mul(&p);
        let g = gcd2(&q1, &q2);
        assert_eq!(g, p.monic());
        let g = gcd2(&x(), &y());
        assert!(g.is_constant());
        let l = lcm2(&x().mul(&p), &y().mul(&p));
        assert_eq!(l, x().mul(&y()).mul(&p));
    }

    #[test]
    fn derivative_and_eval() {
        let f = x().pow(3).mul(&y()).add(&y().pow(2));
        let fx = f.derivative(0);
        assert_eq!(fx, x().pow(2).mul(&y()).scale(&q_int(3)));
        let v = f.eval_q(&[q(1, 2), q(2, 1)]);
        assert_eq!(v, q(1, 4) + q_int(4));
    }

    #[test]
    fn resultant_discriminant_small_cases() {
        // disc(x^2 + 3x + 1) = 9 - 4 = 5
        let f = UPoly::new(vec![q_int(1), q_int(3), q_int(1)]);
        assert_eq!(discriminant(&f), q_int(5));
        // res(x-2, x-5) over the Sylvester convention
        let a = UPoly::new(vec![q_int(-2), q_int(1)]);
        let b = UPoly::new(vec![q_int(-5), q_int(1)]);
        assert_eq!(resultant(&a, &b), q_int(-3));
        // disc of (x-1)(x-2)(x-3) = product of squared differences = 4
        let f = UPoly::new(vec![q_int(-6), q_int(11), q_int(-6), q_int(1)]);
        assert_eq!(discriminant(&f), q_int(4));
    }

    #[test]
    fn omega_ring() {
        let w = QOmega::omega();
        let w2 = w.mul(&w);
        let w3 = w2.mul(&w);
        assert_eq!(w3, Ring::one());
        assert_eq!(w2, QOmega::omega_pow(2));
        let s = w.add(&w2).add(&QOmega::one());
        assert!(s.is_zero());
    }

    #[test]
    fn primitive_part_and_monic() {
        let f = x().scale(&q(6, 35)).add(&y().scale(&q(4, 15)));
        let (p, s) = f.primitive_part();
        assert_eq!(p.scale(&s), f);
        let coeffs: Vec<_> = p.iter_terms().map(|(_, c)| c.clone()).collect();
        assert!(coeffs.iter().all(|c| c.is_integer()));
    }

    #[test]
    fn bareiss_matches_hand_expansion() {
        let m = vec![
            vec![c2(2), c2(1), c2(0)],
            vec![c2(1), x(), y()],
            vec![c2(0), y(), x().mul(&y())],
        ];
        let det = det_bareiss(m);
        // 2*(x*xy - y^2) - 1*(xy - 0)
        let expect = x()
            .pow(2)
            .mul(&y())
            .scale(&q_int(2))
            .sub(&y().pow(2).scale(&q_int(2)))
            .sub(&x().mul(&y()));
        assert_eq!(det, expect);
    }
}
