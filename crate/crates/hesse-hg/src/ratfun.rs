//! Rational functions in two variables with exact rational coefficients.
//!
//! Values are kept gcd-reduced with the denominator's graded-lex leading
//! coefficient normalized to 1, which makes the representation canonical.

use crate::poly::{gcd2, ExactDiv, Poly, Poly2, Ring};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly2,
    den: Poly2,
}

impl RatFun {
    /// Build `num/den`, reducing to canonical form. Panics on zero denominator.
    pub fn new(num: Poly2, den: Poly2) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFun { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn from_q(c: BigRational) -> Self {
        RatFun { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::new(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn var(i: usize) -> Self {
        RatFun::from_poly(Poly::var(i))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = gcd2(&self.num, &self.den);
        if !(g.is_constant()) {
            self.num = self.num.exact_div(&g).expect("gcd divides numerator");
            self.den = self.den.exact_div(&g).expect("gcd divides denominator");
        }
        // Normalize: denominator leading coefficient 1 under graded lex.
        let lc = self.den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = num_traits::one::<BigRational>() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        // Use the gcd of denominators to keep intermediates small.
        let g = gcd2(&self.den, &o.den);
        let (da, db) = if g.is_constant() {
            (self.den.clone(), o.den.clone())
        } else {
            (
                self.den.exact_div(&g).unwrap(),
                o.den.exact_div(&g).unwrap(),
            )
        };
        let num = self.num.mul(&db).add(&o.num.mul(&da));
        let den = self.den.mul(&db);
        RatFun::new(num, den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        // Cross-reduce before multiplying.
        let g1 = gcd2(&self.num, &o.den);
        let g2 = gcd2(&o.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        RatFun::new(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational function");
        self.mul(&RatFun { num: o.den.clone(), den: o.num.clone() })
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if num_traits::Zero::is_zero(c) {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Partial derivative by the quotient rule.
    pub fn derivative(&self, i: usize) -> Self {
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return RatFun::new(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatFun::new(num, self.den.mul(&self.den))
    }

    pub fn eval_q(&self, pt: &[BigRational; 2]) -> Option<BigRational> {
        let d = self.den.eval_q(pt);
        if num_traits::Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval_q(pt) / d)
        }
    }

    pub fn eval_c64(&self, pt: &[Complex64; 2]) -> Complex64 {
        self.num.eval_c64(pt) / self.den.eval_c64(pt)
    }
}

impl std::fmt::Debug for RatFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", crate::poly::poly_to_string(&self.num))
        } else {
            write!(
                f,
                "({})/({})",
                crate::poly::poly_to_string(&self.num),
                crate::poly::poly_to_string(&self.den)
            )
        }
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

    #[test]
    fn reduction_is_canonical() {
        // (x^2 - y^2) / (2x + 2y) reduces to (x - y)/2 with monic denominator.
        let f = RatFun::new(
            x().pow(2).sub(&y().pow(2)),
            x().add(&y()).scale(&q_int(2)),
        );
        assert_eq!(f.denominator(), &Poly::constant(q_int(1)));
        assert_eq!(f.numerator(), &x().sub(&y()).scale(&q(1, 2)));
    }

    #[test]
    fn field_laws_on_samples() {
        let f = RatFun::new(x(), y().add(&Poly::constant(q_int(1))));
        let g = RatFun::new(y(), x().sub(&y()));
        let h = RatFun::new(x().mul(&y()), x().add(&y()));
        let lhs = f.add(&g).mul(&h);
        let rhs = f.mul(&h).add(&g.mul(&h));
        assert_eq!(lhs, rhs);
        let q1 = f.div(&g).mul(&g);
        assert_eq!(q1, f);
        assert_eq!(f.sub(&f), RatFun::zero());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dx1 (x/y) = 1/y ; d/dx2 (x/y) = -x/y^2
        let f = RatFun::new(x(), y());
        assert_eq!(f.derivative(0), RatFun::new(Poly::one(), y()));
        assert_eq!(f.derivative(1), RatFun::new(x().neg(), y().pow(2)));
    }

    #[test]
    fn eval_matches_components() {
        let f = RatFun::new(x().add(&y()), x().sub(&y()));
        let v = f.eval_q(&[q(3, 1), q(1, 1)]).unwrap();
        assert_eq!(v, q_int(2));
        assert!(RatFun::new(Poly::one(), x()).eval_q(&[q_int(0), q_int(1)]).is_none());
        let c = f.eval_c64(&[Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((c - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }
}
