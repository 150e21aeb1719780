//! Scalar abstraction for the series kernels.
//!
//! The summation code is written once over [`HgScalar`] and instantiated at
//! `Complex<f64>` / `Complex<f32>` for numerics and at [`BigRational`] for
//! exact evaluation at rational points (parameters are always exact
//! rationals, so every partial sum of the series at a rational point is a
//! rational number).

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field-like scalar the hypergeometric kernels are generic over.
pub trait HgScalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embed an exact rational.
    fn from_q(q: &BigRational) -> Self;

    /// Modulus as `f64`, used only for tail estimates and stop criteria.
    fn abs_f64(&self) -> f64;
}

impl HgScalar for Complex<f64> {
    fn from_q(q: &BigRational) -> Self {
        Complex::new(q_to_f64(q), 0.0)
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

impl HgScalar for Complex<f32> {
    fn from_q(q: &BigRational) -> Self {
        Complex::new(q_to_f64(q) as f32, 0.0)
    }
    fn abs_f64(&self) -> f64 {
        self.norm() as f64
    }
}

impl HgScalar for BigRational {
    fn from_q(q: &BigRational) -> Self {
        q.clone()
    }
    fn abs_f64(&self) -> f64 {
        q_to_f64(self).abs()
    }
}

/// Rational-to-double conversion that survives numerators/denominators far
/// beyond the `f64` exponent range: both components are shifted down by a
/// common power of two until they fit.
pub fn q_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as u64;
    let n2: BigInt = q.numer() >> shift;
    let d2: BigInt = q.denom() >> shift;
    match (n2.to_f64(), d2.to_f64()) {
        (Some(n), Some(d)) if d != 0.0 => n / d,
        _ => {
            // Exponent gap beyond the representable range.
            if nb > db {
                if q.numer().sign() == num_bigint::Sign::Minus {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                0.0
            }
        }
    }
}

/// Shorthand constructors used across the crate.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_to_f64_handles_huge_components() {
        let big = BigInt::from(10u8).pow(400);
        let r = BigRational::new(big.clone() * 3, big);
        assert_eq!(q_to_f64(&r), 3.0);
    }

    #[test]
    fn from_q_roundtrip() {
        let half = q(1, 2);
        assert_eq!(Complex::<f64>::from_q(&half), Complex::new(0.5, 0.0));
        assert_eq!(BigRational::from_q(&half), half);
    }
}
