use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumRef, ToPrimitive, Zero};

/// Arithmetic backend shared by every formula in the crate.
///
/// Implemented for `f64` (fast, overflow-prone), [`BigRational`] (exact),
/// [`SignedLog<f64>`](super::SignedLog) (f64 precision with an unbounded
/// exponent) and [`MpFloat`](super::MpFloat) (fixed high precision).
pub trait Scalar:
    NumRef + Neg<Output = Self> + Clone + PartialOrd + Debug + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    fn from_rational(v: &BigRational) -> Self;

    /// Nearest `f64`; saturates to ±inf or 0 outside the f64 range.
    fn to_f64(&self) -> f64;

    /// Significand bits carried by the representation, `None` when exact.
    fn precision_bits() -> Option<u32>;

    /// Stable textual identity used to key memo tables.
    fn cache_key(&self) -> String;

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn is_exact() -> bool {
        Self::precision_bits().is_none()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn abs_val(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Integer power by repeated squaring.
    fn powu(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn from_rational(v: &BigRational) -> Self {
        rational_to_f64(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn precision_bits() -> Option<u32> {
        Some(f64::MANTISSA_DIGITS)
    }

    fn cache_key(&self) -> String {
        format!("{:016x}", self.to_bits())
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn precision_bits() -> Option<u32> {
        None
    }

    fn cache_key(&self) -> String {
        self.to_string()
    }

    fn is_negative(&self) -> bool {
        self.numer() < &BigInt::zero()
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// far outside the f64 range.
pub(crate) fn rational_to_f64(v: &BigRational) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    if let Some(x) = ToPrimitive::to_f64(v) {
        if x.is_finite() && x != 0.0 {
            return x;
        }
    }
    let num = v.numer();
    let den = v.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // Bring the quotient into [2^-64, 2^64] before dividing.
    let (scaled_num, scaled_den) = if shift > 0 {
        (num.clone(), den.clone() << (shift as usize))
    } else {
        (num.clone() << ((-shift) as usize), den.clone())
    };
    let q = ToPrimitive::to_f64(&BigRational::new(scaled_num, scaled_den)).unwrap_or(f64::NAN);
    scale_pow2(q, shift)
}

/// `x * 2^e` without intermediate overflow.
pub(crate) fn scale_pow2(x: f64, e: i64) -> f64 {
    if e > 2200 {
        return if x == 0.0 { 0.0 } else { x.signum() * f64::INFINITY };
    }
    if e < -2200 {
        return 0.0 * x.signum();
    }
    let half = (e / 2) as i32;
    let rest = (e - half as i64) as i32;
    x * 2f64.powi(half) * 2f64.powi(rest)
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn rational_conversion_handles_huge_parts() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * BigInt::from(3), big);
        assert_eq!(rational_to_f64(&r), 3.0);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(2).pow(1100));
        assert_eq!(rational_to_f64(&tiny), 0.0);
        let r = BigRational::new(BigInt::from(2).pow(1000), BigInt::from(2).pow(990));
        assert_eq!(rational_to_f64(&r), 1024.0);
    }

    #[test]
    fn powu_matches_repeated_product() {
        let x = BigRational::new(BigInt::from(3), BigInt::from(7));
        let mut acc = BigRational::one();
        for e in 0..10 {
            assert_eq!(x.powu(e), acc);
            acc *= &x;
        }
        assert_eq!(1.5f64.powu(3), 3.375);
    }
}
