use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use super::scalar::Scalar;

type Inner = FBig<HalfEven, 2>;

/// Binary floating point with a `BITS`-bit significand and an effectively
/// unbounded exponent. Every value of a given type carries the same
/// precision, so results never depend on which operand was created first.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct MpFloat<const BITS: usize>(Inner);

impl<const BITS: usize> MpFloat<BITS> {
    fn wrap(v: Inner) -> Self {
        MpFloat(v.with_precision(BITS).value())
    }

    fn from_ibig(v: IBig) -> Self {
        Self::wrap(Inner::from(v))
    }

    pub fn bits() -> usize {
        BITS
    }
}

fn to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

macro_rules! binop {
    ($($tr:ident $method:ident),*) => {$(
        impl<const BITS: usize> $tr for MpFloat<BITS> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                MpFloat($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a, const BITS: usize> $tr<&'a MpFloat<BITS>> for MpFloat<BITS> {
            type Output = Self;
            fn $method(self, rhs: &'a MpFloat<BITS>) -> Self {
                MpFloat($tr::$method(self.0, &rhs.0))
            }
        }
    )*};
}
binop!(Add add, Sub sub, Mul mul, Div div);

impl<const BITS: usize> Rem for MpFloat<BITS> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = MpFloat((&self.0 / &rhs.0).trunc());
        self - rhs * q
    }
}

impl<'a, const BITS: usize> Rem<&'a MpFloat<BITS>> for MpFloat<BITS> {
    type Output = Self;
    fn rem(self, rhs: &'a MpFloat<BITS>) -> Self {
        self % rhs.clone()
    }
}

impl<const BITS: usize> Neg for MpFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        MpFloat(-self.0)
    }
}

impl<const BITS: usize> Zero for MpFloat<BITS> {
    fn zero() -> Self {
        Self::wrap(Inner::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
    }
}

impl<const BITS: usize> One for MpFloat<BITS> {
    fn one() -> Self {
        Self::wrap(Inner::ONE)
    }
}

impl<const BITS: usize> Num for MpFloat<BITS> {
    type FromStrRadixErr = crate::Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(crate::Error::Parse(format!("unsupported radix {radix}")));
        }
        Ok(Self::from_rational(&super::parse_rational(s)?))
    }
}

impl<const BITS: usize> fmt::Debug for MpFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MpFloat<{}>({:e})", BITS, self.to_f64())
    }
}

impl<const BITS: usize> fmt::Display for MpFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl<const BITS: usize> Scalar for MpFloat<BITS> {
    fn from_i64(v: i64) -> Self {
        Self::from_ibig(IBig::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::from_ibig(to_ibig(v))
    }

    fn from_rational(v: &BigRational) -> Self {
        Self::from_bigint(v.numer()) / Self::from_bigint(v.denom())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn precision_bits() -> Option<u32> {
        Some(BITS as u32)
    }

    fn cache_key(&self) -> String {
        let r = self.0.repr();
        format!("{}e{}", r.significand(), r.exponent())
    }

    fn is_negative(&self) -> bool {
        self.0.partial_cmp(&Inner::ZERO) == Some(Ordering::Less)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = MpFloat<256>;

    #[test]
    fn thirds_keep_precision() {
        let third = M::one() / M::from_i64(3);
        let back = third * M::from_i64(3) - M::one();
        assert!(back.to_f64().abs() < 1e-70);
    }

    #[test]
    fn huge_exponents_do_not_overflow() {
        let mut acc = M::one();
        for i in 1..=500 {
            acc = acc * M::from_i64(i);
        }
        assert!(acc.to_f64().is_infinite());
        for i in 1..=500 {
            acc = acc / M::from_i64(i);
        }
        assert!((acc.to_f64() - 1.0).abs() < 1e-60);
    }

    #[test]
    fn rational_and_bigint_conversion() {
        let r = BigRational::new(BigInt::from(-7), BigInt::from(4));
        assert_eq!(M::from_rational(&r).to_f64(), -1.75);
        let big = BigInt::from(10).pow(40);
        assert_eq!(M::from_bigint(&big).to_f64(), 1e40);
        assert!(M::from_i64(-2).is_negative());
        assert_eq!(M::from_i64(7) % M::from_i64(3), M::one());
    }
}
