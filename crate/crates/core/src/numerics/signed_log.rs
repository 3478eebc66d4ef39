use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, Num, One, ToPrimitive, Zero};

use super::scalar::Scalar;

/// Signed real number stored as a sign and a log-magnitude.
///
/// The magnitude is kept as `mant * 2^exp` with `mant` in `[1, 2)` and an
/// unbounded integer exponent, so `log2|x| = exp + log2(mant)` carries its
/// integer part exactly. Products never overflow and the fractional part
/// keeps the full significand precision of `F`.
#[derive(Clone, Copy)]
pub struct SignedLog<F> {
    sign: i8,
    exp: i64,
    mant: F,
}

fn pow2<F: Float>(k: i64) -> F {
    debug_assert!(k.abs() <= 1000);
    F::from(2.0).unwrap().powi(k as i32)
}

impl<F: Float> SignedLog<F> {
    pub fn zero_value() -> Self {
        SignedLog {
            sign: 0,
            exp: 0,
            mant: F::zero(),
        }
    }

    /// Builds `sign * mant * 2^exp` for any finite positive `mant`.
    fn normalized(sign: i8, mant: F, exp: i64) -> Self {
        if sign == 0 || mant.is_zero() {
            return Self::zero_value();
        }
        assert!(
            mant.is_finite() && mant > F::zero(),
            "signed-log magnitude must be finite"
        );
        let (bits, e, _) = mant.integer_decode();
        if bits == 0 {
            return Self::zero_value();
        }
        let top = 63 - bits.leading_zeros() as i64;
        let m = F::from(bits).unwrap() * pow2::<F>(-top);
        SignedLog {
            sign,
            exp: exp + e as i64 + top,
            mant: m,
        }
    }

    pub fn from_real(x: F) -> Self {
        if x.is_zero() {
            return Self::zero_value();
        }
        let sign = if x < F::zero() { -1 } else { 1 };
        Self::normalized(sign, x.abs(), 0)
    }

    /// Builds a value from its sign and natural-log magnitude.
    pub fn from_logmag(sign: i8, logmag: F) -> Self {
        if sign == 0 || logmag == F::neg_infinity() {
            return Self::zero_value();
        }
        let ln2 = F::from(std::f64::consts::LN_2).unwrap();
        let k = (logmag / ln2).floor();
        let frac = logmag - k * ln2;
        Self::normalized(sign.signum(), frac.exp(), k.to_i64().unwrap())
    }

    pub fn to_real(&self) -> F {
        if self.sign == 0 {
            return F::zero();
        }
        let s = if self.sign < 0 { -F::one() } else { F::one() };
        let e = self.exp;
        if e > 2200 {
            return s * F::infinity();
        }
        if e < -2200 {
            return s * F::zero();
        }
        let half = e / 2;
        s * self.mant * pow2::<F>(half) * pow2::<F>(e - half)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of `|x|`; `-inf` for zero.
    pub fn logmag(&self) -> F {
        if self.sign == 0 {
            return F::neg_infinity();
        }
        let ln2 = F::from(std::f64::consts::LN_2).unwrap();
        self.mant.ln() + F::from(self.exp).unwrap() * ln2
    }

    /// Base-2 log of `|x|`; `-inf` for zero.
    pub fn log2_abs(&self) -> F {
        if self.sign == 0 {
            return F::neg_infinity();
        }
        self.mant.log2() + F::from(self.exp).unwrap()
    }

    pub fn is_zero_value(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(&self) -> Self {
        let mut out = *self;
        if out.sign < 0 {
            out.sign = 1;
        }
        out
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exp
                .cmp(&other.exp)
                .then(self.mant.partial_cmp(&other.mant).unwrap_or(Ordering::Equal)),
        }
    }

    /// Exponent of the leading bit, used as the pivot when summing.
    pub(crate) fn exponent(&self) -> i64 {
        self.exp
    }

    pub(crate) fn mantissa(&self) -> F {
        self.mant
    }

    pub(crate) fn from_scaled(sign: i8, mant: F, exp: i64) -> Self {
        Self::normalized(sign, mant, exp)
    }

    fn trunc(&self) -> Self {
        if self.sign == 0 || self.exp >= 63 {
            return *self;
        }
        if self.exp < 0 {
            return Self::zero_value();
        }
        let v = (self.mant * pow2::<F>(self.exp)).trunc();
        Self::normalized(self.sign, v, 0)
    }
}

impl<F: Float> PartialEq for SignedLog<F> {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign
            && (self.sign == 0 || (self.exp == other.exp && self.mant == other.mant))
    }
}

impl<F: Float> PartialOrd for SignedLog<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let by_sign = self.sign.cmp(&other.sign);
        if by_sign != Ordering::Equal {
            return Some(by_sign);
        }
        let mag = self.cmp_magnitude(other);
        Some(if self.sign < 0 { mag.reverse() } else { mag })
    }
}

impl<F: Float> Neg for SignedLog<F> {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.sign = -self.sign;
        self
    }
}

impl<F: Float> Add for SignedLog<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.cmp_magnitude(&rhs) == Ordering::Less {
            (rhs, self)
        } else {
            (self, rhs)
        };
        let gap = big.exp - small.exp;
        if gap > 120 {
            return big;
        }
        let scaled = small.mant * pow2::<F>(-gap);
        if big.sign == small.sign {
            Self::normalized(big.sign, big.mant + scaled, big.exp)
        } else {
            let diff = big.mant - scaled;
            if diff.is_zero() {
                Self::zero_value()
            } else {
                Self::normalized(big.sign, diff, big.exp)
            }
        }
    }
}

impl<F: Float> Sub for SignedLog<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Float> Mul for SignedLog<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            return Self::zero_value();
        }
        Self::normalized(sign, self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl<F: Float> Div for SignedLog<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "signed-log division by zero");
        let sign = self.sign * rhs.sign;
        if sign == 0 {
            return Self::zero_value();
        }
        Self::normalized(sign, self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl<F: Float> Rem for SignedLog<F> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = (self / rhs).trunc();
        self - rhs * q
    }
}

macro_rules! forward_ref_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl<'a, F: Float> $tr<&'a SignedLog<F>> for SignedLog<F> {
            type Output = SignedLog<F>;
            fn $method(self, rhs: &'a SignedLog<F>) -> SignedLog<F> {
                $tr::$method(self, *rhs)
            }
        }
    )*};
}
forward_ref_ops!(Add add, Sub sub, Mul mul, Div div, Rem rem);

impl<F: Float> Zero for SignedLog<F> {
    fn zero() -> Self {
        Self::zero_value()
    }
    fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

impl<F: Float> One for SignedLog<F> {
    fn one() -> Self {
        SignedLog {
            sign: 1,
            exp: 0,
            mant: F::one(),
        }
    }
}

impl<F: Float> Num for SignedLog<F> {
    type FromStrRadixErr = F::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        F::from_str_radix(s, radix).map(Self::from_real)
    }
}

impl<F: Float + fmt::Display> fmt::Debug for SignedLog<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(
                f,
                "{}{}*2^{}",
                if s < 0 { "-" } else { "" },
                self.mant,
                self.exp
            ),
        }
    }
}

impl<F: Float + fmt::Display> fmt::Display for SignedLog<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_real();
        if r.is_finite() && (r != F::zero() || self.sign == 0) {
            write!(f, "{}", r)
        } else {
            write!(f, "{:?}", self)
        }
    }
}

fn bigint_to_log(v: &BigInt) -> SignedLog<f64> {
    let sign = match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => return SignedLog::zero_value(),
        Sign::Plus => 1,
    };
    let mag = v.magnitude();
    let bits = mag.bits();
    if bits <= 63 {
        let m = mag.to_u64().unwrap();
        return SignedLog::normalized(sign, m as f64, 0);
    }
    // Keep 64 leading bits; the rest is below f64 resolution.
    let shift = bits - 64;
    let top = (mag >> shift).to_u64().unwrap();
    SignedLog::normalized(sign, top as f64, shift as i64)
}

impl Scalar for SignedLog<f64> {
    fn from_i64(v: i64) -> Self {
        bigint_to_log(&BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        bigint_to_log(v)
    }

    fn from_rational(v: &BigRational) -> Self {
        bigint_to_log(v.numer()) / bigint_to_log(v.denom())
    }

    fn to_f64(&self) -> f64 {
        self.to_real()
    }

    fn precision_bits() -> Option<u32> {
        Some(f64::MANTISSA_DIGITS)
    }

    fn cache_key(&self) -> String {
        format!("{}:{}:{:016x}", self.sign, self.exp, self.mant.to_bits())
    }

    fn is_negative(&self) -> bool {
        self.sign < 0
    }
}
