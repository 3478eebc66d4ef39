//! Scalar backends and the small exact combinatorics they share.

mod factorial;
mod mp;
mod precision;
mod scalar;
mod signed_log;
mod sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

pub use factorial::{
    binomial, binomial_big, binomial_row, factorial, factorial_big, falling_factorial,
    multinomial, repeated_multinomial, rising_factorial,
};
pub use mp::MpFloat;
pub use precision::{Precision, PrecisionTask, Resolved, PRECISION_ENV};
pub use scalar::{f64_to_rational, Scalar};
pub use signed_log::SignedLog;
pub use sum::{
    cancellation_headroom, check_cancellation, guarded_sum, set_cancellation_headroom,
    signed_sum,
};

use crate::{Error, Result};

/// Parses `3`, `-2.5`, `1e-3`, `0.25E2` or `1/3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a number: '{s}'"));
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mant.as_bytes().first() {
        Some(b'-') => (true, &mant[1..]),
        Some(b'+') => (false, &mant[1..]),
        _ => (false, mant),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let scale = exp - frac_part.len() as i32 - 1;
    let mut v = BigRational::from_integer(digits);
    if scale >= 0 {
        v *= BigRational::from_integer(Pow::pow(&ten, scale as u32));
    } else {
        v /= BigRational::from_integer(Pow::pow(&ten, (-scale) as u32));
    }
    if neg {
        v = -v;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("0.5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-2.5").unwrap(), q(-5, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational(" 100 ").unwrap(), q(100, 1));
        assert_eq!(parse_rational(".25E2").unwrap(), q(25, 1));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("-").is_err());
    }
}
