use std::sync::atomic::{AtomicU32, Ordering};

use num_traits::Float;

use super::scalar::Scalar;
use super::signed_log::SignedLog;
use crate::{Error, Result};

static HEADROOM_BITS: AtomicU32 = AtomicU32::new(30);

/// Bits of accuracy a guarded sum must retain; default 30.
pub fn cancellation_headroom() -> u32 {
    HEADROOM_BITS.load(Ordering::Relaxed)
}

pub fn set_cancellation_headroom(bits: u32) {
    HEADROOM_BITS.store(bits, Ordering::Relaxed);
}

fn budget(bits: u32) -> f64 {
    bits as f64 - cancellation_headroom() as f64
}

/// Sum of signed-log terms: each sign group is accumulated against its own
/// largest exponent, then the groups meet in a single subtraction.
pub fn signed_sum<F: Float>(terms: &[SignedLog<F>]) -> Result<SignedLog<F>> {
    let group = |sign: i8| -> SignedLog<F> {
        let pivot = terms
            .iter()
            .filter(|t| t.sign() == sign)
            .map(|t| t.exponent())
            .max();
        let Some(pivot) = pivot else {
            return SignedLog::zero_value();
        };
        let two = F::from(2.0).unwrap();
        let acc = terms
            .iter()
            .filter(|t| t.sign() == sign)
            .filter(|t| pivot - t.exponent() < 1000)
            .fold(F::zero(), |acc, t| {
                acc + t.mantissa() * two.powi((t.exponent() - pivot) as i32)
            });
        SignedLog::from_scaled(1, acc, pivot)
    };
    let result = group(1) - group(-1);
    let largest = terms
        .iter()
        .map(|t| t.log2_abs())
        .fold(F::neg_infinity(), F::max);
    if largest == F::neg_infinity() {
        return Ok(result);
    }
    let bits = (F::one() - F::epsilon().log2()).to_f64().unwrap() as u32;
    let lost = (largest - result.log2_abs()).to_f64().unwrap();
    if lost > budget(bits) {
        return Err(Error::Cancellation {
            lost_bits: lost,
            budget_bits: budget(bits),
        });
    }
    Ok(result)
}

/// Sums positive and negative terms separately and checks that the final
/// subtraction keeps at least the configured headroom. Exact scalars are
/// never flagged.
pub fn guarded_sum<T: Scalar, I: IntoIterator<Item = T>>(terms: I) -> Result<T> {
    let mut pos = T::zero();
    let mut neg = T::zero();
    let mut largest = T::zero();
    for t in terms {
        let a = t.abs_val();
        if a > largest {
            largest = a.clone();
        }
        if t.is_negative() {
            neg = neg + a;
        } else {
            pos = pos + t;
        }
    }
    let result = pos - neg;
    check_cancellation(&largest, &result)?;
    Ok(result)
}

/// Flags a result whose magnitude fell more than `bits - headroom` bits
/// below `largest`.
pub fn check_cancellation<T: Scalar>(largest: &T, result: &T) -> Result<()> {
    let Some(bits) = T::precision_bits() else {
        return Ok(());
    };
    if largest.is_zero() {
        return Ok(());
    }
    let lost = if result.is_zero() {
        f64::INFINITY
    } else {
        (largest.clone() / result.abs_val()).to_f64().log2()
    };
    if lost > budget(bits) {
        return Err(Error::Cancellation {
            lost_bits: lost,
            budget_bits: budget(bits),
        });
    }
    Ok(())
}
