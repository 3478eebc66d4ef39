use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::scalar::Scalar;
use crate::{Error, Result};

/// `x (x+1) ... (x+n-1)`; the empty product for `n = 0`.
pub fn rising_factorial<T: Scalar>(x: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc = acc * &term;
        term = term + T::one();
    }
    acc
}

/// `x (x-1) ... (x-n+1)`; the empty product for `n = 0`.
pub fn falling_factorial<T: Scalar>(x: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc = acc * &term;
        term = term - T::one();
    }
    acc
}

pub fn factorial_big(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn factorial<T: Scalar>(n: usize) -> T {
    T::from_bigint(&BigInt::from(factorial_big(n)))
}

pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact binomial coefficient converted into the active scalar.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> Result<T> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) needs k <= n")));
    }
    Ok(T::from_bigint(&BigInt::from(binomial_big(n, k))))
}

/// Row `C(n, 0), ..., C(n, n)` computed exactly then converted.
pub fn binomial_row<T: Scalar>(n: usize) -> Vec<T> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for k in 0..=n {
        row.push(T::from_bigint(&BigInt::from(c.clone())));
        if k < n {
            c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        }
    }
    row
}

/// `n! / (p_1! ... p_r! (n - sum p)!)`; the remainder part is implicit.
pub fn multinomial<T: Scalar>(n: usize, parts: &[usize]) -> Result<T> {
    let used: usize = parts.iter().sum();
    if used > n {
        return Err(Error::Domain(format!(
            "multinomial parts sum to {used} > {n}"
        )));
    }
    let mut left = n;
    let mut acc = BigUint::one();
    for &p in parts {
        acc *= binomial_big(left, p);
        left -= p;
    }
    Ok(T::from_bigint(&BigInt::from(acc)))
}

/// `m! / ((l!)^r (m - r l)!)`, zero when `r l > m`.
pub fn repeated_multinomial<T: Scalar>(m: usize, l: usize, r: usize) -> T {
    if r * l > m {
        return T::zero();
    }
    multinomial(m, &vec![l; r]).expect("parts fit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn rising_examples() {
        assert_eq!(rising_factorial(&7.5f64, 0), 1.0);
        assert_eq!(rising_factorial(&2.0f64, 3), 24.0);
        assert_eq!(rising_factorial(&0.5f64, 2), 0.75);
    }

    #[test]
    fn falling_examples() {
        assert_eq!(falling_factorial(&7.5f64, 0), 1.0);
        assert_eq!(falling_factorial(&5.0f64, 2), 20.0);
        assert_eq!(falling_factorial(&3.0f64, 5), 0.0);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial::<f64>(5, 2).unwrap(), 10.0);
        assert_eq!(binomial::<f64>(9, 0).unwrap(), 1.0);
        assert!(binomial::<f64>(2, 3).is_err());
        assert_eq!(multinomial::<f64>(4, &[2, 2]).unwrap(), 6.0);
        assert_eq!(multinomial::<f64>(5, &[2, 2]).unwrap(), 30.0);
        assert!(multinomial::<f64>(3, &[2, 2]).is_err());
        assert_eq!(repeated_multinomial::<f64>(5, 2, 3), 0.0);
        assert_eq!(binomial_row::<f64>(4), vec![1.0, 4.0, 6.0, 4.0, 1.0]);
    }

    #[test]
    fn vandermonde_for_rising_factorials() {
        let grid = [q(1, 2), q(3, 1), q(-7, 4), q(5, 3)];
        for a in &grid {
            for b in &grid {
                for n in 0..=12 {
                    let lhs = rising_factorial(&(a.clone() + b), n);
                    let row: Vec<Q> = binomial_row(n);
                    let rhs = (0..=n).fold(Q::from_i64(0), |acc, h| {
                        acc + row[h].clone()
                            * rising_factorial(a, h)
                            * rising_factorial(b, n - h)
                    });
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rising_splits(num in 1i64..50, den in 1i64..9, n in 0usize..12, m in 0usize..12) {
            let x = q(num, den);
            let lhs = rising_factorial(&x, n + m);
            let rhs = rising_factorial(&x, n) * rising_factorial(&(x.clone() + Q::from_usize(n)), m);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
