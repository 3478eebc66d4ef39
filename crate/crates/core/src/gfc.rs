//! Central and noncentral generalized factorial coefficients.
//!
//! Every table stores the normalized value `C(n, k; σ, γ) / σ^k`, which obeys
//!
//! ```text
//! Ĉ(n+1, k) = (n - kσ - γ) Ĉ(n, k) + Ĉ(n, k-1),   Ĉ(0, 0) = 1
//! ```
//!
//! and is a polynomial in σ. At σ = 0 it is the unsigned Stirling number of
//! the first kind (shifted by γ), so the Ewens case needs no special path.

use std::any::{Any, TypeId};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};

use crate::numerics::Scalar;
use crate::{Error, Result};

/// Triangular table of normalized coefficients for one `(σ, γ)` pair.
#[derive(Clone, Debug)]
pub struct GfcTable<T> {
    sigma: T,
    gamma: T,
    max_k: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> GfcTable<T> {
    /// Rows `0..=max_n`, columns `0..=min(n, max_k)`.
    pub fn build(sigma: &T, gamma: &T, max_n: usize, max_k: usize) -> Self {
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![T::one()]);
        for i in 0..max_n {
            let prev = &rows[i];
            let width = (i + 1).min(max_k);
            let mut next = Vec::with_capacity(width + 1);
            let base = T::from_usize(i) - gamma;
            for k in 0..=width {
                let mut v = T::zero();
                if k < prev.len() {
                    let factor = base.clone() - sigma.clone() * T::from_usize(k);
                    v = factor * &prev[k];
                }
                if k >= 1 && k - 1 < prev.len() {
                    v = v + &prev[k - 1];
                }
                next.push(v);
            }
            rows.push(next);
        }
        GfcTable {
            sigma: sigma.clone(),
            gamma: gamma.clone(),
            max_k,
            rows,
        }
    }

    pub fn sigma(&self) -> &T {
        &self.sigma
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    fn covers(&self, n: usize, k: usize) -> bool {
        n <= self.max_n() && k <= self.max_k
    }

    /// `C(n, k; σ, γ) / σ^k`; zero for `k > n`.
    ///
    /// Panics when `(n, k)` lies outside the built range.
    pub fn normalized(&self, n: usize, k: usize) -> T {
        if k > n {
            return T::zero();
        }
        assert!(self.covers(n, k), "gfc ({n}, {k}) outside table");
        self.rows[n][k].clone()
    }

    /// `C(n, k; σ, γ)` itself.
    pub fn value(&self, n: usize, k: usize) -> T {
        self.normalized(n, k) * self.sigma.powu(k)
    }

    /// Row `n` for `k = 0..=min(n, max_k)`.
    pub fn row(&self, n: usize) -> &[T] {
        &self.rows[n]
    }
}

const CACHE_CAPACITY: usize = 64;

type CacheKey = (TypeId, String, String);

struct Entry {
    key: CacheKey,
    max_n: usize,
    max_k: usize,
    table: Arc<dyn Any + Send + Sync>,
}

/// Most recently used entries at the back.
fn cache() -> &'static Mutex<Vec<Entry>> {
    static CACHE: OnceLock<Mutex<Vec<Entry>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Shared normalized table covering at least `n ≤ max_n`, `k ≤ max_k`.
///
/// Tables live in a process-wide LRU of 64 entries keyed by scalar type,
/// σ and γ. A request larger than the cached table rebuilds it.
pub fn gfc_table<T: Scalar>(sigma: &T, gamma: &T, max_n: usize, max_k: usize) -> Arc<GfcTable<T>> {
    let key: CacheKey = (TypeId::of::<T>(), sigma.cache_key(), gamma.cache_key());
    let max_k = max_k.min(max_n);
    let (want_n, want_k) = {
        let mut entries = cache().lock().unwrap_or_else(|e| e.into_inner());
        match entries.iter().position(|e| e.key == key) {
            Some(pos) => {
                let entry = entries.remove(pos);
                if entry.max_n >= max_n && entry.max_k >= max_k {
                    let table = entry.table.clone();
                    entries.push(entry);
                    return table.downcast::<GfcTable<T>>().expect("type keyed");
                }
                let dims = (entry.max_n.max(max_n), entry.max_k.max(max_k));
                entries.push(entry);
                dims
            }
            None => (max_n, max_k),
        }
    };
    let table = Arc::new(GfcTable::build(sigma, gamma, want_n, want_k));
    let mut entries = cache().lock().unwrap_or_else(|e| e.into_inner());
    entries.retain(|e| e.key != key);
    if entries.len() >= CACHE_CAPACITY {
        entries.remove(0);
    }
    entries.push(Entry {
        key,
        max_n: want_n,
        max_k: want_k,
        table: table.clone(),
    });
    table
}

/// Normalized coefficient `C(n, k; σ, γ) / σ^k`, valid for any σ including 0.
pub fn gfc_normalized<T: Scalar>(n: usize, k: usize, sigma: &T, gamma: &T) -> T {
    if k > n {
        return T::zero();
    }
    gfc_table(sigma, gamma, n, k).normalized(n, k)
}

fn reject_zero_sigma<T: Scalar>(sigma: &T) -> Result<()> {
    if sigma.is_zero() {
        return Err(Error::Domain(
            "σ = 0 makes C(n,k;σ) vanish; use stirling_limit for the Ewens case".into(),
        ));
    }
    if *sigma >= T::one() {
        return Err(Error::Domain("σ must be below 1".into()));
    }
    Ok(())
}

/// Central generalized factorial coefficient `C(n, k; σ)`.
pub fn gfc_central<T: Scalar>(n: usize, k: usize, sigma: &T) -> Result<T> {
    gfc_noncentral(n, k, sigma, &T::zero())
}

/// Noncentral generalized factorial coefficient `C(n, k; σ, γ)`.
pub fn gfc_noncentral<T: Scalar>(n: usize, k: usize, sigma: &T, gamma: &T) -> Result<T> {
    reject_zero_sigma(sigma)?;
    Ok(gfc_normalized(n, k, sigma, gamma) * sigma.powu(k))
}

/// Unsigned Stirling number of the first kind, exactly.
pub fn stirling_unsigned(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let mut row = vec![BigUint::from(1u32)];
    for i in 0..n {
        let mut next = vec![BigUint::default(); i + 2];
        for (kk, v) in row.iter().enumerate() {
            next[kk] += v * BigUint::from(i);
            next[kk + 1] += v;
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `lim_{σ→0} C(n, k; σ) / σ^k = |s(n, k)|`.
pub fn stirling_limit<T: Scalar>(n: usize, k: usize) -> T {
    T::from_bigint(&BigInt::from(stirling_unsigned(n, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{binomial, factorial, rising_factorial};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn alternating_sum(n: usize, k: usize, sigma: &Q) -> Q {
        let mut acc = Q::from_i64(0);
        for i in 0..=k {
            let x = -sigma.clone() * Q::from_usize(i);
            let term = binomial::<Q>(k, i).unwrap() * rising_factorial(&x, n);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc / factorial::<Q>(k)
    }

    #[test]
    fn small_values() {
        assert_eq!(gfc_central(1, 1, &0.7f64).unwrap(), 0.7);
        assert_eq!(gfc_central(3, 2, &q(1, 2)).unwrap(), q(3, 8));
        assert_eq!(gfc_noncentral(1, 1, &q(1, 2), &q(3, 10)).unwrap(), q(1, 2));
        assert_eq!(gfc_central(4, 6, &q(1, 2)).unwrap(), q(0, 1));
        assert_eq!(gfc_central(3, 0, &q(1, 2)).unwrap(), q(0, 1));
        assert_eq!(gfc_central(0, 0, &q(1, 2)).unwrap(), q(1, 1));
        assert!(gfc_central(3, 2, &0.0f64).is_err());
        assert_eq!(stirling_limit::<f64>(4, 2), 11.0);
        assert_eq!(stirling_limit::<f64>(1, 1), 1.0);
        assert_eq!(stirling_limit::<f64>(3, 5), 0.0);
    }

    #[test]
    fn diagonal_is_sigma_power() {
        let s = q(2, 7);
        for n in 0..=20 {
            assert_eq!(gfc_central(n, n, &s).unwrap(), s.powu(n));
        }
    }

    #[test]
    fn recurrence_matches_alternating_sum() {
        for s in [q(1, 2), q(1, 4), q(3, 4), q(-3, 2)] {
            for n in 0..=15 {
                for k in 0..=n {
                    assert_eq!(gfc_central(n, k, &s).unwrap(), alternating_sum(n, k, &s));
                }
            }
        }
    }

    #[test]
    fn central_coefficients_positive() {
        for n in 1..=30 {
            for k in 1..=n {
                assert!(gfc_central(n, k, &0.35f64).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn connection_identity() {
        // Σ_k C(m,k;σ,γ) (x)_k↑ = (σx − γ)_m↑
        let (s, g, x) = (q(1, 3), q(-5, 2), q(7, 4));
        for m in 0..=10 {
            let lhs = (0..=m).fold(Q::from_i64(0), |acc, k| {
                acc + gfc_noncentral(m, k, &s, &g).unwrap() * rising_factorial(&x, k)
            });
            assert_eq!(lhs, rising_factorial(&(s.clone() * &x - &g), m));
        }
    }

    #[test]
    fn convolution_identity() {
        let s = q(1, 2);
        let grid = [q(0, 1), q(1, 3), q(-2, 1), q(5, 2)];
        for a in &grid {
            for b in &grid {
                let ab = a.clone() + b;
                for x in 0..=10 {
                    for y in 0..=x {
                        for c in 0..=(x - y) {
                            let lhs = gfc_noncentral(x, y + c, &s, &ab).unwrap()
                                * binomial::<Q>(y + c, y).unwrap();
                            let rhs = (0..=x).fold(Q::from_i64(0), |acc, j| {
                                acc + binomial::<Q>(x, j).unwrap()
                                    * gfc_noncentral(j, y, &s, a).unwrap()
                                    * gfc_noncentral(x - j, c, &s, b).unwrap()
                            });
                            assert_eq!(lhs, rhs, "x={x} y={y} c={c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_sigma_approaches_stirling() {
        let s = 1e-8f64;
        for n in 1..=10 {
            for k in 1..=n {
                let v = gfc_central(n, k, &s).unwrap() / s.powu(k);
                let st: f64 = stirling_limit(n, k);
                assert!(((v - st) / st).abs() < 1e-6, "n={n} k={k}");
            }
        }
        // The normalized table evaluates the limit directly.
        assert_eq!(gfc_normalized(7, 3, &Q::from_i64(0), &Q::from_i64(0)), stirling_limit::<Q>(7, 3));
    }

    #[test]
    fn cache_grows_on_demand() {
        let s = q(3, 11);
        let g = q(-1, 13);
        let small = gfc_table(&s, &g, 5, 3);
        assert!(small.max_n() >= 5);
        let big = gfc_table(&s, &g, 12, 12);
        assert!(big.max_n() >= 12 && big.max_k() >= 12);
        assert_eq!(small.normalized(5, 3), big.normalized(5, 3));
        let again = gfc_table(&s, &g, 4, 2);
        assert!(Arc::ptr_eq(&again, &big));
    }
}
