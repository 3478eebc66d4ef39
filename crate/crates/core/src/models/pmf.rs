use std::fmt;

use crate::numerics::Scalar;
use crate::{Error, Result};

/// Entries in `(-CLAMP_TOLERANCE, 0)` are rounding noise and get clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// Finite distribution on a strictly increasing integer support.
#[derive(Clone, PartialEq)]
pub struct Pmf<T> {
    support: Vec<usize>,
    probs: Vec<T>,
}

impl<T: Scalar> Pmf<T> {
    pub fn new(support: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::Domain("support and probabilities differ in length".into()));
        }
        if support.is_empty() {
            return Err(Error::Domain("empty support".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("support must be strictly increasing".into()));
        }
        Ok(Pmf { support, probs })
    }

    /// Contiguous support `start, start+1, ...`.
    pub fn from_range(start: usize, probs: Vec<T>) -> Self {
        let support = (start..start + probs.len()).collect();
        Pmf { support, probs }
    }

    pub fn point_mass(x: usize) -> Self {
        Pmf {
            support: vec![x],
            probs: vec![T::one()],
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.support.iter().copied().zip(self.probs.iter())
    }

    /// Probability of `x`, zero off the support.
    pub fn prob(&self, x: usize) -> T {
        match self.support.binary_search(&x) {
            Ok(i) => self.probs[i].clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn total(&self) -> T {
        self.probs.iter().fold(T::zero(), |acc, p| acc + p)
    }

    pub fn mean(&self) -> T {
        self.factorial_moment(1)
    }

    /// `E[(X)_{r↓}]`.
    pub fn factorial_moment(&self, r: usize) -> T {
        self.iter().fold(T::zero(), |acc, (x, p)| {
            acc + crate::numerics::falling_factorial(&T::from_usize(x), r) * p
        })
    }

    /// Law of `c - X`; requires `c ≥ max support`.
    pub fn reflect(&self, c: usize) -> Self {
        let support = self.support.iter().rev().map(|&x| c - x).collect();
        let probs = self.probs.iter().rev().cloned().collect();
        Pmf { support, probs }
    }

    /// Clamps microscopic negatives, renormalizes when anything was clamped,
    /// and rejects laws that are clearly not probability vectors.
    pub fn cleaned(mut self) -> Result<Self> {
        if T::is_exact() {
            if self.probs.iter().any(|p| p.is_negative()) {
                return Err(Error::Precision("negative probability in exact arithmetic".into()));
            }
            return Ok(self);
        }
        let mut clamped = false;
        for p in self.probs.iter_mut() {
            if p.is_negative() {
                let v = p.to_f64();
                if v <= -CLAMP_TOLERANCE || v.is_nan() {
                    return Err(Error::Precision(format!(
                        "probability {v:e} is negative beyond tolerance; retry with exact \
                         arithmetic or more bits"
                    )));
                }
                *p = T::zero();
                clamped = true;
            }
        }
        let total = self.total();
        let gap = (total.to_f64() - 1.0).abs();
        if !(gap <= CLAMP_TOLERANCE) {
            return Err(Error::Precision(format!(
                "probabilities sum to {} instead of 1",
                total.to_f64()
            )));
        }
        if clamped {
            for p in self.probs.iter_mut() {
                *p = p.clone() / &total;
            }
        }
        Ok(self)
    }

    pub fn to_f64(&self) -> Pmf<f64> {
        Pmf {
            support: self.support.clone(),
            probs: self.probs.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Pmf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.support.iter().zip(self.probs.iter()))
            .finish()
    }
}
