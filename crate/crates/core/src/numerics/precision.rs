use std::fmt;
use std::str::FromStr;

use super::mp::MpFloat;
use super::scalar::Scalar;
use super::signed_log::SignedLog;
use crate::{Error, Result};

/// Environment variable that overrides the automatic precision choice.
pub const PRECISION_ENV: &str = "GIBBS_PRECISION";

/// Arithmetic used to evaluate a formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    /// Arbitrary-precision rationals; requires rational parameters.
    #[default]
    Exact,
    /// Binary floating point with the given significand width. Widths up to
    /// 53 use signed-log `f64`; wider requests round up to the next of
    /// 128, 256, 512, 1024, 2048 or 4096.
    Float(u32),
}

impl Precision {
    pub const DEFAULT_BITS: u32 = 256;
    pub const MAX_BITS: u32 = 4096;
    /// Largest `n + m` evaluated exactly by default.
    pub const EXACT_LIMIT: usize = 100;

    /// Default for a problem with `n` observed and `m` additional samples.
    pub fn default_for(n: usize, m: usize) -> Self {
        if n + m <= Self::EXACT_LIMIT {
            Precision::Exact
        } else {
            Precision::Float(Self::DEFAULT_BITS)
        }
    }

    /// Explicit request, else the environment override, else the default.
    /// Exact mode is refused when a parameter is not rational; the default
    /// falls back to floating point instead.
    pub fn resolve(
        requested: Option<Precision>,
        n: usize,
        m: usize,
        rational_params: bool,
    ) -> Result<Resolved> {
        let explicit = match requested {
            Some(p) => Some(p),
            None => match std::env::var(PRECISION_ENV) {
                Ok(s) if !s.trim().is_empty() => Some(s.parse()?),
                _ => None,
            },
        };
        let (precision, automatic) = match explicit {
            Some(Precision::Exact) if !rational_params => {
                return Err(Error::Domain("exact arithmetic needs rational parameters".into()))
            }
            Some(p) => (p, false),
            None if !rational_params => (Precision::Float(Self::DEFAULT_BITS), true),
            None => (Self::default_for(n, m), true),
        };
        Ok(Resolved { precision, automatic })
    }

    /// Significand bits of the backend actually used, `None` when exact.
    pub fn effective_bits(self) -> Option<u32> {
        match self {
            Precision::Exact => None,
            Precision::Float(b) if b <= 53 => Some(53),
            Precision::Float(b) => Some(b.next_power_of_two().max(128)),
        }
    }

    /// Runs `task` with the scalar type selected by this precision.
    pub fn dispatch<K: PrecisionTask>(self, task: K) -> K::Output {
        match self.effective_bits() {
            None => task.run::<num_rational::BigRational>(),
            Some(53) => task.run::<SignedLog<f64>>(),
            Some(128) => task.run::<MpFloat<128>>(),
            Some(256) => task.run::<MpFloat<256>>(),
            Some(512) => task.run::<MpFloat<512>>(),
            Some(1024) => task.run::<MpFloat<1024>>(),
            Some(2048) => task.run::<MpFloat<2048>>(),
            Some(_) => task.run::<MpFloat<4096>>(),
        }
    }
}

impl FromStr for Precision {
    type Err = Error;

    /// Accepts `exact`, or a bit count such as `256`, `float:256`, `f256`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "exact" || t == "rational" {
            return Ok(Precision::Exact);
        }
        let digits = t
            .strip_prefix("float:")
            .or_else(|| t.strip_prefix("float"))
            .or_else(|| t.strip_prefix('f'))
            .unwrap_or(&t);
        let bits: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unrecognised precision '{s}'")))?;
        if bits == 0 || bits > Self::MAX_BITS {
            return Err(Error::Parse(format!(
                "precision must be between 1 and {} bits, got {bits}",
                Self::MAX_BITS
            )));
        }
        Ok(Precision::Float(bits))
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => write!(f, "exact"),
            Precision::Float(b) => write!(f, "float:{b}"),
        }
    }
}

/// A precision and whether it was chosen automatically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolved {
    pub precision: Precision,
    pub automatic: bool,
}

impl Resolved {
    /// Runs `task`. An automatic floating-point choice that loses too many
    /// bits is retried at twice the width, up to [`Precision::MAX_BITS`].
    /// Returns the output and the precision that produced it.
    pub fn run<K, O>(self, task: K) -> Result<(O, Precision)>
    where
        K: PrecisionTask<Output = Result<O>> + Clone,
    {
        let mut p = self.precision;
        loop {
            match p.dispatch(task.clone()) {
                Ok(v) => return Ok((v, p)),
                Err(e) if self.automatic && e.is_precision() => match p.effective_bits() {
                    Some(b) if b < Precision::MAX_BITS => p = Precision::Float(b * 2),
                    _ => return Err(e),
                },
                Err(e) => return Err(e),
            }
        }
    }
}

/// Computation generic over the scalar backend.
pub trait PrecisionTask {
    type Output;
    fn run<T: Scalar>(self) -> Self::Output;
}
