pub mod backward;
pub mod error;
pub mod figures;
pub mod gfc;
pub mod models;
pub mod numerics;
pub mod oracle;
pub mod validate;

pub use error::{Error, Result};
pub use numerics::{MpFloat, Precision, Scalar, SignedLog};

pub type Exact = num_rational::BigRational;
pub type LogF64 = SignedLog<f64>;
pub type Mp128 = MpFloat<128>;
pub type Mp256 = MpFloat<256>;
pub type Mp512 = MpFloat<512>;
