//! Ground truth for the analytic laws: exhaustive enumeration of how the
//! further observations can fall, and Monte Carlo beyond its reach.

mod enumerate;
mod mc;
mod mixture;

pub use enumerate::{
    canonical_sequence, complete_oracle, enumerate_continuations, enumerate_sequences,
    ContinuationRecord, Label, OracleLaws, MAX_ENUMERATED_M,
};
pub use mc::{mc_continuations, mc_mixture, EmpiricalLaw, McLaws};
pub use mixture::{almost_complete_oracle, incomplete_oracle, oracle_laws, shape_law, MAX_MIXTURE_N};
