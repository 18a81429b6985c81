//! Dynamical comparison on the boundary: witnesses, their composition, the
//! counting-to-matching step, and the full `X ≺ U` construction.

pub mod matching;
pub mod petr;
pub mod pipeline;
pub mod witness;

/// Longest extension tried when boosting into a single copy of the target.
pub const MAX_EXTENSION: usize = 12;

pub use petr::{depth_cap_from_env, petr_assign, Assignment, CountingData, DEFAULT_EXTRA_DEPTH};
pub use pipeline::{build_comparison, ComparisonCertificate, ComparisonInstance};
pub use witness::{boost, compose, Verdict, Witness, WitnessEntry, WitnessReport};
