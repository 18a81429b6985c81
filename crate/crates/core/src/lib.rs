//! Paradoxical towers in free groups and their relatives, comparison witnesses
//! for the boundary action of F₂, and an explicit non-unitary isometry in the
//! crossed product, all with exact, re-verifiable certificates.

pub mod boundary;
pub mod certificate;
pub mod coloring;
pub mod comparison;
pub mod crossed;
pub mod element;
pub mod error;
pub mod prefix_set;
pub mod scalar;
pub mod subset;
pub mod towers;
pub mod word;

pub use certificate::{verify_envelope, Envelope, Kind, VerifyReport};
pub use comparison::{boost, build_comparison, compose, ComparisonCertificate, ComparisonInstance, Witness};
pub use crossed::{build_isometry, CrossedElement, IsometryCertificate, IsometryParams, StepFunction};
pub use towers::{TowerFamily, VerifyMode};
pub use boundary::{BoundaryPoint, Clopen, GeodesicMap, ProbMeasure, Relation};
pub use element::{Element, Factor, Group};
pub use error::{Error, Result};
pub use prefix_set::PrefixSet;
pub use scalar::Scalar;
pub use subset::{FiberedSet, Subset, Transversal};
pub use coloring::{greedy_color, CayleyGroup, Coloring};
pub use word::{FreeGroup, Letter, Word};

/// Exact rational numbers used throughout certificates.
pub type Rational = num_rational::Ratio<i64>;

pub type ExactMeasure = ProbMeasure<Rational>;
pub type FloatMeasure = ProbMeasure<f64>;

/// Sizes the global worker pool used by the ball sweeps. Only the first call
/// has an effect.
pub fn configure_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))
}
