//! The boundary ∂F₂ of the free group: cylinders, clopen sets, the action of
//! F₂ (and of F₂ × ℤ/k on ∂F₂ × ℤ/k), and geodesic averaging measures.

pub mod clopen;
pub mod measure;
pub mod point;
pub mod tree;

pub use clopen::Clopen;
pub use measure::{GeodesicMap, ProbMeasure, Relation};
pub use point::BoundaryPoint;
pub use tree::Tree;
