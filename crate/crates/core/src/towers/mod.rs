//! Paradoxical tower families: explicit constructions and their verification.

pub mod extensions;
pub mod f2;
pub mod family;
pub mod filling;

pub use extensions::{extension_towers, finite_normal_ext_towers, union_towers};
pub use f2::{f2_strengthened_towers, f2_towers, more_towers, StrengthenedTowers};
pub use family::{Check, Counterexample, TowerFamily, TowerItem, TowerReport, VerifyMode};
pub use filling::{boundary_filling, towers_from_filling, FillingTowers};
