//! pi-typical Witt vectors of finite length.

pub mod drinfeld;
pub mod table;
pub mod vector;

pub use drinfeld::DrinfeldMap;
pub use table::{WittTable, DEFAULT_FEASIBILITY_CAP};
pub use vector::WittRing;
