//! Exact arithmetic for pi-typical Witt vectors, pi-derivations, arithmetic
//! jet algebras and the Greenberg transform, with brute-force verification
//! over small finite rings.

pub mod arith;
pub mod error;
pub mod finite;
pub mod greenberg;
pub mod hom;
pub mod jet;
pub mod json;
pub mod number;
pub mod poly;
pub mod presentation;
pub mod prolong;
pub mod report;
pub mod ring;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
pub use finite::FiniteRing;
pub use number::{BaseRing, BaseTriple, NumberRingElement};
pub use poly::{JetVar, Monomial, MultiPoly, PolyRing};
pub use ring::{Enumerable, OAlgebra, Ring};
