//! Permutation-group engine: Schreier–Sims chains, composition factors and
//! alternating sections, classical groups over small fields, the standard
//! primitive constructions, base-size and distinguishing-number search, and
//! exact or certified bound checks.
//!
//! Points are 0-based internally and 1-based in every textual format.
//! Permutations act on the right: `(p * q)(x) = q(p(x))`.

pub mod arith;
pub mod bounds;
pub mod chain;
pub mod constructions;
pub mod describe;
pub mod error;
pub mod fq;
pub mod group;
pub mod manifest;
pub mod perm;
pub mod recipe;
pub mod search;
pub mod structure;

pub use num_bigint;
pub use num_rational;

pub use chain::StabChain;
pub use error::{Error, PermError, Result};
pub use group::GeneratedGroup;
pub use perm::Permutation;
