//! Linear algebra over small finite fields and the classical groups.

pub mod classical;
pub mod field;
pub mod forms;
pub mod matrix;

pub use classical::{classical_group_generators, classical_order, ClassicalGroup, Family};
pub use field::{Fq, FqField};
pub use forms::{subspace_type, FormKind, FormSpec, Sign, SubspaceType};
pub use matrix::{FqMatrix, SubspaceFq};
