//! Finite combinatorics of Hrushovski-style ab initio constructions with
//! group symmetry: predimension, closures, amalgams, pregeometries, reducts
//! between symmetry levels and exquisite types.

pub mod amalgam;
pub mod error;
pub mod exquisite;
mod flow;
pub mod format;
pub mod generic;
pub mod group;
pub mod iso;
pub mod matroid;
pub mod oracle;
pub mod predim;
pub mod random;
pub mod reducts;
pub mod set;
pub mod structure;
pub mod suites;
pub mod transfer;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use exquisite::AtomicType;
pub use group::{Permutation, SymmetryGroup};
pub use predim::Search;
pub use set::{Elem, ElementSet};
pub use structure::{Embedding, FiniteStructure, OrbitTuple};
