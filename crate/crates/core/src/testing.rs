use std::sync::Arc;

use crate::group::SymmetryGroup;
use crate::structure::{structure, FiniteStructure};

pub fn s3() -> Arc<SymmetryGroup> {
    Arc::new(SymmetryGroup::full(3).unwrap())
}

pub fn id3() -> Arc<SymmetryGroup> {
    Arc::new(SymmetryGroup::trivial(3).unwrap())
}

/// The eleven-point arity-3 structure, written out independently of the
/// exquisite module.
pub fn base_structure() -> FiniteStructure {
    structure(
        "A",
        s3(),
        &[
            "a1", "a2", "a3", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8",
        ],
        &[
            ["a1", "b1", "b2"],
            ["a2", "b2", "b3"],
            ["a3", "b1", "b7"],
            ["a1", "b3", "b4"],
            ["a2", "b4", "b5"],
            ["a3", "b8", "b3"],
            ["a1", "b5", "b6"],
            ["a2", "b6", "b7"],
            ["a1", "b7", "b8"],
        ],
    )
    .unwrap()
}
