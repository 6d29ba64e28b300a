//! Exact linear algebra for matrix pencils and simultaneous similarity.
//!
//! The crate computes weak Kronecker forms of pencils `A + X·B` over any
//! exact field, decides simultaneous similarity and equivalence of matrix
//! families with checkable certificates, and transports certificates from
//! an extension field down to the ground field.

pub mod error;
pub mod bridge;
pub mod codec;
pub mod descent;
pub mod fields;
pub mod intertwine;
pub mod matrices;
pub mod pencil;
pub mod random;

pub use error::{Error, Result};
pub use bridge::{decide_equivalence, descend_equivalence, embed_equiv_as_sim, BridgedFamily};
pub use descent::{descend_tower, descend_tower_traced, DescentPlan, TraceStep};
pub use fields::{Elem, Field, FieldElement};
pub use intertwine::{
    decide_similarity, intertwiner_basis, verify_equivalence, verify_similarity, EquivalenceCertificate,
    IntertwinerSpace, MatrixFamily, SimilarityCertificate,
};
pub use matrices::{Matrix, Subspace};
pub use pencil::{kronecker_reduce, KroneckerForm, Pencil, PencilBlock};
