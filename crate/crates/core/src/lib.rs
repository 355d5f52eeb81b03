//! Weighted projective lines: string groups, graded coordinate algebras and
//! verification of equivariantization isomorphisms between them.

pub mod algebra;
pub mod cases;
pub mod config;
pub mod constants;
pub mod field;
pub mod group;
pub mod group_hom;
pub mod linalg;
pub mod report;
mod modpoly;
pub mod verifier;

pub use algebra::{AlgebraElement, CoordinateAlgebra, Monomial};
pub use field::{FieldElement, FieldSpec, RootChoice};
pub use group::{GroupElement, WeightSequence};
pub use group_hom::GroupHom;
pub use verifier::AlgebraHom;

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
