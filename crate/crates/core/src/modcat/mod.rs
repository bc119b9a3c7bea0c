//! Z-graded modules over the small quantum group.
//!
//! Objects carry weight-indexed spaces with raising and lowering operator
//! blocks; K is never stored since it acts on weight w by q^w. The module
//! provides Verma, simple and projective constructions, the duality functor,
//! exact Hom-space solvers, graded characters, and singular vectors.

mod block;
mod character;
mod construct;
mod dual;
mod hom;
mod map;
mod module;
mod singular;

pub use block::BlockIndex;
pub use character::{composition_multiplicities, graded_character, simple_character};
pub use construct::{
    candidate_models, projective, simple, verma, LabelKind, ModuleLabel, VermaDirection,
};
pub use character::character_multiplicities;
pub use hom::{block_projections, hom_space, is_isomorphic};
pub use map::ModuleMap;
pub use module::{GradedModule, ModcatError};
pub use singular::{singular_vectors, SingularSide};
