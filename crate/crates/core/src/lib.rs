//! Exact construction and decomposition of the adjoint representation of the
//! small quantum group u_q(sl2) at an odd primitive l-th root of unity.
//!
//! Everything is computed over the cyclotomic field Q(zeta_l) with exact
//! rational coefficients; floating point appears only in certified interval
//! form for sign checks. The crate is organized bottom-up:
//!
//! * [`cyclotomic`] — arithmetic in Q(zeta_l), quantum integers, Casimir
//!   roots, and certified complex embeddings;
//! * [`linalg`] — dense and sparse exact linear algebra over Q(zeta_l);
//! * [`smallqg`] — the algebra u itself: PBW basis, Hopf structure, Casimir
//!   element, block projectors, and the graded adjoint representation;
//! * [`modcat`] — graded modules: Verma, simple and projective modules,
//!   duality, Hom spaces, characters;
//! * [`decomp`] — endomorphism algebras, radicals, Fitting splits, and the
//!   Krull–Schmidt peel-off engine with splitting certificates;
//! * [`verify`] — expected multiplicity tables, the explicit zero-weight
//!   matrices with their cross-validations, and the end-to-end verification
//!   pipeline behind the `uq-adjoint` CLI.

pub mod cyclotomic;
pub mod decomp;
pub mod linalg;
pub mod modcat;
pub mod smallqg;
pub mod verify;

pub use cyclotomic::{Cyc, CycField, FieldConfig, Rat};
pub use decomp::{decompose, Decomposition};
pub use modcat::{BlockIndex, GradedModule, ModuleLabel};
pub use smallqg::{AlgElem, Monomial, SmallQG};
pub use verify::{run_verification, Report, VerifyOptions};
