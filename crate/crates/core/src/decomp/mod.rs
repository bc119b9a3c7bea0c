//! Krull–Schmidt decomposition machinery: endomorphism algebras, trace-form
//! radicals, indecomposability certificates, Fitting splits, the candidate
//! peel-off engine with splitting certificates, and the Casimir block
//! filtration of the adjoint representation.

mod endo;
mod engine;
mod filtration;

pub use endo::{
    endomorphism_algebra, fitting_split, is_indecomposable, radical, EndAlgebra, FittingSplit,
};
pub use engine::{
    decompose, multiset_from_json, verify_certificates, DecompError, Decomposition,
    SplitCertificate,
};
pub use filtration::{casimir_block_filtration, decompose_n_j, BlockFiltration};
