//! The verification layer: expected multiplicity tables, the explicit
//! zero-weight matrices with their cross-validations against the generic
//! machinery, and the end-to-end pipeline emitting machine-readable reports.

mod matrices;
mod pipeline;
mod report;
mod tables;

pub use matrices::{
    build_a, build_aprime, build_d, corank_check, det_window, machinery_a_matrix,
    machinery_aprime_matrix, DetWindow,
};
pub use pipeline::{run_verification, VerifyError, VerifyOptions, ALL_CHECKS};
pub use report::{CheckRecord, Report};
pub use tables::{
    expected_block_minus_one, expected_block_piece, expected_multiplicities, expected_n_j,
    label_dimension, table_dimension_identity,
};
