//! Singular vectors: weight vectors killed by the raising or lowering action.

use crate::linalg::Matrix;

use super::module::GradedModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularSide {
    /// Killed by the raising operator.
    Upper,
    /// Killed by the lowering operator.
    Lower,
}

/// Exact basis (as matrix columns) of the singular vectors of weight w.
pub fn singular_vectors(m: &GradedModule, w: i64, side: SingularSide) -> Matrix {
    let block = match side {
        SingularSide::Upper => m.e_from(w),
        SingularSide::Lower => m.f_from(w),
    };
    block.kernel(m.field())
}
