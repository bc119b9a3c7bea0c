//! The small quantum group u_q(sl2): PBW basis, normal-ordering
//! multiplication, Hopf structure, the Casimir element with its minimal
//! polynomial and block projectors, and the graded adjoint representation.

mod adjoint;
mod algebra;
mod elem;
mod monomial;

pub use adjoint::AdjointRep;
pub use algebra::SmallQG;
pub use elem::{AlgElem, TensorElem};
pub use monomial::Monomial;
