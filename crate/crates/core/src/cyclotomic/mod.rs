//! Exact arithmetic in the cyclotomic field Q(zeta_l) for odd l >= 3.
//!
//! Elements are stored reduced modulo the l-th cyclotomic polynomial, so
//! equality is coefficient-wise. The module also provides quantum integers
//! (i)_q, the Casimir roots b_j, and certified complex embeddings used for
//! sign checks.

mod embed;
mod field;
mod rat;

pub use embed::{ComplexBall, RealBall, Sign};
pub use field::{Cyc, CycError, CycField, FieldConfig};
pub use rat::{format_rat, parse_rat, Rat};
