//! The graded module type and its structural invariants.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cyclotomic::{Cyc, CycField};
use crate::linalg::Matrix;

#[derive(Debug, Error)]
pub enum ModcatError {
    #[error("module invariant violated: {0}")]
    InvariantViolation(String),
    #[error("character peeling produced a negative multiplicity at weight {weight}")]
    NegativeMultiplicity { weight: i64 },
    #[error("projective construction failed: {0}")]
    ConstructionFailed(String),
    #[error("isomorphism search inconclusive: nonzero Hom spaces but no invertible map found")]
    InconclusiveIsomorphism,
    #[error("subspace is not closed under the module action")]
    NotASubmodule,
}

/// A finite-dimensional Z-graded module: weight dimensions together with the
/// per-weight blocks of the raising operator (degree +2) and the lowering
/// operator (degree -2).
#[derive(Debug, Clone)]
pub struct GradedModule {
    field: Arc<CycField>,
    dims: BTreeMap<i64, usize>,
    /// e_blocks[w]: V_w -> V_{w+2}, shape dim(w+2) x dim(w).
    e_blocks: BTreeMap<i64, Matrix>,
    /// f_blocks[w]: V_w -> V_{w-2}, shape dim(w-2) x dim(w).
    f_blocks: BTreeMap<i64, Matrix>,
}

impl GradedModule {
    pub fn new(
        field: Arc<CycField>,
        dims: BTreeMap<i64, usize>,
        e_blocks: BTreeMap<i64, Matrix>,
        f_blocks: BTreeMap<i64, Matrix>,
    ) -> GradedModule {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let mut m = GradedModule {
            field,
            dims,
            e_blocks: BTreeMap::new(),
            f_blocks: BTreeMap::new(),
        };
        for (&w, &d) in &m.dims {
            let e = e_blocks
                .get(&w)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(m.dim_at(w + 2), d, &m.field));
            assert_eq!(e.rows(), m.dim_at(w + 2), "raising block shape at {w}");
            assert_eq!(e.cols(), d);
            let f = f_blocks
                .get(&w)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(m.dim_at(w - 2), d, &m.field));
            assert_eq!(f.rows(), m.dim_at(w - 2), "lowering block shape at {w}");
            assert_eq!(f.cols(), d);
            m.e_blocks.insert(w, e);
            m.f_blocks.insert(w, f);
        }
        m
    }

    pub fn zero(field: Arc<CycField>) -> GradedModule {
        GradedModule {
            field,
            dims: BTreeMap::new(),
            e_blocks: BTreeMap::new(),
            f_blocks: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn dim_at(&self, w: i64) -> usize {
        self.dims.get(&w).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.dims.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Raising block out of weight w, materializing zeros when absent.
    pub fn e_from(&self, w: i64) -> Matrix {
        self.e_blocks
            .get(&w)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim_at(w + 2), self.dim_at(w), &self.field))
    }

    /// Lowering block out of weight w.
    pub fn f_from(&self, w: i64) -> Matrix {
        self.f_blocks
            .get(&w)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim_at(w - 2), self.dim_at(w), &self.field))
    }

    /// Action of the Casimir element on the weight-w space:
    /// E F + (q^(w-1) + q^(1-w)) / (q - q^-1)^2, i.e. EF + b_(w-2).
    pub fn casimir_at(&self, w: i64) -> Matrix {
        let d = self.dim_at(w);
        let ef = self.e_from(w - 2).mul(&self.f_from(w), &self.field);
        let scalar = self.field.casimir_root(w - 2);
        let mut out = ef;
        for i in 0..d {
            let v = out.at(i, i).add(&scalar);
            out.set(i, i, v);
        }
        out
    }

    /// Checks the category axioms: block shapes, the commutator identity
    /// (EF - FE)|_w = (w)_q id, and nilpotency of both operators at order l.
    pub fn check_invariants(&self) -> Result<(), ModcatError> {
        let l = self.field.l();
        for (&w, &d) in &self.dims {
            let ef = self.e_from(w - 2).mul(&self.f_from(w), &self.field);
            let fe = self.f_from(w + 2).mul(&self.e_from(w), &self.field);
            let mut comm = ef.sub(&fe);
            let wq = self.field.qint(w);
            for i in 0..d {
                let v = comm.at(i, i).sub(&wq);
                comm.set(i, i, v);
            }
            if !comm.is_zero() {
                return Err(ModcatError::InvariantViolation(format!(
                    "commutator identity fails at weight {w}"
                )));
            }
        }
        for (&w, _) in &self.dims {
            if !self.operator_chain_is_zero(w, 2, l) {
                return Err(ModcatError::InvariantViolation(format!(
                    "raising operator not nilpotent of order {l} from weight {w}"
                )));
            }
            if !self.operator_chain_is_zero(w, -2, l) {
                return Err(ModcatError::InvariantViolation(format!(
                    "lowering operator not nilpotent of order {l} from weight {w}"
                )));
            }
        }
        Ok(())
    }

    fn operator_chain_is_zero(&self, w: i64, step: i64, count: u64) -> bool {
        let mut acc: Option<Matrix> = None;
        let mut cur = w;
        for _ in 0..count {
            if self.dim_at(cur + step) == 0 && acc.is_none() {
                // chain passes through a zero space before accumulating
            }
            let block = if step > 0 {
                self.e_from(cur)
            } else {
                self.f_from(cur)
            };
            acc = Some(match acc {
                None => block,
                Some(a) => block.mul(&a, &self.field),
            });
            cur += step;
            if acc.as_ref().map(|m| m.rows() == 0).unwrap_or(false) {
                return true;
            }
        }
        acc.map(|m| m.is_zero()).unwrap_or(true)
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let field = self.field.clone();
        let mut dims = BTreeMap::new();
        let weights: std::collections::BTreeSet<i64> = self
            .dims
            .keys()
            .chain(other.dims.keys())
            .copied()
            .collect();
        for &w in &weights {
            dims.insert(w, self.dim_at(w) + other.dim_at(w));
        }
        let block = |w: i64, step: i64| -> Matrix {
            let a = if step > 0 {
                self.e_from(w)
            } else {
                self.f_from(w)
            };
            let b = if step > 0 {
                other.e_from(w)
            } else {
                other.f_from(w)
            };
            let rows = a.rows() + b.rows();
            let cols = a.cols() + b.cols();
            let mut m = Matrix::zeros(rows, cols, &field);
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    m.set(r, c, a.at(r, c).clone());
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(a.rows() + r, a.cols() + c, b.at(r, c).clone());
                }
            }
            m
        };
        let mut e_blocks = BTreeMap::new();
        let mut f_blocks = BTreeMap::new();
        for &w in &weights {
            e_blocks.insert(w, block(w, 2));
            f_blocks.insert(w, block(w, -2));
        }
        GradedModule::new(field, dims, e_blocks, f_blocks)
    }

    /// Restricts the module to a subspace given by per-weight column bases.
    /// Fails when the subspace is not closed under both operators.
    pub fn restrict(
        &self,
        sub: &BTreeMap<i64, Matrix>,
    ) -> Result<GradedModule, ModcatError> {
        let field = &self.field;
        let mut dims = BTreeMap::new();
        for (&w, basis) in sub {
            assert_eq!(basis.rows(), self.dim_at(w), "basis shape at weight {w}");
            if basis.cols() > 0 {
                dims.insert(w, basis.cols());
            }
        }
        let mut e_blocks = BTreeMap::new();
        let mut f_blocks = BTreeMap::new();
        let empty = |w: i64| Matrix::zeros(self.dim_at(w), 0, field);
        for (&w, basis) in sub {
            if basis.cols() == 0 {
                continue;
            }
            let up = sub.get(&(w + 2)).cloned().unwrap_or_else(|| empty(w + 2));
            let image_up = self.e_from(w).mul(basis, field);
            let e = if up.cols() == 0 {
                if !image_up.is_zero() {
                    return Err(ModcatError::NotASubmodule);
                }
                Matrix::zeros(0, basis.cols(), field)
            } else {
                up.solve(&image_up, field).ok_or(ModcatError::NotASubmodule)?
            };
            let down = sub.get(&(w - 2)).cloned().unwrap_or_else(|| empty(w - 2));
            let image_down = self.f_from(w).mul(basis, field);
            let f = if down.cols() == 0 {
                if !image_down.is_zero() {
                    return Err(ModcatError::NotASubmodule);
                }
                Matrix::zeros(0, basis.cols(), field)
            } else {
                down.solve(&image_down, field)
                    .ok_or(ModcatError::NotASubmodule)?
            };
            e_blocks.insert(w, e);
            f_blocks.insert(w, f);
        }
        Ok(GradedModule::new(
            field.clone(),
            dims,
            e_blocks,
            f_blocks,
        ))
    }

    /// Quotient by a submodule given as per-weight column bases; returns the
    /// quotient together with the per-weight projection matrices.
    pub fn quotient(
        &self,
        sub: &BTreeMap<i64, Matrix>,
    ) -> Result<(GradedModule, BTreeMap<i64, Matrix>), ModcatError> {
        let field = &self.field;
        // Per weight: complete the subspace to a basis by coordinate vectors
        // at the non-pivot positions, then read quotient coordinates off the
        // inverse change of basis.
        let mut projections: BTreeMap<i64, Matrix> = BTreeMap::new();
        let mut reps: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (&w, &d) in &self.dims {
            let s = sub.get(&w).map(|m| m.cols()).unwrap_or(0);
            let sub_w = sub
                .get(&w)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(d, 0, field));
            let pivots: Vec<usize> = {
                let mut t = sub_w.transpose();
                t.rref(field)
            };
            let pivot_set: std::collections::BTreeSet<usize> = pivots.into_iter().collect();
            if pivot_set.len() != s {
                return Err(ModcatError::NotASubmodule);
            }
            let complement: Vec<usize> = (0..d).filter(|i| !pivot_set.contains(i)).collect();
            let mut basis = Matrix::zeros(d, d, field);
            for c in 0..s {
                for r in 0..d {
                    basis.set(r, c, sub_w.at(r, c).clone());
                }
            }
            let mut rep = Matrix::zeros(d, complement.len(), field);
            for (k, &i) in complement.iter().enumerate() {
                basis.set(i, s + k, field.one());
                rep.set(i, k, field.one());
            }
            let inv = basis.inverse(field).ok_or(ModcatError::NotASubmodule)?;
            let mut proj = Matrix::zeros(d - s, d, field);
            for r in 0..d - s {
                for c in 0..d {
                    proj.set(r, c, inv.at(s + r, c).clone());
                }
            }
            projections.insert(w, proj);
            reps.insert(w, rep);
        }
        let dims: BTreeMap<i64, usize> = projections
            .iter()
            .map(|(&w, p)| (w, p.rows()))
            .filter(|(_, d)| *d > 0)
            .collect();
        let mut e_blocks = BTreeMap::new();
        let mut f_blocks = BTreeMap::new();
        let zero_proj = |w: i64| Matrix::zeros(0, self.dim_at(w), field);
        for (&w, _) in &dims {
            let proj_up = projections.get(&(w + 2)).cloned().unwrap_or_else(|| zero_proj(w + 2));
            let proj_down = projections.get(&(w - 2)).cloned().unwrap_or_else(|| zero_proj(w - 2));
            let rep = &reps[&w];
            e_blocks.insert(w, proj_up.mul(&self.e_from(w), field).mul(rep, field));
            f_blocks.insert(w, proj_down.mul(&self.f_from(w), field).mul(rep, field));
        }
        let quotient = GradedModule::new(field.clone(), dims, e_blocks, f_blocks);
        Ok((quotient, projections))
    }

    /// Splits the module into the generalized eigenspaces of the Casimir
    /// action. Returns (eigenvalue, per-weight column bases) pairs with
    /// nonzero total dimension; the bases are canonical (reduced echelon).
    pub fn casimir_blocks(&self) -> Vec<(Cyc, BTreeMap<i64, Matrix>)> {
        let field = &self.field;
        let l = field.l() as i64;
        let mut out = Vec::new();
        let mut total = 0usize;
        for j in (-1..=(l - 3) / 2).rev() {
            // canonical block labels j = -1, 0, ..., (l-3)/2
            let b = field.casimir_root(j);
            let mut bases = BTreeMap::new();
            let mut dim = 0usize;
            for (&w, &d) in &self.dims {
                let x = self.casimir_at(w);
                let mut shifted = x;
                for i in 0..d {
                    let v = shifted.at(i, i).sub(&b);
                    shifted.set(i, i, v);
                }
                let sq = shifted.mul(&shifted, field);
                let ker = sq.kernel(field);
                // canonicalize the basis
                let ker = ker.transpose().row_space_basis(field).transpose();
                dim += ker.cols();
                bases.insert(w, ker);
            }
            if dim > 0 {
                out.push((b, bases));
                total += dim;
            }
        }
        assert_eq!(
            total,
            self.total_dim(),
            "Casimir generalized eigenspaces must exhaust the module"
        );
        out.reverse();
        out
    }

    /// JSON dump: weights, dimensions, and both operator block families.
    pub fn to_json(&self) -> serde_json::Value {
        let weights: Vec<i64> = self.weights();
        let dims: Vec<usize> = weights.iter().map(|w| self.dim_at(*w)).collect();
        let blocks = |blocks: &BTreeMap<i64, Matrix>| -> serde_json::Value {
            serde_json::Value::Array(
                weights
                    .iter()
                    .map(|w| {
                        let m = &blocks[w];
                        serde_json::json!({
                            "from": w,
                            "rows": m.rows(),
                            "cols": m.cols(),
                            "entries": (0..m.rows())
                                .map(|r| {
                                    (0..m.cols()).map(|c| m.at(r, c).to_json()).collect::<Vec<_>>()
                                })
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            )
        };
        serde_json::json!({
            "weights": weights,
            "dims": dims,
            "E_blocks": blocks(&self.e_blocks),
            "F_blocks": blocks(&self.f_blocks),
        })
    }
}
