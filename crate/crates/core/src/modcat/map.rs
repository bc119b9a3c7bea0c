//! Grading-preserving linear maps between graded modules.

use std::collections::BTreeMap;

use crate::cyclotomic::{Cyc, CycField, Rat};
use crate::linalg::Matrix;

use super::module::GradedModule;

/// A degree-0 linear map M -> N, stored as one block per source weight.
/// Weights where either side vanishes carry no block.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    blocks: BTreeMap<i64, Matrix>,
}

impl ModuleMap {
    pub fn new(blocks: BTreeMap<i64, Matrix>) -> ModuleMap {
        ModuleMap { blocks }
    }

    pub fn identity(m: &GradedModule) -> ModuleMap {
        let mut blocks = BTreeMap::new();
        for (&w, &d) in m.dims() {
            blocks.insert(w, Matrix::identity(d, m.field()));
        }
        ModuleMap { blocks }
    }

    pub fn zero(source: &GradedModule, target: &GradedModule) -> ModuleMap {
        let mut blocks = BTreeMap::new();
        for (&w, &d) in source.dims() {
            let rows = target.dim_at(w);
            if rows > 0 {
                blocks.insert(w, Matrix::zeros(rows, d, source.field()));
            }
        }
        ModuleMap { blocks }
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Matrix> {
        &self.blocks
    }

    pub fn block(&self, w: i64) -> Option<&Matrix> {
        self.blocks.get(&w)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let mut blocks = BTreeMap::new();
        for (&w, a) in &self.blocks {
            match other.blocks.get(&w) {
                Some(b) => blocks.insert(w, a.add(b)),
                None => blocks.insert(w, a.clone()),
            };
        }
        for (&w, b) in &other.blocks {
            blocks.entry(w).or_insert_with(|| b.clone());
        }
        ModuleMap { blocks }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap {
            blocks: self.blocks.iter().map(|(w, m)| (*w, m.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Cyc, field: &CycField) -> ModuleMap {
        ModuleMap {
            blocks: self
                .blocks
                .iter()
                .map(|(w, m)| (*w, m.scale(s, field)))
                .collect(),
        }
    }

    pub fn scale_rat(&self, s: &Rat) -> ModuleMap {
        ModuleMap {
            blocks: self
                .blocks
                .iter()
                .map(|(w, m)| (*w, m.scale_rat(s)))
                .collect(),
        }
    }

    /// Composition other . self (apply self first).
    pub fn then(&self, other: &ModuleMap, field: &CycField) -> ModuleMap {
        let mut blocks = BTreeMap::new();
        for (&w, a) in &self.blocks {
            if let Some(b) = other.blocks.get(&w) {
                if b.rows() > 0 && a.cols() > 0 {
                    blocks.insert(w, b.mul(a, field));
                }
            }
        }
        ModuleMap { blocks }
    }

    /// True when every block is square and invertible and the map covers all
    /// weights of `source` (with matching target dimensions).
    pub fn is_invertible_between(
        &self,
        source: &GradedModule,
        target: &GradedModule,
        field: &CycField,
    ) -> bool {
        if source.dims() != target.dims() {
            return false;
        }
        for (&w, &d) in source.dims() {
            match self.blocks.get(&w) {
                Some(m) => {
                    if m.rows() != d || m.cols() != d || m.inverse(field).is_none() {
                        return false;
                    }
                }
                None => return false,
            }
        }
        true
    }

    pub fn inverse(&self, field: &CycField) -> Option<ModuleMap> {
        let mut blocks = BTreeMap::new();
        for (&w, m) in &self.blocks {
            blocks.insert(w, m.inverse(field)?);
        }
        Some(ModuleMap { blocks })
    }

    /// Trace of an endomorphism.
    pub fn trace(&self, field: &CycField) -> Cyc {
        let mut t = field.zero();
        for m in self.blocks.values() {
            if m.rows() == m.cols() {
                t = t.add(&m.trace(field));
            }
        }
        t
    }

    /// Endomorphism power by repeated composition.
    pub fn pow(&self, n: u64, field: &CycField) -> ModuleMap {
        let mut acc: Option<ModuleMap> = None;
        let mut base = self.clone();
        let mut n = n;
        if n == 0 {
            // identity on the blocks we know about
            return ModuleMap {
                blocks: self
                    .blocks
                    .iter()
                    .map(|(w, m)| (*w, Matrix::identity(m.rows().min(m.cols()), field)))
                    .collect(),
            };
        }
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.then(&base, field),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.then(&base, field);
            }
        }
        acc.unwrap()
    }

    /// Verifies that this map intertwines the raising and lowering operators
    /// of the two modules.
    pub fn is_intertwiner(
        &self,
        source: &GradedModule,
        target: &GradedModule,
        field: &CycField,
    ) -> bool {
        let block_or_zero = |w: i64| -> Matrix {
            self.blocks
                .get(&w)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(target.dim_at(w), source.dim_at(w), field))
        };
        for &w in source.dims().keys() {
            let phi_w = block_or_zero(w);
            let phi_up = block_or_zero(w + 2);
            let lhs = phi_up.mul(&source.e_from(w), field);
            let rhs = target.e_from(w).mul(&phi_w, field);
            if lhs.sub(&rhs).is_zero() == false {
                return false;
            }
            let phi_down = block_or_zero(w - 2);
            let lhs = phi_down.mul(&source.f_from(w), field);
            let rhs = target.f_from(w).mul(&phi_w, field);
            if lhs.sub(&rhs).is_zero() == false {
                return false;
            }
        }
        true
    }
}
