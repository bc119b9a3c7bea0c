//! The graded adjoint representation on the PBW basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::Cyc;
use crate::linalg::Matrix;
use crate::modcat::{BlockIndex, GradedModule};

use super::algebra::SmallQG;
use super::elem::AlgElem;
use super::monomial::Monomial;

/// The l^3-dimensional adjoint module together with the PBW coordinate maps
/// and the per-weight matrices of left multiplication by the Casimir.
#[derive(Debug)]
pub struct AdjointRep {
    alg: Arc<SmallQG>,
    module: GradedModule,
    basis: BTreeMap<i64, Vec<Monomial>>,
    index: BTreeMap<Monomial, (i64, usize)>,
    lx: BTreeMap<i64, Matrix>,
}

impl AdjointRep {
    pub fn new(alg: &Arc<SmallQG>) -> AdjointRep {
        let field = alg.field().clone();
        let mut basis: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        for m in alg.basis() {
            basis.entry(m.degree()).or_default().push(m);
        }
        let mut index = BTreeMap::new();
        for (&w, monos) in &basis {
            for (i, m) in monos.iter().enumerate() {
                index.insert(*m, (w, i));
            }
        }
        let dims: BTreeMap<i64, usize> = basis.iter().map(|(&w, v)| (w, v.len())).collect();

        let dim_at = |w: i64| basis.get(&w).map(|v| v.len()).unwrap_or(0);
        let coords = |w: i64, elem: &AlgElem| -> Vec<Cyc> {
            let mut v = vec![field.zero(); dim_at(w)];
            for (m, c) in elem.terms() {
                let &(mw, col) = index.get(m).expect("monomial in basis");
                assert_eq!(mw, w, "homogeneity violated");
                v[col] = c.clone();
            }
            v
        };

        let mut e_blocks = BTreeMap::new();
        let mut f_blocks = BTreeMap::new();
        let mut lx = BTreeMap::new();
        let casimir = alg.casimir();
        for (&w, monos) in &basis {
            let mut e_cols = Vec::with_capacity(monos.len());
            let mut f_cols = Vec::with_capacity(monos.len());
            let mut x_cols = Vec::with_capacity(monos.len());
            for m in monos {
                let me = alg.monomial_elem(*m);
                e_cols.push(coords(w + 2, &alg.ad_e(&me)));
                f_cols.push(coords(w - 2, &alg.ad_f(&me)));
                x_cols.push(coords(w, &alg.mul(&casimir, &me)));
            }
            e_blocks.insert(w, Matrix::from_columns(&e_cols, dim_at(w + 2), &field));
            f_blocks.insert(w, Matrix::from_columns(&f_cols, dim_at(w - 2), &field));
            lx.insert(w, Matrix::from_columns(&x_cols, dim_at(w), &field));
        }

        let module = GradedModule::new(field, dims, e_blocks, f_blocks);
        AdjointRep {
            alg: alg.clone(),
            module,
            basis,
            index,
            lx,
        }
    }

    pub fn alg(&self) -> &Arc<SmallQG> {
        &self.alg
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn basis_at(&self, w: i64) -> &[Monomial] {
        self.basis.get(&w).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn index_of(&self, m: &Monomial) -> (i64, usize) {
        self.index[m]
    }

    /// Left multiplication by the Casimir on the weight-w space. This is an
    /// endomorphism of the adjoint module since the Casimir is central.
    pub fn lx_at(&self, w: i64) -> &Matrix {
        &self.lx[&w]
    }

    /// Coordinates of a weight-homogeneous element in the weight-w basis.
    pub fn elem_to_vec(&self, w: i64, elem: &AlgElem) -> Option<Vec<Cyc>> {
        let field = self.alg.field();
        let mut v = vec![field.zero(); self.module.dim_at(w)];
        for (m, c) in elem.terms() {
            let &(mw, col) = self.index.get(m)?;
            if mw != w {
                return None;
            }
            v[col] = c.clone();
        }
        Some(v)
    }

    pub fn vec_to_elem(&self, w: i64, v: &[Cyc]) -> AlgElem {
        let mut out = AlgElem::zero();
        for (i, c) in v.iter().enumerate() {
            out.add_term(self.basis_at(w)[i], c);
        }
        out
    }

    /// Splits an element into its homogeneous components, keyed by weight.
    pub fn elem_components(&self, elem: &AlgElem) -> BTreeMap<i64, Vec<Cyc>> {
        let field = self.alg.field();
        let mut out: BTreeMap<i64, Vec<Cyc>> = BTreeMap::new();
        for (m, c) in elem.terms() {
            let (w, col) = self.index[m];
            let v = out
                .entry(w)
                .or_insert_with(|| vec![field.zero(); self.module.dim_at(w)]);
            v[col] = c.clone();
        }
        out
    }

    /// The block of the adjoint module on which the regular Casimir action
    /// has generalized eigenvalue b_j, together with its per-weight bases.
    pub fn block_submodule(
        &self,
        block: &BlockIndex,
    ) -> (GradedModule, BTreeMap<i64, Matrix>) {
        let field = self.alg.field();
        let mut bases = BTreeMap::new();
        for &w in self.module.weights().iter() {
            let d = self.module.dim_at(w);
            let mut shifted = self.lx[&w].clone();
            for i in 0..d {
                let v = shifted.at(i, i).sub(&block.b);
                shifted.set(i, i, v);
            }
            let powered = match block.root_multiplicity {
                1 => shifted,
                _ => shifted.mul(&shifted, field),
            };
            let ker = powered.kernel(field);
            let ker = ker.transpose().row_space_basis(field).transpose();
            bases.insert(w, ker);
        }
        let sub = self
            .module
            .restrict(&bases)
            .expect("Casimir blocks are submodules");
        (sub, bases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycField, FieldConfig};

    fn adjoint(l: u64) -> AdjointRep {
        let field = CycField::new(FieldConfig::new(l)).unwrap();
        let alg = SmallQG::new(field);
        AdjointRep::new(&alg)
    }

    #[test]
    fn weight_space_dimensions() {
        for l in [3u64, 5] {
            let ad = adjoint(l);
            let li = l as i64;
            assert_eq!(ad.module().total_dim(), (l * l * l) as usize);
            for m in (1 - li)..li {
                assert_eq!(
                    ad.module().dim_at(2 * m) as i64,
                    li * (li - m.abs()),
                    "dim at weight {} for l = {l}",
                    2 * m
                );
            }
            // all weights even in [2-2l, 2l-2]
            for w in ad.module().weights() {
                assert!(w % 2 == 0 && w.abs() <= 2 * li - 2);
            }
        }
    }

    #[test]
    fn module_axioms_hold() {
        let ad = adjoint(3);
        ad.module().check_invariants().unwrap();
    }

    #[test]
    fn left_casimir_multiplication_is_an_intertwiner() {
        let ad = adjoint(3);
        let m = ad.module();
        let f = ad.alg().field().clone();
        for &w in m.weights().iter() {
            if m.dim_at(w + 2) > 0 {
                let lhs = ad.lx_at(w + 2).mul(&m.e_from(w), &f);
                let rhs = m.e_from(w).mul(ad.lx_at(w), &f);
                assert_eq!(lhs, rhs, "E compatibility at weight {w}");
            }
            if m.dim_at(w - 2) > 0 {
                let lhs = ad.lx_at(w - 2).mul(&m.f_from(w), &f);
                let rhs = m.f_from(w).mul(ad.lx_at(w), &f);
                assert_eq!(lhs, rhs, "F compatibility at weight {w}");
            }
        }
    }

    #[test]
    fn block_dimensions() {
        for l in [3u64, 5] {
            let ad = adjoint(l);
            let li = l as i64;
            let field = ad.alg().field().clone();
            let mut total = 0usize;
            for b in BlockIndex::enumerate(&field) {
                let (sub, _) = ad.block_submodule(&b);
                let expected = if b.j == -1 { li * li } else { 2 * li * li };
                assert_eq!(sub.total_dim() as i64, expected, "block {} at l = {l}", b.j);
                total += sub.total_dim();
                sub.check_invariants().unwrap();
                // per-weight dimensions: 2(l - |m|) for the doubled blocks,
                // l - |m| for the Steinberg block
                for m in (1 - li)..li {
                    let want = if b.j == -1 { li - m.abs() } else { 2 * (li - m.abs()) };
                    assert_eq!(
                        sub.dim_at(2 * m) as i64,
                        want,
                        "block {} weight {} at l = {l}",
                        b.j,
                        2 * m
                    );
                }
            }
            assert_eq!(total, (l * l * l) as usize);
        }
    }

    #[test]
    fn zero_weight_space_is_spanned_by_casimir_and_k_powers() {
        let ad = adjoint(3);
        let u = ad.alg().clone();
        let field = u.field().clone();
        let l = 3usize;
        let mut cols = Vec::new();
        let mut xa = u.unit();
        for _ in 0..l {
            for c in 0..l {
                let elem = u.mul(&xa, &u.gen_k(c as i64));
                cols.push(ad.elem_to_vec(0, &elem).expect("weight zero"));
            }
            xa = u.mul(&xa, &u.casimir());
        }
        let m = Matrix::from_columns(&cols, ad.module().dim_at(0), &field);
        assert_eq!(m.rank(&field), l * l);
    }
}
