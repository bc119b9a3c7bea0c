//! The Casimir block filtration of the adjoint representation:
//! ad_j contains M_j = Ker(X - b_j) contains N_j = ad_j intersect Im(X - b_j).

use std::collections::BTreeMap;

use crate::linalg::Matrix;
use crate::modcat::{BlockIndex, GradedModule, ModcatError, ModuleLabel};
use crate::smallqg::AdjointRep;

use super::engine::{decompose, DecompError, Decomposition};

/// The filtration data of one Casimir block of the adjoint module, with all
/// subspace bases kept in adjoint-module coordinates.
#[derive(Debug)]
pub struct BlockFiltration {
    pub block: BlockIndex,
    pub ad_j: GradedModule,
    pub ad_bases: BTreeMap<i64, Matrix>,
    pub m_j: GradedModule,
    pub m_bases: BTreeMap<i64, Matrix>,
    pub n_j: GradedModule,
    pub n_bases: BTreeMap<i64, Matrix>,
}

/// Computes the filtration for one block. For the Steinberg block the regular
/// Casimir action is already semisimple and N_(-1) is the whole block.
pub fn casimir_block_filtration(
    ad: &AdjointRep,
    block: &BlockIndex,
) -> Result<BlockFiltration, ModcatError> {
    let field = ad.alg().field().clone();
    let (ad_j, ad_bases) = ad.block_submodule(block);
    let module = ad.module();

    let mut m_bases: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut n_bases: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &w in module.weights().iter() {
        let d = module.dim_at(w);
        let mut shifted = ad.lx_at(w).clone();
        for i in 0..d {
            let v = shifted.at(i, i).sub(&block.b);
            shifted.set(i, i, v);
        }
        // M_j is the exact kernel of X - b_j; it lands inside ad_j since
        // X - b_j is invertible on every other block.
        let ker = shifted.kernel(&field);
        let ker = ker.transpose().row_space_basis(&field).transpose();
        m_bases.insert(w, ker);
        // N_j = (X - b_j)(ad_j), computed from the block basis.
        let n = if block.is_steinberg() {
            ad_bases[&w].clone()
        } else {
            shifted
                .mul(&ad_bases[&w], &field)
                .column_space_basis(&field)
        };
        n_bases.insert(w, n);
    }
    let m_j = module.restrict(&m_bases)?;
    let n_j = module.restrict(&n_bases)?;
    Ok(BlockFiltration {
        block: block.clone(),
        ad_j,
        ad_bases,
        m_j,
        m_bases,
        n_j,
        n_bases,
    })
}

impl BlockFiltration {
    /// The quotient ad_j / M_j, built inside block coordinates.
    pub fn quotient_by_m(&self) -> Result<GradedModule, ModcatError> {
        let field = self.ad_j.field().clone();
        // express the M_j basis in ad_j coordinates
        let mut sub = BTreeMap::new();
        for (&w, ad_basis) in &self.ad_bases {
            if ad_basis.cols() == 0 {
                continue;
            }
            let m_basis = &self.m_bases[&w];
            let coords = ad_basis
                .solve(m_basis, &field)
                .ok_or(ModcatError::NotASubmodule)?;
            sub.insert(w, coords);
        }
        let (quotient, _) = self.ad_j.quotient(&sub)?;
        Ok(quotient)
    }

    /// The quotient M_j / N_j.
    pub fn m_mod_n(&self) -> Result<GradedModule, ModcatError> {
        let field = self.m_j.field().clone();
        let mut sub = BTreeMap::new();
        for (&w, m_basis) in &self.m_bases {
            if m_basis.cols() == 0 {
                continue;
            }
            let n_basis = &self.n_bases[&w];
            let coords = m_basis
                .solve(n_basis, &field)
                .ok_or(ModcatError::NotASubmodule)?;
            sub.insert(w, coords);
        }
        let (quotient, _) = self.m_j.quotient(&sub)?;
        Ok(quotient)
    }
}

/// Decomposes N_j with the standard candidate family.
pub fn decompose_n_j(
    ad: &AdjointRep,
    block: &BlockIndex,
    candidates: &[(ModuleLabel, GradedModule)],
) -> Result<Decomposition, DecompError> {
    let filtration = casimir_block_filtration(ad, block).map_err(DecompError::Modcat)?;
    decompose(&filtration.n_j, candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycField, FieldConfig};
    use crate::modcat::{candidate_models, is_isomorphic};
    use crate::smallqg::SmallQG;

    fn adjoint(l: u64) -> AdjointRep {
        let field = CycField::new(FieldConfig::new(l)).unwrap();
        AdjointRep::new(&SmallQG::new(field))
    }

    #[test]
    fn filtration_dimensions() {
        for l in [3u64, 5] {
            let ad = adjoint(l);
            let field = ad.alg().field().clone();
            let li = l as i64;
            for block in BlockIndex::enumerate_h(&field) {
                let f = casimir_block_filtration(&ad, &block).unwrap();
                let (cj, cjp) = (block.cap_j, block.cap_j_prime);
                let expected_n = ((cj + 1) * (cj + 1) + (cjp + 1) * (cjp + 1)) as usize;
                assert_eq!(f.n_j.total_dim(), expected_n, "dim N_{} at l = {l}", block.j);
                assert_eq!(
                    f.ad_j.total_dim() - f.m_j.total_dim(),
                    expected_n,
                    "dim ad_j/M_j at l = {l}"
                );
                let expected_mn = (4 * (cj + 1) * (cjp + 1)) as usize;
                assert_eq!(
                    f.m_j.total_dim() - f.n_j.total_dim(),
                    expected_mn,
                    "dim M_j/N_j at l = {l}"
                );
                // N_j inside M_j inside ad_j
                assert!(f.n_j.total_dim() <= f.m_j.total_dim());
                assert!(f.m_j.total_dim() <= f.ad_j.total_dim());
                // zero-weight slices: dim ad_j^0 = 2l, dim N_j^0 = l
                assert_eq!(f.ad_j.dim_at(0) as i64, 2 * li);
                assert_eq!(f.n_j.dim_at(0) as i64, li);
                assert_eq!(f.m_j.dim_at(0), f.n_j.dim_at(0), "M_j^0 = N_j^0");
            }
            // Steinberg block: N_(-1) is everything
            let st = BlockIndex::new(&field, -1);
            let f = casimir_block_filtration(&ad, &st).unwrap();
            assert_eq!(f.n_j.total_dim(), (l * l) as usize);
            assert_eq!(f.m_j.total_dim(), (l * l) as usize);
            assert_eq!(f.n_j.dim_at(0) as i64, li);
        }
    }

    #[test]
    fn quotient_is_isomorphic_to_n() {
        let ad = adjoint(3);
        let field = ad.alg().field().clone();
        for block in BlockIndex::enumerate_h(&field) {
            let f = casimir_block_filtration(&ad, &block).unwrap();
            let q = f.quotient_by_m().unwrap();
            q.check_invariants().unwrap();
            let iso = is_isomorphic(&q, &f.n_j).unwrap();
            assert!(iso.is_some(), "ad_j/M_j = N_j fails for j = {}", block.j);
        }
    }

    #[test]
    fn n_block_decomposition_at_l3() {
        let ad = adjoint(3);
        let field = ad.alg().field().clone();
        let cands = candidate_models(&field).unwrap();
        // l = 3 has a single non-Steinberg block j = 0 with J = 0: N_0 is
        // L(0) + L(0) + the Steinberg simple
        let block = BlockIndex::new(&field, 0);
        let d = decompose_n_j(&ad, &block, &cands).unwrap();
        let expected: BTreeMap<ModuleLabel, usize> = [
            (ModuleLabel::simple(0), 2),
            (ModuleLabel::projective(2), 1),
        ]
        .into();
        assert_eq!(d.summands, expected);
    }
}
