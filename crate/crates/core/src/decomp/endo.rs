//! Endomorphism algebras, the trace-form radical, and Fitting splits.

use std::collections::BTreeMap;

use crate::linalg::Matrix;
use crate::modcat::{hom_space, GradedModule, ModcatError, ModuleMap};

/// The algebra of graded endomorphisms of a module, as a solved basis.
#[derive(Debug, Clone)]
pub struct EndAlgebra {
    pub basis: Vec<ModuleMap>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Checks that the solved span is closed under composition and contains
    /// the identity (a consistency certificate, not a construction step).
    pub fn is_closed(&self, m: &GradedModule) -> bool {
        let field = m.field();
        let id = ModuleMap::identity(m);
        if !in_span(&self.basis, &id, m) {
            return false;
        }
        for a in &self.basis {
            for b in &self.basis {
                if !in_span(&self.basis, &a.then(b, field), m) {
                    return false;
                }
            }
        }
        true
    }
}

/// Expresses maps as flat coordinate vectors to solve span membership.
fn map_coords(map: &ModuleMap, m: &GradedModule) -> Vec<crate::cyclotomic::Cyc> {
    let field = m.field();
    let mut out = Vec::new();
    for (&w, &d) in m.dims() {
        match map.block(w) {
            Some(b) => {
                for r in 0..d {
                    for c in 0..d {
                        out.push(b.at(r, c).clone());
                    }
                }
            }
            None => out.extend(std::iter::repeat(field.zero()).take(d * d)),
        }
    }
    out
}

fn in_span(basis: &[ModuleMap], target: &ModuleMap, m: &GradedModule) -> bool {
    let field = m.field();
    let cols: Vec<Vec<crate::cyclotomic::Cyc>> =
        basis.iter().map(|b| map_coords(b, m)).collect();
    let n = cols.first().map(|c| c.len()).unwrap_or(0);
    if n == 0 {
        return target.is_zero();
    }
    let a = Matrix::from_columns(&cols, n, field);
    let rhs = Matrix::from_columns(&[map_coords(target, m)], n, field);
    a.solve(&rhs, field).is_some()
}

/// Basis of End(M) via the graded Hom solver.
pub fn endomorphism_algebra(m: &GradedModule) -> EndAlgebra {
    EndAlgebra {
        basis: hom_space(m, m),
    }
}

/// Jacobson radical of End(M) as the null space of the trace form
/// (x, y) -> trace(xy); valid over a field of characteristic zero. Every
/// returned element is verified nilpotent.
pub fn radical(end: &EndAlgebra, m: &GradedModule) -> Result<Vec<ModuleMap>, ModcatError> {
    let field = m.field();
    let n = end.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut gram = Matrix::zeros(n, n, field);
    for i in 0..n {
        for j in 0..n {
            let t = end.basis[i].then(&end.basis[j], field).trace(field);
            gram.set(i, j, t);
        }
    }
    let kernel = gram.kernel(field);
    let mut out = Vec::new();
    for k in 0..kernel.cols() {
        let mut combo: Option<ModuleMap> = None;
        for i in 0..n {
            let c = kernel.at(i, k);
            if c.is_zero() {
                continue;
            }
            let scaled = end.basis[i].scale(c, field);
            combo = Some(match combo {
                None => scaled,
                Some(acc) => acc.add(&scaled),
            });
        }
        let combo = combo.unwrap_or_else(|| ModuleMap::zero(m, m));
        // nilpotency certificate
        let mut exponent = 1u64;
        while exponent < m.total_dim() as u64 {
            exponent *= 2;
        }
        if !combo.pow(exponent, field).is_zero() {
            return Err(ModcatError::InvariantViolation(
                "trace-form radical produced a non-nilpotent element".into(),
            ));
        }
        out.push(combo);
    }
    Ok(out)
}

/// A module is indecomposable exactly when End modulo its radical is
/// one-dimensional (the endomorphism ring is local).
pub fn is_indecomposable(m: &GradedModule) -> Result<bool, ModcatError> {
    let end = endomorphism_algebra(m);
    let rad = radical(&end, m)?;
    Ok(end.dim() == rad.len() + 1)
}

#[derive(Debug)]
pub enum FittingSplit {
    /// M = ker(phi^d) + im(phi^d), both nonzero and closed under the action.
    Split(GradedModule, GradedModule),
    /// phi is nilpotent or invertible.
    NoSplit,
}

/// The Fitting decomposition of M along an endomorphism.
pub fn fitting_split(m: &GradedModule, phi: &ModuleMap) -> Result<FittingSplit, ModcatError> {
    let field = m.field();
    let mut exponent = 1u64;
    while exponent < m.total_dim() as u64 {
        exponent *= 2;
    }
    let p = phi.pow(exponent, field);
    let mut ker_bases: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut im_bases: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&w, &d) in m.dims() {
        let block = p
            .block(w)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(d, d, field));
        ker_bases.insert(w, block.kernel(field));
        im_bases.insert(w, block.column_space_basis(field));
    }
    let ker_dim: usize = ker_bases.values().map(|b| b.cols()).sum();
    let im_dim: usize = im_bases.values().map(|b| b.cols()).sum();
    assert_eq!(ker_dim + im_dim, m.total_dim(), "Fitting dimensions");
    if ker_dim == 0 || im_dim == 0 {
        return Ok(FittingSplit::NoSplit);
    }
    let ker = m.restrict(&ker_bases)?;
    let im = m.restrict(&im_bases)?;
    Ok(FittingSplit::Split(ker, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycField, FieldConfig};
    use crate::modcat::{projective, simple};
    use std::sync::Arc;

    fn field(l: u64) -> Arc<CycField> {
        CycField::new(FieldConfig::new(l)).unwrap()
    }

    #[test]
    fn schur_and_matrix_algebra_dimensions() {
        let f = field(3);
        assert_eq!(endomorphism_algebra(&simple(&f, 2)).dim(), 1);
        let double = simple(&f, 0).direct_sum(&simple(&f, 0));
        assert_eq!(endomorphism_algebra(&double).dim(), 4);
        let p = projective(&f, 0).unwrap();
        assert_eq!(endomorphism_algebra(&p).dim(), 2);
    }

    #[test]
    fn end_algebra_is_closed() {
        let f = field(3);
        let p = projective(&f, 0).unwrap();
        let end = endomorphism_algebra(&p);
        assert!(end.is_closed(&p));
    }

    #[test]
    fn radicals() {
        let f = field(3);
        // simple: trivial radical
        let s = simple(&f, 4);
        let end = endomorphism_algebra(&s);
        assert!(radical(&end, &s).unwrap().is_empty());
        // projective: one-dimensional radical at l = 3
        let p = projective(&f, 0).unwrap();
        let end = endomorphism_algebra(&p);
        assert_eq!(radical(&end, &p).unwrap().len(), 1);
        // semisimple sum: zero radical
        let sum = simple(&f, 0).direct_sum(&simple(&f, 4));
        let end = endomorphism_algebra(&sum);
        assert!(radical(&end, &sum).unwrap().is_empty());
    }

    #[test]
    fn indecomposability() {
        let f = field(3);
        assert!(is_indecomposable(&simple(&f, 0)).unwrap());
        assert!(is_indecomposable(&projective(&f, 0).unwrap()).unwrap());
        let double = simple(&f, 0).direct_sum(&simple(&f, 0));
        assert!(!is_indecomposable(&double).unwrap());
    }

    #[test]
    fn fitting_behavior() {
        let f = field(3);
        let s0 = simple(&f, 0);
        let s4 = simple(&f, 4);
        let sum = s0.direct_sum(&s4);
        // identity: invertible, no split
        let id = ModuleMap::identity(&sum);
        assert!(matches!(
            fitting_split(&sum, &id).unwrap(),
            FittingSplit::NoSplit
        ));
        // projection onto the first summand splits off the factors
        let end = endomorphism_algebra(&sum);
        let mut found_split = false;
        for e in &end.basis {
            if let FittingSplit::Split(a, b) = fitting_split(&sum, e).unwrap() {
                found_split = true;
                assert_eq!(a.total_dim() + b.total_dim(), sum.total_dim());
            }
        }
        assert!(found_split);
        // radical elements of End(P(0)) are nilpotent: no split
        let p = projective(&f, 0).unwrap();
        let end = endomorphism_algebra(&p);
        for r in radical(&end, &p).unwrap() {
            assert!(matches!(
                fitting_split(&p, &r).unwrap(),
                FittingSplit::NoSplit
            ));
        }
    }
}
