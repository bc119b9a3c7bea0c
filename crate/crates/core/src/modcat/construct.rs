//! Verma, simple and projective module constructions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cyclotomic::{Cyc, CycField};
use crate::linalg::{sparse_kernel, Matrix, SparseRow};

use super::module::{GradedModule, ModcatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VermaDirection {
    /// Highest-weight variant: generator at the top, F moves down the basis.
    Lowering,
    /// Lowest-weight variant: generator at the bottom, E moves up the basis.
    Raising,
}

/// The l-dimensional Verma module with generator of weight lambda.
pub fn verma(field: &Arc<CycField>, lambda: i64, direction: VermaDirection) -> GradedModule {
    let l = field.l() as i64;
    let mut dims = BTreeMap::new();
    let mut e_blocks = BTreeMap::new();
    let mut f_blocks = BTreeMap::new();
    let weight = |i: i64| match direction {
        VermaDirection::Lowering => lambda - 2 * i,
        VermaDirection::Raising => lambda + 2 * i,
    };
    for i in 0..l {
        dims.insert(weight(i), 1usize);
    }
    for i in 0..l {
        let w = weight(i);
        match direction {
            VermaDirection::Lowering => {
                // F v_i = v_{i+1}; E v_i = (i)_q (lambda - i + 1)_q v_{i-1}
                let f = if i + 1 < l {
                    Matrix::from_fn(1, 1, field, |_, _| field.one())
                } else {
                    Matrix::zeros(0, 1, field)
                };
                f_blocks.insert(w, f);
                let e = if i >= 1 {
                    let c = field.mul(&field.qint(i), &field.qint(lambda - i + 1));
                    Matrix::from_fn(1, 1, field, |_, _| c.clone())
                } else {
                    Matrix::zeros(0, 1, field)
                };
                e_blocks.insert(w, e);
            }
            VermaDirection::Raising => {
                // E v_i = v_{i+1}; F v_i = (i)_q (-lambda - i + 1)_q v_{i-1}
                let e = if i + 1 < l {
                    Matrix::from_fn(1, 1, field, |_, _| field.one())
                } else {
                    Matrix::zeros(0, 1, field)
                };
                e_blocks.insert(w, e);
                let f = if i >= 1 {
                    let c = field.mul(&field.qint(i), &field.qint(-lambda - i + 1));
                    Matrix::from_fn(1, 1, field, |_, _| c.clone())
                } else {
                    Matrix::zeros(0, 1, field)
                };
                f_blocks.insert(w, f);
            }
        }
    }
    GradedModule::new(field.clone(), dims, e_blocks, f_blocks)
}

/// The simple module with highest weight lambda; its dimension is
/// (lambda mod l) + 1.
pub fn simple(field: &Arc<CycField>, lambda: i64) -> GradedModule {
    let l = field.l() as i64;
    let n = lambda.rem_euclid(l);
    let mut dims = BTreeMap::new();
    let mut e_blocks = BTreeMap::new();
    let mut f_blocks = BTreeMap::new();
    for i in 0..=n {
        dims.insert(lambda - 2 * i, 1usize);
    }
    for i in 0..=n {
        let w = lambda - 2 * i;
        let f = if i < n {
            Matrix::from_fn(1, 1, field, |_, _| field.one())
        } else {
            Matrix::zeros(0, 1, field)
        };
        f_blocks.insert(w, f);
        let e = if i >= 1 {
            let c = field.mul(&field.qint(i), &field.qint(lambda - i + 1));
            Matrix::from_fn(1, 1, field, |_, _| c.clone())
        } else {
            Matrix::zeros(0, 1, field)
        };
        e_blocks.insert(w, e);
    }
    GradedModule::new(field.clone(), dims, e_blocks, f_blocks)
}

/// The projective cover of the simple with highest weight lambda.
///
/// For lambda = -1 mod l the block is semisimple and the projective cover is
/// the Steinberg simple itself. Otherwise the module is built as a non-split
/// extension with the Verma of weight lambda as quotient and the Verma of
/// weight lambda + 2(l - 1 - lambda mod l) as submodule; the certificate that
/// the result is the projective cover is that the Casimir acts
/// non-semisimply on it (together with dimension 2l).
pub fn projective(field: &Arc<CycField>, lambda: i64) -> Result<GradedModule, ModcatError> {
    let l = field.l() as i64;
    let lambda0 = lambda.rem_euclid(l);
    if lambda0 == l - 1 {
        return Ok(simple(field, lambda));
    }
    let quotient = verma(field, lambda, VermaDirection::Lowering);
    let sub = verma(
        field,
        lambda + 2 * (l - 1 - lambda0),
        VermaDirection::Lowering,
    );

    let weights: std::collections::BTreeSet<i64> = sub
        .dims()
        .keys()
        .chain(quotient.dims().keys())
        .copied()
        .collect();

    // Unknowns: per quotient weight w, the connecting blocks
    //   phi_E(w): sub_{w+2} x quot_w  and  phi_F(w): sub_{w-2} x quot_w.
    let mut offsets: BTreeMap<(bool, i64), usize> = BTreeMap::new();
    let mut nvars = 0usize;
    for (&w, &dq) in quotient.dims() {
        let up = sub.dim_at(w + 2);
        if up * dq > 0 {
            offsets.insert((true, w), nvars);
            nvars += up * dq;
        }
        let down = sub.dim_at(w - 2);
        if down * dq > 0 {
            offsets.insert((false, w), nvars);
            nvars += down * dq;
        }
    }
    let var = |is_e: bool, w: i64, r: usize, c: usize, cols: usize| -> Option<usize> {
        offsets.get(&(is_e, w)).map(|off| off + r * cols + c)
    };

    let mut rows: Vec<SparseRow> = Vec::new();
    // Commutator condition, off-diagonal block at each weight w:
    //   E_B(w-2) phi_F(w) + phi_E(w-2) F_A(w)
    //   - F_B(w+2) phi_E(w) - phi_F(w+2) E_A(w) = 0
    for &w in &weights {
        let dq = quotient.dim_at(w);
        let ds = sub.dim_at(w);
        if dq == 0 || ds == 0 {
            continue;
        }
        let eb = sub.e_from(w - 2);
        let fb = sub.f_from(w + 2);
        let fa = quotient.f_from(w);
        let ea = quotient.e_from(w);
        for r in 0..ds {
            for c in 0..dq {
                let mut row: SparseRow = Vec::new();
                // E_B(w-2)[r][j] * phi_F(w)[j][c]
                for j in 0..sub.dim_at(w - 2) {
                    if let Some(v) = var(false, w, j, c, dq) {
                        if !eb.at(r, j).is_zero() {
                            row.push((v, eb.at(r, j).clone()));
                        }
                    }
                }
                // phi_E(w-2)[r][j] * F_A(w)[j][c]
                for j in 0..quotient.dim_at(w - 2) {
                    if let Some(v) = var(true, w - 2, r, j, quotient.dim_at(w - 2)) {
                        if !fa.at(j, c).is_zero() {
                            row.push((v, fa.at(j, c).clone()));
                        }
                    }
                }
                // - F_B(w+2)[r][j] * phi_E(w)[j][c]
                for j in 0..sub.dim_at(w + 2) {
                    if let Some(v) = var(true, w, j, c, dq) {
                        if !fb.at(r, j).is_zero() {
                            row.push((v, fb.at(r, j).neg()));
                        }
                    }
                }
                // - phi_F(w+2)[r][j] * E_A(w)[j][c]
                for j in 0..quotient.dim_at(w + 2) {
                    if let Some(v) = var(false, w + 2, r, j, quotient.dim_at(w + 2)) {
                        if !ea.at(j, c).is_zero() {
                            row.push((v, ea.at(j, c).neg()));
                        }
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    // Nilpotency of the raising and lowering operators on the extension: the
    // off-diagonal block of the l-th power must vanish. The block is
    //   sum_t  B-chain(w + 2(t+1), l-1-t) . phi(w + 2t) . A-chain(w, t).
    for &raising in &[true, false] {
        let step: i64 = if raising { 2 } else { -2 };
        for &w in &weights {
            let dq = quotient.dim_at(w);
            let target = sub.dim_at(w + step * l);
            if dq == 0 || target == 0 {
                continue;
            }
            for r in 0..target {
                for c in 0..dq {
                    let mut row: SparseRow = Vec::new();
                    for t in 0..l {
                        let wt = w + step * t;
                        let dq_t = quotient.dim_at(wt);
                        let ds_t = sub.dim_at(wt + step);
                        if dq_t == 0 || ds_t == 0 {
                            continue;
                        }
                        let before = chain(&quotient, w, step, t);
                        let after = chain(&sub, wt + step, step, (l - 1 - t) as i64);
                        for j in 0..ds_t {
                            for k in 0..dq_t {
                                let coeff = field.mul(after.at(r, j), before.at(k, c));
                                if coeff.is_zero() {
                                    continue;
                                }
                                if let Some(v) = var(raising, wt, j, k, dq_t) {
                                    row.push((v, coeff));
                                }
                            }
                        }
                    }
                    if !row.is_empty() {
                        rows.push(merge_terms(row, field));
                    }
                }
            }
        }
    }

    let solutions = sparse_kernel(rows, nvars, field);
    for sol in &solutions {
        let candidate = assemble_extension(field, &sub, &quotient, &offsets, sol);
        if extension_casimir_nonsemisimple(field, &sub, &quotient, &offsets, sol) {
            candidate
                .check_invariants()
                .map_err(|e| ModcatError::ConstructionFailed(e.to_string()))?;
            return Ok(candidate);
        }
    }
    Err(ModcatError::ConstructionFailed(format!(
        "no extension with non-semisimple Casimir found for weight {lambda}"
    )))
}

/// Composition of `count` operator blocks starting at weight w.
fn chain(m: &GradedModule, w: i64, step: i64, count: i64) -> Matrix {
    let field = m.field();
    let mut acc = Matrix::identity(m.dim_at(w), field);
    let mut cur = w;
    for _ in 0..count {
        let block = if step > 0 { m.e_from(cur) } else { m.f_from(cur) };
        acc = block.mul(&acc, field);
        cur += step;
        if acc.rows() == 0 {
            return Matrix::zeros(m.dim_at(w + step * count), m.dim_at(w), field);
        }
    }
    acc
}

fn merge_terms(row: SparseRow, field: &CycField) -> SparseRow {
    let mut merged: BTreeMap<usize, Cyc> = BTreeMap::new();
    for (c, v) in row {
        let entry = merged.entry(c).or_insert_with(|| field.zero());
        *entry = entry.add(&v);
    }
    merged.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn phi_block(
    field: &Arc<CycField>,
    sub: &GradedModule,
    quotient: &GradedModule,
    offsets: &BTreeMap<(bool, i64), usize>,
    sol: &[Cyc],
    is_e: bool,
    w: i64,
) -> Matrix {
    let rows = sub.dim_at(if is_e { w + 2 } else { w - 2 });
    let cols = quotient.dim_at(w);
    let mut m = Matrix::zeros(rows, cols, field);
    if let Some(&off) = offsets.get(&(is_e, w)) {
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, sol[off + r * cols + c].clone());
            }
        }
    }
    m
}

fn assemble_extension(
    field: &Arc<CycField>,
    sub: &GradedModule,
    quotient: &GradedModule,
    offsets: &BTreeMap<(bool, i64), usize>,
    sol: &[Cyc],
) -> GradedModule {
    let weights: std::collections::BTreeSet<i64> = sub
        .dims()
        .keys()
        .chain(quotient.dims().keys())
        .copied()
        .collect();
    let mut dims = BTreeMap::new();
    for &w in &weights {
        dims.insert(w, sub.dim_at(w) + quotient.dim_at(w));
    }
    let mut e_blocks = BTreeMap::new();
    let mut f_blocks = BTreeMap::new();
    for &w in &weights {
        for &is_e in &[true, false] {
            let step: i64 = if is_e { 2 } else { -2 };
            let b_block = if is_e { sub.e_from(w) } else { sub.f_from(w) };
            let a_block = if is_e {
                quotient.e_from(w)
            } else {
                quotient.f_from(w)
            };
            let conn = phi_block(field, sub, quotient, offsets, sol, is_e, w);
            let rows = sub.dim_at(w + step) + quotient.dim_at(w + step);
            let cols = sub.dim_at(w) + quotient.dim_at(w);
            let mut m = Matrix::zeros(rows, cols, field);
            for r in 0..b_block.rows() {
                for c in 0..b_block.cols() {
                    m.set(r, c, b_block.at(r, c).clone());
                }
            }
            for r in 0..conn.rows() {
                for c in 0..conn.cols() {
                    m.set(r, sub.dim_at(w) + c, conn.at(r, c).clone());
                }
            }
            for r in 0..a_block.rows() {
                for c in 0..a_block.cols() {
                    m.set(
                        sub.dim_at(w + step) + r,
                        sub.dim_at(w) + c,
                        a_block.at(r, c).clone(),
                    );
                }
            }
            if is_e {
                e_blocks.insert(w, m);
            } else {
                f_blocks.insert(w, m);
            }
        }
    }
    GradedModule::new(field.clone(), dims, e_blocks, f_blocks)
}

/// The Casimir acts non-semisimply on the extension exactly when the
/// off-diagonal block E_B(w-2) phi_F(w) + phi_E(w-2) F_A(w) is nonzero for
/// some weight w.
fn extension_casimir_nonsemisimple(
    field: &Arc<CycField>,
    sub: &GradedModule,
    quotient: &GradedModule,
    offsets: &BTreeMap<(bool, i64), usize>,
    sol: &[Cyc],
) -> bool {
    for &w in quotient.dims().keys() {
        let dq = quotient.dim_at(w);
        let ds = sub.dim_at(w);
        if dq == 0 || ds == 0 {
            continue;
        }
        let part1 = sub
            .e_from(w - 2)
            .mul(&phi_block(field, sub, quotient, offsets, sol, false, w), field);
        let part2 = phi_block(field, sub, quotient, offsets, sol, true, w - 2)
            .mul(&quotient.f_from(w), field);
        if !part1.add(&part2).is_zero() {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelKind {
    Projective,
    Simple,
}

/// A named indecomposable: the simple L(weight) or its projective cover
/// P(weight). The Steinberg module is always labeled P(l-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleLabel {
    pub kind: LabelKind,
    pub weight: i64,
}

impl ModuleLabel {
    pub fn simple(weight: i64) -> ModuleLabel {
        ModuleLabel {
            kind: LabelKind::Simple,
            weight,
        }
    }

    pub fn projective(weight: i64) -> ModuleLabel {
        ModuleLabel {
            kind: LabelKind::Projective,
            weight,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self.kind {
            LabelKind::Projective => "P",
            LabelKind::Simple => "L",
        }
    }

    /// Steinberg-aware normal form: L(w) with w = -1 mod l is the same module
    /// as P(w), and is always reported as P(w).
    pub fn canonical(self, l: i64) -> ModuleLabel {
        if self.kind == LabelKind::Simple && self.weight.rem_euclid(l) == l - 1 {
            ModuleLabel::projective(self.weight)
        } else {
            self
        }
    }

    pub fn model(&self, field: &Arc<CycField>) -> Result<GradedModule, ModcatError> {
        match self.kind {
            LabelKind::Simple => Ok(simple(field, self.weight)),
            LabelKind::Projective => projective(field, self.weight),
        }
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind_str(), self.weight)
    }
}

/// The complete candidate family for decomposing the adjoint representation
/// and its pieces: projective covers P(k) for even k in [0, l-1] and simples
/// L(k) for even k in [1-l, 2l-2] (the Steinberg simple appears as P(l-1)).
/// Ordered for peeling: projectives before simples, larger dimension first.
pub fn candidate_models(
    field: &Arc<CycField>,
) -> Result<Vec<(ModuleLabel, GradedModule)>, ModcatError> {
    let l = field.l() as i64;
    let mut out = Vec::new();
    let mut k = 0;
    while k <= l - 3 {
        out.push((ModuleLabel::projective(k), projective(field, k)?));
        k += 2;
    }
    out.push((ModuleLabel::projective(l - 1), projective(field, l - 1)?));
    let mut simples: Vec<i64> = ((1 - l)..=(2 * l - 2))
        .filter(|w| w % 2 == 0 && w.rem_euclid(l) != l - 1)
        .collect();
    simples.sort_by_key(|w| (-(w.rem_euclid(l)), *w));
    for w in simples {
        out.push((ModuleLabel::simple(w), simple(field, w)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::FieldConfig;
    use crate::modcat::{composition_multiplicities, graded_character};

    fn field(l: u64) -> Arc<CycField> {
        CycField::new(FieldConfig::new(l)).unwrap()
    }

    #[test]
    fn verma_shapes_and_invariants() {
        for l in [3u64, 5, 7] {
            let f = field(l);
            for lambda in [-3i64, 0, 1, 4, 7] {
                let m = verma(&f, lambda, VermaDirection::Lowering);
                assert_eq!(m.total_dim(), l as usize);
                m.check_invariants().unwrap();
                let p = verma(&f, lambda, VermaDirection::Raising);
                assert_eq!(p.total_dim(), l as usize);
                p.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn verma_highest_weight_vector_is_singular() {
        let f = field(3);
        let m = verma(&f, 0, VermaDirection::Lowering);
        // E kills the generator at the top weight
        assert!(m.e_from(0).is_zero());
        // v_1 at weight -2 is singular as well: E v_1 = (1)_q (0)_q v_0 = 0
        assert!(m.e_from(-2).is_zero());
    }

    #[test]
    fn simple_dimensions() {
        let f = field(3);
        assert_eq!(simple(&f, 2).total_dim(), 3); // Steinberg
        assert_eq!(simple(&f, 0).total_dim(), 1);
        let s4 = simple(&f, 4);
        assert_eq!(s4.total_dim(), 2);
        assert_eq!(s4.weights(), vec![2, 4]);
        for l in [3u64, 5, 7] {
            let f = field(l);
            assert_eq!(simple(&f, l as i64 - 1).total_dim(), l as usize);
            for lambda in (1 - l as i64)..=(2 * l as i64 - 2) {
                simple(&f, lambda).check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn simple_is_simple_every_vector_generates() {
        // every weight vector of L(lambda) generates: since each weight space
        // is one-dimensional it suffices that consecutive E/F blocks are
        // nonzero inside the support
        let f = field(5);
        let s = simple(&f, 7); // dim 3, weights 7,5,3
        for w in [5i64, 3] {
            assert!(!s.e_from(w).is_zero(), "E vanishes at {w}");
        }
        for w in [7i64, 5] {
            assert!(!s.f_from(w).is_zero(), "F vanishes at {w}");
        }
    }

    #[test]
    fn projective_construction() {
        for l in [3u64, 5] {
            let f = field(l);
            let li = l as i64;
            for k in (0..li - 1).step_by(2) {
                let p = projective(&f, k).unwrap();
                assert_eq!(p.total_dim(), 2 * l as usize, "dim P({k}) at l = {l}");
                p.check_invariants().unwrap();
                // Casimir is non-semisimple: (X - b)^2 = 0 but X - b != 0
                let b = f.casimir_root(k);
                let mut nonzero = false;
                for &w in p.weights().iter() {
                    let mut x = p.casimir_at(w);
                    for i in 0..p.dim_at(w) {
                        let v = x.at(i, i).sub(&b);
                        x.set(i, i, v);
                    }
                    if !x.is_zero() {
                        nonzero = true;
                    }
                    assert!(x.mul(&x, &f).is_zero(), "(X-b)^2 != 0 on P({k})");
                }
                assert!(nonzero, "Casimir acts semisimply on P({k})");
            }
            // Steinberg block: P(l-1) = L(l-1)
            let st = projective(&f, li - 1).unwrap();
            assert_eq!(st.total_dim(), l as usize);
        }
    }

    #[test]
    fn projective_composition_factors_at_l3() {
        let f = field(3);
        let p = projective(&f, 0).unwrap();
        let mults = composition_multiplicities(&p).unwrap();
        let expected: BTreeMap<i64, usize> = [(0i64, 2usize), (-2, 1), (4, 1)].into();
        assert_eq!(mults, expected);
    }

    #[test]
    fn projective_composition_factors_at_l5() {
        let f = field(5);
        let p = projective(&f, 0).unwrap();
        let mults = composition_multiplicities(&p).unwrap();
        let expected: BTreeMap<i64, usize> = [(0i64, 2usize), (-2, 1), (8, 1)].into();
        assert_eq!(mults, expected);
    }

    #[test]
    fn grading_shift_functoriality() {
        let f = field(5);
        for lambda in [0i64, 2, 4] {
            let base = graded_character(&simple(&f, lambda));
            let shifted = graded_character(&simple(&f, lambda + 10));
            let reshift: BTreeMap<i64, usize> =
                base.into_iter().map(|(w, d)| (w + 10, d)).collect();
            assert_eq!(shifted, reshift);
            let base = graded_character(&projective(&f, lambda).unwrap());
            let shifted = graded_character(&projective(&f, lambda + 10).unwrap());
            let reshift: BTreeMap<i64, usize> =
                base.into_iter().map(|(w, d)| (w + 10, d)).collect();
            assert_eq!(shifted, reshift);
        }
    }

    #[test]
    fn candidate_family_order() {
        let f = field(5);
        let cands = candidate_models(&f).unwrap();
        let labels: Vec<String> = cands.iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(
            labels,
            vec![
                "P(0)", "P(2)", "P(4)", "L(-2)", "L(8)", "L(2)", "L(-4)", "L(6)", "L(0)"
            ]
        );
        // dimensions are non-increasing within each kind
        let dims: Vec<usize> = cands.iter().map(|(_, m)| m.total_dim()).collect();
        assert_eq!(dims, vec![10, 10, 5, 4, 4, 3, 2, 2, 1]);
    }
}
