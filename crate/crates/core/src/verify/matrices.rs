//! The explicit zero-weight matrices and their cross-validation against the
//! generic adjoint machinery.
//!
//! On the zero-weight slice of a Casimir block, the Casimir's adjoint action
//! is lower triangular in the natural projected K-power basis. The displayed
//! closed forms below use the alternating-sign normalization of that basis
//! (basis vector i carries sign (-1)^(i-1)); the machinery matrices are
//! computed in the same normalization so the comparison is entrywise.

use crate::cyclotomic::{Cyc, CycField, CycError, Sign};
use crate::linalg::Matrix;
use crate::modcat::BlockIndex;
use crate::smallqg::{AdjointRep, AlgElem};

/// The l x l lower-triangular matrix of the Casimir adjoint action on the
/// zero-weight slice of the image of X - b_j (respectively the whole
/// zero-weight block slice when j = -1): diagonal b_0, b_2, ..., b_(2l-2),
/// first subdiagonal (q^i - q^-i)^2 b_j, second subdiagonal (i)_q (i+1)_q.
pub fn build_a(field: &CycField, block: &BlockIndex) -> Matrix {
    let l = field.l() as usize;
    let mut m = Matrix::zeros(l, l, field);
    for i in 1..=l {
        m.set(i - 1, i - 1, field.casimir_root(2 * i as i64 - 2));
        if i + 1 <= l {
            let d = field.q_pow(i as i64).sub(&field.q_pow(-(i as i64)));
            let beta = field.mul(&field.mul(&d, &d), &block.b);
            m.set(i, i - 1, beta);
        }
        if i + 2 <= l {
            let gamma = field.mul(&field.qint(i as i64), &field.qint(i as i64 + 1));
            m.set(i + 1, i - 1, gamma);
        }
    }
    m
}

/// The nilpotent coupling block of the doubled zero-weight matrix: first
/// subdiagonal -(q^i - q^-i)^2.
fn build_b(field: &CycField) -> Matrix {
    let l = field.l() as usize;
    let mut m = Matrix::zeros(l, l, field);
    for i in 1..l {
        let d = field.q_pow(i as i64).sub(&field.q_pow(-(i as i64)));
        m.set(i, i - 1, field.mul(&d, &d).neg());
    }
    m
}

/// The 2l x 2l block matrix [[A, 0], [B, A]] of the Casimir adjoint action on
/// the full zero-weight slice of a doubled block.
pub fn build_aprime(field: &CycField, block: &BlockIndex) -> Matrix {
    let l = field.l() as usize;
    let a = build_a(field, block);
    let b = build_b(field);
    let mut m = Matrix::zeros(2 * l, 2 * l, field);
    for r in 0..l {
        for c in 0..l {
            m.set(r, c, a.at(r, c).clone());
            m.set(l + r, l + c, a.at(r, c).clone());
            m.set(l + r, c, b.at(r, c).clone());
        }
    }
    m
}

/// The tridiagonal eigenvector window of size (l-1-k) sitting between the two
/// diagonal occurrences of b_k in the triangular matrix: diagonal
/// (q^(k/2+t) - q^-(k/2+t))^2 b_j, superdiagonal b_(k+2t) - b_k, subdiagonal
/// (k/2+t)_q (k/2+t+1)_q.
pub fn build_d(field: &CycField, block: &BlockIndex, k: i64) -> Matrix {
    let l = field.l() as i64;
    assert!(k % 2 == 0 && k >= 0 && k < l - 1, "need even k in [0, l-1)");
    let n = (l - 1 - k) as usize;
    let mut m = Matrix::zeros(n, n, field);
    for t in 1..=n as i64 {
        let d = field.q_pow(k / 2 + t).sub(&field.q_pow(-(k / 2 + t)));
        m.set(
            (t - 1) as usize,
            (t - 1) as usize,
            field.mul(&field.mul(&d, &d), &block.b),
        );
    }
    for t in 1..n as i64 {
        // superdiagonal: b_(k+2t) - b_k
        let sup = field.casimir_root(k + 2 * t).sub(&field.casimir_root(k));
        m.set((t - 1) as usize, t as usize, sup);
        // subdiagonal: (k/2+t)_q (k/2+t+1)_q
        let sub = field.mul(&field.qint(k / 2 + t), &field.qint(k / 2 + t + 1));
        m.set(t as usize, (t - 1) as usize, sub);
    }
    m
}

/// Determinant data of the eigenvector window, with its certificate that the
/// determinant is a polynomial in b_j^2 of degree (l-1-k)/2.
#[derive(Debug, Clone)]
pub struct DetWindow {
    /// det D(j, k), exact.
    pub value: Cyc,
    /// Coefficients of det D(., k) as a polynomial in the block root b.
    pub poly_in_b: Vec<Cyc>,
    /// Only even powers of b occur.
    pub even_in_b: bool,
    /// Degree as a polynomial in b^2.
    pub degree_in_b_squared: usize,
}

/// Computes det D(j, k) twice: directly at b = b_j and symbolically as a
/// polynomial in b (via the tridiagonal determinant recurrence), returning
/// the degree certificate along with the value.
pub fn det_window(field: &CycField, block: &BlockIndex, k: i64) -> DetWindow {
    let l = field.l() as i64;
    let n = (l - 1 - k) as usize;
    // entries as linear polynomials in b
    let diag: Vec<Cyc> = (1..=n as i64)
        .map(|t| {
            let d = field.q_pow(k / 2 + t).sub(&field.q_pow(-(k / 2 + t)));
            field.mul(&d, &d)
        })
        .collect();
    let sup: Vec<Cyc> = (1..n as i64)
        .map(|t| field.casimir_root(k + 2 * t).sub(&field.casimir_root(k)))
        .collect();
    let sub: Vec<Cyc> = (1..n as i64)
        .map(|t| field.mul(&field.qint(k / 2 + t), &field.qint(k / 2 + t + 1)))
        .collect();
    // D_t = diag_t * b * D_(t-1) - sup_(t-1) * sub_(t-1) * D_(t-2)
    let mut prev: Vec<Cyc> = vec![field.one()]; // D_0 = 1
    let mut cur: Vec<Cyc> = if n == 0 {
        prev.clone()
    } else {
        vec![field.zero(), diag[0].clone()] // D_1 = diag_1 * b
    };
    for t in 2..=n {
        let mut next = vec![field.zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = field.mul(c, &diag[t - 1]);
        }
        let off = field.mul(&sup[t - 2], &sub[t - 2]);
        for (i, c) in prev.iter().enumerate() {
            next[i] = next[i].sub(&field.mul(c, &off));
        }
        prev = cur;
        cur = next;
    }
    let poly = cur;
    let even_in_b = poly
        .iter()
        .enumerate()
        .all(|(i, c)| i % 2 == 0 || c.is_zero());
    let degree = poly.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    // evaluate at b_j
    let mut value = field.zero();
    for c in poly.iter().rev() {
        value = field.mul(&value, &block.b).add(c);
    }
    DetWindow {
        value,
        poly_in_b: poly,
        even_in_b,
        degree_in_b_squared: degree / 2,
    }
}

/// The Casimir adjoint action on the alternating-sign basis
/// (-1)^(i-1) (X - b_j) pr_j K^i (or (-1)^(i-1) pr_(-1) K^i for the Steinberg
/// block), computed entirely through the generic machinery. Also certifies
/// that these vectors really form a basis of the slice they span.
pub fn machinery_a_matrix(ad: &AdjointRep, block: &BlockIndex) -> Result<Matrix, String> {
    let basis = signed_slice_basis(ad, block, true);
    matrix_of_casimir_action(ad, &basis)
}

/// The Casimir adjoint action on the 2l-dimensional zero-weight slice of a
/// doubled block, on the alternating-sign basis
/// (-1)^(i-1) pr_j K^i, followed by (-1)^i (X - b_j) pr_j K^i.
pub fn machinery_aprime_matrix(ad: &AdjointRep, block: &BlockIndex) -> Result<Matrix, String> {
    assert!(!block.is_steinberg(), "the doubled slice needs j in H");
    let alg = ad.alg();
    let field = alg.field().clone();
    let proj = &alg.block_projector(block).elem;
    let mut vectors = Vec::new();
    let mut sign = field.one();
    for i in 1..=alg.l() as i64 {
        vectors.push(alg.mul(proj, &alg.gen_k(i)).scale(&sign, &field));
        sign = sign.neg();
    }
    let shifted_proj = alg
        .mul(&alg.casimir(), proj)
        .sub(&proj.scale(&block.b, &field));
    let mut sign = field.one().neg();
    for i in 1..=alg.l() as i64 {
        vectors.push(alg.mul(&shifted_proj, &alg.gen_k(i)).scale(&sign, &field));
        sign = sign.neg();
    }
    matrix_of_casimir_action(ad, &vectors)
}

fn signed_slice_basis(ad: &AdjointRep, block: &BlockIndex, shifted: bool) -> Vec<AlgElem> {
    let alg = ad.alg();
    let field = alg.field().clone();
    let proj = &alg.block_projector(block).elem;
    let base = if shifted && !block.is_steinberg() {
        alg.mul(&alg.casimir(), proj)
            .sub(&proj.scale(&block.b, &field))
    } else {
        proj.clone()
    };
    let mut out = Vec::new();
    let mut sign = field.one();
    for i in 1..=alg.l() as i64 {
        out.push(alg.mul(&base, &alg.gen_k(i)).scale(&sign, &field));
        sign = sign.neg();
    }
    out
}

/// Expresses ad(X) on the span of the given weight-zero elements; fails when
/// they are dependent or the span is not stable, both of which would falsify
/// the basis claim being cross-validated.
fn matrix_of_casimir_action(ad: &AdjointRep, vectors: &[AlgElem]) -> Result<Matrix, String> {
    let alg = ad.alg();
    let field = alg.field().clone();
    let dim0 = ad.module().dim_at(0);
    let cols: Vec<Vec<Cyc>> = vectors
        .iter()
        .map(|v| {
            ad.elem_to_vec(0, v)
                .ok_or_else(|| "slice vector is not of weight zero".to_string())
        })
        .collect::<Result<_, _>>()?;
    let basis = Matrix::from_columns(&cols, dim0, &field);
    if basis.rank(&field) != vectors.len() {
        return Err("slice vectors are linearly dependent".into());
    }
    let images: Vec<Vec<Cyc>> = vectors
        .iter()
        .map(|v| {
            ad.elem_to_vec(0, &alg.ad_casimir(v))
                .ok_or_else(|| "image is not of weight zero".to_string())
        })
        .collect::<Result<_, _>>()?;
    let rhs = Matrix::from_columns(&images, dim0, &field);
    basis
        .solve(&rhs, &field)
        .ok_or_else(|| "the slice is not stable under the Casimir action".into())
}

/// Exact corank of A'(j) - b_k, together with the verified sign conditions
/// that make the tridiagonal window semisimple when k <= 2J: at the
/// embedding sending q to exp(i pi (l+1)/l), every off-diagonal entry of
/// D(j, k) is negative and the basis rescaling factors -(q^i - q^-i)^2 are
/// positive.
pub fn corank_check(
    ad: &AdjointRep,
    block: &BlockIndex,
    k: i64,
    precision_bits: u32,
) -> Result<usize, CycError> {
    let alg = ad.alg();
    let field = alg.field().clone();
    let l = field.l() as i64;
    assert!(k % 2 == 0 && (0..l).contains(&k));
    let aprime = build_aprime(&field, block);
    let bk = field.casimir_root(k);
    let mut shifted = aprime;
    for i in 0..2 * l as usize {
        let v = shifted.at(i, i).sub(&bk);
        shifted.set(i, i, v);
    }
    let corank = 2 * l as usize - shifted.rank(&field);

    if k <= 2 * block.cap_j && k < l - 1 {
        let e = field.sign_lemma_exponent();
        // rescaling factors -(q^i - q^-i)^2 are positive
        for i in 1..l {
            let d = field.q_pow(i).sub(&field.q_pow(-i));
            let neg_sq = field.mul(&d, &d).neg();
            if field.embed_real_sign(&neg_sq, e, precision_bits)? != Sign::Positive {
                return Err(CycError::SignInconclusive { retries: 0 });
            }
        }
        // off-diagonal entries of the window are negative
        let d = build_d(&field, block, k);
        for t in 0..d.rows() {
            for s in 0..d.cols() {
                if t == s || d.at(t, s).is_zero() {
                    continue;
                }
                if t.abs_diff(s) == 1
                    && field.embed_real_sign(d.at(t, s), e, precision_bits)? != Sign::Negative
                {
                    return Err(CycError::SignInconclusive { retries: 0 });
                }
            }
        }
    }
    Ok(corank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{FieldConfig, Rat};
    use crate::smallqg::SmallQG;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn field(l: u64) -> Arc<CycField> {
        CycField::new(FieldConfig::new(l)).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn a_matrix_at_l3() {
        let f = field(3);
        let b0 = BlockIndex::new(&f, 0);
        let a = build_a(&f, &b0);
        let expect = [
            [rat(1, 3), rat(0, 1), rat(0, 1)],
            [rat(-1, 1), rat(-2, 3), rat(0, 1)],
            [rat(-1, 1), rat(-1, 1), rat(1, 3)],
        ];
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(
                    a.at(r, c).as_rat().expect("rational entry"),
                    expect[r][c],
                    "entry ({r},{c})"
                );
            }
        }
    }

    #[test]
    fn a_diagonal_wraps_to_b0() {
        for l in [3u64, 5, 7] {
            let f = field(l);
            let b = BlockIndex::new(&f, 0);
            let a = build_a(&f, &b);
            let n = l as usize;
            assert_eq!(*a.at(0, 0), f.casimir_root(0));
            assert_eq!(*a.at(n - 1, n - 1), f.casimir_root(0), "b_(2l-2) = b_0");
        }
    }

    #[test]
    fn d_window_at_l3() {
        let f = field(3);
        let b0 = BlockIndex::new(&f, 0);
        let d = build_d(&f, &b0, 0);
        assert_eq!(d.rows(), 2);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(d.at(r, c).as_rat().unwrap(), rat(-1, 1), "entry ({r},{c})");
            }
        }
        let det = det_window(&f, &b0, 0);
        assert!(det.value.is_zero());
        assert!(det.even_in_b);
        assert_eq!(det.degree_in_b_squared, 1);
    }

    #[test]
    fn d_vanishing_counts() {
        for l in [3i64, 5, 7] {
            let f = field(l as u64);
            let blocks = BlockIndex::enumerate(&f);
            let mut k = 0;
            while k < l - 1 {
                let vanishing = blocks
                    .iter()
                    .filter(|b| det_window(&f, b, k).value.is_zero())
                    .count();
                assert_eq!(vanishing as i64, (l - 1 - k) / 2, "l = {l}, k = {k}");
                for b in &blocks {
                    let d = det_window(&f, b, k);
                    assert!(d.even_in_b, "even polynomial in b");
                    assert_eq!(d.degree_in_b_squared as i64, (l - 1 - k) / 2);
                    if b.j == -1 {
                        assert!(!d.value.is_zero(), "d(-1, {k}) must not vanish");
                    } else {
                        assert_eq!(
                            d.value.is_zero(),
                            k <= 2 * b.cap_j,
                            "vanishing rule at l = {l}, j = {}, k = {k}",
                            b.j
                        );
                    }
                }
                k += 2;
            }
        }
    }

    #[test]
    fn machinery_matches_displayed_a_at_l3() {
        let f = field(3);
        let alg = SmallQG::new(f.clone());
        let ad = AdjointRep::new(&alg);
        for b in BlockIndex::enumerate(&f) {
            let displayed = build_a(&f, &b);
            let machinery = machinery_a_matrix(&ad, &b).unwrap();
            assert_eq!(displayed, machinery, "block {}", b.j);
        }
        let b0 = BlockIndex::new(&f, 0);
        assert_eq!(
            build_aprime(&f, &b0),
            machinery_aprime_matrix(&ad, &b0).unwrap()
        );
    }

    #[test]
    fn coranks_at_l3() {
        let f = field(3);
        let alg = SmallQG::new(f.clone());
        let ad = AdjointRep::new(&alg);
        let b0 = BlockIndex::new(&f, 0);
        // k = 0 <= 2J = 0: corank 3; k = 2 = l-1: corank 2
        assert_eq!(corank_check(&ad, &b0, 0, 128).unwrap(), 3);
        assert_eq!(corank_check(&ad, &b0, 2, 128).unwrap(), 2);
    }
}
