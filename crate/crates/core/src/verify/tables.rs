//! Expected multiplicity tables for the adjoint decomposition and its pieces.

use std::collections::BTreeMap;

use crate::modcat::{BlockIndex, ModuleLabel};

use super::pipeline::VerifyError;

/// Dimension of the module a label names: simples have dimension
/// (weight mod l) + 1, projective covers 2l except the Steinberg one (l).
pub fn label_dimension(label: &ModuleLabel, l: i64) -> usize {
    match label.kind_str() {
        "L" => (label.weight.rem_euclid(l) + 1) as usize,
        _ => {
            if label.weight.rem_euclid(l) == l - 1 {
                l as usize
            } else {
                2 * l as usize
            }
        }
    }
}

/// The claimed decomposition multiset of the adjoint module:
///   P(l-1) with multiplicity l;
///   for i in [0, (l-3)/2]:
///     P(2i) with multiplicity (l+1)/2 + i,
///     L(2i) with multiplicity l-1-2i,
///     L(2l-2-2i) and L(-2-2i) with multiplicity (l-1)/2 - i.
pub fn expected_multiplicities(l: i64) -> Result<BTreeMap<ModuleLabel, usize>, VerifyError> {
    if l < 3 || l % 2 == 0 {
        return Err(VerifyError::InvalidL(l));
    }
    let mut table = BTreeMap::new();
    table.insert(ModuleLabel::projective(l - 1), l as usize);
    for i in 0..=(l - 3) / 2 {
        table.insert(ModuleLabel::projective(2 * i), ((l + 1) / 2 + i) as usize);
        table.insert(ModuleLabel::simple(2 * i), (l - 1 - 2 * i) as usize);
        table.insert(
            ModuleLabel::simple(2 * l - 2 - 2 * i),
            ((l - 1) / 2 - i) as usize,
        );
        table.insert(
            ModuleLabel::simple(-2 - 2 * i),
            ((l - 1) / 2 - i) as usize,
        );
    }
    Ok(table)
}

/// Sum of multiplicity * dimension over a table.
pub fn table_total_dimension(table: &BTreeMap<ModuleLabel, usize>, l: i64) -> usize {
    table
        .iter()
        .map(|(label, mult)| mult * label_dimension(label, l))
        .sum()
}

/// The bookkeeping identity: the expected table must account for exactly l^3
/// dimensions.
pub fn table_dimension_identity(l: i64) -> Result<bool, VerifyError> {
    let table = expected_multiplicities(l)?;
    Ok(table_total_dimension(&table, l) == (l * l * l) as usize)
}

/// Expected decomposition of N_j for j in H:
/// L(0)^2 + L(2)^2 + ... + L(2J)^2 + P(2J+2) + ... + P(l-3) + St.
pub fn expected_n_j(l: i64, block: &BlockIndex) -> BTreeMap<ModuleLabel, usize> {
    let mut out = BTreeMap::new();
    for i in 0..=block.cap_j {
        out.insert(ModuleLabel::simple(2 * i), 2);
    }
    for i in block.cap_j + 1..=(l - 3) / 2 {
        out.insert(ModuleLabel::projective(2 * i), 1);
    }
    out.insert(ModuleLabel::projective(l - 1), 1);
    out
}

/// Expected decomposition of the Steinberg-eigenvalue block of the adjoint
/// module: one projective P(2i) for each i in [0, (l-1)/2].
pub fn expected_block_minus_one(l: i64) -> BTreeMap<ModuleLabel, usize> {
    (0..=(l - 1) / 2)
        .map(|i| (ModuleLabel::projective(2 * i), 1usize))
        .collect()
}

/// Expected decomposition of the piece of ad_j lying over the category block
/// of weight k (even, in [0, l-1]), for j in H:
///   k <= 2J:      P(k) + L(k) + L(k) + L(2l-2-k) + L(-2-k)
///   2J+2 <= k:    P(k) + P(k)
///   k = l-1:      P(l-1) + P(l-1)
pub fn expected_block_piece(l: i64, block: &BlockIndex, k: i64) -> BTreeMap<ModuleLabel, usize> {
    assert!(k % 2 == 0 && (0..l).contains(&k));
    if k == l - 1 {
        return [(ModuleLabel::projective(l - 1), 2)].into();
    }
    if k <= 2 * block.cap_j {
        [
            (ModuleLabel::projective(k), 1),
            (ModuleLabel::simple(k), 2),
            (ModuleLabel::simple(2 * l - 2 - k), 1),
            (ModuleLabel::simple(-2 - k), 1),
        ]
        .into()
    } else {
        [(ModuleLabel::projective(k), 2)].into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_at_l3() {
        let t = expected_multiplicities(3).unwrap();
        let expected: BTreeMap<ModuleLabel, usize> = [
            (ModuleLabel::projective(2), 3),
            (ModuleLabel::projective(0), 2),
            (ModuleLabel::simple(0), 2),
            (ModuleLabel::simple(4), 1),
            (ModuleLabel::simple(-2), 1),
        ]
        .into();
        assert_eq!(t, expected);
    }

    #[test]
    fn table_at_l5() {
        let t = expected_multiplicities(5).unwrap();
        let expected: BTreeMap<ModuleLabel, usize> = [
            (ModuleLabel::projective(4), 5),
            (ModuleLabel::projective(0), 3),
            (ModuleLabel::projective(2), 4),
            (ModuleLabel::simple(0), 4),
            (ModuleLabel::simple(2), 2),
            (ModuleLabel::simple(8), 2),
            (ModuleLabel::simple(-2), 2),
            (ModuleLabel::simple(6), 1),
            (ModuleLabel::simple(-4), 1),
        ]
        .into();
        assert_eq!(t, expected);
        assert_eq!(table_total_dimension(&t, 5), 125);
    }

    #[test]
    fn dimension_identity_for_many_l() {
        for l in (3..=99).step_by(2) {
            assert!(table_dimension_identity(l).unwrap(), "l = {l}");
        }
    }

    #[test]
    fn invalid_l_rejected() {
        assert!(matches!(
            expected_multiplicities(4),
            Err(VerifyError::InvalidL(4))
        ));
        assert!(matches!(
            expected_multiplicities(1),
            Err(VerifyError::InvalidL(1))
        ));
    }

    #[test]
    fn n_j_tables_have_the_right_dimension() {
        use crate::cyclotomic::{CycField, FieldConfig};
        for l in [3i64, 5, 7] {
            let f = CycField::new(FieldConfig::new(l as u64)).unwrap();
            for b in BlockIndex::enumerate_h(&f) {
                let t = expected_n_j(l, &b);
                let dim = table_total_dimension(&t, l);
                let expected =
                    ((b.cap_j + 1) * (b.cap_j + 1) + (b.cap_j_prime + 1) * (b.cap_j_prime + 1)) as usize;
                assert_eq!(dim, expected, "l = {l}, j = {}", b.j);
            }
            // the Steinberg block table accounts for l^2
            let t = expected_block_minus_one(l);
            assert_eq!(table_total_dimension(&t, l), (l * l) as usize);
        }
    }

    #[test]
    fn block_pieces_recompose_to_the_main_table() {
        use crate::cyclotomic::{CycField, FieldConfig};
        for l in [3i64, 5, 7, 9] {
            let f = CycField::new(FieldConfig::new(l as u64)).unwrap();
            let mut total: BTreeMap<ModuleLabel, usize> = expected_block_minus_one(l);
            for b in BlockIndex::enumerate_h(&f) {
                let mut k = 0;
                while k <= l - 1 {
                    for (label, mult) in expected_block_piece(l, &b, k) {
                        *total.entry(label).or_insert(0) += mult;
                    }
                    k += 2;
                }
            }
            assert_eq!(total, expected_multiplicities(l).unwrap(), "l = {l}");
        }
    }
}
