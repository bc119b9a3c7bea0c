//! Casimir block labels.

use std::sync::Arc;

use crate::cyclotomic::{Cyc, CycField};

/// A Casimir block label j together with its data: the weight residues J, J'
/// of the two simple families in the block, the Casimir root b_j, and the
/// multiplicity of b_j in the Casimir's minimal equation.
///
/// The canonical label set is j = -1 (the semisimple Steinberg block) and
/// j = 0, 1, ..., (l-3)/2; labels j and l-2-j describe the same block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockIndex {
    pub j: i64,
    pub cap_j: i64,
    pub cap_j_prime: i64,
    pub b: Cyc,
    pub root_multiplicity: u8,
}

impl BlockIndex {
    pub fn new(field: &Arc<CycField>, j: i64) -> BlockIndex {
        let l = field.l() as i64;
        let j = canonical_label(j, l);
        if j == -1 {
            BlockIndex {
                j,
                cap_j: l - 1,
                cap_j_prime: l - 1,
                b: field.casimir_root(-1),
                root_multiplicity: 1,
            }
        } else {
            BlockIndex {
                j,
                cap_j: j,
                cap_j_prime: l - 2 - j,
                b: field.casimir_root(j),
                root_multiplicity: 2,
            }
        }
    }

    /// The canonical maximal set H' = {-1, 0, 1, ..., (l-3)/2}.
    pub fn enumerate(field: &Arc<CycField>) -> Vec<BlockIndex> {
        let l = field.l() as i64;
        let mut out = vec![BlockIndex::new(field, -1)];
        for j in 0..=(l - 3) / 2 {
            out.push(BlockIndex::new(field, j));
        }
        out
    }

    /// The non-semisimple labels H = H' minus {-1}.
    pub fn enumerate_h(field: &Arc<CycField>) -> Vec<BlockIndex> {
        BlockIndex::enumerate(field)
            .into_iter()
            .filter(|b| b.j != -1)
            .collect()
    }

    pub fn is_steinberg(&self) -> bool {
        self.j == -1
    }
}

/// Maps any residue to its canonical representative in {-1} u [0, (l-3)/2].
pub fn canonical_label(j: i64, l: i64) -> i64 {
    let j = j.rem_euclid(l);
    if j == l - 1 {
        return -1;
    }
    let paired = (l - 2 - j).rem_euclid(l);
    j.min(paired)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::FieldConfig;

    #[test]
    fn canonical_blocks_at_l7() {
        let f = CycField::new(FieldConfig::new(7)).unwrap();
        let blocks = BlockIndex::enumerate(&f);
        assert_eq!(blocks.len(), 4); // (l+1)/2
        assert_eq!(blocks[0].j, -1);
        assert_eq!(blocks[0].root_multiplicity, 1);
        for b in &blocks[1..] {
            assert_eq!(b.cap_j, b.j);
            assert_eq!(b.cap_j + b.cap_j_prime, 5); // J + J' = l - 2
            assert!(b.cap_j < b.cap_j_prime);
            assert_eq!(b.root_multiplicity, 2);
            // (J - j)(J' - j) = 0 mod l holds since J = j
            assert_eq!((b.cap_j - b.j) % 7, 0);
        }
        // paired labels coincide
        assert_eq!(canonical_label(5, 7), 0);
        assert_eq!(canonical_label(4, 7), 1);
        assert_eq!(canonical_label(6, 7), -1);
        assert_eq!(canonical_label(-1, 7), -1);
    }

    #[test]
    fn block_roots_match_field() {
        let f = CycField::new(FieldConfig::new(5)).unwrap();
        for b in BlockIndex::enumerate(&f) {
            assert_eq!(b.b, f.casimir_root(b.j));
        }
    }
}
