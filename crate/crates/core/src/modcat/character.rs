//! Graded characters and composition multiplicities.

use std::collections::BTreeMap;

use super::module::{GradedModule, ModcatError};

/// Weight -> dimension.
pub fn graded_character(m: &GradedModule) -> BTreeMap<i64, usize> {
    m.dims().clone()
}

/// Character of the simple with highest weight lambda: one-dimensional weight
/// spaces at lambda, lambda - 2, ..., lambda - 2(lambda mod l).
pub fn simple_character(lambda: i64, l: i64) -> BTreeMap<i64, usize> {
    let n = lambda.rem_euclid(l);
    (0..=n).map(|i| (lambda - 2 * i, 1usize)).collect()
}

/// Multiplicities of the simple composition factors, keyed by highest weight.
///
/// Simple characters are unitriangular with respect to their top weight, so
/// the multiset is recovered by peeling from the highest weight downward. A
/// negative intermediate count means the input is not a module character.
pub fn composition_multiplicities(
    m: &GradedModule,
) -> Result<BTreeMap<i64, usize>, ModcatError> {
    let l = m.field().l() as i64;
    character_multiplicities(&graded_character(m), l)
}

/// Peeling on a raw character; shared by filtration-layer checks that only
/// know dimensions, not modules.
pub fn character_multiplicities(
    character: &BTreeMap<i64, usize>,
    l: i64,
) -> Result<BTreeMap<i64, usize>, ModcatError> {
    let mut remaining: BTreeMap<i64, i64> = character
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&w, &d)| (w, d as i64))
        .collect();
    let mut mults = BTreeMap::new();
    while let Some((&top, &count)) = remaining.iter().next_back() {
        if count == 0 {
            remaining.remove(&top);
            continue;
        }
        for (w, d) in simple_character(top, l) {
            let entry = remaining.entry(w).or_insert(0);
            *entry -= count * d as i64;
            if *entry < 0 {
                return Err(ModcatError::NegativeMultiplicity { weight: w });
            }
            if *entry == 0 {
                remaining.remove(&w);
            }
        }
        mults.insert(top, count as usize);
    }
    Ok(mults)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycField, FieldConfig};
    use crate::modcat::construct::simple;

    #[test]
    fn simple_peels_to_itself() {
        let f = CycField::new(FieldConfig::new(5)).unwrap();
        for lambda in [-4i64, 0, 3, 7] {
            let mults = composition_multiplicities(&simple(&f, lambda)).unwrap();
            assert_eq!(mults, BTreeMap::from([(lambda, 1usize)]));
        }
    }

    #[test]
    fn sums_of_simples_recovered() {
        let f = CycField::new(FieldConfig::new(3)).unwrap();
        let m = simple(&f, 4).direct_sum(&simple(&f, 4)).direct_sum(&simple(&f, 0));
        let mults = composition_multiplicities(&m).unwrap();
        assert_eq!(mults, BTreeMap::from([(4i64, 2usize), (0, 1)]));
    }

    #[test]
    fn corrupted_character_is_rejected() {
        // a single weight space at weight 1 with dimension 0 at weight -1
        // cannot be a module character at l = 3: L(1) has weights {1, -1}
        let character: BTreeMap<i64, usize> = BTreeMap::from([(1i64, 1usize)]);
        assert!(matches!(
            character_multiplicities(&character, 3),
            Err(ModcatError::NegativeMultiplicity { .. })
        ));
    }
}
