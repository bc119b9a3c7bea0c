//! The contravariant duality functor on graded modules.
//!
//! The dual of V is V* with the action twisted by the composition of the
//! antipode and the Chevalley involution; weights are preserved and the
//! functor squares to the identity on the nose in these coordinates:
//! E acts on the dual by -q^w F^T and F by -q^(2-w) E^T.

use std::collections::BTreeMap;

use super::module::GradedModule;

impl GradedModule {
    pub fn dual(&self) -> GradedModule {
        let field = self.field().clone();
        let mut e_blocks = BTreeMap::new();
        let mut f_blocks = BTreeMap::new();
        for &w in self.dims().keys() {
            // E*: (V_w)* -> (V_{w+2})* is -q^w (F: V_{w+2} -> V_w)^T
            let e = self
                .f_from(w + 2)
                .transpose()
                .scale(&field.q_pow(w).neg(), &field);
            e_blocks.insert(w, e);
            // F*: (V_w)* -> (V_{w-2})* is -q^(2-w) (E: V_{w-2} -> V_w)^T
            let f = self
                .e_from(w - 2)
                .transpose()
                .scale(&field.q_pow(2 - w).neg(), &field);
            f_blocks.insert(w, f);
        }
        GradedModule::new(field, self.dims().clone(), e_blocks, f_blocks)
    }
}

#[cfg(test)]
mod tests {
    use crate::cyclotomic::{CycField, FieldConfig};
    use crate::modcat::construct::{projective, simple, verma, VermaDirection};
    use crate::modcat::graded_character;

    #[test]
    fn dual_preserves_characters_and_axioms() {
        let f = CycField::new(FieldConfig::new(5)).unwrap();
        for m in [
            simple(&f, 3),
            verma(&f, 2, VermaDirection::Lowering),
            projective(&f, 0).unwrap(),
        ] {
            let d = m.dual();
            assert_eq!(graded_character(&d), graded_character(&m));
            d.check_invariants().unwrap();
        }
    }

    #[test]
    fn dual_is_an_involution_on_the_nose() {
        let f = CycField::new(FieldConfig::new(3)).unwrap();
        let m = projective(&f, 0).unwrap();
        let dd = m.dual().dual();
        assert_eq!(graded_character(&dd), graded_character(&m));
        for &w in m.dims().keys() {
            assert_eq!(dd.e_from(w), m.e_from(w), "raising block at {w}");
            assert_eq!(dd.f_from(w), m.f_from(w), "lowering block at {w}");
        }
    }
}
