//! The candidate peel-off engine producing certified Krull–Schmidt
//! decompositions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::cyclotomic::{CycField, Rat};
use crate::linalg::Matrix;
use crate::modcat::{
    hom_space, GradedModule, ModcatError, ModuleLabel, ModuleMap,
};

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("unidentified summand of dimension {dim} with character {character:?}")]
    UnidentifiedSummand {
        dim: usize,
        character: BTreeMap<i64, usize>,
    },
    #[error(transparent)]
    Modcat(#[from] ModcatError),
}

/// A certified direct summand: an injection from the model module and a
/// projection back with projection . injection = identity on the model.
#[derive(Debug, Clone)]
pub struct SplitCertificate {
    pub label: ModuleLabel,
    pub injection: ModuleMap,
    pub projection: ModuleMap,
}

/// A multiset of indecomposable labels together with one split certificate
/// per counted copy.
#[derive(Debug, Clone, Default)]
pub struct Decomposition {
    pub summands: BTreeMap<ModuleLabel, usize>,
    pub certificates: Vec<SplitCertificate>,
}

impl Decomposition {
    pub fn total_multiplicity(&self) -> usize {
        self.summands.values().sum()
    }

    pub fn merge(&mut self, other: Decomposition) {
        for (label, mult) in other.summands {
            *self.summands.entry(label).or_insert(0) += mult;
        }
        self.certificates.extend(other.certificates);
    }

    /// Sorted JSON form: [{"kind": "P"|"L", "weight": w, "multiplicity": m}],
    /// projectives first, then simples, each by ascending weight.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.summands
                .iter()
                .map(|(label, mult)| {
                    serde_json::json!({
                        "kind": label.kind_str(),
                        "weight": label.weight,
                        "multiplicity": mult,
                    })
                })
                .collect(),
        )
    }

    pub fn multiset(&self) -> &BTreeMap<ModuleLabel, usize> {
        &self.summands
    }
}

/// Parses the multiset JSON emitted by [`Decomposition::to_json`].
pub fn multiset_from_json(v: &serde_json::Value) -> Option<BTreeMap<ModuleLabel, usize>> {
    let mut out = BTreeMap::new();
    for entry in v.as_array()? {
        let kind = entry.get("kind")?.as_str()?;
        let weight = entry.get("weight")?.as_i64()?;
        let mult = entry.get("multiplicity")?.as_u64()? as usize;
        let label = match kind {
            "P" => ModuleLabel::projective(weight),
            "L" => ModuleLabel::simple(weight),
            _ => return None,
        };
        out.insert(label, mult);
    }
    Some(out)
}

/// Decomposes M into indecomposable summands drawn from the candidate list.
///
/// The module is first split along the generalized eigenspaces of its Casimir
/// action (canonical direct summands), then candidates are peeled greedily in
/// the given order: a candidate C splits off as soon as some pair
/// f: C -> M, g: M -> C has invertible composite g . f. Every counted copy
/// carries a split certificate. A nonzero remainder no candidate can peel is
/// a loud error, never a silent omission.
pub fn decompose(
    m: &GradedModule,
    candidates: &[(ModuleLabel, GradedModule)],
) -> Result<Decomposition, DecompError> {
    let field = m.field().clone();
    if m.is_zero() {
        return Ok(Decomposition::default());
    }
    let blocks = m.casimir_blocks();
    if blocks.len() == 1 {
        return peel_all(m, candidates);
    }
    let projections = crate::modcat::block_projections(m, &blocks);
    let mut out = Decomposition::default();
    for (i, (b, bases)) in blocks.iter().enumerate() {
        let sub = m.restrict(bases).map_err(DecompError::Modcat)?;
        let filtered: Vec<(ModuleLabel, GradedModule)> = candidates
            .iter()
            .filter(|(label, _)| field.casimir_root(label.weight) == *b)
            .cloned()
            .collect();
        let mut part = peel_all(&sub, &filtered)?;
        // lift certificates through the block inclusion and projection
        let incl = ModuleMap::new(
            bases
                .iter()
                .filter(|(_, m)| m.cols() > 0)
                .map(|(&w, m)| (w, m.clone()))
                .collect(),
        );
        for cert in &mut part.certificates {
            cert.injection = cert.injection.then(&incl, &field);
            cert.projection = projections[i].then(&cert.projection, &field);
        }
        out.merge(part);
    }
    Ok(out)
}

/// Peel loop within a single Casimir block.
fn peel_all(
    m: &GradedModule,
    candidates: &[(ModuleLabel, GradedModule)],
) -> Result<Decomposition, DecompError> {
    let field = m.field().clone();
    let mut out = Decomposition::default();
    let mut rem = m.clone();
    // chain maps between the shrinking remainder and the original module
    let mut chain_inj = ModuleMap::identity(m); // rem -> m
    let mut chain_proj = ModuleMap::identity(m); // m -> rem
    'outer: while !rem.is_zero() {
        for (label, model) in candidates {
            if !character_fits(model, &rem) {
                continue;
            }
            let fs = hom_space(model, &rem);
            if fs.is_empty() {
                continue;
            }
            let gs = hom_space(&rem, model);
            if gs.is_empty() {
                continue;
            }
            if let Some((f, g, gf_inv)) = find_split_pair(&fs, &gs, model, &field) {
                // certificates relative to the original module
                let injection = f.then(&chain_inj, &field);
                let proj_to_model = g.then(&gf_inv, &field);
                let projection = chain_proj.then(&proj_to_model, &field);
                debug_assert!(injection
                    .then(&projection, &field)
                    .sub(&ModuleMap::identity(model))
                    .is_zero());
                out.certificates.push(SplitCertificate {
                    label: *label,
                    injection,
                    projection,
                });
                *out.summands.entry(*label).or_insert(0) += 1;

                // new remainder: the kernel of g
                let idempotent = proj_to_model.then(&f, &field); // rem -> rem
                let mut ker_bases: BTreeMap<i64, Matrix> = BTreeMap::new();
                for (&w, &d) in rem.dims() {
                    let ker = match g.block(w) {
                        Some(block) => block.kernel(&field),
                        None => Matrix::identity(d, &field),
                    };
                    let ker = ker.transpose().row_space_basis(&field).transpose();
                    ker_bases.insert(w, ker);
                }
                let new_rem = rem.restrict(&ker_bases).map_err(DecompError::Modcat)?;
                assert_eq!(
                    new_rem.total_dim() + model.total_dim(),
                    rem.total_dim(),
                    "split dimensions"
                );
                // kappa: new_rem -> rem, and the complementary projection
                let kappa = ModuleMap::new(
                    ker_bases
                        .iter()
                        .filter(|(_, b)| b.cols() > 0)
                        .map(|(&w, b)| (w, b.clone()))
                        .collect(),
                );
                let mut pi_blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
                for (&w, &d) in rem.dims() {
                    let kb = &ker_bases[&w];
                    if kb.cols() == 0 {
                        continue;
                    }
                    let mut complement = Matrix::identity(d, &field);
                    if let Some(e_w) = idempotent.block(w) {
                        complement = complement.sub(e_w);
                    }
                    let sol = kb
                        .solve(&complement, &field)
                        .expect("complementary projection lands in the kernel of g");
                    pi_blocks.insert(w, sol);
                }
                let pi = ModuleMap::new(pi_blocks);
                chain_inj = kappa.then(&chain_inj, &field);
                chain_proj = chain_proj.then(&pi, &field);
                rem = new_rem;
                continue 'outer;
            }
        }
        return Err(DecompError::UnidentifiedSummand {
            dim: rem.total_dim(),
            character: rem.dims().clone(),
        });
    }
    Ok(out)
}

fn character_fits(model: &GradedModule, m: &GradedModule) -> bool {
    model.dims().iter().all(|(&w, &d)| d <= m.dim_at(w))
}

/// Searches for f: C -> M, g: M -> C with g . f invertible; deterministic
/// order: basis pairs, then one-parameter power combinations, then a bounded
/// sequence of fixed-seed integer combinations.
fn find_split_pair(
    fs: &[ModuleMap],
    gs: &[ModuleMap],
    model: &GradedModule,
    field: &CycField,
) -> Option<(ModuleMap, ModuleMap, ModuleMap)> {
    let check = |f: &ModuleMap, g: &ModuleMap| -> Option<ModuleMap> {
        let gf = f.then(g, field);
        if !gf.is_invertible_between(model, model, field) {
            return None;
        }
        gf.inverse(field)
    };
    for f in fs {
        for g in gs {
            if let Some(inv) = check(f, g) {
                return Some((f.clone(), g.clone(), inv));
            }
        }
    }
    let power_combo = |maps: &[ModuleMap], t: i64| -> ModuleMap {
        let t_rat = Rat::from(BigInt::from(t));
        let mut acc = maps[0].clone();
        let mut pow = Rat::one();
        for h in &maps[1..] {
            pow *= &t_rat;
            acc = acc.add(&h.scale_rat(&pow));
        }
        acc
    };
    let params = [1i64, -1, 2, -2, 3];
    for &t in &params {
        for &s in &params {
            let f = power_combo(fs, t);
            let g = power_combo(gs, s);
            if let Some(inv) = check(&f, &g) {
                return Some((f, g, inv));
            }
        }
    }
    let mut state: u64 = 0x517c_c1b7_2722_0a95;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 20) as i64 % (1 << 20)) - (1 << 19)
    };
    for _ in 0..32 {
        let random_combo = |maps: &[ModuleMap], next: &mut dyn FnMut() -> i64| {
            let mut acc: Option<ModuleMap> = None;
            for h in maps {
                let c = Rat::from(BigInt::from(next()));
                let scaled = h.scale_rat(&c);
                acc = Some(match acc {
                    None => scaled,
                    Some(a) => a.add(&scaled),
                });
            }
            acc.unwrap()
        };
        let f = random_combo(fs, &mut next);
        let g = random_combo(gs, &mut next);
        if let Some(inv) = check(&f, &g) {
            return Some((f, g, inv));
        }
    }
    None
}

/// Verifies a decomposition's certificates against the original module: each
/// projection . injection is the identity on its model, the induced
/// idempotents are pairwise orthogonal, and they sum to the identity on M.
pub fn verify_certificates(
    m: &GradedModule,
    decomposition: &Decomposition,
    models: &BTreeMap<ModuleLabel, GradedModule>,
) -> bool {
    let field = m.field();
    let mut sum: Option<ModuleMap> = None;
    for cert in &decomposition.certificates {
        let model = match models.get(&cert.label) {
            Some(model) => model,
            None => return false,
        };
        let round_trip = cert.injection.then(&cert.projection, field);
        if !round_trip.sub(&ModuleMap::identity(model)).is_zero() {
            return false;
        }
        let idem = cert.projection.then(&cert.injection, field); // m -> m
        sum = Some(match sum {
            None => idem,
            Some(acc) => acc.add(&idem),
        });
    }
    for (i, a) in decomposition.certificates.iter().enumerate() {
        for (k, b) in decomposition.certificates.iter().enumerate() {
            if i == k {
                continue;
            }
            // projection_b . injection_a = 0 for distinct copies
            let cross = a.injection.then(&b.projection, field);
            if !cross.is_zero() {
                return false;
            }
        }
    }
    match sum {
        Some(total) => total.sub(&ModuleMap::identity(m)).is_zero(),
        None => m.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{CycField, FieldConfig};
    use crate::modcat::candidate_models;
    use std::sync::Arc;

    fn field(l: u64) -> Arc<CycField> {
        CycField::new(FieldConfig::new(l)).unwrap()
    }

    #[test]
    fn roundtrip_of_constructed_sums() {
        let f = field(3);
        let cands = candidate_models(&f).unwrap();
        // L(0) + P(0) + L(4)
        let pick = |s: &str| {
            cands
                .iter()
                .find(|(l, _)| l.to_string() == s)
                .unwrap()
                .clone()
        };
        let (l0, m_l0) = pick("L(0)");
        let (p0, m_p0) = pick("P(0)");
        let (l4, m_l4) = pick("L(4)");
        let m = m_l0.direct_sum(&m_p0).direct_sum(&m_l4);
        let d = decompose(&m, &cands).unwrap();
        let expected: BTreeMap<ModuleLabel, usize> = [(l0, 1), (p0, 1), (l4, 1)].into();
        assert_eq!(d.summands, expected);
        let models: BTreeMap<ModuleLabel, GradedModule> =
            [(l0, m_l0), (p0, m_p0), (l4, m_l4)].into();
        assert!(verify_certificates(&m, &d, &models));
    }

    #[test]
    fn simple_does_not_peel_from_projective() {
        // Hom(L(0), P(0)) and Hom(P(0), L(0)) are both nonzero but no pair
        // composes invertibly, so P(0) decomposes as itself.
        let f = field(3);
        let cands = candidate_models(&f).unwrap();
        let p0 = cands.iter().find(|(l, _)| l.to_string() == "P(0)").unwrap();
        let d = decompose(&p0.1, &cands).unwrap();
        assert_eq!(d.summands, [(p0.0, 1)].into());
    }

    #[test]
    fn multiplicities_are_counted() {
        let f = field(3);
        let cands = candidate_models(&f).unwrap();
        let l0 = cands.iter().find(|(l, _)| l.to_string() == "L(0)").unwrap();
        let m = l0.1.direct_sum(&l0.1).direct_sum(&l0.1);
        let d = decompose(&m, &cands).unwrap();
        assert_eq!(d.summands, [(l0.0, 3)].into());
    }

    #[test]
    fn unidentified_summand_is_loud() {
        // decomposing a Verma module with only simples as candidates must
        // fail loudly rather than return a partial answer
        let f = field(3);
        let verma = crate::modcat::verma(&f, 0, crate::modcat::VermaDirection::Lowering);
        let cands: Vec<(ModuleLabel, GradedModule)> = candidate_models(&f)
            .unwrap()
            .into_iter()
            .filter(|(l, _)| l.kind_str() == "L")
            .collect();
        let err = decompose(&verma, &cands).unwrap_err();
        assert!(matches!(err, DecompError::UnidentifiedSummand { dim: 3, .. }));
    }

    #[test]
    fn json_roundtrip_of_multisets() {
        let f = field(3);
        let cands = candidate_models(&f).unwrap();
        let l0 = cands.iter().find(|(l, _)| l.to_string() == "L(0)").unwrap();
        let p2 = cands.iter().find(|(l, _)| l.to_string() == "P(2)").unwrap();
        let m = l0.1.direct_sum(&p2.1);
        let d = decompose(&m, &cands).unwrap();
        let parsed = multiset_from_json(&d.to_json()).unwrap();
        assert_eq!(parsed, d.summands);
    }
}
