//! The end-to-end verification pipeline.

use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cyclotomic::{CycError, CycField, FieldConfig, Sign};
use crate::decomp::{
    casimir_block_filtration, decompose, BlockFiltration, Decomposition,
};
use crate::modcat::{
    candidate_models, character_multiplicities, is_isomorphic, BlockIndex, GradedModule,
    ModuleLabel,
};
use crate::smallqg::{AdjointRep, Monomial, SmallQG};

use super::matrices::{
    build_a, build_aprime, corank_check, det_window, machinery_a_matrix,
    machinery_aprime_matrix,
};
use super::report::{CheckRecord, Report};
use super::tables::{
    expected_block_minus_one, expected_block_piece, expected_multiplicities, expected_n_j,
    table_dimension_identity,
};

/// Canonical check order; `--checks` selects a subset by these names.
pub const ALL_CHECKS: &[&str] = &[
    "expected-table",
    "algebra-axioms",
    "casimir-central",
    "casimir-equation",
    "dimensions",
    "matrix-cross-validation",
    "casimir-k-action",
    "determinant-window",
    "corank",
    "block-filtration",
    "filtration-layers",
    "n-block-decomposition",
    "block-minus-one",
    "block-resume",
    "main-decomposition",
    "autoduality",
    "singular-vectors",
    "sign-lemma",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("l must be an odd integer >= 3, got {0}")]
    InvalidL(i64),
    #[error("l = {l} exceeds the configured maximum {max}")]
    TooLarge { l: i64, max: i64 },
    #[error("unknown check name: {0}")]
    UnknownCheck(String),
    #[error("field construction failed: {0}")]
    Field(#[from] CycError),
    #[error("candidate construction failed: {0}")]
    Candidates(String),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Subset of ALL_CHECKS to run; None runs everything.
    pub checks: Option<Vec<String>>,
    /// Largest admissible l for a run.
    pub max_l: i64,
    /// Working precision for certified sign checks.
    pub precision_bits: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            checks: None,
            max_l: 7,
            precision_bits: 128,
        }
    }
}

struct State {
    l: i64,
    field: Arc<CycField>,
    alg: Arc<SmallQG>,
    ad: AdjointRep,
    candidates: Vec<(ModuleLabel, GradedModule)>,
    filtrations: BTreeMap<i64, Rc<BlockFiltration>>,
    piece_decomps: BTreeMap<i64, Rc<Vec<(i64, Decomposition)>>>,
    main_decomposition: Option<Decomposition>,
}

impl State {
    fn filtration(&mut self, block: &BlockIndex) -> Result<Rc<BlockFiltration>, String> {
        if let Some(f) = self.filtrations.get(&block.j) {
            return Ok(f.clone());
        }
        let f = casimir_block_filtration(&self.ad, block).map_err(|e| e.to_string())?;
        let rc = Rc::new(f);
        self.filtrations.insert(block.j, rc.clone());
        Ok(rc)
    }

    /// Decompositions of the category pieces of ad_j, keyed by the even
    /// weight k of the piece's Casimir eigenvalue.
    fn block_pieces(&mut self, block: &BlockIndex) -> Result<Rc<Vec<(i64, Decomposition)>>, String> {
        if let Some(p) = self.piece_decomps.get(&block.j) {
            return Ok(p.clone());
        }
        let filtration = self.filtration(block)?;
        let mut out = Vec::new();
        for (b, bases) in filtration.ad_j.casimir_blocks() {
            let piece = filtration.ad_j.restrict(&bases).map_err(|e| e.to_string())?;
            let k = self.k_of_eigenvalue(&b)?;
            let d = decompose(&piece, &self.candidates).map_err(|e| e.to_string())?;
            out.push((k, d));
        }
        let rc = Rc::new(out);
        self.piece_decomps.insert(block.j, rc.clone());
        Ok(rc)
    }

    /// The unique even k in [0, l-1] with b_k equal to the given eigenvalue.
    fn k_of_eigenvalue(&self, b: &crate::cyclotomic::Cyc) -> Result<i64, String> {
        let mut k = 0;
        while k <= self.l - 1 {
            if &self.field.casimir_root(k) == b {
                return Ok(k);
            }
            k += 2;
        }
        Err("eigenvalue is not a Casimir root of even label".into())
    }
}

fn record(
    name: &str,
    citation: &str,
    pass: bool,
    expected: Value,
    computed: Value,
) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        citation: citation.into(),
        pass,
        expected,
        computed,
    }
}

fn multiset_json(m: &BTreeMap<ModuleLabel, usize>) -> Value {
    Value::Array(
        m.iter()
            .map(|(label, mult)| {
                json!({"kind": label.kind_str(), "weight": label.weight, "multiplicity": mult})
            })
            .collect(),
    )
}

/// Runs the selected checks for one l and assembles the report. The exit
/// status of the CLI is derived from `Report::pass`.
pub fn run_verification(l: i64, options: &VerifyOptions) -> Result<Report, VerifyError> {
    if l < 3 || l % 2 == 0 {
        return Err(VerifyError::InvalidL(l));
    }
    if l > options.max_l {
        return Err(VerifyError::TooLarge {
            l,
            max: options.max_l,
        });
    }
    let selected: Vec<&str> = match &options.checks {
        None => ALL_CHECKS.to_vec(),
        Some(names) => {
            for n in names {
                if !ALL_CHECKS.contains(&n.as_str()) {
                    return Err(VerifyError::UnknownCheck(n.clone()));
                }
            }
            ALL_CHECKS
                .iter()
                .copied()
                .filter(|c| names.iter().any(|n| n == c))
                .collect()
        }
    };

    let field = CycField::new(FieldConfig::new(l as u64))?;
    let alg = SmallQG::new(field.clone());
    let ad = AdjointRep::new(&alg);
    let candidates =
        candidate_models(&field).map_err(|e| VerifyError::Candidates(e.to_string()))?;
    let mut state = State {
        l,
        field,
        alg,
        ad,
        candidates,
        filtrations: BTreeMap::new(),
        piece_decomps: BTreeMap::new(),
        main_decomposition: None,
    };

    let mut checks = Vec::new();
    for name in selected {
        let rec = match name {
            "expected-table" => check_expected_table(&state),
            "algebra-axioms" => check_algebra_axioms(&state),
            "casimir-central" => check_casimir_central(&state),
            "casimir-equation" => check_casimir_equation(&state),
            "dimensions" => check_dimensions(&mut state),
            "matrix-cross-validation" => check_matrix_cross_validation(&state),
            "casimir-k-action" => check_casimir_k_action(&state),
            "determinant-window" => check_determinant_window(&state),
            "corank" => check_corank(&state, options.precision_bits),
            "block-filtration" => check_block_filtration(&mut state),
            "filtration-layers" => check_filtration_layers(&mut state),
            "n-block-decomposition" => check_n_blocks(&mut state),
            "block-minus-one" => check_block_minus_one(&mut state),
            "block-resume" => check_block_resume(&mut state),
            "main-decomposition" => check_main_decomposition(&mut state),
            "autoduality" => check_autoduality(&state),
            "singular-vectors" => check_singular_vectors(&state),
            "sign-lemma" => check_sign_lemma(&state, options.precision_bits),
            other => unreachable!("unknown check {other}"),
        };
        checks.push(rec);
    }
    let decomposition = state.main_decomposition.as_ref().map(|d| d.to_json());
    Ok(Report {
        l,
        checks,
        decomposition,
    })
}

fn check_expected_table(state: &State) -> CheckRecord {
    let name = "expected-table";
    let citation = "dimension bookkeeping of the expected multiplicity table";
    let mut all = true;
    let mut failures = Vec::new();
    for l in (3..=99).step_by(2) {
        match table_dimension_identity(l) {
            Ok(true) => {}
            _ => {
                all = false;
                failures.push(l);
            }
        }
    }
    record(
        name,
        citation,
        all,
        json!({"identity": "sum of multiplicity * dimension = l^3", "range": [3, 99]}),
        json!({"checked_l": state.l, "failures": failures}),
    )
}

fn check_algebra_axioms(state: &State) -> CheckRecord {
    let name = "algebra-axioms";
    let citation = "Hopf algebra axioms and the Chevalley involution";
    let alg = &state.alg;
    let field = alg.field();
    let mut failures: Vec<String> = Vec::new();
    let basis = alg.basis();

    for m in &basis {
        let me = alg.monomial_elem(*m);
        let d = alg.coproduct(&me);
        // m (S x id) Delta = counit * unit
        let mut antipode_side = crate::smallqg::AlgElem::zero();
        let mut counit_left = crate::smallqg::AlgElem::zero();
        let mut counit_right = crate::smallqg::AlgElem::zero();
        for ((x1, x2), c) in d.terms() {
            let s = alg.antipode(&alg.monomial_elem(*x1));
            antipode_side =
                antipode_side.add(&alg.mul(&s, &alg.monomial_elem(*x2)).scale(c, field));
            let e1 = alg.counit(&alg.monomial_elem(*x1));
            counit_left =
                counit_left.add(&alg.monomial_elem(*x2).scale(&field.mul(&e1, c), field));
            let e2 = alg.counit(&alg.monomial_elem(*x2));
            counit_right =
                counit_right.add(&alg.monomial_elem(*x1).scale(&field.mul(&e2, c), field));
        }
        let eps_unit =
            crate::smallqg::AlgElem::from_term(Monomial::unit(), alg.counit(&me));
        if antipode_side != eps_unit {
            failures.push(format!("antipode axiom at {m}"));
        }
        if counit_left != me || counit_right != me {
            failures.push(format!("counit axiom at {m}"));
        }
        // omega is an involution
        if alg.omega(&alg.omega(&me)) != me {
            failures.push(format!("involution fails at {m}"));
        }
    }

    // coassociativity on the generators
    type Triple = BTreeMap<(Monomial, Monomial, Monomial), crate::cyclotomic::Cyc>;
    let add_triple = |t: &mut Triple, key: (Monomial, Monomial, Monomial), c: &crate::cyclotomic::Cyc| {
        if c.is_zero() {
            return;
        }
        let e = t.entry(key).or_insert_with(|| field.zero());
        let sum = e.add(c);
        if sum.is_zero() {
            t.remove(&key);
        } else {
            *e = sum;
        }
    };
    for g in [Monomial::e(), Monomial::f(), Monomial::k(1)] {
        let d = alg.coproduct(&alg.monomial_elem(g));
        let mut left: Triple = BTreeMap::new();
        let mut right: Triple = BTreeMap::new();
        for ((x1, x2), c) in d.terms() {
            for ((y1, y2), c2) in alg.coproduct(&alg.monomial_elem(*x1)).terms() {
                add_triple(&mut left, (*y1, *y2, *x2), &field.mul(c, c2));
            }
            for ((y1, y2), c2) in alg.coproduct(&alg.monomial_elem(*x2)).terms() {
                add_triple(&mut right, (*x1, *y1, *y2), &field.mul(c, c2));
            }
        }
        if left != right {
            failures.push(format!("coassociativity fails at {g}"));
        }
    }

    // omega and antipode interact correctly with products on a sample
    let samples = [
        alg.gen_e(),
        alg.gen_f(),
        alg.gen_k(1),
        alg.mul(&alg.gen_e(), &alg.gen_f()),
        alg.casimir(),
    ];
    for x in &samples {
        for y in &samples {
            let xy = alg.mul(x, y);
            if alg.omega(&xy) != alg.mul(&alg.omega(x), &alg.omega(y)) {
                failures.push("omega multiplicativity".into());
            }
            if alg.antipode(&xy) != alg.mul(&alg.antipode(y), &alg.antipode(x)) {
                failures.push("antipode anti-multiplicativity".into());
            }
        }
    }

    record(
        name,
        citation,
        failures.is_empty(),
        json!({"failures": []}),
        json!({"monomials": basis.len(), "failures": failures}),
    )
}

fn check_casimir_central(state: &State) -> CheckRecord {
    let name = "casimir-central";
    let citation = "the Casimir element is central and its two expressions agree";
    let alg = &state.alg;
    let x = alg.casimir();
    let mut failures = 0usize;
    if x != alg.casimir_fe_form() {
        failures += 1;
    }
    for m in alg.basis() {
        let me = alg.monomial_elem(m);
        if alg.mul(&x, &me) != alg.mul(&me, &x) {
            failures += 1;
        }
    }
    record(
        name,
        citation,
        failures == 0,
        json!({"failures": 0}),
        json!({"monomials": state.alg.basis().len(), "failures": failures}),
    )
}

fn check_casimir_equation(state: &State) -> CheckRecord {
    let name = "casimir-equation";
    let citation = "the degree-l Casimir equation with double roots off the Steinberg value";
    let alg = &state.alg;
    let field = alg.field();
    let l = state.l;
    // the full product over all residues vanishes
    let mut prod = alg.unit();
    for j in 0..l {
        let mut factor = alg.casimir();
        factor.add_term(Monomial::unit(), &field.casimir_root(j).neg());
        prod = alg.mul(&prod, &factor);
    }
    let product_vanishes = prod.is_zero();
    // the minimal polynomial is (t - b_(-1)) * prod_{j in H} (t - b_j)^2
    let mut expected_poly = vec![field.one()];
    let mul_linear = |poly: &mut Vec<crate::cyclotomic::Cyc>, root: &crate::cyclotomic::Cyc| {
        let mut out = vec![field.zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            out[i + 1] = out[i + 1].add(c);
            out[i] = out[i].sub(&field.mul(c, root));
        }
        *poly = out;
    };
    for b in BlockIndex::enumerate(&state.field) {
        for _ in 0..b.root_multiplicity {
            mul_linear(&mut expected_poly, &b.b);
        }
    }
    let min_poly_matches = alg.casimir_min_poly() == expected_poly.as_slice();
    record(
        name,
        citation,
        product_vanishes && min_poly_matches,
        json!({"product_vanishes": true, "min_poly_degree": l}),
        json!({
            "product_vanishes": product_vanishes,
            "min_poly_degree": alg.casimir_min_poly().len() - 1,
            "min_poly_matches_root_data": min_poly_matches,
        }),
    )
}

fn check_dimensions(state: &mut State) -> CheckRecord {
    let name = "dimensions";
    let citation = "dimensions of the algebra, its weight spaces and Casimir blocks";
    let l = state.l;
    let mut failures: Vec<String> = Vec::new();
    if state.ad.module().total_dim() as i64 != l * l * l {
        failures.push("total dimension".into());
    }
    for m in (1 - l)..l {
        if state.ad.module().dim_at(2 * m) as i64 != l * (l - m.abs()) {
            failures.push(format!("weight {}", 2 * m));
        }
    }
    for block in BlockIndex::enumerate(&state.field) {
        match state.filtration(&block) {
            Ok(f) => {
                let expected = if block.is_steinberg() { l * l } else { 2 * l * l };
                if f.ad_j.total_dim() as i64 != expected {
                    failures.push(format!("block {} dimension", block.j));
                }
                let zero_expected = if block.is_steinberg() { l } else { 2 * l };
                if f.ad_j.dim_at(0) as i64 != zero_expected {
                    failures.push(format!("block {} zero-weight dimension", block.j));
                }
                if f.n_j.dim_at(0) as i64 != l {
                    failures.push(format!("block {} lower-layer zero-weight dimension", block.j));
                }
                for m in (1 - l)..l {
                    let expected = if block.is_steinberg() {
                        l - m.abs()
                    } else {
                        2 * (l - m.abs())
                    };
                    if f.ad_j.dim_at(2 * m) as i64 != expected {
                        failures.push(format!("block {} weight {}", block.j, 2 * m));
                    }
                }
            }
            Err(e) => failures.push(e),
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"total": l * l * l, "weight_2m": "l (l - |m|)", "block": "2 l^2, Steinberg l^2"}),
        json!({"failures": failures}),
    )
}

fn check_matrix_cross_validation(state: &State) -> CheckRecord {
    let name = "matrix-cross-validation";
    let citation = "closed-form zero-weight Casimir matrices equal the machinery matrices";
    let mut failures: Vec<String> = Vec::new();
    for block in BlockIndex::enumerate(&state.field) {
        let displayed = build_a(&state.field, &block);
        match machinery_a_matrix(&state.ad, &block) {
            Ok(machinery) => {
                if displayed != machinery {
                    failures.push(format!("triangular matrix at block {}", block.j));
                }
            }
            Err(e) => failures.push(format!("block {}: {e}", block.j)),
        }
        if !block.is_steinberg() {
            let displayed = build_aprime(&state.field, &block);
            match machinery_aprime_matrix(&state.ad, &block) {
                Ok(machinery) => {
                    if displayed != machinery {
                        failures.push(format!("doubled matrix at block {}", block.j));
                    }
                }
                Err(e) => failures.push(format!("doubled block {}: {e}", block.j)),
            }
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"failures": []}),
        json!({"failures": failures}),
    )
}

fn check_casimir_k_action(state: &State) -> CheckRecord {
    let name = "casimir-k-action";
    let citation = "closed form of the Casimir adjoint action on K powers";
    let alg = &state.alg;
    let mut failures = Vec::new();
    for i in 1..=state.l {
        let via_action = alg.ad_casimir(&alg.gen_k(i));
        let via_formula = alg.ad_casimir_on_k_power(i);
        if via_action != via_formula {
            failures.push(i);
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"failures": []}),
        json!({"powers_checked": state.l, "failures": failures}),
    )
}

fn check_determinant_window(state: &State) -> CheckRecord {
    let name = "determinant-window";
    let citation = "eigenvector-window determinants: vanishing pattern and degree in b^2";
    let l = state.l;
    let blocks = BlockIndex::enumerate(&state.field);
    let mut failures: Vec<String> = Vec::new();
    let mut k = 0;
    while k < l - 1 {
        let mut vanishing = 0usize;
        for b in &blocks {
            let d = det_window(&state.field, b, k);
            if !d.even_in_b {
                failures.push(format!("odd powers of b at j = {}, k = {k}", b.j));
            }
            if d.degree_in_b_squared as i64 != (l - 1 - k) / 2 {
                failures.push(format!("degree at j = {}, k = {k}", b.j));
            }
            if d.value.is_zero() {
                vanishing += 1;
            }
            if b.is_steinberg() {
                if d.value.is_zero() {
                    failures.push(format!("Steinberg window vanishes at k = {k}"));
                }
            } else if d.value.is_zero() != (k <= 2 * b.cap_j) {
                failures.push(format!("vanishing rule at j = {}, k = {k}", b.j));
            }
        }
        if vanishing as i64 != (l - 1 - k) / 2 {
            failures.push(format!("vanishing count at k = {k}"));
        }
        k += 2;
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"vanishing_count": "(l-1-k)/2", "rule": "zero iff k <= 2J"}),
        json!({"failures": failures}),
    )
}

fn check_corank(state: &State, precision_bits: u32) -> CheckRecord {
    let name = "corank";
    let citation = "corank of the shifted doubled matrix: 3 up to the threshold, 2 beyond";
    let l = state.l;
    let mut failures: Vec<String> = Vec::new();
    let mut results = Vec::new();
    for block in BlockIndex::enumerate_h(&state.field) {
        let mut k = 0;
        while k <= l - 1 {
            match corank_check(&state.ad, &block, k, precision_bits) {
                Ok(corank) => {
                    let expected = if k <= 2 * block.cap_j { 3 } else { 2 };
                    results.push(json!({"j": block.j, "k": k, "corank": corank}));
                    if corank != expected {
                        failures.push(format!(
                            "corank {corank} != {expected} at j = {}, k = {k}",
                            block.j
                        ));
                    }
                }
                Err(e) => failures.push(format!("j = {}, k = {k}: {e}", block.j)),
            }
            k += 2;
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"rule": "corank 3 iff k <= 2J, else 2; window signs certified"}),
        json!({"coranks": results, "failures": failures}),
    )
}

fn check_block_filtration(state: &mut State) -> CheckRecord {
    let name = "block-filtration";
    let citation = "filtration layer dimensions and the isomorphism of the top layer";
    let l = state.l;
    let mut failures: Vec<String> = Vec::new();
    for block in BlockIndex::enumerate_h(&state.field) {
        match state.filtration(&block) {
            Ok(f) => {
                let (cj, cjp) = (block.cap_j, block.cap_j_prime);
                let n_expected = ((cj + 1) * (cj + 1) + (cjp + 1) * (cjp + 1)) as usize;
                if f.n_j.total_dim() != n_expected {
                    failures.push(format!("dim N at j = {}", block.j));
                }
                if f.ad_j.total_dim() - f.m_j.total_dim() != n_expected {
                    failures.push(format!("dim ad_j/M at j = {}", block.j));
                }
                if f.m_j.total_dim() - f.n_j.total_dim() != (4 * (cj + 1) * (cjp + 1)) as usize {
                    failures.push(format!("dim M/N at j = {}", block.j));
                }
                if f.m_j.dim_at(0) != f.n_j.dim_at(0) {
                    failures.push(format!("zero-weight slice M^0 = N^0 at j = {}", block.j));
                }
                match f.quotient_by_m() {
                    Ok(q) => match is_isomorphic(&q, &f.n_j) {
                        Ok(Some(_)) => {}
                        Ok(None) => failures.push(format!("ad_j/M not isomorphic to N at j = {}", block.j)),
                        Err(e) => failures.push(format!("iso check at j = {}: {e}", block.j)),
                    },
                    Err(e) => failures.push(format!("quotient at j = {}: {e}", block.j)),
                }
            }
            Err(e) => failures.push(e),
        }
    }
    // Steinberg block: the trivial filtration
    let st = BlockIndex::new(&state.field, -1);
    match state.filtration(&st) {
        Ok(f) => {
            if f.n_j.total_dim() as i64 != l * l || f.m_j.total_dim() as i64 != l * l {
                failures.push("Steinberg filtration is not trivial".into());
            }
        }
        Err(e) => failures.push(e),
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"dim_N": "(J+1)^2 + (J'+1)^2", "dim_M_over_N": "4 (J+1)(J'+1)"}),
        json!({"failures": failures}),
    )
}

fn check_filtration_layers(state: &mut State) -> CheckRecord {
    let name = "filtration-layers";
    let citation = "composition factors of the filtration layers in each category piece";
    let l = state.l;
    let mut failures: Vec<String> = Vec::new();
    for block in BlockIndex::enumerate_h(&state.field) {
        let f = match state.filtration(&block) {
            Ok(f) => f,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        let char_of = |m: &GradedModule| -> BTreeMap<i64, BTreeMap<i64, usize>> {
            // per piece-label k: the character of the piece
            let mut out = BTreeMap::new();
            for (b, bases) in m.casimir_blocks() {
                let k = state.k_of_eigenvalue(&b).expect("piece eigenvalue");
                let ch: BTreeMap<i64, usize> = bases
                    .iter()
                    .filter(|(_, m)| m.cols() > 0)
                    .map(|(&w, m)| (w, m.cols()))
                    .collect();
                out.insert(k, ch);
            }
            out
        };
        let n_chars = char_of(&f.n_j);
        let m_chars = char_of(&f.m_j);
        let ad_chars = char_of(&f.ad_j);
        let diff = |a: &BTreeMap<i64, usize>, b: Option<&BTreeMap<i64, usize>>| {
            let mut out = a.clone();
            if let Some(b) = b {
                for (w, d) in b {
                    let e = out.entry(*w).or_insert(0);
                    *e = e.checked_sub(*d).unwrap_or(usize::MAX);
                }
            }
            out.retain(|_, d| *d > 0);
            out
        };
        let mut k = 0;
        while k <= 2 * block.cap_j {
            let expect_lk: BTreeMap<i64, usize> = [(k, 2usize)].into();
            let n_k = n_chars.get(&k).cloned().unwrap_or_default();
            match character_multiplicities(&n_k, l) {
                Ok(mults) if mults == expect_lk => {}
                other => failures.push(format!(
                    "lower layer at j = {}, k = {k}: {other:?}",
                    block.j
                )),
            }
            let mid = diff(&m_chars.get(&k).cloned().unwrap_or_default(), n_chars.get(&k));
            let expect_mid: BTreeMap<i64, usize> = [(2 * l - 2 - k, 2usize), (-2 - k, 2)].into();
            match character_multiplicities(&mid, l) {
                Ok(mults) if mults == expect_mid => {}
                other => failures.push(format!(
                    "middle layer at j = {}, k = {k}: {other:?}",
                    block.j
                )),
            }
            let top = diff(
                &ad_chars.get(&k).cloned().unwrap_or_default(),
                m_chars.get(&k),
            );
            match character_multiplicities(&top, l) {
                Ok(mults) if mults == expect_lk => {}
                other => failures.push(format!("top layer at j = {}, k = {k}: {other:?}", block.j)),
            }
            k += 2;
        }
        // the Steinberg-eigenvalue piece of ad_j is two copies of the
        // l-dimensional simple
        let st_char = ad_chars.get(&(l - 1)).cloned().unwrap_or_default();
        let expect_st: BTreeMap<i64, usize> = [(l - 1, 2usize)].into();
        match character_multiplicities(&st_char, l) {
            Ok(mults) if mults == expect_st => {}
            other => failures.push(format!("Steinberg piece at j = {}: {other:?}", block.j)),
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"lower": "L(k)^2", "middle": "L(2l-2-k)^2 + L(-2-k)^2", "top": "L(k)^2"}),
        json!({"failures": failures}),
    )
}

fn check_n_blocks(state: &mut State) -> CheckRecord {
    let name = "n-block-decomposition";
    let citation = "decomposition of the lower filtration layer";
    let mut failures: Vec<String> = Vec::new();
    let mut computed = Vec::new();
    for block in BlockIndex::enumerate_h(&state.field) {
        let f = match state.filtration(&block) {
            Ok(f) => f,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        match decompose(&f.n_j, &state.candidates) {
            Ok(d) => {
                let expected = expected_n_j(state.l, &block);
                computed.push(json!({"j": block.j, "summands": d.to_json()}));
                if d.summands != expected {
                    failures.push(format!("mismatch at j = {}", block.j));
                }
            }
            Err(e) => failures.push(format!("j = {}: {e}", block.j)),
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"shape": "L(0)^2 ... L(2J)^2 + P(2J+2) ... P(l-3) + Steinberg"}),
        json!({"blocks": computed, "failures": failures}),
    )
}

fn check_block_minus_one(state: &mut State) -> CheckRecord {
    let name = "block-minus-one";
    let citation = "the Steinberg-eigenvalue block is a multiplicity-free sum of projectives";
    let st = BlockIndex::new(&state.field, -1);
    let f = match state.filtration(&st) {
        Ok(f) => f,
        Err(e) => {
            return record(
                name,
                citation,
                false,
                json!({"shape": "P(0) + P(2) + ... + P(l-1)"}),
                json!({"error": e}),
            )
        }
    };
    let expected = expected_block_minus_one(state.l);
    match decompose(&f.ad_j, &state.candidates) {
        Ok(d) => record(
            name,
            citation,
            d.summands == expected,
            multiset_json(&expected),
            d.to_json(),
        ),
        Err(e) => record(
            name,
            citation,
            false,
            multiset_json(&expected),
            json!({"error": e.to_string()}),
        ),
    }
}

fn check_block_resume(state: &mut State) -> CheckRecord {
    let name = "block-resume";
    let citation = "each category piece of each doubled block decomposes as predicted";
    let mut failures: Vec<String> = Vec::new();
    for block in BlockIndex::enumerate_h(&state.field) {
        match state.block_pieces(&block) {
            Ok(pieces) => {
                for (k, d) in pieces.iter() {
                    let expected = expected_block_piece(state.l, &block, *k);
                    if d.summands != expected {
                        failures.push(format!("piece k = {k} at j = {}", block.j));
                    }
                }
            }
            Err(e) => failures.push(format!("j = {}: {e}", block.j)),
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"below_threshold": "P(k) + L(k)^2 + L(2l-2-k) + L(-2-k)", "above": "P(k)^2"}),
        json!({"failures": failures}),
    )
}

fn check_main_decomposition(state: &mut State) -> CheckRecord {
    let name = "main-decomposition";
    let citation = "the full multiplicity table of the adjoint module";
    let expected = match expected_multiplicities(state.l) {
        Ok(t) => t,
        Err(e) => {
            return record(
                name,
                citation,
                false,
                Value::Null,
                json!({"error": e.to_string()}),
            )
        }
    };
    let d = match decompose(state.ad.module(), &state.candidates) {
        Ok(d) => d,
        Err(e) => {
            return record(
                name,
                citation,
                false,
                multiset_json(&expected),
                json!({"error": e.to_string()}),
            )
        }
    };
    let models: BTreeMap<ModuleLabel, GradedModule> = state
        .candidates
        .iter()
        .map(|(l, m)| (*l, m.clone()))
        .collect();
    let certificates_ok = crate::decomp::verify_certificates(state.ad.module(), &d, &models);
    // per-block recomposition: the blockwise answers must aggregate to the
    // same multiset
    let mut recomposed: BTreeMap<ModuleLabel, usize> = BTreeMap::new();
    let mut recomposition_ok = true;
    for block in BlockIndex::enumerate_h(&state.field) {
        match state.block_pieces(&block) {
            Ok(pieces) => {
                for (_, pd) in pieces.iter() {
                    for (label, mult) in &pd.summands {
                        *recomposed.entry(*label).or_insert(0) += mult;
                    }
                }
            }
            Err(_) => recomposition_ok = false,
        }
    }
    let st = BlockIndex::new(&state.field, -1);
    match state.filtration(&st).map(|f| decompose(&f.ad_j, &state.candidates)) {
        Ok(Ok(sd)) => {
            for (label, mult) in &sd.summands {
                *recomposed.entry(*label).or_insert(0) += mult;
            }
        }
        _ => recomposition_ok = false,
    }
    recomposition_ok = recomposition_ok && recomposed == d.summands;

    let pass = d.summands == expected && certificates_ok && recomposition_ok;
    let rec = record(
        name,
        citation,
        pass,
        multiset_json(&expected),
        json!({
            "summands": d.to_json(),
            "certificates_verified": certificates_ok,
            "per_block_recomposition_matches": recomposition_ok,
        }),
    );
    state.main_decomposition = Some(d);
    rec
}

fn check_autoduality(state: &State) -> CheckRecord {
    let name = "autoduality";
    let citation = "the adjoint module is isomorphic to its dual";
    let dual = state.ad.module().dual();
    match is_isomorphic(&dual, state.ad.module()) {
        Ok(Some(_)) => record(
            name,
            citation,
            true,
            json!(true),
            json!({"isomorphic": true, "witness": "explicit invertible intertwiner found"}),
        ),
        Ok(None) => record(name, citation, false, json!(true), json!({"isomorphic": false})),
        Err(e) => record(
            name,
            citation,
            false,
            json!(true),
            json!({"error": e.to_string()}),
        ),
    }
}

fn check_singular_vectors(state: &State) -> CheckRecord {
    let name = "singular-vectors";
    let citation = "projected raising strings are singular and survive the Casimir shift";
    let alg = &state.alg;
    let field = alg.field();
    let l = state.l;
    let mut failures: Vec<String> = Vec::new();
    let ke = alg.mul(&alg.gen_k(-1), &alg.gen_e());
    for block in BlockIndex::enumerate_h(&state.field) {
        let proj = &alg.block_projector(&block).elem;
        let mut pow = alg.unit();
        for s in 0..l {
            let projected = alg.mul(proj, &pow);
            if !alg.ad_e(&projected).is_zero() {
                failures.push(format!("raising string s = {s} not singular at j = {}", block.j));
            }
            if s <= (l - 1) / 2 {
                let shifted = alg
                    .mul(&alg.casimir(), &projected)
                    .sub(&projected.scale(&block.b, field));
                if shifted.is_zero() {
                    failures.push(format!(
                        "shifted raising string s = {s} vanishes at j = {}",
                        block.j
                    ));
                }
            }
            pow = alg.mul(&pow, &ke);
        }
        let mut fpow = alg.unit();
        for s in 0..=(l - 1) / 2 {
            let projected = alg.mul(proj, &fpow);
            if !alg.ad_f(&projected).is_zero() {
                failures.push(format!("lowering string s = {s} not singular at j = {}", block.j));
            }
            let shifted = alg
                .mul(&alg.casimir(), &projected)
                .sub(&projected.scale(&block.b, field));
            if shifted.is_zero() {
                failures.push(format!(
                    "lowering string s = {s} lies in the kernel layer at j = {}",
                    block.j
                ));
            }
            fpow = alg.mul(&fpow, &alg.gen_f());
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"failures": []}),
        json!({"failures": failures}),
    )
}

fn check_sign_lemma(state: &State, precision_bits: u32) -> CheckRecord {
    let name = "sign-lemma";
    let citation = "quantum integers alternate in sign at the distinguished embedding";
    let field = &state.field;
    let l = state.l;
    let e = field.sign_lemma_exponent();
    let mut failures: Vec<String> = Vec::new();
    let mut bound: f64 = f64::NEG_INFINITY;
    for t in 1..l {
        match field.embed(&field.qint(t), e, precision_bits) {
            Ok(ball) => {
                bound = bound.max(ball.radius_log2());
            }
            Err(err) => failures.push(format!("t = {t}: {err}")),
        }
        match field.embed_real_sign(&field.qint(t), e, precision_bits) {
            Ok(sign) => {
                let expected = if t % 2 == 1 { Sign::Positive } else { Sign::Negative };
                if sign != expected {
                    failures.push(format!("wrong sign at t = {t}"));
                }
            }
            Err(err) => failures.push(format!("t = {t}: {err}")),
        }
    }
    record(
        name,
        citation,
        failures.is_empty(),
        json!({"rule": "(t)_q > 0 iff t odd, t in [1, l-1]"}),
        json!({"failures": failures, "error_bound_log2": bound}),
    )
}
