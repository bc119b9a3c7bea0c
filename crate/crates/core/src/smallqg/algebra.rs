//! The algebra engine: normal-ordering multiplication, Hopf maps, the
//! Casimir element, its minimal polynomial, and the block projectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::{Cyc, CycField};
use crate::modcat::BlockIndex;

use super::elem::{AlgElem, TensorElem};
use super::monomial::Monomial;

/// A Casimir block projector: the idempotent polynomial e_j evaluated at the
/// Casimir element. Left multiplication by `elem` projects u onto the
/// generalized b_j-eigenspace of the regular Casimir action.
#[derive(Debug, Clone)]
pub struct BlockProjector {
    pub block: BlockIndex,
    /// Coefficients of e_j(t), low to high.
    pub poly: Vec<Cyc>,
    pub elem: AlgElem,
}

/// The small quantum group u_q(sl2) for a fixed field configuration, with the
/// rewriting tables needed for products and coproducts precomputed.
#[derive(Debug)]
pub struct SmallQG {
    field: Arc<CycField>,
    l: usize,
    /// fbe[b][a] = normal form of F^b E^a.
    fbe: Vec<Vec<AlgElem>>,
    /// Powers of the coproducts of the generators.
    coprod_e_pow: Vec<TensorElem>,
    coprod_f_pow: Vec<TensorElem>,
    /// Powers of the antipode images (-K^-1 E)^a and (-F K)^b.
    antipode_e_pow: Vec<AlgElem>,
    antipode_f_pow: Vec<AlgElem>,
    casimir: AlgElem,
    /// Monic minimal polynomial of the Casimir, low to high coefficients.
    min_poly: Vec<Cyc>,
    projectors: Vec<BlockProjector>,
}

impl SmallQG {
    pub fn new(field: Arc<CycField>) -> Arc<SmallQG> {
        let l = field.l() as usize;

        // F^b E^a by single-step rewriting:
        //   F^b E = (F^(b-1) E) F - (F^(b-1) K - F^(b-1) K^-1) / (q - q^-1)
        // and F^b E^a = (F^b E^(a-1)) E.
        let mut fbe: Vec<Vec<AlgElem>> = vec![vec![AlgElem::zero(); l]; l];
        for b in 0..l {
            fbe[b][0] = AlgElem::from_term(Monomial::new(0, b as u16, 0), field.one());
        }
        let qdiff_inv = field
            .inv(&field.q_pow(1).sub(&field.q_pow(-1)))
            .expect("q - q^-1 is nonzero");
        fbe[0][1] = AlgElem::from_term(Monomial::e(), field.one());
        for b in 1..l {
            let shifted = right_mul_f(&fbe[b - 1][1], &field, l);
            let k_part = AlgElem::from_term(Monomial::new(0, b as u16 - 1, 1), qdiff_inv.clone())
                .sub(&AlgElem::from_term(
                    Monomial::new(0, b as u16 - 1, l as u16 - 1),
                    qdiff_inv.clone(),
                ));
            fbe[b][1] = shifted.sub(&k_part);
        }
        for a in 2..l {
            for b in 0..l {
                let val = right_mul_e(&fbe[b][a - 1], &fbe, &field, l);
                fbe[b][a] = val;
            }
        }

        // Coproduct powers. Delta(E) = E x 1 + K x E, Delta(F) = F x K^-1 + 1 x F.
        let coprod_e = {
            let mut t = TensorElem::from_term(Monomial::e(), Monomial::unit(), field.one());
            t.add_term(Monomial::k(1), Monomial::e(), &field.one());
            t
        };
        let coprod_f = {
            let mut t =
                TensorElem::from_term(Monomial::f(), Monomial::k(l as u16 - 1), field.one());
            t.add_term(Monomial::unit(), Monomial::f(), &field.one());
            t
        };
        let tensor_pows = |base: &TensorElem| -> Vec<TensorElem> {
            let mut pows =
                vec![TensorElem::from_term(Monomial::unit(), Monomial::unit(), field.one())];
            for a in 1..l {
                let next = tensor_mul_raw(&pows[a - 1], base, &fbe, &field, l);
                pows.push(next);
            }
            pows
        };
        let coprod_e_pow = tensor_pows(&coprod_e);
        let coprod_f_pow = tensor_pows(&coprod_f);

        // Antipode powers: S(E) = -K^-1 E, S(F) = -F K.
        let s_e = AlgElem::from_term(Monomial::new(1, 0, l as u16 - 1), field.q_pow(-2).neg());
        // S(E) = -K^-1 E = -q^-2 E K^-1 in normal order
        let s_f = {
            // S(F) = -F K, already normally ordered
            AlgElem::from_term(Monomial::new(0, 1, 1), field.one().neg())
        };
        let elem_pows = |base: &AlgElem| -> Vec<AlgElem> {
            let mut pows = vec![AlgElem::from_term(Monomial::unit(), field.one())];
            for a in 1..l {
                let next = mul_raw(&pows[a - 1], base, &fbe, &field, l);
                pows.push(next);
            }
            pows
        };
        let antipode_e_pow = elem_pows(&s_e);
        let antipode_f_pow = elem_pows(&s_f);

        // Casimir: X = E F + (q^-1 K + q K^-1) / (q - q^-1)^2.
        let qd2 = field.qdiff_sq_inv();
        let mut casimir = AlgElem::from_term(Monomial::new(1, 1, 0), field.one());
        casimir.add_term(Monomial::k(1), &field.mul(&field.q_pow(-1), &qd2));
        casimir.add_term(Monomial::k(l as u16 - 1), &field.mul(&field.q_pow(1), &qd2));

        let mut alg = SmallQG {
            field: field.clone(),
            l,
            fbe,
            coprod_e_pow,
            coprod_f_pow,
            antipode_e_pow,
            antipode_f_pow,
            casimir,
            min_poly: Vec::new(),
            projectors: Vec::new(),
        };
        alg.min_poly = alg.compute_min_poly();
        alg.projectors = alg.compute_projectors();
        Arc::new(alg)
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn unit(&self) -> AlgElem {
        AlgElem::from_term(Monomial::unit(), self.field.one())
    }

    pub fn gen_e(&self) -> AlgElem {
        AlgElem::from_term(Monomial::e(), self.field.one())
    }

    pub fn gen_f(&self) -> AlgElem {
        AlgElem::from_term(Monomial::f(), self.field.one())
    }

    pub fn gen_k(&self, c: i64) -> AlgElem {
        let c = c.rem_euclid(self.l as i64) as u16;
        AlgElem::from_term(Monomial::k(c), self.field.one())
    }

    pub fn monomial_elem(&self, m: Monomial) -> AlgElem {
        AlgElem::from_term(m, self.field.one())
    }

    /// All l^3 basis monomials in lexicographic order.
    pub fn basis(&self) -> Vec<Monomial> {
        let l = self.l as u16;
        let mut out = Vec::with_capacity(self.l.pow(3));
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    out.push(Monomial::new(a, b, c));
                }
            }
        }
        out
    }

    /// Product in PBW normal form.
    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        mul_raw(x, y, &self.fbe, &self.field, self.l)
    }

    pub fn pow(&self, x: &AlgElem, n: u64) -> AlgElem {
        let mut acc = self.unit();
        let mut base = x.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn tensor_mul(&self, x: &TensorElem, y: &TensorElem) -> TensorElem {
        tensor_mul_raw(x, y, &self.fbe, &self.field, self.l)
    }

    /// Coproduct, extended over PBW monomials as an algebra homomorphism.
    pub fn coproduct(&self, x: &AlgElem) -> TensorElem {
        let mut out = TensorElem::zero();
        for (m, c) in x.terms() {
            let ef = self.tensor_mul(
                &self.coprod_e_pow[m.a as usize],
                &self.coprod_f_pow[m.b as usize],
            );
            // Delta(K^c) = K^c x K^c just shifts both K-exponents.
            for ((left, right), coeff) in ef.terms() {
                let l16 = self.l as u16;
                let shift = |mono: &Monomial| Monomial {
                    a: mono.a,
                    b: mono.b,
                    c: (mono.c + m.c) % l16,
                };
                out.add_term(shift(left), shift(right), &self.field.mul(coeff, c));
            }
        }
        out
    }

    /// Antipode, extended as an algebra anti-homomorphism:
    /// S(E^a F^b K^c) = K^-c S(F)^b S(E)^a.
    pub fn antipode(&self, x: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, c) in x.terms() {
            let fk_e = self.mul(
                &self.antipode_f_pow[m.b as usize],
                &self.antipode_e_pow[m.a as usize],
            );
            let with_k = self.mul(&self.gen_k(-(m.c as i64)), &fk_e);
            out = out.add(&with_k.scale(c, &self.field));
        }
        out
    }

    /// Counit.
    pub fn counit(&self, x: &AlgElem) -> Cyc {
        let mut out = self.field.zero();
        for (m, c) in x.terms() {
            if m.a == 0 && m.b == 0 {
                out = out.add(c);
            }
        }
        out
    }

    /// The involution exchanging E and F and inverting K.
    pub fn omega(&self, x: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, c) in x.terms() {
            // omega(E^a F^b K^c) = F^a E^b K^-c
            let fe = &self.fbe[m.a as usize][m.b as usize];
            let neg_c = (self.l as u16 - m.c) % self.l as u16;
            for (mono, coeff) in fe.terms() {
                let nm = Monomial {
                    a: mono.a,
                    b: mono.b,
                    c: (mono.c + neg_c) % self.l as u16,
                };
                out.add_term(nm, &self.field.mul(coeff, c));
            }
        }
        out
    }

    /// The Casimir element X = EF + (q^-1 K + q K^-1)/(q - q^-1)^2.
    pub fn casimir(&self) -> AlgElem {
        self.casimir.clone()
    }

    /// The equivalent lowering-first expression FE + (qK + q^-1 K^-1)/(q-q^-1)^2.
    pub fn casimir_fe_form(&self) -> AlgElem {
        let qd2 = self.field.qdiff_sq_inv();
        let mut x = self.mul(&self.gen_f(), &self.gen_e());
        x.add_term(Monomial::k(1), &self.field.mul(&self.field.q_pow(1), &qd2));
        x.add_term(
            Monomial::k(self.l as u16 - 1),
            &self.field.mul(&self.field.q_pow(-1), &qd2),
        );
        x
    }

    /// Conjugation by K^t: scales each monomial by q^(t * degree).
    pub fn conj_k(&self, x: &AlgElem, t: i64) -> AlgElem {
        let mut out = AlgElem::zero();
        for (m, c) in x.terms() {
            out.add_term(*m, &self.field.mul(c, &self.field.q_pow(t * m.degree())));
        }
        out
    }

    /// Adjoint action of E: ad(E) x = E x - K x K^-1 E.
    pub fn ad_e(&self, x: &AlgElem) -> AlgElem {
        let left = self.mul(&self.gen_e(), x);
        let right = self.mul(&self.conj_k(x, 1), &self.gen_e());
        left.sub(&right)
    }

    /// Adjoint action of F: ad(F) x = (F x - x F) K.
    pub fn ad_f(&self, x: &AlgElem) -> AlgElem {
        let comm = self.mul(&self.gen_f(), x).sub(&self.mul(x, &self.gen_f()));
        self.mul(&comm, &self.gen_k(1))
    }

    /// Adjoint action of K^t.
    pub fn ad_k(&self, x: &AlgElem, t: i64) -> AlgElem {
        self.conj_k(x, t)
    }

    /// Adjoint action of the Casimir element.
    pub fn ad_casimir(&self, x: &AlgElem) -> AlgElem {
        let qd2 = self.field.qdiff_sq_inv();
        let ef = self.ad_e(&self.ad_f(x));
        let k_part = self
            .conj_k(x, 1)
            .scale(&self.field.q_pow(-1), &self.field)
            .add(&self.conj_k(x, -1).scale(&self.field.q_pow(1), &self.field));
        ef.add(&k_part.scale(&qd2, &self.field))
    }

    /// The closed-form right-hand side for ad(X) K^i:
    /// b_(2i-2) K^i - (q^i - q^-i)^2 X K^(i+1) + (i)_q (i+1)_q K^(i+2).
    pub fn ad_casimir_on_k_power(&self, i: i64) -> AlgElem {
        let f = &self.field;
        let mut out = self.gen_k(i).scale(&f.casimir_root(2 * i - 2), f);
        let mid_coef = {
            let d = f.q_pow(i).sub(&f.q_pow(-i));
            f.mul(&d, &d)
        };
        let xk = self.mul(&self.casimir, &self.gen_k(i + 1));
        out = out.sub(&xk.scale(&mid_coef, f));
        let last = f.mul(&f.qint(i), &f.qint(i + 1));
        out = out.add(&self.gen_k(i + 2).scale(&last, f));
        out
    }

    /// Monic minimal polynomial of the Casimir in u, low-to-high coefficients.
    pub fn casimir_min_poly(&self) -> &[Cyc] {
        &self.min_poly
    }

    pub fn block_projectors(&self) -> &[BlockProjector] {
        &self.projectors
    }

    pub fn block_projector(&self, block: &BlockIndex) -> &BlockProjector {
        self.projectors
            .iter()
            .find(|p| p.block.j == block.j)
            .expect("canonical block label")
    }

    fn compute_min_poly(&self) -> Vec<Cyc> {
        // Reduce successive Casimir powers until they become dependent; the
        // tracked combination is the monic minimal polynomial.
        let field = &self.field;
        struct Row {
            vec: AlgElem,
            combo: Vec<Cyc>,
        }
        let mut rows: BTreeMap<Monomial, Row> = BTreeMap::new();
        let mut xpow = self.unit();
        for t in 0..=self.l + 1 {
            let mut v = xpow.clone();
            let mut combo = vec![field.zero(); t + 1];
            combo[t] = field.one();
            loop {
                let Some((&lead, coeff)) = v.terms().iter().next_back() else {
                    // dependence found
                    return combo;
                };
                let coeff = coeff.clone();
                match rows.get(&lead) {
                    Some(row) => {
                        v = v.sub(&row.vec.scale(&coeff, field));
                        for (i, rc) in row.combo.iter().enumerate() {
                            let delta = field.mul(rc, &coeff);
                            combo[i] = combo[i].sub(&delta);
                        }
                    }
                    None => {
                        let inv = field.inv(&coeff).expect("leading coefficient nonzero");
                        rows.insert(
                            lead,
                            Row {
                                vec: v.scale(&inv, field),
                                combo: combo.iter().map(|c| field.mul(c, &inv)).collect(),
                            },
                        );
                        break;
                    }
                }
            }
            xpow = self.mul(&xpow, &self.casimir);
        }
        unreachable!("the Casimir satisfies a degree-l equation");
    }

    fn compute_projectors(&self) -> Vec<BlockProjector> {
        let field = &self.field;
        let blocks = BlockIndex::enumerate(field);
        // Factor the minimal polynomial over the known Casimir roots.
        let mut factored: Vec<(BlockIndex, usize)> = Vec::new();
        let mut rest = self.min_poly.clone();
        for b in &blocks {
            let mut mult = 0usize;
            loop {
                let (quot, rem) = synthetic_div(&rest, &b.b, field);
                if rem.is_zero() {
                    rest = quot;
                    mult += 1;
                } else {
                    break;
                }
            }
            assert!(mult > 0, "every Casimir root appears in the minimal polynomial");
            factored.push((b.clone(), mult));
        }
        assert_eq!(
            rest.len(),
            1,
            "minimal polynomial must split over the Casimir roots"
        );

        let mut projectors = Vec::new();
        let mut idempotent_sum: Vec<Cyc> = vec![field.zero()];
        for (block, mult) in &factored {
            // g = min_poly / (t - b)^mult, then invert g as a series at b to
            // the required order to get the interpolation factor.
            let mut g = self.min_poly.clone();
            for _ in 0..*mult {
                let (quot, rem) = synthetic_div(&g, &block.b, field);
                assert!(rem.is_zero());
                g = quot;
            }
            let c0 = eval_poly(&g, &block.b, field);
            let c0_inv = field.inv(&c0).expect("g(b) is nonzero");
            let u = if *mult == 1 {
                vec![c0_inv.clone()]
            } else {
                // u(t) = 1/c0 - c1/c0^2 (t - b), with c1 = g'(b)
                let c1 = eval_poly(&poly_derivative(&g, field), &block.b, field);
                let lin = field.mul(&c1, &field.mul(&c0_inv, &c0_inv)).neg();
                let const_term = c0_inv.add(&field.mul(&lin, &block.b).neg());
                vec![const_term, lin]
            };
            let e_poly = poly_mul(&u, &g, field);
            idempotent_sum = poly_add(&idempotent_sum, &e_poly, field);
            let elem = self.eval_poly_at_casimir(&e_poly);
            projectors.push(BlockProjector {
                block: block.clone(),
                poly: e_poly,
                elem,
            });
        }
        // partition of unity
        assert!(
            idempotent_sum.len() == 1 && idempotent_sum[0] == field.one(),
            "block idempotents must sum to 1"
        );
        projectors
    }

    /// Evaluates a polynomial at the Casimir element by Horner's rule.
    pub fn eval_poly_at_casimir(&self, poly: &[Cyc]) -> AlgElem {
        let mut acc = AlgElem::zero();
        for c in poly.iter().rev() {
            acc = self.mul(&acc, &self.casimir);
            acc.add_term(Monomial::unit(), c);
        }
        acc
    }

    /// JSON dump of the structure constants: one record per pair of basis
    /// monomials with the sparse normal form of their product.
    pub fn structure_constants_json(&self) -> serde_json::Value {
        let basis = self.basis();
        let mut records = Vec::with_capacity(basis.len() * basis.len());
        for m1 in &basis {
            for m2 in &basis {
                let prod = self.mul(&self.monomial_elem(*m1), &self.monomial_elem(*m2));
                let terms: Vec<serde_json::Value> = prod
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        serde_json::json!({
                            "monomial": [m.a, m.b, m.c],
                            "coefficient": c.to_json(),
                        })
                    })
                    .collect();
                records.push(serde_json::json!({
                    "left": [m1.a, m1.b, m1.c],
                    "right": [m2.a, m2.b, m2.c],
                    "product": terms,
                }));
            }
        }
        serde_json::Value::Array(records)
    }
}

/// Right multiplication by F: E^a F^b K^c . F = q^(-2c) E^a F^(b+1) K^c.
fn right_mul_f(x: &AlgElem, field: &CycField, l: usize) -> AlgElem {
    let mut out = AlgElem::zero();
    for (m, c) in x.terms() {
        if m.b as usize + 1 >= l {
            continue;
        }
        let nm = Monomial::new(m.a, m.b + 1, m.c);
        out.add_term(nm, &field.mul(c, &field.q_pow(-2 * m.c as i64)));
    }
    out
}

/// Right multiplication by E, using the F^b E table.
fn right_mul_e(x: &AlgElem, fbe: &[Vec<AlgElem>], field: &CycField, l: usize) -> AlgElem {
    let mut out = AlgElem::zero();
    for (m, c) in x.terms() {
        let scale = field.mul(c, &field.q_pow(2 * m.c as i64));
        for (t, tc) in fbe[m.b as usize][1].terms() {
            if m.a as usize + t.a as usize >= l {
                continue;
            }
            let nm = Monomial::new(
                m.a + t.a,
                t.b,
                ((t.c + m.c) as usize % l) as u16,
            );
            out.add_term(nm, &field.mul(&scale, tc));
        }
    }
    out
}

/// Product of two normally ordered monomials:
///   E^a1 F^b1 K^c1 . E^a2 F^b2 K^c2
///     = q^(2 c1 (a2 - b2)) E^a1 (F^b1 E^a2) F^b2 K^(c1 + c2)
/// with the inner factor expanded through the precomputed table.
fn mul_monomial(
    m1: &Monomial,
    m2: &Monomial,
    coeff: &Cyc,
    fbe: &[Vec<AlgElem>],
    field: &CycField,
    l: usize,
    out: &mut AlgElem,
) {
    let front = field.mul(
        coeff,
        &field.q_pow(2 * m1.c as i64 * (m2.a as i64 - m2.b as i64)),
    );
    for (t, tc) in fbe[m1.b as usize][m2.a as usize].terms() {
        let a = m1.a as usize + t.a as usize;
        let b = t.b as usize + m2.b as usize;
        if a >= l || b >= l {
            continue;
        }
        let c = (t.c as usize + m1.c as usize + m2.c as usize) % l;
        let scale = field.mul(&front, &field.q_pow(-2 * (t.c as i64) * (m2.b as i64)));
        out.add_term(
            Monomial::new(a as u16, b as u16, c as u16),
            &field.mul(&scale, tc),
        );
    }
}

fn mul_raw(x: &AlgElem, y: &AlgElem, fbe: &[Vec<AlgElem>], field: &CycField, l: usize) -> AlgElem {
    let mut out = AlgElem::zero();
    for (m1, c1) in x.terms() {
        for (m2, c2) in y.terms() {
            let c = field.mul(c1, c2);
            mul_monomial(m1, m2, &c, fbe, field, l, &mut out);
        }
    }
    out
}

fn tensor_mul_raw(
    x: &TensorElem,
    y: &TensorElem,
    fbe: &[Vec<AlgElem>],
    field: &CycField,
    l: usize,
) -> TensorElem {
    let mut out = TensorElem::zero();
    for ((xl, xr), xc) in x.terms() {
        for ((yl, yr), yc) in y.terms() {
            let mut left = AlgElem::zero();
            mul_monomial(xl, yl, &field.one(), fbe, field, l, &mut left);
            let mut right = AlgElem::zero();
            mul_monomial(xr, yr, &field.one(), fbe, field, l, &mut right);
            let c = field.mul(xc, yc);
            for (lm, lc) in left.terms() {
                for (rm, rc) in right.terms() {
                    let coeff = field.mul(&c, &field.mul(lc, rc));
                    out.add_term(*lm, *rm, &coeff);
                }
            }
        }
    }
    out
}

/// Division of a polynomial by (t - b): returns (quotient, remainder).
fn synthetic_div(poly: &[Cyc], b: &Cyc, field: &CycField) -> (Vec<Cyc>, Cyc) {
    if poly.len() <= 1 {
        return (
            vec![],
            poly.first().cloned().unwrap_or_else(|| field.zero()),
        );
    }
    let mut quot = vec![field.zero(); poly.len() - 1];
    let mut carry = field.zero();
    for i in (0..poly.len()).rev() {
        let cur = poly[i].add(&field.mul(&carry, b));
        if i == 0 {
            return (quot, cur);
        }
        quot[i - 1] = cur.clone();
        carry = cur;
    }
    unreachable!()
}

fn eval_poly(poly: &[Cyc], x: &Cyc, field: &CycField) -> Cyc {
    let mut acc = field.zero();
    for c in poly.iter().rev() {
        acc = field.mul(&acc, x).add(c);
    }
    acc
}

fn poly_derivative(poly: &[Cyc], field: &CycField) -> Vec<Cyc> {
    if poly.len() <= 1 {
        return vec![field.zero()];
    }
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&crate::cyclotomic::Rat::from(num_bigint::BigInt::from(i))))
        .collect()
}

fn poly_mul(a: &[Cyc], b: &[Cyc], field: &CycField) -> Vec<Cyc> {
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&field.mul(ai, bj));
        }
    }
    while out.len() > 1 && out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

fn poly_add(a: &[Cyc], b: &[Cyc], field: &CycField) -> Vec<Cyc> {
    let n = a.len().max(b.len());
    let mut out = vec![field.zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].add(c);
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = out[i].add(c);
    }
    while out.len() > 1 && out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::FieldConfig;

    fn algebra(l: u64) -> Arc<SmallQG> {
        SmallQG::new(CycField::new(FieldConfig::new(l)).unwrap())
    }

    #[test]
    fn defining_relations() {
        for l in [3u64, 5] {
            let u = algebra(l);
            let f = u.field().clone();
            let li = l as i64;
            // K E K^-1 = q^2 E
            let lhs = u.mul(&u.mul(&u.gen_k(1), &u.gen_e()), &u.gen_k(li - 1));
            assert_eq!(lhs, u.gen_e().scale(&f.q_pow(2), &f));
            // K F K^-1 = q^-2 F
            let lhs = u.mul(&u.mul(&u.gen_k(1), &u.gen_f()), &u.gen_k(li - 1));
            assert_eq!(lhs, u.gen_f().scale(&f.q_pow(-2), &f));
            // E F - F E = (K - K^-1)/(q - q^-1)
            let comm = u
                .mul(&u.gen_e(), &u.gen_f())
                .sub(&u.mul(&u.gen_f(), &u.gen_e()));
            let qdiff_inv = f.inv(&f.q_pow(1).sub(&f.q_pow(-1))).unwrap();
            let expected = u
                .gen_k(1)
                .sub(&u.gen_k(li - 1))
                .scale(&qdiff_inv, &f);
            assert_eq!(comm, expected);
            // E^l = F^l = 0, K^l = 1
            assert!(u.pow(&u.gen_e(), l).is_zero());
            assert!(u.pow(&u.gen_f(), l).is_zero());
            assert_eq!(u.pow(&u.gen_k(1), l), u.unit());
            // E^(l-1) * E = 0
            assert!(u.mul(&u.pow(&u.gen_e(), l - 1), &u.gen_e()).is_zero());
        }
    }

    #[test]
    fn fe_normal_form() {
        let u = algebra(3);
        let f = u.field().clone();
        // F E = E F - (q - q^-1)^-1 K + (q - q^-1)^-1 K^-1
        let fe = u.mul(&u.gen_f(), &u.gen_e());
        let qdiff_inv = f.inv(&f.q_pow(1).sub(&f.q_pow(-1))).unwrap();
        let mut expected = AlgElem::from_term(Monomial::new(1, 1, 0), f.one());
        expected.add_term(Monomial::k(1), &qdiff_inv.neg());
        expected.add_term(Monomial::k(2), &qdiff_inv);
        assert_eq!(fe, expected);
    }

    #[test]
    fn associativity_on_words() {
        // evaluating random words with different association orders gives the
        // same normal form; this is the confluence check for the rewriting
        let u = algebra(5);
        let f = u.field().clone();
        let letters = [
            u.gen_e(),
            u.gen_f(),
            u.gen_k(1),
            u.gen_e().scale(&f.q_pow(3), &f),
            u.gen_f().add(&u.gen_k(2)),
        ];
        let mut state = 12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for _ in 0..40 {
            let n = 3 + next() % 4; // words of length 3..6
            let word: Vec<&AlgElem> = (0..n).map(|_| &letters[next() % letters.len()]).collect();
            let left = word
                .iter()
                .skip(1)
                .fold(word[0].clone(), |acc, x| u.mul(&acc, x));
            // right-associated evaluation
            let mut right = word[n - 1].clone();
            for x in word[..n - 1].iter().rev() {
                right = u.mul(x, &right);
            }
            assert_eq!(left, right);
            // a random middle split
            if n >= 4 {
                let mid = 1 + next() % (n - 2);
                let a = word[..mid]
                    .iter()
                    .skip(1)
                    .fold(word[0].clone(), |acc, x| u.mul(&acc, x));
                let mut b = word[n - 1].clone();
                for x in word[mid..n - 1].iter().rev() {
                    b = u.mul(x, &b);
                }
                assert_eq!(u.mul(&a, &b), left);
            }
        }
    }

    #[test]
    fn hopf_structure_on_generators() {
        let u = algebra(3);
        let f = u.field().clone();
        // Delta(E) = E x 1 + K x E
        let d = u.coproduct(&u.gen_e());
        let mut expected = TensorElem::from_term(Monomial::e(), Monomial::unit(), f.one());
        expected.add_term(Monomial::k(1), Monomial::e(), &f.one());
        assert_eq!(d, expected);
        // S(K) = K^-1
        assert_eq!(u.antipode(&u.gen_k(1)), u.gen_k(2));
        // counit
        assert_eq!(u.counit(&u.unit()), f.one());
        assert!(u.counit(&u.gen_e()).is_zero());
        assert_eq!(u.counit(&u.gen_k(1)), f.one());
    }

    #[test]
    fn antipode_axiom_on_monomials() {
        // m (S x id) Delta = counit * unit on every basis monomial
        for l in [3u64] {
            let u = algebra(l);
            for m in u.basis() {
                let d = u.coproduct(&u.monomial_elem(m));
                let mut acc = AlgElem::zero();
                for ((x1, x2), c) in d.terms() {
                    let s = u.antipode(&u.monomial_elem(*x1));
                    let prod = u.mul(&s, &u.monomial_elem(*x2));
                    acc = acc.add(&prod.scale(c, u.field()));
                }
                let expected =
                    AlgElem::from_term(Monomial::unit(), u.counit(&u.monomial_elem(m)));
                assert_eq!(acc, expected, "antipode axiom fails on {m}");
            }
        }
    }

    #[test]
    fn counit_axioms_on_monomials() {
        let u = algebra(3);
        for m in u.basis() {
            let d = u.coproduct(&u.monomial_elem(m));
            let mut left = AlgElem::zero();
            let mut right = AlgElem::zero();
            for ((x1, x2), c) in d.terms() {
                let e1 = u.counit(&u.monomial_elem(*x1));
                left = left.add(&u.monomial_elem(*x2).scale(&u.field().mul(&e1, c), u.field()));
                let e2 = u.counit(&u.monomial_elem(*x2));
                right = right.add(&u.monomial_elem(*x1).scale(&u.field().mul(&e2, c), u.field()));
            }
            assert_eq!(left, u.monomial_elem(m), "(eps x id) Delta = id fails on {m}");
            assert_eq!(right, u.monomial_elem(m), "(id x eps) Delta = id fails on {m}");
        }
    }

    #[test]
    fn omega_is_an_involutive_algebra_map() {
        let u = algebra(5);
        assert_eq!(u.omega(&u.gen_e()), u.gen_f());
        assert_eq!(u.omega(&u.gen_f()), u.gen_e());
        assert_eq!(u.omega(&u.gen_k(1)), u.gen_k(4));
        let samples = [
            u.mul(&u.gen_e(), &u.gen_f()),
            u.mul(&u.gen_k(2), &u.gen_e()).add(&u.gen_f()),
            u.casimir(),
        ];
        for x in &samples {
            assert_eq!(u.omega(&u.omega(x)), *x);
            for y in &samples {
                assert_eq!(
                    u.omega(&u.mul(x, y)),
                    u.mul(&u.omega(x), &u.omega(y)),
                    "omega is multiplicative"
                );
            }
        }
    }

    #[test]
    fn casimir_forms_agree_and_central() {
        for l in [3u64, 5] {
            let u = algebra(l);
            assert_eq!(u.casimir(), u.casimir_fe_form());
            for g in [u.gen_e(), u.gen_f(), u.gen_k(1)] {
                assert_eq!(
                    u.mul(&u.casimir(), &g),
                    u.mul(&g, &u.casimir()),
                    "Casimir commutes with generators at l = {l}"
                );
            }
        }
    }

    #[test]
    fn casimir_minimal_polynomial() {
        for l in [3u64, 5] {
            let u = algebra(l);
            let f = u.field().clone();
            let li = l as i64;
            // degree is exactly l and the roots are the b_j with the right
            // multiplicities
            assert_eq!(u.casimir_min_poly().len() as i64, li + 1);
            // the full product prod_j (X - b_j) over j mod l vanishes
            let mut prod = u.unit();
            for j in 0..li {
                let mut factor = u.casimir();
                factor.add_term(Monomial::unit(), &f.casimir_root(j).neg());
                prod = u.mul(&prod, &factor);
            }
            assert!(prod.is_zero(), "Casimir equation fails at l = {l}");
        }
    }

    #[test]
    fn block_projectors_partition_unity() {
        for l in [3u64, 5] {
            let u = algebra(l);
            let f = u.field().clone();
            let projectors = u.block_projectors();
            let mut sum = AlgElem::zero();
            for p in projectors {
                sum = sum.add(&p.elem);
            }
            assert_eq!(sum, u.unit(), "projectors sum to 1 at l = {l}");
            for (i, p) in projectors.iter().enumerate() {
                // idempotent
                assert_eq!(u.mul(&p.elem, &p.elem), p.elem.clone());
                // orthogonal
                for q in projectors.iter().skip(i + 1) {
                    assert!(u.mul(&p.elem, &q.elem).is_zero());
                }
                // (X - b_j)^mult annihilates the block
                let mut shifted = u.casimir();
                shifted.add_term(Monomial::unit(), &p.block.b.neg());
                let pow = u.pow(&shifted, p.block.root_multiplicity as u64);
                assert!(u.mul(&pow, &p.elem).is_zero());
                if p.block.root_multiplicity == 2 {
                    // but the first power does not
                    assert!(!u.mul(&shifted, &p.elem).is_zero());
                }
            }
        }
    }

    #[test]
    fn casimir_k_power_formula_matches_adjoint_action() {
        for l in [3u64, 5] {
            let u = algebra(l);
            for i in 1..=l as i64 {
                let via_action = u.ad_casimir(&u.gen_k(i));
                let via_formula = u.ad_casimir_on_k_power(i);
                assert_eq!(via_action, via_formula, "Casimir action on K^{i} at l = {l}");
            }
        }
    }

    #[test]
    fn adjoint_kills_the_unit() {
        let u = algebra(3);
        assert!(u.ad_e(&u.unit()).is_zero());
        assert!(u.ad_f(&u.unit()).is_zero());
        assert_eq!(u.ad_k(&u.unit(), 1), u.unit());
    }

    #[test]
    fn adjoint_k_scales_by_weight() {
        let u = algebra(3);
        let f = u.field().clone();
        assert_eq!(u.ad_k(&u.gen_e(), 1), u.gen_e().scale(&f.q_pow(2), &f));
        assert_eq!(u.ad_k(&u.gen_f(), 1), u.gen_f().scale(&f.q_pow(-2), &f));
    }
}
