//! Sparse algebra elements and tensor-square elements.

use std::collections::BTreeMap;
use std::fmt;

use crate::cyclotomic::{Cyc, CycField, Rat};

use super::monomial::Monomial;

/// An element of u as a sparse combination of PBW monomials. Stored
/// coefficients are always nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElem {
    terms: BTreeMap<Monomial, Cyc>,
}

impl AlgElem {
    pub fn zero() -> AlgElem {
        AlgElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(m: Monomial, c: Cyc) -> AlgElem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgElem { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyc> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Cyc> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &c.neg());
        }
        out
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Cyc, field: &CycField) -> AlgElem {
        if s.is_zero() {
            return AlgElem::zero();
        }
        AlgElem {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, field.mul(c, s)))
                .collect(),
        }
    }

    pub fn scale_rat(&self, s: &Rat) -> AlgElem {
        use num_traits::Zero;
        if s.is_zero() {
            return AlgElem::zero();
        }
        AlgElem {
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale(s))).collect(),
        }
    }

    /// True when every monomial has the same adjoint weight; returns it.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d == m.degree() => {}
                _ => return None,
            }
        }
        deg
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({}) {}", c, m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of u tensor u, used by the coproduct and the Hopf axiom checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElem {
    terms: BTreeMap<(Monomial, Monomial), Cyc>,
}

impl TensorElem {
    pub fn zero() -> TensorElem {
        TensorElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(left: Monomial, right: Monomial, c: Cyc) -> TensorElem {
        let mut t = TensorElem::zero();
        t.add_term(left, right, &c);
        t
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial), Cyc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, left: Monomial, right: Monomial, c: &Cyc) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(c);
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add(&self, other: &TensorElem) -> TensorElem {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(*l, *r, c);
        }
        out
    }

    pub fn sub(&self, other: &TensorElem) -> TensorElem {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(*l, *r, &c.neg());
        }
        out
    }
}
