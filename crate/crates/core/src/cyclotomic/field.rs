//! The field Q(zeta_l) represented as Q[x] / Phi_l(x).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::rat::{format_rat, parse_rat, Rat};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CycError {
    #[error("division by zero in Q(zeta)")]
    DivisionByZero,
    #[error("l must be an odd integer >= 3, got {0}")]
    InvalidL(u64),
    #[error("root exponent {exponent} is not coprime to l = {l}")]
    InvalidRootExponent { exponent: u64, l: u64 },
    #[error("interval arithmetic could not certify a sign after {retries} retries")]
    SignInconclusive { retries: u32 },
}

/// Chooses the field: `l` fixes Q(zeta_l) and `root_exponent` selects
/// q = zeta^root_exponent among the primitive l-th roots of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    pub l: u64,
    pub root_exponent: u64,
}

impl FieldConfig {
    pub fn new(l: u64) -> Self {
        FieldConfig { l, root_exponent: 1 }
    }

    pub fn with_root_exponent(l: u64, root_exponent: u64) -> Self {
        FieldConfig { l, root_exponent }
    }

    fn validate(&self) -> Result<(), CycError> {
        if self.l < 3 || self.l % 2 == 0 {
            return Err(CycError::InvalidL(self.l));
        }
        if gcd(self.root_exponent % self.l, self.l) != 1 {
            return Err(CycError::InvalidRootExponent {
                exponent: self.root_exponent,
                l: self.l,
            });
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An element of Q(zeta_l), stored as its canonical representative modulo
/// Phi_l: exactly phi(l) rational coefficients, index i giving the
/// coefficient of zeta^i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyc {
    pub(crate) coeffs: Vec<Rat>,
}

impl Cyc {
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        Cyc {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        Cyc {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        Cyc {
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    /// Rational part, if the element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// JSON form: an array of `"num/den"` strings, index i = coefficient of
    /// zeta^i.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(format_rat(c)))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value, field: &CycField) -> Option<Cyc> {
        let arr = v.as_array()?;
        if arr.len() != field.degree() {
            return None;
        }
        let coeffs = arr
            .iter()
            .map(|x| x.as_str().and_then(parse_rat))
            .collect::<Option<Vec<_>>>()?;
        Some(Cyc { coeffs })
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", format_rat(c))?;
            } else if i == 1 {
                write!(f, "{}*z", format_rat(c))?;
            } else {
                write!(f, "{}*z^{}", format_rat(c), i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The field Q(zeta_l) with everything precomputed: the cyclotomic polynomial,
/// reduction rows for high powers of zeta, and the table of zeta powers.
#[derive(Debug)]
pub struct CycField {
    config: FieldConfig,
    degree: usize,
    /// Monic integer coefficients of Phi_l, low to high, length degree + 1.
    phi_poly: Vec<BigInt>,
    /// Row t = canonical form of zeta^(degree + t), t in [0, degree - 2].
    reduction_rows: Vec<Vec<Rat>>,
    /// zeta^k for k in [0, l).
    zeta_pows: Vec<Cyc>,
    /// Cached inverse of (q - q^-1)^2, the denominator of every Casimir root.
    qdiff_sq_inv: Cyc,
}

impl CycField {
    pub fn new(config: FieldConfig) -> Result<Arc<CycField>, CycError> {
        config.validate()?;
        let l = config.l;
        let phi_poly = cyclotomic_polynomial(l);
        let degree = phi_poly.len() - 1;

        // zeta^(degree + t) = -(lower coefficients of Phi) * zeta^t reduced,
        // built row by row.
        let mut reduction_rows: Vec<Vec<Rat>> = Vec::new();
        if degree >= 1 {
            let base: Vec<Rat> = (0..degree)
                .map(|i| -Rat::from(phi_poly[i].clone()))
                .collect();
            reduction_rows.push(base);
            for _ in 1..degree.saturating_sub(1) {
                let prev = reduction_rows.last().unwrap().clone();
                // multiply by zeta and reduce the overflow term
                let mut next = vec![Rat::zero(); degree];
                for i in 0..degree - 1 {
                    next[i + 1] = prev[i].clone();
                }
                let top = prev[degree - 1].clone();
                if !top.is_zero() {
                    for i in 0..degree {
                        next[i] += &top * &reduction_rows[0][i];
                    }
                }
                reduction_rows.push(next);
            }
        }

        let mut field = CycField {
            config,
            degree,
            phi_poly,
            reduction_rows,
            zeta_pows: Vec::new(),
            qdiff_sq_inv: Cyc { coeffs: vec![] },
        };

        let mut zeta_pows = Vec::with_capacity(l as usize);
        for k in 0..l {
            let mut raw = vec![Rat::zero(); (k as usize) + 1];
            raw[k as usize] = Rat::one();
            zeta_pows.push(field.reduce(raw));
        }
        field.zeta_pows = zeta_pows;

        let q = field.q_pow(1);
        let qdiff = q.sub(&field.q_pow(-1));
        let qdiff_sq = field.mul(&qdiff, &qdiff);
        field.qdiff_sq_inv = field.inv(&qdiff_sq)?;
        Ok(Arc::new(field))
    }

    pub fn config(&self) -> FieldConfig {
        self.config
    }

    pub fn l(&self) -> u64 {
        self.config.l
    }

    /// Degree of the extension, phi(l).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn phi_polynomial(&self) -> &[BigInt] {
        &self.phi_poly
    }

    pub fn zero(&self) -> Cyc {
        Cyc {
            coeffs: vec![Rat::zero(); self.degree],
        }
    }

    pub fn one(&self) -> Cyc {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> Cyc {
        let mut coeffs = vec![Rat::zero(); self.degree];
        coeffs[0] = r;
        Cyc { coeffs }
    }

    pub fn from_i64(&self, n: i64) -> Cyc {
        self.from_rat(Rat::from(BigInt::from(n)))
    }

    /// zeta^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let k = k.rem_euclid(self.config.l as i64) as usize;
        self.zeta_pows[k].clone()
    }

    /// q^k where q = zeta^root_exponent.
    pub fn q_pow(&self, k: i64) -> Cyc {
        let e = (self.config.root_exponent as i64 * k).rem_euclid(self.config.l as i64);
        self.zeta_pows[e as usize].clone()
    }

    /// Canonical form of a raw coefficient vector of any length.
    fn reduce(&self, mut raw: Vec<Rat>) -> Cyc {
        // Fold powers >= degree through the reduction rows, highest first.
        while raw.len() > self.degree {
            let top = raw.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let t = raw.len() - self.degree;
            if t == 0 {
                for i in 0..self.degree {
                    raw[i] += &top * &self.reduction_rows[0][i];
                }
            } else {
                let row = &self.reduction_rows[t];
                for i in 0..self.degree {
                    raw[i] += &top * &row[i];
                }
            }
        }
        raw.resize(self.degree, Rat::zero());
        Cyc { coeffs: raw }
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut raw = vec![Rat::zero(); 2 * self.degree - 1];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                raw[i + j] += ai * bj;
            }
        }
        self.reduce(raw)
    }

    pub fn inv(&self, a: &Cyc) -> Result<Cyc, CycError> {
        if a.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        // Extended Euclid between a (as a polynomial) and Phi_l.
        let phi: Vec<Rat> = self.phi_poly.iter().map(|c| Rat::from(c.clone())).collect();
        let (g, u) = poly_half_xgcd(&a.coeffs, &phi);
        // g is a nonzero constant since Phi_l is irreducible over Q.
        debug_assert!(poly_degree(&g) == Some(0));
        let ginv = Rat::one() / g[0].clone();
        let scaled: Vec<Rat> = u.iter().map(|c| c * &ginv).collect();
        Ok(self.reduce(scaled))
    }

    pub fn div(&self, a: &Cyc, b: &Cyc) -> Result<Cyc, CycError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Cyc, mut n: u64) -> Cyc {
        let mut base = a.clone();
        let mut acc = self.one();
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

    /// The quantum integer (i)_q = (q^i - q^-i) / (q - q^-1).
    pub fn qint(&self, i: i64) -> Cyc {
        let num = self.q_pow(i).sub(&self.q_pow(-i));
        let den = self.q_pow(1).sub(&self.q_pow(-1));
        // den is invertible: q is a primitive root and l > 2.
        self.mul(&num, &self.inv(&den).expect("q - q^-1 is nonzero"))
    }

    /// The Casimir root b_j = (q^(j+1) + q^(-j-1)) / (q - q^-1)^2.
    pub fn casimir_root(&self, j: i64) -> Cyc {
        let num = self.q_pow(j + 1).add(&self.q_pow(-j - 1));
        self.mul(&num, &self.qdiff_sq_inv)
    }

    /// Cached (q - q^-1)^(-2).
    pub fn qdiff_sq_inv(&self) -> Cyc {
        self.qdiff_sq_inv.clone()
    }
}

/// Degree of a polynomial given low-to-high coefficients; None for zero.
fn poly_degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

/// Extended Euclid returning (g, u) with u*a + v*b = g (v not tracked).
fn poly_half_xgcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0 = poly_trim(a.to_vec());
    let mut r1 = poly_trim(b.to_vec());
    let mut u0 = vec![Rat::one()];
    let mut u1 = vec![Rat::zero()];
    while poly_degree(&r1).is_some() {
        let (q, rem) = poly_divmod(&r0, &r1);
        let new_u = poly_sub(&u0, &poly_mul_rat(&q, &u1));
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = new_u;
    }
    (r0, u0)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(out)
}

fn poly_mul_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![Rat::zero()];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(out)
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = poly_degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    let da = match poly_degree(&rem) {
        Some(d) => d,
        None => return (vec![Rat::zero()], poly_trim(rem)),
    };
    if da < db {
        return (vec![Rat::zero()], poly_trim(rem));
    }
    let mut quot = vec![Rat::zero(); da - db + 1];
    for d in (db..=da).rev() {
        let c = rem[d].clone();
        if c.is_zero() {
            continue;
        }
        let factor = &c / &lead;
        quot[d - db] = factor.clone();
        for i in 0..=db {
            let delta = &factor * &b[i];
            rem[d - db + i] -= delta;
        }
    }
    (poly_trim(quot), poly_trim(rem))
}

/// Phi_l as a monic integer polynomial, via the divisor product
/// prod_{d | l} (x^(l/d) - 1)^mu(d).
fn cyclotomic_polynomial(l: u64) -> Vec<BigInt> {
    let mut numer: Vec<BigInt> = vec![BigInt::one()];
    let mut denom: Vec<BigInt> = vec![BigInt::one()];
    for d in 1..=l {
        if l % d != 0 {
            continue;
        }
        match moebius(d) {
            1 => numer = int_poly_mul(&numer, &x_pow_minus_one((l / d) as usize)),
            -1 => denom = int_poly_mul(&denom, &x_pow_minus_one((l / d) as usize)),
            _ => {}
        }
    }
    int_poly_divexact(&numer, &denom)
}

fn x_pow_minus_one(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    p
}

fn moebius(mut n: u64) -> i32 {
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn int_poly_divexact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let da = a.iter().rposition(|c| !c.is_zero()).expect("zero numerator");
    let db = b.iter().rposition(|c| !c.is_zero()).expect("zero denominator");
    assert!(da >= db);
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for d in (db..=da).rev() {
        if rem[d].is_zero() {
            continue;
        }
        let factor = &rem[d] / &b[db];
        assert_eq!(&factor * &b[db], rem[d], "non-exact division");
        quot[d - db] = factor.clone();
        for i in 0..=db {
            let delta = &factor * &b[i];
            rem[d - db + i] -= delta;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact division");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(l: u64) -> Arc<CycField> {
        CycField::new(FieldConfig::new(l)).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_3 = 1 + x + x^2
        assert_eq!(
            cyclotomic_polynomial(3),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]
        );
        // Phi_9 = 1 + x^3 + x^6
        assert_eq!(
            cyclotomic_polynomial(9),
            vec![1, 0, 0, 1, 0, 0, 1]
                .into_iter()
                .map(BigInt::from)
                .collect::<Vec<_>>()
        );
        assert_eq!(field(5).degree(), 4);
        assert_eq!(field(9).degree(), 6);
        assert_eq!(field(15).degree(), 8);
    }

    #[test]
    fn invalid_configs_rejected() {
        assert_eq!(
            CycField::new(FieldConfig::new(4)).err(),
            Some(CycError::InvalidL(4))
        );
        assert_eq!(
            CycField::new(FieldConfig::new(1)).err(),
            Some(CycError::InvalidL(1))
        );
        assert!(matches!(
            CycField::new(FieldConfig::with_root_exponent(9, 3)).err(),
            Some(CycError::InvalidRootExponent { .. })
        ));
    }

    #[test]
    fn zeta_powers_multiply() {
        for l in [3u64, 5, 7, 9] {
            let f = field(l);
            // zeta * zeta^(l-1) = 1
            let prod = f.mul(&f.zeta_pow(1), &f.zeta_pow(l as i64 - 1));
            assert_eq!(prod, f.one());
            // sum of all l-th roots of unity is 0
            let mut sum = f.zero();
            for k in 0..l as i64 {
                sum = sum.add(&f.zeta_pow(k));
            }
            assert!(sum.is_zero(), "root sum nonzero for l = {l}");
        }
    }

    #[test]
    fn three_roots_sum_to_zero() {
        let f = field(3);
        let s = f.one().add(&f.zeta_pow(1)).add(&f.zeta_pow(2));
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_qdiff_squared_at_l3() {
        // (q - q^-1)^2 = -3 at l = 3, so its inverse is -1/3.
        let f = field(3);
        let d = f.q_pow(1).sub(&f.q_pow(-1));
        let dsq = f.mul(&d, &d);
        assert_eq!(dsq, f.from_i64(-3));
        let inv = f.inv(&dsq).unwrap();
        assert_eq!(inv, f.from_rat(Rat::new(BigInt::from(-1), BigInt::from(3))));
    }

    #[test]
    fn inv_zero_is_an_error() {
        let f = field(5);
        assert_eq!(f.inv(&f.zero()).err(), Some(CycError::DivisionByZero));
    }

    #[test]
    fn qint_values() {
        let f = field(3);
        assert!(f.qint(0).is_zero());
        assert!(f.qint(3).is_zero());
        // (2)_q = q + q^-1 = -1 at l = 3
        assert_eq!(f.qint(2), f.from_i64(-1));
        for l in [3i64, 5, 7] {
            let f = field(l as u64);
            for i in -2 * l..=2 * l {
                assert_eq!(f.qint(-i), f.qint(i).neg(), "antisymmetry at i = {i}");
                assert_eq!(f.qint(i + l), f.qint(i), "period l at i = {i}");
            }
        }
    }

    #[test]
    fn casimir_root_symmetry_and_values() {
        for l in [3i64, 5, 7, 9] {
            let f = field(l as u64);
            for j in 0..l {
                assert_eq!(f.casimir_root(j), f.casimir_root(l - 2 - j), "j = {j}");
            }
            // b_{-1} = 2 / (q - q^-1)^2
            let expected = f.qdiff_sq_inv().scale(&Rat::from(BigInt::from(2)));
            assert_eq!(f.casimir_root(-1), expected);
        }
        let f = field(3);
        assert_eq!(
            f.casimir_root(0),
            f.from_rat(Rat::new(BigInt::from(1), BigInt::from(3)))
        );
        assert_eq!(f.casimir_root(0), f.casimir_root(1));
    }

    #[test]
    fn composite_l_uses_true_cyclotomic_polynomial() {
        // In Q[x]/Phi_9, zeta^3 is a primitive cube root, so 1 + z^3 + z^6 = 0.
        let f = field(9);
        let s = f.one().add(&f.zeta_pow(3)).add(&f.zeta_pow(6));
        assert!(s.is_zero());
        // and zeta^9 = 1
        assert_eq!(f.zeta_pow(9), f.one());
        let p = f.mul(&f.zeta_pow(4), &f.zeta_pow(5));
        assert_eq!(p, f.one());
    }

    #[test]
    fn json_roundtrip() {
        let f = field(5);
        let x = f.qint(3);
        let v = x.to_json();
        assert_eq!(Cyc::from_json(&v, &f).unwrap(), x);
    }
}
