//! Certified complex embeddings of Q(zeta_l).
//!
//! Values are tracked as balls: an exact big-integer midpoint at a fixed
//! binary scale together with a radius that rigorously bounds every rounding
//! and truncation error. A sign is reported only when the interval excludes
//! zero; exact decisions are never made from floats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Cyc, CycError, CycField};
use super::rat::Rat;

/// Certified sign of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// A real interval `[mid - rad, mid + rad] * 2^(-scale)`.
#[derive(Debug, Clone)]
pub struct RealBall {
    mid: BigInt,
    rad: BigInt,
    scale: u32,
}

impl RealBall {
    fn exact_int(n: i64, scale: u32) -> RealBall {
        RealBall {
            mid: BigInt::from(n) << scale,
            rad: BigInt::zero(),
            scale,
        }
    }

    fn add(&self, other: &RealBall) -> RealBall {
        debug_assert_eq!(self.scale, other.scale);
        RealBall {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            scale: self.scale,
        }
    }

    fn sub(&self, other: &RealBall) -> RealBall {
        debug_assert_eq!(self.scale, other.scale);
        RealBall {
            mid: &self.mid - &other.mid,
            rad: &self.rad + &other.rad,
            scale: self.scale,
        }
    }

    fn neg(&self) -> RealBall {
        RealBall {
            mid: -&self.mid,
            rad: self.rad.clone(),
            scale: self.scale,
        }
    }

    fn mul(&self, other: &RealBall) -> RealBall {
        debug_assert_eq!(self.scale, other.scale);
        let s = self.scale;
        let mid = (&self.mid * &other.mid) >> s;
        // |a*b - mid*2^-s| <= |a_mid|*b_rad + |b_mid|*a_rad + a_rad*b_rad
        // all at scale 2s, plus one ulp for the midpoint shift.
        let rad = (self.mid.abs() * &other.rad
            + other.mid.abs() * &self.rad
            + &self.rad * &other.rad)
            >> s;
        RealBall {
            mid,
            rad: rad + 2,
            scale: s,
        }
    }

    fn mul_rat(&self, r: &Rat) -> RealBall {
        let mid = (&self.mid * r.numer()).div_floor(r.denom());
        let rad = (&self.rad * r.numer().abs()).div_floor(r.denom());
        RealBall {
            mid,
            rad: rad + 2,
            scale: self.scale,
        }
    }

    /// Upper bound on |value| as an integer at the ball's scale.
    fn abs_upper(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Midpoint as f64 (convenience output; rigor lives in mid/rad).
    pub fn to_f64(&self) -> f64 {
        big_to_f64_scaled(&self.mid, self.scale)
    }

    /// Rigorous bound on |true value - midpoint|, as log2.
    pub fn radius_log2(&self) -> f64 {
        if self.rad.is_zero() {
            f64::NEG_INFINITY
        } else {
            big_log2_upper(&self.rad) - self.scale as f64
        }
    }

    /// True when the radius is at most 2^bound_log2.
    pub fn radius_within(&self, bound_log2: i64) -> bool {
        // rad * 2^-scale <= 2^bound  <=>  rad <= 2^(scale + bound)
        let shift = self.scale as i64 + bound_log2;
        if shift < 0 {
            return self.rad.is_zero();
        }
        self.rad <= (BigInt::one() << shift as u64)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    /// Sign of the value when the interval excludes zero.
    pub fn certified_sign(&self) -> Option<Sign> {
        if self.contains_zero() {
            None
        } else if self.mid.is_positive() {
            Some(Sign::Positive)
        } else {
            Some(Sign::Negative)
        }
    }
}

fn big_to_f64_scaled(x: &BigInt, scale: u32) -> f64 {
    // Avoid overflow for large mantissas: normalize to ~80 significant bits.
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(0.0) / 2f64.powi(scale as i32);
    }
    let drop = bits - 80;
    let top = x >> drop;
    top.to_f64().unwrap_or(0.0) * 2f64.powi(drop as i32 - scale as i32)
}

fn big_log2_upper(x: &BigInt) -> f64 {
    // bits() is 1 + floor(log2 |x|) for nonzero x.
    x.bits() as f64
}

/// A complex interval with independently certified real and imaginary parts.
#[derive(Debug, Clone)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    fn exact_int(re: i64, im: i64, scale: u32) -> ComplexBall {
        ComplexBall {
            re: RealBall::exact_int(re, scale),
            im: RealBall::exact_int(im, scale),
        }
    }

    fn add(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    fn mul(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    fn mul_rat(&self, r: &Rat) -> ComplexBall {
        ComplexBall {
            re: self.re.mul_rat(r),
            im: self.im.mul_rat(r),
        }
    }

    /// Multiply by i*theta for a real ball theta.
    fn mul_i_real(&self, theta: &RealBall) -> ComplexBall {
        ComplexBall {
            re: self.im.mul(theta).neg(),
            im: self.re.mul(theta),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Larger of the two component radii, as log2.
    pub fn radius_log2(&self) -> f64 {
        self.re.radius_log2().max(self.im.radius_log2())
    }

    pub fn radius_within(&self, bound_log2: i64) -> bool {
        self.re.radius_within(bound_log2) && self.im.radius_within(bound_log2)
    }
}

/// arctan(1/x) for integer x >= 2, by the alternating series.
fn atan_inv(x: u64, scale: u32) -> RealBall {
    let one = BigInt::one() << scale;
    let xbig = BigInt::from(x);
    let xsq = &xbig * &xbig;
    let mut power = xbig.clone(); // x^(2k+1)
    let mut k = 0u64;
    let mut acc = BigInt::zero();
    let mut slack = BigInt::from(2); // truncation tail + per-term rounding
    loop {
        let term = (&one).div_floor(&(&power * BigInt::from(2 * k + 1)));
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        slack += 1;
        power *= &xsq;
        k += 1;
    }
    RealBall {
        mid: acc,
        rad: slack,
        scale,
    }
}

/// pi by Machin's formula, 16 atan(1/5) - 4 atan(1/239).
fn pi_ball(scale: u32) -> RealBall {
    let a = atan_inv(5, scale);
    let b = atan_inv(239, scale);
    let sixteen = Rat::from(BigInt::from(16));
    let four = Rat::from(BigInt::from(4));
    a.mul_rat(&sixteen).sub(&b.mul_rat(&four))
}

/// exp(i * theta) by the Taylor series with a rigorous tail bound.
fn exp_i(theta: &RealBall, scale: u32) -> ComplexBall {
    let mut term = ComplexBall::exact_int(1, 0, scale);
    let mut acc = term.clone();
    let mut k: u64 = 1;
    // |theta| <= 2*pi here; the series is summed until terms vanish at this
    // scale, then the tail is absorbed into the radius.
    let theta_abs = theta.abs_upper();
    loop {
        let inv_k = Rat::new(BigInt::one(), BigInt::from(k));
        term = term.mul_i_real(theta).mul_rat(&inv_k);
        acc = acc.add(&term);
        let mag = term.re.abs_upper() + term.im.abs_upper();
        // Once k >= 2|theta| the terms at least halve each step, so the tail
        // is bounded by twice the current term.
        let theta_int = (&theta_abs >> scale) + 1i32;
        if k as i64 >= 2 * theta_int.to_i64().unwrap_or(16).max(8) && mag <= BigInt::from(4) {
            let tail = &mag * 2 + 4;
            acc.re.rad += &tail;
            acc.im.rad += tail;
            break;
        }
        k += 1;
        assert!(k < 10_000, "exp series failed to converge");
    }
    acc
}

impl CycField {
    /// The numerical image of `a` under zeta -> exp(2 pi i k / l), with
    /// k = embedding_exponent. The returned ball carries a rigorous radius of
    /// at most 2^(-precision_bits / 2).
    pub fn embed(
        &self,
        a: &Cyc,
        embedding_exponent: i64,
        precision_bits: u32,
    ) -> Result<ComplexBall, CycError> {
        let l = self.l() as i64;
        let e = embedding_exponent.rem_euclid(l);
        assert!(
            num_integer::gcd(e, l) == 1,
            "embedding exponent must be coprime to l"
        );
        let precision_bits = precision_bits.max(64);
        let mut working = precision_bits + 96;
        for _ in 0..4 {
            let ball = self.embed_at_scale(a, e, working);
            if ball.radius_within(-((precision_bits / 2) as i64)) {
                return Ok(ball);
            }
            working *= 2;
        }
        Err(CycError::SignInconclusive { retries: 4 })
    }

    fn embed_at_scale(&self, a: &Cyc, e: i64, scale: u32) -> ComplexBall {
        let l = self.l() as i64;
        let pi = pi_ball(scale);
        let theta = pi.mul_rat(&Rat::new(BigInt::from(2 * e), BigInt::from(l)));
        let root = exp_i(&theta, scale);
        let mut acc = ComplexBall::exact_int(0, 0, scale);
        let mut pow = ComplexBall::exact_int(1, 0, scale);
        for (i, c) in a.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&pow.mul_rat(c));
            }
            if i + 1 < a.coeffs().len() {
                pow = pow.mul(&root);
            }
        }
        acc
    }

    /// Certified sign of the real part of the embedding of `a`. Doubles the
    /// precision and retries (bounded) when the interval straddles zero.
    pub fn embed_real_sign(
        &self,
        a: &Cyc,
        embedding_exponent: i64,
        precision_bits: u32,
    ) -> Result<Sign, CycError> {
        let mut prec = precision_bits.max(64);
        for retries in 0..5 {
            let ball = self.embed(a, embedding_exponent, prec)?;
            if let Some(sign) = ball.re.certified_sign() {
                return Ok(sign);
            }
            if retries == 4 {
                break;
            }
            prec *= 2;
        }
        Err(CycError::SignInconclusive { retries: 5 })
    }

    /// The embedding exponent that sends q to exp(i pi (l+1) / l), the
    /// convention under which (t)_q > 0 exactly when t is odd.
    pub fn sign_lemma_exponent(&self) -> i64 {
        let l = self.l() as i64;
        let target = (l + 1) / 2;
        let r = self.config().root_exponent as i64 % l;
        let rinv = mod_inverse(r, l).expect("root exponent is coprime to l");
        (target * rinv).rem_euclid(l)
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 == 1 {
        Some(t0.rem_euclid(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::FieldConfig;
    use std::sync::Arc;

    fn field(l: u64) -> Arc<CycField> {
        CycField::new(FieldConfig::new(l)).unwrap()
    }

    #[test]
    fn pi_matches_f64() {
        let pi = pi_ball(128);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-12);
        assert!(pi.radius_within(-100));
    }

    #[test]
    fn embed_one_is_one() {
        let f = field(5);
        let ball = f.embed(&f.one(), 1, 128).unwrap();
        let (re, im) = ball.to_f64_pair();
        assert!((re - 1.0).abs() < 1e-15);
        assert!(im.abs() < 1e-15);
        assert!(ball.radius_within(-64));
    }

    #[test]
    fn embed_primitive_root() {
        let f = field(7);
        let ball = f.embed(&f.zeta_pow(1), 1, 128).unwrap();
        let (re, im) = ball.to_f64_pair();
        let t = 2.0 * std::f64::consts::PI / 7.0;
        assert!((re - t.cos()).abs() < 1e-12);
        assert!((im - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn embed_is_multiplicative() {
        let f = field(7);
        let a = f.qint(3);
        let b = f.casimir_root(2);
        let ea = f.embed(&a, 2, 128).unwrap();
        let eb = f.embed(&b, 2, 128).unwrap();
        let eab = f.embed(&f.mul(&a, &b), 2, 128).unwrap();
        let prod = ea.mul(&eb);
        let dre = (prod.re.to_f64() - eab.re.to_f64()).abs();
        let dim = (prod.im.to_f64() - eab.im.to_f64()).abs();
        assert!(dre < 1e-12 && dim < 1e-12);
    }

    #[test]
    fn casimir_root_minus_one_at_l3_is_minus_two_thirds() {
        let f = field(3);
        let ball = f.embed(&f.casimir_root(-1), 1, 128).unwrap();
        let (re, im) = ball.to_f64_pair();
        assert!((re + 2.0 / 3.0).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
        assert_eq!(ball.re.certified_sign(), Some(Sign::Negative));
    }

    #[test]
    fn sign_rule_for_quantum_integers() {
        // At q = exp(i pi (l+1)/l): (t)_q > 0 iff t is odd, for t in [1, l-1].
        for l in [3i64, 5, 7, 9] {
            let f = field(l as u64);
            let e = f.sign_lemma_exponent();
            for t in 1..l {
                let sign = f.embed_real_sign(&f.qint(t), e, 128).unwrap();
                let expected = if t % 2 == 1 {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                assert_eq!(sign, expected, "l = {l}, t = {t}");
            }
        }
    }

    #[test]
    fn zero_sign_is_inconclusive() {
        let f = field(3);
        let err = f.embed_real_sign(&f.zero(), 1, 64);
        assert!(matches!(err, Err(CycError::SignInconclusive { .. })));
    }
}
