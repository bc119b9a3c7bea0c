//! Arbitrary-precision rationals and their `"num/den"` string form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. `BigRational` keeps values reduced with a positive
/// denominator, which is exactly the canonical form we need.
pub type Rat = num_rational::BigRational;

/// Formats a rational as `"num/den"`, omitting the denominator when it is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `"num/den"` form produced by [`format_rat`].
pub fn parse_rat(s: &str) -> Option<Rat> {
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next()?.trim().parse().ok()?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if denom.is_zero() || denom.is_negative() {
        return None;
    }
    Some(Rat::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_canonical_form() {
        let r = Rat::new(BigInt::from(-4), BigInt::from(6));
        assert_eq!(format_rat(&r), "-2/3");
        assert_eq!(parse_rat("-2/3").unwrap(), r);
        assert_eq!(format_rat(&parse_rat("7").unwrap()), "7");
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("1/-2"), None);
    }
}
