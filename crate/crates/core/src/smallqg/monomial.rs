//! PBW basis monomials E^a F^b K^c.

use std::fmt;

/// A normally ordered basis monomial E^a F^b K^c with 0 <= a, b, c < l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub a: u16,
    pub b: u16,
    pub c: u16,
}

impl Monomial {
    pub fn new(a: u16, b: u16, c: u16) -> Monomial {
        Monomial { a, b, c }
    }

    pub fn unit() -> Monomial {
        Monomial { a: 0, b: 0, c: 0 }
    }

    pub fn e() -> Monomial {
        Monomial { a: 1, b: 0, c: 0 }
    }

    pub fn f() -> Monomial {
        Monomial { a: 0, b: 1, c: 0 }
    }

    pub fn k(c: u16) -> Monomial {
        Monomial { a: 0, b: 0, c }
    }

    /// Weight under the adjoint grading: deg E = 2, deg F = -2, deg K = 0.
    pub fn degree(&self) -> i64 {
        2 * (self.a as i64 - self.b as i64)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 0 && self.b == 0 && self.c == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (sym, exp) in [("E", self.a), ("F", self.b), ("K", self.c)] {
            match exp {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{exp}")),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_display() {
        let m = Monomial::new(2, 1, 3);
        assert_eq!(m.degree(), 2);
        assert_eq!(m.to_string(), "E^2 F K^3");
        assert_eq!(Monomial::unit().to_string(), "1");
    }
}
