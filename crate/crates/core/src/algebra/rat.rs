//! Big-rational helpers. `rug::Rational` is always stored in lowest terms
//! with positive denominator, which is exactly the ExactScalar contract, so
//! we use it directly and only add construction and formatting helpers.

pub use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from(n)
}

/// `n/d` as a rational.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Canonical `"num/den"` form, denominator always spelled out so the
/// serialized form round-trips bit-exactly.
pub fn rat_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `"num/den"` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rational> {
    Rational::parse(s.trim())
        .map(Rational::from)
        .map_err(|_| Error::BadRational(s.to_string()))
}

/// Exact binomial coefficient.
pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(n).binomial(k)
}

/// Exact factorial.
pub fn factorial(n: u32) -> Integer {
    Integer::factorial(n).into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let q = ratio(-6, -8);
        assert_eq!(rat_string(&q), "3/4");
        let z = ratio(0, 5);
        assert_eq!(rat_string(&z), "0/1");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-853/16", "33349/512", "7/1"] {
            let q = parse_rat(s).unwrap();
            assert_eq!(rat_string(&q), s);
        }
        assert!(parse_rat("x/y").is_err());
    }
}
