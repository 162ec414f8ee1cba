//! Thin layer over `num_rational::BigRational`: the crate-wide exact
//! rational type plus the "p/q" wire format used in all JSON output.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type BigRat = num_rational::BigRational;

/// Serialize as "p" or "p/q" in lowest terms, q > 0.
pub fn format_rat(x: &BigRat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse the "p/q" wire format. Whitespace is not tolerated; the sign
/// belongs to the numerator.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let bad = || Error::Usage(format!("invalid rational literal {s:?}"));
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() || denom.is_negative() {
        return Err(bad());
    }
    Ok(BigRat::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for s in ["0", "-7", "691/32760", "-20874555/28"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("a/b").is_err());
        // not in lowest terms on input is fine; output reduces
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
    }
}
