//! Rational recognition from high-precision approximations by continued
//! fractions: find the unique p/q with q <= H within tolerance, or fail
//! loudly so the caller can raise precision.

use crate::error::{Error, Result};
use crate::exact::rational::BigRat;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Reconstruct a rational with denominator at most `height` from `x`, known
/// to `err_bits` fractional bits of accuracy (|x - true| < 2^-err_bits).
/// Accepts a convergent p/q only when q <= height and |x - p/q| is within
/// twice the stated error; the residual is returned alongside.
pub fn rational_reconstruct(x: &BigRat, height: &BigInt, err_bits: u32) -> Result<(BigRat, BigRat)> {
    let tol = BigRat::new(BigInt::from(1), BigInt::from(1) << err_bits);
    // continued fraction expansion of x, tracking convergents
    let mut a = x.clone();
    let (mut p0, mut p1) = (BigInt::from(1), a.floor().to_integer());
    let (mut q0, mut q1) = (BigInt::zero(), BigInt::from(1));
    for _ in 0..10_000 {
        let cand = BigRat::new(p1.clone(), q1.clone());
        let residual = (x - &cand).abs();
        if q1.abs() <= *height && residual <= BigRat::from_integer(2.into()) * &tol {
            return Ok((cand, residual));
        }
        let frac = &a - a.floor();
        if frac.is_zero() {
            break;
        }
        a = frac.recip();
        let digit = a.floor().to_integer();
        let p2 = &digit * &p1 + &p0;
        let q2 = &digit * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if q1 > BigInt::from(4) * height {
            break;
        }
    }
    Err(Error::Reconstruction(format!(
        "no rational of height <= {height} within 2^-{err_bits} of the input"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;
    use num_traits::One;

    fn approx(r: &str, digits: u32) -> BigRat {
        // decimal truncation of r to the given number of digits
        let r = parse_rat(r).unwrap();
        let scale = BigInt::from(10).pow(digits);
        let scaled = (&r * BigRat::from_integer(scale.clone())).floor();
        BigRat::new(scaled.to_integer(), scale)
    }

    #[test]
    fn recovers_simple_rationals() {
        let x = approx("1/3", 50);
        let (got, _) = rational_reconstruct(&x, &BigInt::from(1_000_000), 150).unwrap();
        assert_eq!(got, parse_rat("1/3").unwrap());
    }

    #[test]
    fn recovers_zeta_value() {
        let x = approx("691/32760", 60);
        let h = BigInt::from(10u64).pow(9);
        let (got, _) = rational_reconstruct(&x, &h, 180).unwrap();
        assert_eq!(got, parse_rat("691/32760").unwrap());
    }

    #[test]
    fn rejects_noise() {
        // 50 digits of sqrt(2) have no small-height rational nearby
        let x = parse_rat(
            "14142135623730950488016887242096980785696718753769/10000000000000000000000000000000000000000000000000",
        )
        .unwrap();
        assert!(rational_reconstruct(&x, &BigInt::from(1000), 160).is_err());
    }

    #[test]
    fn roundtrip_identity_below_half_height() {
        let h = BigInt::from(1000);
        for (num, den) in [(1i64, 7u64), (-22, 13), (355, 113), (0, 1), (499, 500)] {
            let r = BigRat::new(num.into(), den.into());
            let (got, res) = rational_reconstruct(&r, &h, 200).unwrap();
            assert_eq!(got, r);
            assert!(res.is_zero() || res.numer().is_one());
        }
    }
}
