//! Fixed-point big reals: value = mant / 2^frac_bits with a shared,
//! explicit precision. Just enough machinery for completed L-values:
//! ring ops, division, integer powers, exp(-x) by series, and pi by a
//! Machin formula. Every routine rounds once per operation, so results
//! carry O(ops) ulps of error; callers budget guard bits accordingly.

use crate::exact::BigRat;
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bf {
    mant: BigInt,
    frac_bits: u32,
}

impl Bf {
    pub fn zero(frac_bits: u32) -> Self {
        Bf { mant: BigInt::zero(), frac_bits }
    }

    pub fn from_int(n: i64, frac_bits: u32) -> Self {
        Bf { mant: BigInt::from(n) << frac_bits, frac_bits }
    }

    pub fn from_rat(r: &BigRat, frac_bits: u32) -> Self {
        Bf {
            mant: (r.numer() << frac_bits) / r.denom(),
            frac_bits,
        }
    }

    pub fn to_rat(&self) -> BigRat {
        BigRat::new(self.mant.clone(), BigInt::from(1) << self.frac_bits)
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Bf {
        Bf { mant: self.mant.abs(), ..self.clone() }
    }

    pub fn neg(&self) -> Bf {
        Bf { mant: -&self.mant, ..self.clone() }
    }

    pub fn add(&self, rhs: &Bf) -> Bf {
        assert_eq!(self.frac_bits, rhs.frac_bits);
        Bf { mant: &self.mant + &rhs.mant, frac_bits: self.frac_bits }
    }

    pub fn sub(&self, rhs: &Bf) -> Bf {
        assert_eq!(self.frac_bits, rhs.frac_bits);
        Bf { mant: &self.mant - &rhs.mant, frac_bits: self.frac_bits }
    }

    pub fn mul(&self, rhs: &Bf) -> Bf {
        assert_eq!(self.frac_bits, rhs.frac_bits);
        Bf {
            mant: (&self.mant * &rhs.mant) >> self.frac_bits,
            frac_bits: self.frac_bits,
        }
    }

    pub fn div(&self, rhs: &Bf) -> Bf {
        assert_eq!(self.frac_bits, rhs.frac_bits);
        assert!(!rhs.mant.is_zero(), "bigfloat division by zero");
        Bf {
            mant: (&self.mant << self.frac_bits) / &rhs.mant,
            frac_bits: self.frac_bits,
        }
    }

    pub fn mul_int(&self, k: i64) -> Bf {
        Bf { mant: &self.mant * BigInt::from(k), ..self.clone() }
    }

    pub fn div_int(&self, k: i64) -> Bf {
        Bf { mant: &self.mant / BigInt::from(k), ..self.clone() }
    }

    pub fn powi(&self, e: u32) -> Bf {
        let mut acc = Bf::from_int(1, self.frac_bits);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// |self| < 2^-bits, used for tail-bound checks.
    pub fn below_2pow(&self, bits: i64) -> bool {
        if self.mant.is_zero() {
            return true;
        }
        (self.mant.bits() as i64) < self.frac_bits as i64 - bits
    }

    /// exp(-x) for x >= 0 by argument halving plus the alternating series.
    pub fn exp_neg(&self) -> Bf {
        assert!(!self.is_negative(), "exp_neg wants a nonnegative argument");
        let fb = self.frac_bits;
        // halve until x < 1 to keep the series short and well-conditioned
        let mut halvings = 0u32;
        let mut x = self.clone();
        let one = Bf::from_int(1, fb);
        while x.mant > one.mant {
            x = Bf { mant: &x.mant >> 1, frac_bits: fb };
            halvings += 1;
        }
        // sum (-x)^i / i!
        let mut term = Bf::from_int(1, fb);
        let mut acc = Bf::from_int(1, fb);
        let mut i = 1i64;
        loop {
            term = term.mul(&x).div_int(i);
            if term.mant.is_zero() {
                break;
            }
            if i % 2 == 1 {
                acc = acc.sub(&term);
            } else {
                acc = acc.add(&term);
            }
            i += 1;
        }
        for _ in 0..halvings {
            acc = acc.mul(&acc);
        }
        acc
    }

    /// Square root of a nonnegative value by integer Newton iteration on
    /// the scaled mantissa.
    pub fn sqrt(&self) -> Bf {
        assert!(!self.is_negative(), "sqrt of negative bigfloat");
        if self.mant.is_zero() {
            return self.clone();
        }
        // sqrt(mant / 2^f) = sqrt(mant << f) / 2^f
        let target = &self.mant << self.frac_bits;
        let mut x = BigInt::from(1) << (target.bits() / 2 + 1);
        loop {
            let next = (&x + &target / &x) >> 1;
            if next >= x {
                break;
            }
            x = next;
        }
        Bf { mant: x, frac_bits: self.frac_bits }
    }

    /// atan(1/k) for integer k >= 2 by the Gregory series.
    fn atan_inv(k: i64, frac_bits: u32) -> Bf {
        let mut acc = Bf::zero(frac_bits);
        let inv = Bf::from_rat(&BigRat::new(1.into(), k.into()), frac_bits);
        let inv2 = inv.mul(&inv);
        let mut power = inv;
        let mut n = 0i64;
        loop {
            let term = power.div_int(2 * n + 1);
            if term.mant.is_zero() {
                break;
            }
            if n % 2 == 0 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
            power = power.mul(&inv2);
            n += 1;
        }
        acc
    }

    /// pi = 16 atan(1/5) - 4 atan(1/239).
    pub fn pi(frac_bits: u32) -> Bf {
        let a = Bf::atan_inv(5, frac_bits).mul_int(16);
        let b = Bf::atan_inv(239, frac_bits).mul_int(4);
        a.sub(&b)
    }

    /// Decimal rendering with the stated number of fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10).pow(digits);
        let scaled = (&self.mant * &scale) >> self.frac_bits;
        let (sign, mag) = (scaled.sign(), scaled.magnitude().clone());
        let int_part = &mag / scale.magnitude();
        let frac_part = &mag % scale.magnitude();
        let sign_str = if sign == Sign::Minus { "-" } else { "" };
        format!("{sign_str}{int_part}.{frac_part:0>width$}", width = digits as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;

    #[test]
    fn pi_matches_reference() {
        let pi = Bf::pi(256);
        let reference = parse_rat(
            "31415926535897932384626433832795028841971693993751058209749445923078164062862/\
             10000000000000000000000000000000000000000000000000000000000000000000000000000",
        )
        .unwrap();
        let diff = (pi.to_rat() - reference).abs();
        assert!(diff < parse_rat("1/10000000000000000000000000000000000000000000000000000000000000000000000000").unwrap());
    }

    #[test]
    fn exp_neg_small_values() {
        let fb = 192;
        // e^-1 = 0.36787944117144232...
        let x = Bf::from_int(1, fb).exp_neg();
        let reference = parse_rat("36787944117144232159552377016146086744/100000000000000000000000000000000000000").unwrap();
        assert!((x.to_rat() - reference).abs() < parse_rat("1/1000000000000000000000000000000000000").unwrap());
        // identity e^-a * e^-b = e^-(a+b)
        let a = Bf::from_rat(&parse_rat("7/3").unwrap(), fb);
        let b = Bf::from_rat(&parse_rat("11/5").unwrap(), fb);
        let lhs = a.exp_neg().mul(&b.exp_neg());
        let rhs = a.add(&b).exp_neg();
        assert!(lhs.sub(&rhs).below_2pow(fb as i64 - 16));
    }
}
