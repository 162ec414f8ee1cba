//! Elements of a real quadratic field Q(sqrt(D)), stored as (a + b*sqrt(D))/c
//! with integer a, b and positive integer c, gcd(a, b, c) = 1, and D kept
//! squarefree by factoring radicands on construction. Canonical storage
//! makes equality structural.

use crate::error::{Error, Result};
use crate::exact::primes::squarefree_kernel;
use crate::exact::rational::BigRat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadFieldElem {
    /// Squarefree radicand, > 1. Rational elements keep d = 1 and b = 0.
    d: i64,
    a: BigInt,
    b: BigInt,
    /// Positive denominator.
    c: BigInt,
}

impl QuadFieldElem {
    /// Build (a + b*sqrt(d))/c, reducing the radicand to its squarefree
    /// kernel and the triple to lowest terms.
    pub fn new(d: i64, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if d <= 0 {
            return Err(Error::Domain(format!("radicand {d} must be positive")));
        }
        let (kernel, root) = squarefree_kernel(d)?;
        let elem = QuadFieldElem {
            d: kernel,
            a,
            b: b * BigInt::from(root),
            c,
        };
        Ok(elem.normalized())
    }

    pub fn from_rat(x: &BigRat) -> Self {
        QuadFieldElem {
            d: 1,
            a: x.numer().clone(),
            b: BigInt::zero(),
            c: x.denom().clone(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        QuadFieldElem {
            d: 1,
            a: BigInt::from(n),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    /// sqrt(d) as a field element.
    pub fn sqrt_d(d: i64) -> Result<Self> {
        QuadFieldElem::new(d, BigInt::zero(), BigInt::one(), BigInt::one())
    }

    fn normalized(mut self) -> Self {
        if self.c.is_negative() {
            self.a = -self.a;
            self.b = -self.b;
            self.c = -self.c;
        }
        if self.b.is_zero() {
            self.d = 1;
        }
        if self.d == 1 {
            // fold sqrt(1) into the rational part
            self.a += std::mem::take(&mut self.b);
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
        if self.a.is_zero() && self.b.is_zero() {
            self.c = BigInt::one();
            self.d = 1;
        }
        self
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<BigRat> {
        self.b
            .is_zero()
            .then(|| BigRat::new(self.a.clone(), self.c.clone()))
    }

    /// Rational and sqrt(d) coordinates: x = rat_part + quad_part * sqrt(d).
    pub fn rat_part(&self) -> BigRat {
        BigRat::new(self.a.clone(), self.c.clone())
    }

    pub fn quad_part(&self) -> BigRat {
        BigRat::new(self.b.clone(), self.c.clone())
    }

    /// Galois conjugate sqrt(d) -> -sqrt(d).
    pub fn conj(&self) -> Self {
        QuadFieldElem {
            d: self.d,
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
        }
        .normalized()
    }

    /// Product of the conjugates: (a^2 - b^2 d)/c^2.
    pub fn norm(&self) -> BigRat {
        BigRat::new(
            &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d),
            &self.c * &self.c,
        )
    }

    pub fn trace(&self) -> BigRat {
        BigRat::new(2 * &self.a, self.c.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        // 1/x = conj(x)/norm(x)
        let n = self.norm();
        let conj = self.conj();
        Ok(QuadFieldElem {
            d: conj.d,
            a: conj.a * n.denom(),
            b: conj.b * n.denom(),
            c: conj.c * n.numer(),
        }
        .normalized())
    }

    fn unify(x: &Self, y: &Self) -> i64 {
        match (x.b.is_zero(), y.b.is_zero()) {
            (true, _) => y.d,
            (false, true) => x.d,
            (false, false) => {
                assert_eq!(x.d, y.d, "mixed quadratic fields: {} vs {}", x.d, y.d);
                x.d
            }
        }
    }

    pub fn scale(&self, r: &BigRat) -> Self {
        QuadFieldElem {
            d: self.d,
            a: &self.a * r.numer(),
            b: &self.b * r.numer(),
            c: &self.c * r.denom(),
        }
        .normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadFieldElem::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn add(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        let d = QuadFieldElem::unify(self, rhs);
        QuadFieldElem {
            d,
            a: &self.a * &rhs.c + &rhs.a * &self.c,
            b: &self.b * &rhs.c + &rhs.b * &self.c,
            c: &self.c * &rhs.c,
        }
        .normalized()
    }
}

impl Sub for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn sub(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        self + &(-rhs)
    }
}

impl Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem {
            d: self.d,
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
        }
    }
}

impl Mul for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn mul(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        let d = QuadFieldElem::unify(self, rhs);
        QuadFieldElem {
            d,
            a: &self.a * &rhs.a + &self.b * &rhs.b * BigInt::from(d),
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            c: &self.c * &rhs.c,
        }
        .normalized()
    }
}

impl Div for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn div(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        self * &rhs.inv().expect("division by zero")
    }
}

impl fmt::Display for QuadFieldElem {
    /// Wire format: "p/q" for rationals, "(a+b*sqrt(D))/c" otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                return write!(f, "{}", self.a);
            }
            return write!(f, "{}/{}", self.a, self.c);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let babs = self.b.abs();
        write!(f, "({}{}{}*sqrt({}))", self.a, sign, babs, self.d)?;
        if !self.c.is_one() {
            write!(f, "/{}", self.c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse the Display format back. Accepts "p", "p/q",
/// "(a+b*sqrt(D))", "(a-b*sqrt(D))/c".
pub fn parse_quad(s: &str) -> Result<QuadFieldElem> {
    let bad = || Error::Usage(format!("invalid field element literal {s:?}"));
    if !s.starts_with('(') {
        return Ok(QuadFieldElem::from_rat(&crate::exact::parse_rat(s)?));
    }
    let close = s.rfind(')').ok_or_else(bad)?;
    let inner = &s[1..close];
    let c: BigInt = match s[close + 1..].strip_prefix('/') {
        Some(cs) => cs.parse().map_err(|_| bad())?,
        None if s.len() == close + 1 => BigInt::one(),
        _ => return Err(bad()),
    };
    // split "a+b*sqrt(D)" / "a-b*sqrt(D)" at the sign before "b*sqrt"
    let star = inner.find("*sqrt(").ok_or_else(bad)?;
    let sign_pos = inner[..star]
        .rfind(['+', '-'])
        .filter(|&i| i > 0)
        .ok_or_else(bad)?;
    let a: BigInt = inner[..sign_pos].parse().map_err(|_| bad())?;
    let mut b: BigInt = inner[sign_pos + 1..star].parse().map_err(|_| bad())?;
    if &inner[sign_pos..=sign_pos] == "-" {
        b = -b;
    }
    let d_str = inner[star + 6..].strip_suffix(')').ok_or_else(bad)?;
    let d: i64 = d_str.parse().map_err(|_| bad())?;
    QuadFieldElem::new(d, a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> QuadFieldElem {
        QuadFieldElem::new(51349, 4320.into(), 96.into(), 1.into()).unwrap()
    }

    #[test]
    fn norm_of_alpha() {
        // direct conjugate product
        let expect = BigRat::from_integer((4320i64 * 4320 - 96 * 96 * 51349).into());
        assert_eq!(alpha().norm(), expect);
        assert_eq!(&alpha() * &alpha().conj(), QuadFieldElem::from_rat(&expect));
    }

    #[test]
    fn rational_norm_is_square() {
        let q = QuadFieldElem::from_rat(&BigRat::new(7.into(), 3.into()));
        assert_eq!(q.norm(), BigRat::new(49.into(), 9.into()));
    }

    #[test]
    fn radicand_reduction() {
        // sqrt(12) = 2 sqrt(3)
        let x = QuadFieldElem::new(12, 0.into(), 1.into(), 1.into()).unwrap();
        let y = QuadFieldElem::new(3, 0.into(), 2.into(), 1.into()).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.disc(), 3);
    }

    #[test]
    fn inverse_and_display() {
        let x = alpha();
        let one = &x * &x.inv().unwrap();
        assert_eq!(one, QuadFieldElem::from_int(1));
        let s = x.to_string();
        assert_eq!(s, "(4320+96*sqrt(51349))");
        assert_eq!(parse_quad(&s).unwrap(), x);
        let y = QuadFieldElem::new(51349, (-1).into(), (-3).into(), 7.into()).unwrap();
        assert_eq!(parse_quad(&y.to_string()).unwrap(), y);
        assert_eq!(parse_quad("5/7").unwrap().as_rat().unwrap(), BigRat::new(5.into(), 7.into()));
    }
}
