//! Bernoulli numbers and polynomials, generalized Bernoulli numbers,
//! Kronecker characters, zeta and Dirichlet L-values at non-positive
//! integers, and the Eisenstein normalizer Z(n, l). All values exact.

use crate::error::{Error, Result};
use crate::exact::{squarefree_kernel, BigRat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Mutex;

/// Full Kronecker symbol (a/n), extended to all integers by the standard
/// rules at 2, -1 and 0.
pub fn kronecker(mut a: i128, mut n: i128) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out 2s of n
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let am8 = a.rem_euclid(8);
        if am8 == 3 || am8 == 5 {
            result = -result;
        }
    }
    // now n odd positive: Jacobi with reciprocity
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let nm8 = n.rem_euclid(8);
            if nm8 == 3 || nm8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Discriminant and conductor data of Q(sqrt(D)) for D = 0, 1 mod 4:
/// returns (d_D, f_D) with d_D the field discriminant (1 if D is a square)
/// and f_D = sqrt(D / d_D) a positive integer.
pub fn fundamental_discriminant(d: i64) -> Result<(i64, u64)> {
    if d == 0 || d.rem_euclid(4) > 1 {
        return Err(Error::Domain(format!("{d} is not 0 or 1 mod 4, or is zero")));
    }
    let (kernel, root) = squarefree_kernel(d)?;
    if kernel == 1 {
        return Ok((1, root));
    }
    if kernel.rem_euclid(4) == 1 {
        Ok((kernel, root))
    } else {
        // root must be even here since d = 0,1 mod 4
        debug_assert_eq!(root % 2, 0);
        Ok((4 * kernel, root / 2))
    }
}

/// The quadratic character attached to a fundamental discriminant
/// (trivial when d = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KroneckerChar {
    d: i64,
}

impl KroneckerChar {
    pub fn new(d: i64) -> Result<Self> {
        if d == 1 {
            return Ok(KroneckerChar { d });
        }
        let (fd, f) = fundamental_discriminant(d)?;
        if fd != d || f != 1 {
            return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
        }
        Ok(KroneckerChar { d })
    }

    /// Character for arbitrary D = 0,1 mod 4 via its fundamental part.
    pub fn from_disc(d: i64) -> Result<Self> {
        let (fd, _) = fundamental_discriminant(d)?;
        Ok(KroneckerChar { d: fd })
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    pub fn conductor(&self) -> u64 {
        self.d.unsigned_abs()
    }

    pub fn is_trivial(&self) -> bool {
        self.d == 1
    }

    pub fn eval(&self, m: i64) -> i32 {
        kronecker(self.d as i128, m as i128)
    }

    /// chi(-1), the parity of the character.
    pub fn sign(&self) -> i32 {
        if self.d < 0 {
            -1
        } else {
            1
        }
    }
}

static BERNOULLI: Mutex<Vec<Option<BigRat>>> = Mutex::new(Vec::new());

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli number B_n with the B_1 = -1/2 convention, cached.
pub fn bernoulli(n: u64) -> BigRat {
    {
        let cache = BERNOULLI.lock().unwrap();
        if let Some(Some(b)) = cache.get(n as usize) {
            return b.clone();
        }
    }
    if n > 1 && n % 2 == 1 {
        return BigRat::zero();
    }
    // convolution recurrence sum_{j<=m} C(m+1, j) B_j = 0
    let mut computed: Vec<BigRat> = vec![BigRat::one()];
    for m in 1..=n {
        let mut s = BigRat::zero();
        for (j, bj) in computed.iter().enumerate() {
            s += BigRat::from_integer(binomial(m + 1, j as u64)) * bj;
        }
        let coeff = BigRat::from_integer(binomial(m + 1, m));
        computed.push(-s / coeff);
    }
    let mut cache = BERNOULLI.lock().unwrap();
    if cache.len() < computed.len() {
        cache.resize(computed.len(), None);
    }
    for (i, b) in computed.iter().enumerate() {
        cache[i] = Some(b.clone());
    }
    computed[n as usize].clone()
}

/// Bernoulli polynomial B_n(x) = sum C(n,i) B_i x^(n-i).
pub fn bernoulli_poly(n: u64, x: &BigRat) -> BigRat {
    let mut acc = BigRat::zero();
    let mut xpow = BigRat::one();
    // accumulate from i = n down so powers of x ascend
    for i in (0..=n).rev() {
        acc += BigRat::from_integer(binomial(n, i)) * bernoulli(i) * &xpow;
        xpow *= x;
    }
    acc
}

/// Generalized Bernoulli number B_{n, chi} via the finite sum
/// f^(n-1) * sum_{a=1..f} chi(a) B_n(a/f).
pub fn bernoulli_chi(n: u64, chi: &KroneckerChar) -> BigRat {
    let f = chi.conductor();
    let mut s = BigRat::zero();
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let x = BigRat::new(BigInt::from(a), BigInt::from(f));
        let term = bernoulli_poly(n, &x);
        s += if c > 0 { term } else { -term };
    }
    let scale = BigRat::from_integer(BigInt::from(f)).pow(n as i32 - 1);
    scale * s
}

/// zeta(1 - k) for positive k: -B_k/k for k >= 2 (zero at odd k >= 3),
/// and zeta(0) = -1/2 at k = 1.
pub fn zeta_neg(k: i64) -> Result<BigRat> {
    if k <= 0 {
        return Err(Error::Domain(format!("zeta(1-k) needs k >= 1, got k = {k}")));
    }
    if k == 1 {
        return Ok(BigRat::new((-1).into(), 2.into()));
    }
    let b = bernoulli(k as u64);
    Ok(-b / BigRat::from_integer(k.into()))
}

/// L(1 - m, chi) = -B_{m, chi}/m for m >= 1. For the trivial character this
/// reduces to zeta(1 - m) (including L(0) = -1/2 at m = 1).
pub fn l_neg(m: i64, chi: &KroneckerChar) -> Result<BigRat> {
    if m <= 0 {
        return Err(Error::Domain(format!("L(1-m) needs m >= 1, got m = {m}")));
    }
    let b = bernoulli_chi(m as u64, chi);
    Ok(-b / BigRat::from_integer(m.into()))
}

/// The Eisenstein normalizer Z(n, l) = zeta(1-l) prod_{j=1..[n/2]}
/// zeta(1+2j-2l). Errors if any factor sits at a pole (argument 1).
pub fn z_norm(n: u64, l: i64) -> Result<BigRat> {
    let mut acc = zeta_at_nonpositive(1 - l)?;
    for j in 1..=(n / 2) as i64 {
        acc *= zeta_at_nonpositive(1 + 2 * j - 2 * l)?;
    }
    Ok(acc)
}

/// zeta at an integer argument s <= 0 (errors at s = 1 pole or s > 1).
pub fn zeta_at_nonpositive(s: i64) -> Result<BigRat> {
    if s == 1 {
        return Err(Error::Domain("zeta pole at s = 1".into()));
    }
    if s > 1 {
        return Err(Error::Domain(format!("zeta({s}) is not a rational special value")));
    }
    zeta_neg(1 - s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_neg(12).unwrap(), parse_rat("691/32760").unwrap());
        assert_eq!(zeta_neg(2).unwrap(), parse_rat("-1/12").unwrap());
        assert_eq!(zeta_neg(1).unwrap(), parse_rat("-1/2").unwrap());
        assert_eq!(zeta_neg(3).unwrap(), BigRat::zero());
        assert!(zeta_neg(0).is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        assert_eq!(fundamental_discriminant(12).unwrap(), (12, 1));
        assert_eq!(fundamental_discriminant(9).unwrap(), (1, 3));
        assert_eq!(fundamental_discriminant(5).unwrap(), (5, 1));
        assert_eq!(fundamental_discriminant(-4).unwrap(), (-4, 1));
        assert_eq!(fundamental_discriminant(-12).unwrap(), (-3, 2));
        assert!(fundamental_discriminant(7).is_err());
    }

    #[test]
    fn l_values() {
        let chi4 = KroneckerChar::new(-4).unwrap();
        assert_eq!(l_neg(1, &chi4).unwrap(), parse_rat("1/2").unwrap());
        // parity vanishing: chi(-1) = -1 but m even
        assert_eq!(l_neg(2, &chi4).unwrap(), BigRat::zero());
        let triv = KroneckerChar::new(1).unwrap();
        assert_eq!(l_neg(1, &triv).unwrap(), zeta_neg(1).unwrap());
        assert_eq!(l_neg(12, &triv).unwrap(), zeta_neg(12).unwrap());
    }

    #[test]
    fn z_norm_products() {
        // empty product for n = 1
        assert_eq!(z_norm(1, 16).unwrap(), zeta_neg(16).unwrap());
        let z46 = zeta_neg(6).unwrap() * zeta_neg(10).unwrap() * zeta_neg(8).unwrap();
        assert_eq!(z_norm(4, 6).unwrap(), z46);
        // telescoping ratio
        let ratio = z_norm(8, 16).unwrap() / z_norm(4, 16).unwrap();
        let direct = zeta_at_nonpositive(7 - 32).unwrap() * zeta_at_nonpositive(9 - 32).unwrap();
        assert_eq!(ratio, direct);
        // pole guard
        assert!(z_norm(4, 2).is_err());
    }

    #[test]
    fn von_staudt_clausen() {
        for k in (2..=40u64).step_by(2) {
            let denom = bernoulli(k).denom().clone();
            let mut prod = BigInt::one();
            for p in 2..=(k + 1) {
                if crate::exact::is_prime(p) && k % (p - 1) == 0 {
                    prod *= BigInt::from(p);
                }
            }
            assert_eq!(denom, prod, "k = {k}");
        }
    }

    #[test]
    fn kronecker_multiplicative() {
        let chi = KroneckerChar::new(-3).unwrap();
        for m in 1..60i64 {
            for n in 1..60i64 {
                assert_eq!(chi.eval(m * n), chi.eval(m) * chi.eval(n));
            }
        }
        // zero exactly on common factors, periodicity
        for m in 1..100i64 {
            assert_eq!(chi.eval(m) == 0, m % 3 == 0);
            assert_eq!(chi.eval(m), chi.eval(m + 3));
        }
    }
}
