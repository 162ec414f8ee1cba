//! Integer factorization helpers: deterministic Miller-Rabin, Pollard rho,
//! squarefree kernels. Inputs here are word-sized (field discriminants,
//! scan bounds), so no sub-exponential machinery is warranted.

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the standard 12-witness set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization of |n| as sorted (prime, exponent) pairs.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m <= 1 {
            continue;
        }
        if is_prime(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Squarefree kernel: n = kernel * square, kernel squarefree.
/// Returns (kernel, sqrt(square)). Sign of n is carried by the kernel.
pub fn squarefree_kernel(n: i64) -> Result<(i64, u64)> {
    if n == 0 {
        return Err(Error::Domain("squarefree kernel of 0".into()));
    }
    let mut kernel = 1i64;
    let mut root = 1u64;
    for (p, e) in factorize(n.unsigned_abs()) {
        if e % 2 == 1 {
            kernel *= p as i64;
        }
        root *= p.pow(e / 2);
    }
    if n < 0 {
        kernel = -kernel;
    }
    Ok((kernel, root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_of_case_primes() {
        for p in [41u64, 97, 4289, 51349] {
            assert!(is_prime(p), "{p} should be prime");
        }
        // 18209 = 131 * 139: squarefree radicand but not prime
        assert!(!is_prime(18209));
        assert!(is_squarefree(18209));
        assert!(!is_prime(1));
    }

    #[test]
    fn kernel_extraction() {
        assert_eq!(squarefree_kernel(12).unwrap(), (3, 2));
        assert_eq!(squarefree_kernel(-4).unwrap(), (-1, 2));
        assert_eq!(squarefree_kernel(51349).unwrap(), (51349, 1));
        assert!(squarefree_kernel(0).is_err());
    }
}
