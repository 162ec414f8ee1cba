//! Bideterminants for two-row rectangular weights and straightening onto
//! the semi-standard tableau basis by exact linear solve.
//!
//! A weight (w, w, 0, ..., 0) bideterminant in the 2 x n variable matrix U
//! is a product of w column-pair minors U_J, J = (j1 < j2). A tableau is a
//! sequence of such pairs; it is semi-standard when both rows are
//! non-decreasing. Straightening expands a product into monomials and
//! solves for its integer coordinates on the SSYT expansions.

use crate::diffop::poly::{var, MultiPoly};
use crate::error::{Error, Result};
use crate::exact::BigRat;
use crate::linalg::solve;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A strictly increasing column pair (1-based columns).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ColumnPair(pub usize, pub usize);

impl ColumnPair {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || a >= b {
            return Err(Error::Usage(format!("column pair ({a}, {b}) must be strictly increasing and 1-based")));
        }
        Ok(ColumnPair(a, b))
    }
}

fn u_var(matrix: &str, row: usize, col: usize) -> MultiPoly {
    MultiPoly::variable(var(&format!("{matrix}_{row}_{col}")))
}

/// The 2x2 minor U_J on rows 1, 2 and columns J of the named 2 x n matrix.
pub fn minor(matrix: &str, j: ColumnPair) -> MultiPoly {
    let a = u_var(matrix, 1, j.0).mul(&u_var(matrix, 2, j.1));
    let b = u_var(matrix, 1, j.1).mul(&u_var(matrix, 2, j.0));
    a.sub(&b)
}

/// Product of minors for a tableau given as its list of column pairs.
pub fn bideterminant(matrix: &str, pairs: &[ColumnPair]) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for j in pairs {
        acc = acc.mul(&minor(matrix, *j));
    }
    acc
}

/// All semi-standard tableaux of shape (w, w) with entries <= n, as sorted
/// lists of column pairs (both rows non-decreasing).
pub fn ssyt_tableaux(n: usize, w: usize) -> Vec<Vec<ColumnPair>> {
    let mut out = Vec::new();
    let mut current: Vec<ColumnPair> = Vec::new();
    fn rec(n: usize, w: usize, current: &mut Vec<ColumnPair>, out: &mut Vec<Vec<ColumnPair>>) {
        if current.len() == w {
            out.push(current.clone());
            return;
        }
        let (min_a, min_b) = match current.last() {
            Some(&ColumnPair(a, b)) => (a, b),
            None => (1, 2),
        };
        for a in min_a..=n {
            for b in (a + 1).max(min_b)..=n {
                current.push(ColumnPair(a, b));
                rec(n, w, current, out);
                current.pop();
            }
        }
    }
    rec(n, w, &mut current, &mut out);
    out
}

/// Number of semi-standard tableaux of shape (w, w) with entries <= n.
pub fn ssyt_basis_size(n: usize, w: usize) -> usize {
    ssyt_tableaux(n, w).len()
}

/// A straightened bideterminant: integer coordinates on the SSYT basis.
#[derive(Debug, Clone)]
pub struct Straightened {
    pub basis: Vec<Vec<ColumnPair>>,
    pub coords: Vec<BigRat>,
}

impl Straightened {
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn reassemble(&self, matrix: &str) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (t, c) in self.basis.iter().zip(&self.coords) {
            acc = acc.add(&bideterminant(matrix, t).scale(c));
        }
        acc
    }
}

/// Straighten an arbitrary polynomial lying in the weight-(w, w) span onto
/// the SSYT basis by exact linear solve against the basis expansions.
pub fn straighten_poly(n: usize, w: usize, value: &MultiPoly, matrix: &str) -> Result<Straightened> {
    let basis = ssyt_tableaux(n, w);
    let expansions: Vec<MultiPoly> = basis.iter().map(|t| bideterminant(matrix, t)).collect();
    // collect all monomials appearing anywhere
    let mut monomials: BTreeMap<Vec<(u32, u32)>, usize> = BTreeMap::new();
    for p in expansions.iter().chain(std::iter::once(value)) {
        for (m, _) in p.terms() {
            let next = monomials.len();
            monomials.entry(m.clone()).or_insert(next);
        }
    }
    let rows = monomials.len();
    let mut a = vec![vec![BigRat::zero(); basis.len()]; rows];
    let mut b = vec![BigRat::zero(); rows];
    for (j, p) in expansions.iter().enumerate() {
        for (m, c) in p.terms() {
            a[monomials[m]][j] = c.clone();
        }
    }
    for (m, c) in value.terms() {
        b[monomials[m]] = c.clone();
    }
    let coords = solve(&a, &b).ok_or_else(|| {
        Error::Domain("polynomial does not lie in the bideterminant span".into())
    })?;
    Ok(Straightened { basis, coords })
}

/// Straighten a product of minors given by its column pairs.
pub fn straighten(n: usize, pairs: &[ColumnPair]) -> Result<Straightened> {
    let value = bideterminant("u", pairs);
    straighten_poly(n, pairs.len(), &value, "u")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_count_example() {
        // single-column shape over 4 letters: the six pairs
        assert_eq!(ssyt_basis_size(4, 1), 6);
        // two-column shape over 4 letters: dimension 20 of the (2,2) module
        assert_eq!(ssyt_basis_size(4, 2), 20);
    }

    #[test]
    fn pluecker_straightening() {
        // U_14 U_23 = U_13 U_24 - U_12 U_34
        let p = straighten(4, &[ColumnPair(1, 4), ColumnPair(2, 3)]).unwrap();
        assert!(p.is_integral());
        let mut nonzero: Vec<(String, String)> = p
            .basis
            .iter()
            .zip(&p.coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (format!("{t:?}"), crate::exact::format_rat(c)))
            .collect();
        nonzero.sort();
        assert_eq!(nonzero.len(), 2);
        // expansion must equal the original polynomial
        let original = bideterminant("u", &[ColumnPair(1, 4), ColumnPair(2, 3)]);
        assert_eq!(p.reassemble("u"), original);
        // expected coordinates: +1 on (13)(24), -1 on (12)(34)
        for (t, c) in p.basis.iter().zip(&p.coords) {
            if t == &vec![ColumnPair(1, 3), ColumnPair(2, 4)] {
                assert_eq!(crate::exact::format_rat(c), "1");
            }
            if t == &vec![ColumnPair(1, 2), ColumnPair(3, 4)] {
                assert_eq!(crate::exact::format_rat(c), "-1");
            }
        }
    }

    #[test]
    fn semistandard_fixed_point() {
        // an already semi-standard product straightens to itself
        let t = vec![ColumnPair(1, 2), ColumnPair(2, 3)];
        let s = straighten(4, &t).unwrap();
        for (basis_t, c) in s.basis.iter().zip(&s.coords) {
            let expect = if *basis_t == t { "1" } else { "0" };
            assert_eq!(crate::exact::format_rat(c), expect, "{basis_t:?}");
        }
    }

    #[test]
    fn straightening_is_projection() {
        // idempotence through reassembly, with integer output
        let s = straighten(4, &[ColumnPair(2, 4), ColumnPair(1, 3)]).unwrap();
        assert!(s.is_integral());
        let again = straighten_poly(4, 2, &s.reassemble("u"), "u").unwrap();
        assert_eq!(s.coords, again.coords);
    }
}
