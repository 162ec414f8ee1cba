//! Small exact linear algebra over the rationals and over quadratic
//! fields: row reduction, linear solves, determinants. Dimensions here are
//! tiny (tableaux, straightening systems), so plain Gaussian elimination
//! with exact pivots is the right tool.

use crate::exact::{BigRat, QuadFieldElem};
use num_traits::Zero;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Vec<Vec<BigRat>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone().recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in 0..cols {
                    let sub = &m[r][c2] * &f;
                    m[i][c2] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Solve A x = b exactly. Returns None when inconsistent; when the system
/// is underdetermined the free variables are set to zero.
pub fn solve(a: &[Vec<BigRat>], b: &[BigRat]) -> Option<Vec<BigRat>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { return Some(vec![]) } else { a[0].len() };
    let mut aug: Vec<Vec<BigRat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // inconsistency: pivot in the rhs column
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRat::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Determinant over a quadratic field by elimination with exact inverses.
pub fn det_quad(mut m: Vec<Vec<QuadFieldElem>>) -> QuadFieldElem {
    let n = m.len();
    let mut det = QuadFieldElem::from_int(1);
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return QuadFieldElem::from_int(0);
        };
        if pr != c {
            m.swap(c, pr);
            det = &det * &QuadFieldElem::from_int(-1);
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for c2 in c..n {
                let sub = &m[c][c2] * &f;
                m[i][c2] = &m[i][c2] - &sub;
            }
        }
    }
    det
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<BigRat>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRat {
        BigRat::from_integer(BigInt::from(n))
    }

    #[test]
    fn solve_square() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let b = vec![r(5), r(10)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![r(1), r(3)]);
    }

    #[test]
    fn detect_inconsistency() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        assert!(solve(&a, &[r(1), r(3)]).is_none());
        assert!(solve(&a, &[r(1), r(2)]).is_some());
    }

    #[test]
    fn quad_determinant() {
        let s = QuadFieldElem::sqrt_d(5).unwrap();
        let one = QuadFieldElem::from_int(1);
        // det [[1, s],[s, 1]] = 1 - 5 = -4
        let d = det_quad(vec![vec![one.clone(), s.clone()], vec![s, one]]);
        assert_eq!(d, QuadFieldElem::from_int(-4));
    }
}
