//! The depth-two differential operator kernels Q_l(T, U, V): closed-form
//! construction from the three block invariants, a generating-function
//! cross-check, and the pluriharmonicity/equivariance characterization
//! verified symbolically.

use crate::diffop::poly::{var, MultiPoly};
use crate::error::{Error, Result};
use crate::exact::BigRat;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// Weight parameter: the formal variable k or a concrete rational.
#[derive(Debug, Clone)]
pub enum Weight {
    Formal,
    Numeric(BigRat),
}

impl Weight {
    fn as_poly(&self) -> MultiPoly {
        match self {
            Weight::Formal => MultiPoly::named("k"),
            Weight::Numeric(q) => MultiPoly::constant(q.clone()),
        }
    }
}

/// Ascending Pochhammer (x)_m = x (x+1) ... (x+m-1) on polynomials.
fn poch(x: &MultiPoly, m: u32) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for i in 0..m {
        acc = acc.mul(&x.add(&MultiPoly::from_int(i as i64)));
    }
    acc
}

pub fn t_var(a: usize, b: usize) -> u32 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    var(&format!("t_{a}_{b}"))
}

pub fn u_entry(i: usize, j: usize) -> u32 {
    var(&format!("qu_{i}_{j}"))
}

pub fn v_entry(i: usize, j: usize) -> u32 {
    var(&format!("qv_{i}_{j}"))
}

fn det2(m: &[Vec<MultiPoly>]) -> MultiPoly {
    m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
}

fn det4(m: &[Vec<MultiPoly>]) -> MultiPoly {
    // cofactor expansion along the first row
    let minor = |skip_col: usize| -> Vec<Vec<MultiPoly>> {
        (1..4)
            .map(|i| {
                (0..4)
                    .filter(|&j| j != skip_col)
                    .map(|j| m[i][j].clone())
                    .collect()
            })
            .collect()
    };
    let det3 = |mm: &Vec<Vec<MultiPoly>>| -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (c, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
            let sub: Vec<Vec<MultiPoly>> = (1..3)
                .map(|i| {
                    (0..3)
                        .filter(|&j| j != c)
                        .map(|j| mm[i][j].clone())
                        .collect()
                })
                .collect();
            let d2 = det2(&sub);
            acc = acc.add(&mm[0][c].mul(&d2).scale(&BigRat::from_integer(sign.into())));
        }
        acc
    };
    let mut acc = MultiPoly::zero();
    for (c, sign) in [(0usize, 1i64), (1, -1), (2, 1), (3, -1)] {
        let mm = minor(c);
        acc = acc.add(&m[0][c].mul(&det3(&mm)).scale(&BigRat::from_integer(sign.into())));
    }
    acc
}

/// The three block invariants F1, F2, F3 of S = UU T UU^t, where UU is the
/// 4 x (n1+n2) block-diagonal matrix of the 2 x n1 and 2 x n2 variable
/// matrices, and T is given entrywise (symbolic or numeric).
fn block_invariants(
    n1: usize,
    n2: usize,
    t_entry: &dyn Fn(usize, usize) -> MultiPoly,
) -> (MultiPoly, MultiPoly, MultiPoly) {
    let n = n1 + n2;
    // UU rows: 2 u-rows then 2 v-rows
    let uu = |row: usize, col: usize| -> MultiPoly {
        if row < 2 {
            if col < n1 {
                MultiPoly::variable(u_entry(row + 1, col + 1))
            } else {
                MultiPoly::zero()
            }
        } else if col >= n1 {
            MultiPoly::variable(v_entry(row - 1, col - n1 + 1))
        } else {
            MultiPoly::zero()
        }
    };
    // S = UU T UU^t (4 x 4)
    let mut s = vec![vec![MultiPoly::zero(); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let mut acc = MultiPoly::zero();
            for a in 0..n {
                for b in 0..n {
                    let prod = uu(i, a).mul(&t_entry(a, b)).mul(&uu(j, b));
                    acc = acc.add(&prod);
                }
            }
            s[i][j] = acc.clone();
            s[j][i] = acc;
        }
    }
    let s12: Vec<Vec<MultiPoly>> = (0..2).map(|i| (2..4).map(|j| s[i][j].clone()).collect()).collect();
    let s11: Vec<Vec<MultiPoly>> = (0..2).map(|i| (0..2).map(|j| s[i][j].clone()).collect()).collect();
    let s22: Vec<Vec<MultiPoly>> = (2..4).map(|i| (2..4).map(|j| s[i][j].clone()).collect()).collect();
    let f1 = det2(&s12);
    let f2 = det2(&s11).mul(&det2(&s22));
    let f3 = det4(&s);
    (f1, f2, f3)
}

/// Closed-form coefficient sum over a + 2b + 2c = l:
/// (-1)^b 2^a / (a! b! c!) (k + c - 3/2)_{a+b+c} F1^a F2^b F3^c.
fn ql_from_invariants(
    l: u32,
    weight: &Weight,
    f1: &MultiPoly,
    f2: &MultiPoly,
    f3: &MultiPoly,
) -> MultiPoly {
    let k = weight.as_poly();
    let mut acc = MultiPoly::zero();
    for b in 0..=(l / 2) {
        for c in 0..=(l / 2 - b) {
            let a = l - 2 * b - 2 * c;
            let mut coeff = BigRat::new(BigInt::from(1) << a, BigInt::one());
            if b % 2 == 1 {
                coeff = -coeff;
            }
            let mut fact = BigInt::one();
            for i in 1..=a {
                fact *= BigInt::from(i);
            }
            for i in 1..=b {
                fact *= BigInt::from(i);
            }
            for i in 1..=c {
                fact *= BigInt::from(i);
            }
            coeff /= BigRat::from_integer(fact);
            // (k + c - 3/2)
            let base = k.add(&MultiPoly::constant(
                BigRat::from_integer((c as i64).into()) - BigRat::new(3.into(), 2.into()),
            ));
            let p = poch(&base, a + b + c);
            let term = f1.pow(a).mul(&f2.pow(b)).mul(&f3.pow(c));
            acc = acc.add(&term.mul(&p).scale(&coeff));
        }
    }
    acc
}

/// Q_l(T, U, V) for the partition (n1, n2), with symbolic T entries.
pub fn ql_kernel(l: u32, n1: usize, n2: usize, weight: &Weight) -> Result<MultiPoly> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::Domain("kernel needs n1, n2 >= 2".into()));
    }
    let t_entry = |a: usize, b: usize| MultiPoly::variable(t_var(a + 1, b + 1));
    let (f1, f2, f3) = block_invariants(n1, n2, &t_entry);
    Ok(ql_from_invariants(l, weight, &f1, &f2, &f3))
}

/// Q_l evaluated at a numeric symmetric matrix T (entries as rationals):
/// the result is a polynomial in the u, v variables only. Builds the
/// invariants numerically first, so large l stays cheap.
pub fn ql_kernel_at(
    l: u32,
    n1: usize,
    n2: usize,
    weight: &BigRat,
    t: &dyn Fn(usize, usize) -> BigRat,
) -> Result<MultiPoly> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::Domain("kernel needs n1, n2 >= 2".into()));
    }
    let t_entry = |a: usize, b: usize| MultiPoly::constant(t(a, b));
    let (f1, f2, f3) = block_invariants(n1, n2, &t_entry);
    Ok(ql_from_invariants(l, &Weight::Numeric(weight.clone()), &f1, &f2, &f3))
}

// --- generating function cross-check ---------------------------------------

/// Truncated power series in t with MultiPoly coefficients.
#[derive(Clone)]
struct Series {
    coeffs: Vec<MultiPoly>,
}

impl Series {
    fn new(coeffs: Vec<MultiPoly>) -> Self {
        Series { coeffs }
    }

    fn order(&self) -> usize {
        self.coeffs.len()
    }

    fn mul(&self, rhs: &Series) -> Series {
        let ord = self.order().min(rhs.order());
        let mut out = vec![MultiPoly::zero(); ord];
        for i in 0..ord {
            for j in 0..ord - i {
                if self.coeffs[i].is_zero() {
                    break;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&rhs.coeffs[j]));
            }
        }
        Series::new(out)
    }

    /// sqrt of a series with constant term 1.
    fn sqrt(&self) -> Series {
        let ord = self.order();
        assert_eq!(self.coeffs[0], MultiPoly::one());
        let mut s = vec![MultiPoly::zero(); ord];
        s[0] = MultiPoly::one();
        let half = BigRat::new(1.into(), 2.into());
        for j in 1..ord {
            // A_j = 2 s_0 s_j + sum_{i=1}^{j-1} s_i s_{j-i}
            let mut acc = self.coeffs[j].clone();
            for i in 1..j {
                acc = acc.sub(&s[i].mul(&s[j - i]));
            }
            s[j] = acc.scale(&half);
        }
        Series::new(s)
    }

    /// inverse of a series with constant term 1.
    fn inverse(&self) -> Series {
        let ord = self.order();
        assert_eq!(self.coeffs[0], MultiPoly::one());
        let mut s = vec![MultiPoly::zero(); ord];
        s[0] = MultiPoly::one();
        for j in 1..ord {
            let mut acc = MultiPoly::zero();
            for i in 1..=j {
                acc = acc.add(&self.coeffs[i].mul(&s[j - i]));
            }
            s[j] = acc.neg();
        }
        Series::new(s)
    }

    fn pow(&self, e: u32) -> Series {
        let mut acc = Series::new({
            let mut v = vec![MultiPoly::zero(); self.order()];
            v[0] = MultiPoly::one();
            v
        });
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Coefficients Q_0 .. Q_order-1 of the kernel generating function
/// 1 / (R^(k - 5/2) sqrt(D0^2 - 4 f3 t^2)), with
/// D0 = 1 - 2 f1 t + f2 t^2 and R = (D0 + sqrt(D0^2 - 4 f3 t^2))/2, in the
/// abstract invariant variables gf1, gf2, gf3. Needs a concrete even
/// weight k >= 4 (half-integer powers resolve through series square
/// roots).
pub fn ql_generating_series(order: usize, k: i64) -> Result<Vec<MultiPoly>> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::Domain("generating series wants even k >= 4".into()));
    }
    let f1 = MultiPoly::named("gf1");
    let f2 = MultiPoly::named("gf2");
    let f3 = MultiPoly::named("gf3");
    let mut d0 = vec![MultiPoly::zero(); order];
    d0[0] = MultiPoly::one();
    if order > 1 {
        d0[1] = f1.scale(&BigRat::from_integer((-2).into()));
    }
    if order > 2 {
        d0[2] = f2.clone();
    }
    let d0 = Series::new(d0);
    // X = D0^2 - 4 f3 t^2
    let mut x = d0.mul(&d0);
    if order > 2 {
        x.coeffs[2] = x.coeffs[2].add(&f3.scale(&BigRat::from_integer((-4).into())));
    }
    let sqx = x.sqrt();
    // R = (D0 + sqrt(X))/2
    let half = BigRat::new(1.into(), 2.into());
    let r = Series::new(
        d0.coeffs
            .iter()
            .zip(&sqx.coeffs)
            .map(|(a, b)| a.add(b).scale(&half))
            .collect(),
    );
    // R^(-(k - 5/2)) = (1/sqrt(R))^(2k - 5)
    let inv_sqrt_r = r.sqrt().inverse();
    let r_power = inv_sqrt_r.pow((2 * k - 5) as u32);
    let total = r_power.mul(&sqx.inverse());
    Ok(total.coeffs)
}

/// The closed-form Q_l written in the same abstract invariant variables.
pub fn ql_closed_form_abstract(l: u32, k: i64) -> MultiPoly {
    let f1 = MultiPoly::named("gf1");
    let f2 = MultiPoly::named("gf2");
    let f3 = MultiPoly::named("gf3");
    ql_from_invariants(
        l,
        &Weight::Numeric(BigRat::from_integer(k.into())),
        &f1,
        &f2,
        &f3,
    )
}

// --- pluriharmonicity -------------------------------------------------------

fn x_var(block: usize, i: usize, nu: usize) -> u32 {
    var(&format!("px{block}_{i}_{nu}"))
}

/// Gram substitution: T_ab = sum_nu X_a,nu X_b,nu where rows 1..n1 come
/// from X1 (n1 x 2k) and rows n1+1..n from X2 (n2 x 2k).
fn gram_entry(a: usize, b: usize, n1: usize, two_k: usize) -> MultiPoly {
    let row = |r: usize, nu: usize| -> MultiPoly {
        if r < n1 {
            MultiPoly::variable(x_var(1, r + 1, nu))
        } else {
            MultiPoly::variable(x_var(2, r - n1 + 1, nu))
        }
    };
    let mut acc = MultiPoly::zero();
    for nu in 1..=two_k {
        acc = acc.add(&row(a, nu).mul(&row(b, nu)));
    }
    acc
}

/// Apply the mixed Laplacian Delta_ij on the given X-block to a polynomial
/// in the px variables.
fn laplacian(p: &MultiPoly, block: usize, i: usize, j: usize, two_k: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for nu in 1..=two_k {
        let d1 = p.derivative(x_var(block, i, nu));
        let d2 = d1.derivative(x_var(block, j, nu));
        acc = acc.add(&d2);
    }
    acc
}

/// Check pluriharmonicity of the polynomial q(T, U, V) (T symbolic) after
/// the Gram substitution with X1 (n1 x 2k), X2 (n2 x 2k): every Delta_ij
/// on each block must annihilate it. The u, v variables ride along as
/// coefficients, so the check splits over uv-monomials.
pub fn pluriharmonic_check_poly(q: &MultiPoly, n1: usize, n2: usize, k: i64) -> Result<bool> {
    let two_k = (2 * k) as usize;
    if two_k < n1 + n2 {
        return Err(Error::Domain("pluriharmonicity needs 2k >= n1 + n2".into()));
    }
    // substitute T variables by gram polynomials
    let n = n1 + n2;
    let mut map = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            map.insert(t_var(a + 1, b + 1), gram_entry(a, b, n1, two_k));
        }
    }
    // uv variables to split over
    let mut uv: Vec<u32> = Vec::new();
    for i in 1..=2 {
        for j in 1..=n1 {
            uv.push(u_entry(i, j));
        }
        for j in 1..=n2 {
            uv.push(v_entry(i, j));
        }
    }
    for (_, coeff_poly) in q.coefficients_in(&uv) {
        let substituted = coeff_poly.substitute(&map);
        for (block, size) in [(1usize, n1), (2, n2)] {
            for i in 1..=size {
                for j in i..=size {
                    if !laplacian(&substituted, block, i, j, two_k).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Pluriharmonicity of the kernel Q_l itself.
pub fn pluriharmonic_check(l: u32, n1: usize, n2: usize, k: i64) -> Result<bool> {
    let q = ql_kernel(l, n1, n2, &Weight::Numeric(BigRat::from_integer(k.into())))?;
    pluriharmonic_check_poly(&q, n1, n2, k)
}

// --- equivariance -----------------------------------------------------------

/// Check Q_l(A T A^t, U, V) = Q_l(T, U A1, V A2) as polynomial identities,
/// for integer matrices A1 (n1 x n1) and A2 (n2 x n2), A = diag(A1, A2).
pub fn equivariance_check(
    l: u32,
    n1: usize,
    n2: usize,
    a1: &[Vec<i64>],
    a2: &[Vec<i64>],
    weight: &Weight,
) -> Result<bool> {
    if a1.len() != n1 || a2.len() != n2 {
        return Err(Error::Usage("transform size mismatch".into()));
    }
    let q = ql_kernel(l, n1, n2, weight)?;
    let n = n1 + n2;
    let a = |i: usize, j: usize| -> i64 {
        if i < n1 && j < n1 {
            a1[i][j]
        } else if i >= n1 && j >= n1 {
            a2[i - n1][j - n1]
        } else {
            0
        }
    };
    // LHS: T_cd -> (A T A^t)_cd = sum_{e,f} A_ce T_ef A_df
    let mut tmap = BTreeMap::new();
    for c in 0..n {
        for d in c..n {
            let mut acc = MultiPoly::zero();
            for e in 0..n {
                for f in 0..n {
                    let coeff = a(c, e) * a(d, f);
                    if coeff != 0 {
                        acc = acc.add(
                            &MultiPoly::variable(t_var(e + 1, f + 1))
                                .scale(&BigRat::from_integer(coeff.into())),
                        );
                    }
                }
            }
            tmap.insert(t_var(c + 1, d + 1), acc);
        }
    }
    let lhs = q.substitute(&tmap);
    // RHS: u_ij -> sum_c u_ic (A1)_cj, v likewise
    let mut uvmap = BTreeMap::new();
    for i in 1..=2 {
        for j in 1..=n1 {
            let mut acc = MultiPoly::zero();
            for c in 1..=n1 {
                let coeff = a1[c - 1][j - 1];
                if coeff != 0 {
                    acc = acc.add(
                        &MultiPoly::variable(u_entry(i, c)).scale(&BigRat::from_integer(coeff.into())),
                    );
                }
            }
            uvmap.insert(u_entry(i, j), acc);
        }
        for j in 1..=n2 {
            let mut acc = MultiPoly::zero();
            for c in 1..=n2 {
                let coeff = a2[c - 1][j - 1];
                if coeff != 0 {
                    acc = acc.add(
                        &MultiPoly::variable(v_entry(i, c)).scale(&BigRat::from_integer(coeff.into())),
                    );
                }
            }
            uvmap.insert(v_entry(i, j), acc);
        }
    }
    let rhs = q.substitute(&uvmap);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_and_q1_shape() {
        let q0 = ql_kernel(0, 2, 2, &Weight::Formal).unwrap();
        assert_eq!(q0, MultiPoly::one());
        // Q1 = (2k - 3) F1
        let q1 = ql_kernel(1, 2, 2, &Weight::Formal).unwrap();
        let t_entry = |a: usize, b: usize| MultiPoly::variable(t_var(a + 1, b + 1));
        let (f1, _, _) = block_invariants(2, 2, &t_entry);
        let k = MultiPoly::named("k");
        let expect = f1.mul(
            &k.scale(&BigRat::from_integer(2.into()))
                .sub(&MultiPoly::from_int(3)),
        );
        assert_eq!(q1, expect);
    }

    #[test]
    fn homogeneity_in_t() {
        // total degree in T entries is exactly 2l
        let tvars: Vec<u32> = (1..=4)
            .flat_map(|a| (a..=4).map(move |b| t_var(a, b)))
            .collect();
        for l in [1u32, 2, 3] {
            let q = ql_kernel(l, 2, 2, &Weight::Formal).unwrap();
            assert_eq!(q.degree_in(&tvars), 2 * l, "l = {l}");
            // and every monomial attains it (homogeneous)
            for (m, _) in q.terms() {
                let d: u32 = m
                    .iter()
                    .filter(|(v, _)| tvars.contains(v))
                    .map(|&(_, e)| e)
                    .sum();
                assert_eq!(d, 2 * l);
            }
        }
    }

    #[test]
    fn generating_function_matches_closed_form() {
        for k in [4i64, 6] {
            let series = ql_generating_series(4, k).unwrap();
            for l in 0..4u32 {
                let closed = ql_closed_form_abstract(l, k);
                assert_eq!(series[l as usize], closed, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn equivariance_small() {
        let id2 = vec![vec![1, 0], vec![0, 1]];
        assert!(equivariance_check(1, 2, 2, &id2, &id2, &Weight::Formal).unwrap());
        let a1 = vec![vec![1, 0], vec![0, 2]];
        assert!(equivariance_check(1, 2, 2, &a1, &id2, &Weight::Formal).unwrap());
        // random-ish unimodular pair at l = 2
        let a1 = vec![vec![1, 2], vec![0, 1]];
        let a2 = vec![vec![1, 0], vec![3, 1]];
        assert!(equivariance_check(2, 2, 2, &a1, &a2, &Weight::Formal).unwrap());
    }

    #[test]
    fn pluriharmonic_l1_k4() {
        assert!(pluriharmonic_check(1, 2, 2, 4).unwrap());
        // negative control: Q1 + F2 is not pluriharmonic
        let t_entry = |a: usize, b: usize| MultiPoly::variable(t_var(a + 1, b + 1));
        let (_, f2, _) = block_invariants(2, 2, &t_entry);
        let q1 = ql_kernel(1, 2, 2, &Weight::Numeric(BigRat::from_integer(4.into()))).unwrap();
        let perturbed = q1.add(&f2);
        assert!(!pluriharmonic_check_poly(&perturbed, 2, 2, 4).unwrap());
    }
}
