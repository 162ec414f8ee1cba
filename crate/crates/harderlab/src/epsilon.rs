//! Pullback Fourier coefficients: the R-sum over Eisenstein coefficients
//! against the kernel polynomials, the degree-(2,4) closed form as a
//! cross-oracle, symbolic Hecke combinations, the determinant method, and
//! the fixture-driven verification drivers for the three worked cases.

use crate::diffop::{ql_kernel_at, MultiPoly};
use crate::eisenstein::{eisenstein_coeff, EisensteinSpec};
use crate::error::{Error, Result};
use crate::exact::{
    format_rat, prime_split, BigRat, QuadFieldElem, Splitting,
};
use crate::fixtures::FixtureStore;
use crate::lifts::{atobe1_weight, incongruence_table, lift_eigenvalue_tp, LiftKind};
use crate::linalg::det_quad;
use crate::qexp::eigenforms;
use crate::report::Report;
use crate::siegel::{chi_t_star, fp_with_budget, nondegenerate_part, HalfIntegralMat};
use crate::special::{l_neg, zeta_at_nonpositive};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A pullback coefficient: polynomial in the kernel's u, v variables.
#[derive(Debug, Clone)]
pub struct EpsilonValue {
    pub k: i64,
    pub l: i64,
    pub n1: usize,
    pub n2: usize,
    pub value: MultiPoly,
}

/// Integer sqrt floor.
fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64 + 1;
    while x * x > n {
        x -= 1;
    }
    x
}

/// All integer matrices R (n1 x n2) with [[T1, R/2], [R^t/2, T2]] psd:
/// box bound |R_ij| <= 2 sqrt(T1_ii T2_jj), then an exact psd filter.
pub fn enumerate_r(t1: &HalfIntegralMat, t2: &HalfIntegralMat) -> Result<Vec<Vec<Vec<i64>>>> {
    if !t1.is_psd() || !t2.is_psd() {
        return Err(Error::Domain("R-enumeration needs psd blocks".into()));
    }
    let (n1, n2) = (t1.size(), t2.size());
    let mut bounds = vec![vec![0i64; n2]; n1];
    for i in 0..n1 {
        for j in 0..n2 {
            // (2 R_ij)^2 <= (2T1_ii)(2T2_jj) twice-integrally
            let g1: i64 = i64::try_from(t1.twice_entry(i, i)).unwrap();
            let g2: i64 = i64::try_from(t2.twice_entry(j, j)).unwrap();
            bounds[i][j] = isqrt(g1 * g2);
        }
    }
    let mut out = Vec::new();
    let cells: Vec<(usize, usize)> = (0..n1)
        .flat_map(|i| (0..n2).map(move |j| (i, j)))
        .collect();
    let mut r = vec![vec![0i64; n2]; n1];
    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        bounds: &[Vec<i64>],
        r: &mut Vec<Vec<i64>>,
        t1: &HalfIntegralMat,
        t2: &HalfIntegralMat,
        out: &mut Vec<Vec<Vec<i64>>>,
    ) {
        if idx == cells.len() {
            let block = HalfIntegralMat::block(t1, r, t2).expect("block shape");
            if block.is_psd() {
                out.push(r.clone());
            }
            return;
        }
        let (i, j) = cells[idx];
        for v in -bounds[i][j]..=bounds[i][j] {
            r[i][j] = v;
            rec(idx + 1, cells, bounds, r, t1, t2, out);
        }
        r[i][j] = 0;
    }
    rec(0, &cells, &bounds, &mut r, t1, t2, &mut out);
    Ok(out)
}

/// epsilon_{k,l,n1,n2}(T1, T2)(U, V) =
/// (k-l)! sum_R a(block, E~_{n1+n2, l}) Q_{k-l}(block, U, V).
pub fn epsilon(
    k: i64,
    l: i64,
    t1: &HalfIntegralMat,
    t2: &HalfIntegralMat,
) -> Result<EpsilonValue> {
    let (n1, n2) = (t1.size(), t2.size());
    if k < l || k % 2 != 0 || l % 2 != 0 {
        return Err(Error::Domain("need even k >= l".into()));
    }
    let spec = EisensteinSpec::new(n1 + n2, l, true)?;
    let weight = BigRat::from_integer(l.into());
    let mut acc = MultiPoly::zero();
    for r in enumerate_r(t1, t2)? {
        let block = HalfIntegralMat::block(t1, &r, t2)?;
        let a = eisenstein_coeff(&spec, &block)?;
        if a.is_zero() {
            continue;
        }
        let q = ql_kernel_at((k - l) as u32, n1, n2, &weight, &|i, j| block.entry(i, j))?;
        acc = acc.add(&q.scale(&a));
    }
    let mut fact = BigInt::one();
    for i in 1..=(k - l) {
        fact *= BigInt::from(i);
    }
    acc = acc.scale(&BigRat::from_integer(fact));
    Ok(EpsilonValue { k, l, n1, n2, value: acc })
}

/// Evaluate an epsilon polynomial at concrete integer matrices U (2 x n1)
/// and V (2 x n2).
pub fn eval_epsilon(value: &EpsilonValue, u: &[Vec<i64>], v: &[Vec<i64>]) -> Result<BigRat> {
    let mut binding = BTreeMap::new();
    bind_uv(&mut binding, value.n1, value.n2, u, v)?;
    Ok(value.value.eval(&binding))
}

fn bind_uv(
    binding: &mut BTreeMap<u32, BigRat>,
    n1: usize,
    n2: usize,
    u: &[Vec<i64>],
    v: &[Vec<i64>],
) -> Result<()> {
    if u.len() != 2 || v.len() != 2 || u.iter().any(|r| r.len() != n1) || v.iter().any(|r| r.len() != n2)
    {
        return Err(Error::Usage("evaluation matrices must be 2 x n1 and 2 x n2".into()));
    }
    for i in 1..=2 {
        for j in 1..=n1 {
            binding.insert(
                crate::diffop::ql_u_entry(i, j),
                BigRat::from_integer(u[i - 1][j - 1].into()),
            );
        }
        for j in 1..=n2 {
            binding.insert(
                crate::diffop::ql_v_entry(i, j),
                BigRat::from_integer(v[i - 1][j - 1].into()),
            );
        }
    }
    Ok(())
}

/// Swap the u and v variable families of a square-partition value
/// (n1 = n2), for the block-relabeling symmetry check.
pub fn swap_uv(value: &MultiPoly, n: usize) -> MultiPoly {
    let mut map = BTreeMap::new();
    for i in 1..=2 {
        for j in 1..=n {
            map.insert(
                crate::diffop::ql_u_entry(i, j),
                MultiPoly::variable(crate::diffop::ql_v_entry(i, j)),
            );
            map.insert(
                crate::diffop::ql_v_entry(i, j),
                MultiPoly::variable(crate::diffop::ql_u_entry(i, j)),
            );
        }
    }
    value.substitute(&map)
}

/// Substitute U -> U g^t on the u variables (the kernel-equivariance image
/// of transforming T1 by the unimodular g).
pub fn substitute_u_right(value: &MultiPoly, n1: usize, g: &[Vec<i64>]) -> MultiPoly {
    let mut map = BTreeMap::new();
    for i in 1..=2 {
        for j in 1..=n1 {
            let mut acc = MultiPoly::zero();
            for c in 1..=n1 {
                // (U g^t)_{ij} = sum_c U_{ic} g_{jc}
                let coeff = g[j - 1][c - 1];
                if coeff != 0 {
                    acc = acc.add(
                        &MultiPoly::variable(crate::diffop::ql_u_entry(i, c))
                            .scale(&BigRat::from_integer(coeff.into())),
                    );
                }
            }
            map.insert(crate::diffop::ql_u_entry(i, j), acc);
        }
    }
    value.substitute(&map)
}

/// The zeta/L factor of the closed form by the rank of the block, for the
/// degree-6 series of weight l. Ranks 4..6 follow the displayed case
/// split; other ranks take the general tail of the coefficient formula.
pub fn z_case_factor(block: &HalfIntegralMat, rank: usize, l: i64) -> Result<BigRat> {
    match rank {
        6 => l_neg(l - 3, &chi_t_star(block)?),
        5 => zeta_at_nonpositive(7 - 2 * l),
        4 => Ok(zeta_at_nonpositive(7 - 2 * l)? * l_neg(l - 2, &chi_t_star(block)?)?),
        m => {
            // general tail: m even: prod_{i=m/2+1}^{3} zeta(1+2i-2l) * L(1+m/2-l);
            // m odd: prod_{i=(m+1)/2}^{3} zeta(1+2i-2l)
            let mut acc = BigRat::one();
            if m % 2 == 0 {
                for i in (m as i64 / 2 + 1)..=3 {
                    acc *= zeta_at_nonpositive(1 + 2 * i - 2 * l)?;
                }
                acc *= l_neg(l - m as i64 / 2, &chi_t_star(block)?)?;
            } else {
                for i in ((m as i64 + 1) / 2)..=3 {
                    acc *= zeta_at_nonpositive(1 + 2 * i - 2 * l)?;
                }
            }
            Ok(acc)
        }
    }
}

/// The closed-form kernel factor P(block)(U1, U2) of the (2, 4) pullback:
/// (k-l)! sum_{a+2b+2c=k-l} ((-1)^b 2^a / a!b!c!) (l+c-3/2)_{a+b+c}
///   |R V^t / 2|^a (|V A1 V^t| |A0|)^b det[[A0, R V^t/2],[V R^t/2, V A1 V^t]]^c |U|^{k-l},
/// where U is the 2x2 and V the 2x4 variable matrix.
pub fn p_closed_form(
    k: i64,
    l: i64,
    a0: &HalfIntegralMat,
    a1: &HalfIntegralMat,
    r: &[Vec<i64>],
) -> Result<MultiPoly> {
    if a0.size() != 2 || a1.size() != 4 {
        return Err(Error::Usage("closed form wants a 2x2 and a 4x4 block".into()));
    }
    let u = |i: usize, j: usize| MultiPoly::variable(crate::diffop::ql_u_entry(i, j));
    let v = |i: usize, j: usize| MultiPoly::variable(crate::diffop::ql_v_entry(i, j));
    // R V^t / 2: 2x2 with entries sum_j R_ij v_mj / 2
    let half = BigRat::new(1.into(), 2.into());
    let rv = |i: usize, m: usize| -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for j in 0..4 {
            acc = acc.add(&v(m, j + 1).scale(&BigRat::from_integer(r[i][j].into())));
        }
        acc.scale(&half)
    };
    // V A1 V^t: 2x2
    let va = |m: usize, mm: usize| -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for a in 0..4 {
            for b in 0..4 {
                let coeff = a1.entry(a, b);
                if coeff.is_zero() {
                    continue;
                }
                acc = acc.add(&v(m, a + 1).mul(&v(mm, b + 1)).scale(&coeff));
            }
        }
        acc
    };
    let det2 = |m: &dyn Fn(usize, usize) -> MultiPoly| -> MultiPoly {
        m(1, 1).mul(&m(2, 2)).sub(&m(1, 2).mul(&m(2, 1)))
    };
    let f_a = det2(&|i, j| rv(i - 1, j)); // |R V^t / 2|
    let f_b = det2(&|i, j| va(i, j)).scale(&a0.det()); // |V A1 V^t| |A0|
    // the 4x4 bordered determinant
    let border: Vec<Vec<MultiPoly>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    if i < 2 && j < 2 {
                        MultiPoly::constant(a0.entry(i, j))
                    } else if i < 2 {
                        rv(i, j - 1)
                    } else if j < 2 {
                        rv(j, i - 1)
                    } else {
                        va(i - 1, j - 1)
                    }
                })
                .collect()
        })
        .collect();
    let f_c = det4_poly(&border);
    let det_u = det2(&|i, j| u(i, j));
    let kl = (k - l) as u32;
    let mut acc = MultiPoly::zero();
    let lq = BigRat::from_integer(l.into()) - BigRat::new(3.into(), 2.into());
    for b in 0..=(kl / 2) {
        for c in 0..=(kl / 2 - b) {
            let a = kl - 2 * b - 2 * c;
            let mut coeff = BigRat::from_integer(BigInt::from(1) << a);
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
            // (l + c - 3/2)_{a+b+c}
            let mut poch = BigRat::one();
            for i in 0..(a + b + c) as i64 {
                poch *= &lq + BigRat::from_integer((c as i64 + i).into());
            }
            let term = f_a.pow(a).mul(&f_b.pow(b)).mul(&f_c.pow(c));
            acc = acc.add(&term.scale(&(coeff * poch)));
        }
    }
    let mut fact = BigInt::one();
    for i in 1..=(k - l) {
        fact *= BigInt::from(i);
    }
    Ok(acc.mul(&det_u.pow(kl)).scale(&BigRat::from_integer(fact)))
}

fn det4_poly(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let perms = permutations4();
    let mut acc = MultiPoly::zero();
    for (sigma, sign) in perms {
        let mut term = MultiPoly::constant(BigRat::from_integer(sign.into()));
        for (i, &s) in sigma.iter().enumerate() {
            term = term.mul(&m[i][s - 1]);
        }
        acc = acc.add(&term);
    }
    acc
}

fn permutations4() -> Vec<([usize; 4], i64)> {
    let mut out = Vec::with_capacity(24);
    let mut items = [1usize, 2, 3, 4];
    fn permute(items: &mut [usize; 4], start: usize, sign: i64, out: &mut Vec<([usize; 4], i64)>) {
        if start == 4 {
            out.push((*items, sign));
            return;
        }
        for i in start..4 {
            let s = if i == start { sign } else { -sign };
            items.swap(start, i);
            permute(items, start + 1, s, out);
            items.swap(start, i);
        }
    }
    permute(&mut items, 0, 1, &mut out);
    out
}

/// The degree-(2, 4) closed form: sum over R of
/// 2^[(r+1)/2] Z(A0, A1, R, l) P(block)(U1, U2) prod_p F_p^*(block, p^(l-r-1)),
/// with the product over p | det(2 T~) of the block.
pub fn epsilon_24_closedform(
    k: i64,
    l: i64,
    a0: &HalfIntegralMat,
    a1: &HalfIntegralMat,
) -> Result<EpsilonValue> {
    if a0.size() != 2 || a1.size() != 4 {
        return Err(Error::Usage("closed form wants a 2x2 and a 4x4 block".into()));
    }
    let mut acc = MultiPoly::zero();
    for r in enumerate_r(a0, a1)? {
        let block = HalfIntegralMat::block(a0, &r, a1)?;
        let (tilde, _) = nondegenerate_part(&block)?;
        let rank = tilde.size();
        let mut local = BigRat::one();
        if rank > 4 {
            return Err(Error::Capability(format!(
                "closed form hit a rank-{rank} block (needs fixtures)"
            )));
        }
        if rank > 0 {
            let det = tilde.det_twice();
            let det_u64 = u64::try_from(det.magnitude().clone())
                .map_err(|_| Error::Capability("det(2T~) exceeds u64".into()))?;
            for (p, _) in crate::exact::factorize(det_u64) {
                let x = power_rat(p, l - rank as i64 - 1);
                local *= fp_with_budget(&tilde, p, crate::siegel::DEFAULT_CLASS_BUDGET)?
                    .fp
                    .eval(&x);
            }
        }
        let z = z_case_factor(&block, rank, l)?;
        if z.is_zero() {
            continue;
        }
        let two_pow = BigRat::from_integer(BigInt::one() << ((rank + 1) / 2));
        let p_poly = p_closed_form(k, l, a0, a1, &r)?;
        acc = acc.add(&p_poly.scale(&(two_pow * z * local)));
    }
    Ok(EpsilonValue { k, l, n1: 2, n2: 4, value: acc })
}

fn power_rat(p: u64, e: i64) -> BigRat {
    if e >= 0 {
        BigRat::from_integer(BigInt::from(p).pow(e as u32))
    } else {
        BigRat::new(BigInt::one(), BigInt::from(p).pow((-e) as u32))
    }
}

// --- symbolic Hecke combinations ---------------------------------------------

/// A formal Z-linear combination of symbols eps(T', N) indexed by the
/// canonical binary class of T'.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeSymbolic {
    pub terms: BTreeMap<HalfIntegralMat, BigRat>,
}

impl HeckeSymbolic {
    fn single(t: HalfIntegralMat) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert(t.reduce_binary()?, BigRat::one());
        Ok(HeckeSymbolic { terms })
    }

    fn zero() -> Self {
        HeckeSymbolic { terms: BTreeMap::new() }
    }

    fn add_scaled(&mut self, other: &HeckeSymbolic, f: &BigRat) {
        for (t, c) in &other.terms {
            let entry = self.terms.entry(t.clone()).or_insert_with(BigRat::zero);
            *entry += c * f;
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Bind the symbols through a coefficient valuation.
    pub fn bind(&self, value_of: &dyn Fn(&HalfIntegralMat) -> Result<BigRat>) -> Result<BigRat> {
        let mut acc = BigRat::zero();
        for (t, c) in &self.terms {
            acc += c * value_of(t)?;
        }
        Ok(acc)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(t, c)| format!("{} * eps({}, N)", format_rat(c), t.to_json()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Expand eps(m, T, N) through the degree-two recursion
/// eps(m, T, N) = eps(m/p, pT, N) + p^(2k-3) eps(m/p, T/p, N)
///   + p^(k-2) sum_D eps(m/p, T[D]/p, N),
/// with non-half-integral indices dropped and p the smallest prime of m.
pub fn hecke_expand(m: u64, t: &HalfIntegralMat, k: i64) -> Result<HeckeSymbolic> {
    if t.size() != 2 {
        return Err(Error::Usage("degree-two expansion needs 2x2 indices".into()));
    }
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if m == 1 {
        return HeckeSymbolic::single(t.clone());
    }
    let p = crate::exact::factorize(m)[0].0;
    let rest = m / p;
    let mut out = HeckeSymbolic::zero();
    let one = BigRat::one();
    out.add_scaled(&hecke_expand(rest, &t.scale(p as i64), k)?, &one);
    if let Some(tp) = t.div_exact(p as i64) {
        let w = BigRat::from_integer(BigInt::from(p).pow((2 * k - 3) as u32));
        out.add_scaled(&hecke_expand(rest, &tp, k)?, &w);
    }
    let wk = BigRat::from_integer(BigInt::from(p).pow((k - 2) as u32));
    for d in crate::eisenstein::coset_reps_deg2(p) {
        let td = t.transform(&d)?;
        if let Some(tdp) = td.div_exact(p as i64) {
            out.add_scaled(&hecke_expand(rest, &tdp, k)?, &wk);
        }
    }
    Ok(out)
}

// --- determinant method --------------------------------------------------------

/// The bordered tableau of the determinant method: first column the
/// pullback values e_i, remaining columns the eigenvalue data of the
/// competing eigenforms.
#[derive(Debug, Clone)]
pub struct DetTableau {
    /// e_i, i = 1..d
    pub e: Vec<QuadFieldElem>,
    /// lambdas[i][j] = eigenvalue of form j+2 under the i-th operator
    pub lambdas: Vec<Vec<QuadFieldElem>>,
}

/// The bordered determinant | e_i  lambda_{j, m_i} |.
pub fn det_method(tableau: &DetTableau) -> Result<QuadFieldElem> {
    let d = tableau.e.len();
    if tableau.lambdas.len() != d || tableau.lambdas.iter().any(|r| r.len() != d - 1) {
        return Err(Error::Usage("tableau must be square".into()));
    }
    let mut m: Vec<Vec<QuadFieldElem>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        row.push(tableau.e[i].clone());
        row.extend(tableau.lambdas[i].iter().cloned());
        m.push(row);
    }
    Ok(det_quad(m))
}

// --- section-8 drivers ----------------------------------------------------------

/// The 4x4 index N shared by all three cases (2N on the wire).
pub fn index_n() -> HalfIntegralMat {
    HalfIntegralMat::from_twice(vec![
        vec![2, 1, 0, 1],
        vec![1, 2, 0, 0],
        vec![0, 0, 2, 1],
        vec![1, 0, 1, 2],
    ])
    .unwrap()
}

fn residue_mod(x: &BigRat, p: u64) -> Result<u64> {
    // x = a/b with p not dividing b: a b^{-1} mod p
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::Domain(format!("denominator divisible by {p}")));
    }
    let den_u = u64::try_from(&den).unwrap();
    let inv = mod_inv(den_u, p);
    let num_u = u64::try_from(&num).unwrap();
    Ok((num_u as u128 * inv as u128 % p as u128) as u64)
}

fn mod_inv(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        t -= q * new_t;
        std::mem::swap(&mut t, &mut new_t);
        r -= q * new_r;
        std::mem::swap(&mut r, &mut new_r);
    }
    t.rem_euclid(m as i128) as u64
}

/// Norm residue of a quadratic field element mod p.
fn norm_residue(x: &QuadFieldElem, p: u64) -> Result<u64> {
    residue_mod(&x.norm(), p)
}

/// Attempt to recompute the R-terms of the pullback sum whose blocks have
/// rank <= 4 within a small enumeration budget; returns (recomputed,
/// skipped-over-budget, rank5plus) counts for reporting.
pub fn rank_coverage(l: i64, t1: &HalfIntegralMat, t2: &HalfIntegralMat) -> Result<(usize, usize, usize)> {
    let spec = EisensteinSpec::new(t1.size() + t2.size(), l, true)?;
    let mut done = 0usize;
    let mut over_budget = 0usize;
    let mut high_rank = 0usize;
    for r in enumerate_r(t1, t2)? {
        let block = HalfIntegralMat::block(t1, &r, t2)?;
        if block.rank() > 4 {
            high_rank += 1;
            continue;
        }
        match eisenstein_coeff(&spec, &block) {
            Ok(_) => done += 1,
            Err(Error::Budget(_)) | Err(Error::Capability(_)) => over_budget += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((done, over_budget, high_rank))
}

/// Fixture-driven verification of the three worked congruence cases.
pub fn verify_section8(case: &str, store: &FixtureStore) -> Result<Report> {
    match case {
        "harder-10-4" => verify_10_4(store),
        "harder-14-4" => verify_14_4(store),
        "harder-4-24" => verify_4_24(store),
        other => Err(Error::Usage(format!(
            "unknown case {other:?} (expected harder-10-4, harder-14-4, harder-4-24)"
        ))),
    }
}

fn verify_10_4(store: &FixtureStore) -> Result<Report> {
    let mut report = Report::new("harder-10-4");
    // merged weight header
    let merged = atobe1_weight(10, 4, &[], 1)?;
    report.check("first-family weight merge of (10, 4)", "[12, 12, 6, 6]", format!("{merged:?}"));
    // the pullback value and its residue mod 41
    let eps = store.get_rat("eps_10_4_N1_N")?;
    report.note_backend(store.provenance("eps_10_4_N1_N").unwrap_or("?"));
    report.check("pullback value", "-20874555/28", format_rat(&eps));
    // the published display pairs this value with residue 10 mod 41, but
    // exact arithmetic on the published fraction gives 11; the congruence
    // argument only needs the residue to be nonzero
    let res = residue_mod(&eps, 41)?;
    report.check(
        "pullback value mod 41 (published display says 10; the printed fraction reduces to 11)",
        "11",
        res,
    );
    report.check_bool(
        &format!("pullback value nonzero mod 41 (residue {res})"),
        res != 0,
    );
    // rank coverage of the recomputable terms
    let (done, skipped, high) =
        rank_coverage(6, &HalfIntegralMat::diag(&[1, 1]), &index_n())?;
    report.check_bool(
        &format!("rank <= 4 term coverage: {done} recomputed, {skipped} over budget, {high} of rank >= 5 (fixture-backed)"),
        true,
    );
    Ok(report)
}

fn verify_14_4(store: &FixtureStore) -> Result<Report> {
    let mut report = Report::new("harder-14-4");
    let merged = atobe1_weight(14, 4, &[], 1)?;
    report.check("first-family weight merge of (14, 4)", "[16, 16, 6, 6]", format!("{merged:?}"));
    let n1 = HalfIntegralMat::diag(&[1, 1]);
    // eps(2, N1, N) = eps(2 N1, N) + 2^14 eps(N1, N)
    let e2_sym = hecke_expand(2, &n1, 16)?;
    let mut expected_sym = HeckeSymbolic::zero();
    expected_sym.terms.insert(n1.scale(2).reduce_binary()?, BigRat::one());
    expected_sym
        .terms
        .insert(n1.reduce_binary()?, BigRat::from_integer(BigInt::from(1) << 14));
    report.check(
        "Hecke expansion of eps(2, N1, N)",
        expected_sym.display(),
        e2_sym.display(),
    );
    // bind fixtures
    let eps_n1 = store.get_rat("eps_14_4_N1_N")?;
    let eps_2n1 = store.get_rat("eps_14_4_2N1_N")?;
    report.note_backend(store.provenance("eps_14_4_N1_N").unwrap_or("?"));
    report.check("eps(N1, N) fixture", "1744286277555/28672", format_rat(&eps_n1));
    report.check("eps(2N1, N) fixture", "309108562779375/112", format_rat(&eps_2n1));
    let bind = |t: &HalfIntegralMat| -> Result<BigRat> {
        if *t == n1.reduce_binary()? {
            Ok(eps_n1.clone())
        } else if *t == n1.scale(2).reduce_binary()? {
            Ok(eps_2n1.clone())
        } else {
            Err(Error::MissingFixture(format!("eps at {}", t.to_json())))
        }
    };
    let e1 = eps_n1.clone();
    let e2 = e2_sym.bind(&bind)?;
    // the competing eigenvalue column, recomputed end to end; the printed
    // alpha corresponds to the "+"-embedding column (the "-" column gives
    // its Galois conjugate with the same norm)
    let forms = eigenforms(30, 8)?;
    let plus = forms.iter().find(|f| f.label == "+").unwrap();
    let lam = lift_eigenvalue_tp(LiftKind::SaitoKurokawa, 16, 2, Some(plus.coeff(2)))?;
    report.check(
        "SK eigenvalue column at T(2)",
        "(53472+96*sqrt(51349))",
        lam.to_string(),
    );
    // bordered determinant
    let tableau = DetTableau {
        e: vec![QuadFieldElem::from_rat(&e1), QuadFieldElem::from_rat(&e2)],
        lambdas: vec![vec![QuadFieldElem::from_int(1)], vec![lam]],
    };
    let alpha = det_method(&tableau)?;
    let expect_alpha = QuadFieldElem::new(
        51349,
        BigInt::from(405) * BigInt::from(-1114174584071i64),
        BigInt::from(405) * BigInt::from(12920639093i64),
        896.into(),
    )?;
    report.check("alpha from the determinant method", expect_alpha.to_string(), alpha.to_string());
    report.check("Norm(alpha) mod 4289", "2206", norm_residue(&alpha, 4289)?);
    report.check("Norm(conj alpha) mod 4289", "2206", norm_residue(&alpha.conj(), 4289)?);
    let split = prime_split(4289, 51349)?;
    report.check_bool("4289 splits in the Hecke field", split == Splitting::Split);
    Ok(report)
}

fn verify_4_24(store: &FixtureStore) -> Result<Report> {
    let mut report = Report::new("harder-4-24");
    let merged = atobe1_weight(4, 24, &[], 1)?;
    // the printed header of this case is inconsistent (non-increasing
    // weights); the merge itself is scalar weight 16 in degree 4
    report.check(
        "first-family weight merge of (4, 24) (printed header differs)",
        "[16, 16, 16, 16]",
        format!("{merged:?}"),
    );
    let n1 = HalfIntegralMat::from_twice(vec![vec![2, 1], vec![1, 2]]).unwrap();
    let n2 = HalfIntegralMat::diag(&[1, 3]);
    let k = 16i64;
    // symbolic combinations e_1..e_4
    let combos: Vec<(u64, Vec<(HalfIntegralMat, BigRat)>)> = vec![
        (1, vec![(n1.clone(), BigRat::one())]),
        (2, vec![(n1.scale(2), BigRat::one())]),
        (
            3,
            vec![
                (n1.scale(3), BigRat::one()),
                (n1.clone(), BigRat::from_integer(BigInt::from(3).pow(14))),
            ],
        ),
        (
            4,
            vec![
                (n1.scale(4), BigRat::one()),
                (n1.clone(), BigRat::from_integer(BigInt::from(1) << 29)),
                (n2.clone(), BigRat::from_integer(BigInt::from(3) * (BigInt::from(1) << 14))),
            ],
        ),
    ];
    for (m, expect_terms) in &combos {
        let got = hecke_expand(*m, &n1, k)?;
        let mut expect = HeckeSymbolic::zero();
        for (t, c) in expect_terms {
            expect.terms.insert(t.reduce_binary()?, c.clone());
        }
        report.check(
            &format!("Hecke expansion of eps({m}, N1, N)"),
            expect.display(),
            got.display(),
        );
    }
    // fixture bindings: all five values consumed
    let keys = [
        ("eps_4_24_N1_N", n1.reduce_binary()?),
        ("eps_4_24_2N1_N", n1.scale(2).reduce_binary()?),
        ("eps_4_24_3N1_N", n1.scale(3).reduce_binary()?),
        ("eps_4_24_4N1_N", n1.scale(4).reduce_binary()?),
        ("eps_4_24_N2_N", n2.reduce_binary()?),
    ];
    let mut table: BTreeMap<HalfIntegralMat, BigRat> = BTreeMap::new();
    for (key, t) in &keys {
        table.insert(t.clone(), store.get_rat(key)?);
        report.note_backend(store.provenance(key).unwrap_or("?"));
    }
    let bind = |t: &HalfIntegralMat| -> Result<BigRat> {
        table
            .get(t)
            .cloned()
            .ok_or_else(|| Error::MissingFixture(format!("eps at {}", t.to_json())))
    };
    let e: Vec<BigRat> = combos
        .iter()
        .map(|(m, _)| hecke_expand(*m, &n1, k)?.bind(&bind))
        .collect::<Result<_>>()?;
    // eigenvalue columns, recomputed end to end (the "+" embedding, as in
    // the other case; the norm conclusion is conjugation-invariant)
    let forms = eigenforms(30, 10)?;
    let plus = forms.iter().find(|f| f.label == "+").unwrap();
    let phi16 = eigenforms(16, 10)?.into_iter().next().unwrap();
    report.check("a(2, phi_16)", "216", phi16.coeff(2).to_string());
    report.check("a(3, phi_16)", "-3348", phi16.coeff(3).to_string());
    let sk2 = lift_eigenvalue_tp(LiftKind::SaitoKurokawa, 16, 2, Some(plus.coeff(2)))?;
    let sk3 = lift_eigenvalue_tp(LiftKind::SaitoKurokawa, 16, 3, Some(plus.coeff(3)))?;
    let kl2 = lift_eigenvalue_tp(LiftKind::KlingenFromWeightK, 16, 2, Some(phi16.coeff(2)))?;
    let kl3 = lift_eigenvalue_tp(LiftKind::KlingenFromWeightK, 16, 3, Some(phi16.coeff(3)))?;
    let ei2 = lift_eigenvalue_tp(LiftKind::Eisenstein, 16, 2, None)?;
    let ei3 = lift_eigenvalue_tp(LiftKind::Eisenstein, 16, 3, None)?;
    report.check("Eisenstein eigenvalue at T(2)", "536920065", ei2.to_string());
    let tableau = DetTableau {
        e: e.iter().map(QuadFieldElem::from_rat).collect(),
        lambdas: vec![
            vec![
                QuadFieldElem::from_int(1),
                QuadFieldElem::from_int(1),
                QuadFieldElem::from_int(1),
            ],
            vec![sk2.clone(), kl2.clone(), ei2.clone()],
            vec![sk3, kl3, ei3],
            vec![&sk2 * &sk2, &kl2 * &kl2, &ei2 * &ei2],
        ],
    };
    let alpha = det_method(&tableau)?;
    let nres = norm_residue(&alpha, 97)?;
    report.check_bool(
        &format!("Norm(alpha) mod 97 = {nres} is nonzero"),
        nres != 0,
    );
    let split = prime_split(97, 51349)?;
    report.check_bool("97 splits in the Hecke field", split == Splitting::Split);
    // the eigenvalue incongruence table over 97
    let inc = incongruence_table(store)?;
    for a in &inc.assertions {
        report.assertions.push(a.clone());
        if a.status == crate::report::Status::Fail {
            report.status = crate::report::Status::Fail;
        }
    }
    for b in &inc.backends {
        report.note_backend(b);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_enumeration_examples() {
        let zero1 = HalfIntegralMat::zero(1);
        let rs = enumerate_r(&zero1, &zero1).unwrap();
        assert_eq!(rs, vec![vec![vec![0]]]);
        let one1 = HalfIntegralMat::diag(&[1]);
        let rs = enumerate_r(&one1, &one1).unwrap();
        let got: Vec<i64> = rs.iter().map(|r| r[0][0]).collect();
        assert_eq!(got, vec![-2, -1, 0, 1, 2]);
        // every output is psd-certified by construction; re-check
        for r in &rs {
            assert!(HalfIntegralMat::block(&one1, r, &one1).unwrap().is_psd());
        }
    }

    #[test]
    fn hecke_expansion_shapes() {
        let n1 = HalfIntegralMat::from_twice(vec![vec![2, 1], vec![1, 2]]).unwrap();
        // m = 2: a single symbol at 2 N1
        let e2 = hecke_expand(2, &n1, 16).unwrap();
        assert_eq!(e2.terms.len(), 1);
        let (t, c) = e2.terms.iter().next().unwrap();
        assert_eq!(t, &n1.scale(2).reduce_binary().unwrap());
        assert_eq!(c, &BigRat::one());
        // m = 3: eps(3N1) + 3^14 eps(N1)
        let e3 = hecke_expand(3, &n1, 16).unwrap();
        assert_eq!(e3.terms.len(), 2);
        assert_eq!(
            e3.terms.get(&n1.reduce_binary().unwrap()).unwrap(),
            &BigRat::from_integer(BigInt::from(3).pow(14))
        );
        // m = 4: eps(4N1) + 2^29 eps(N1) + 3*2^14 eps(N2)
        let e4 = hecke_expand(4, &n1, 16).unwrap();
        assert_eq!(e4.terms.len(), 3);
        let n2 = HalfIntegralMat::diag(&[1, 3]);
        assert_eq!(
            e4.terms.get(&n2.reduce_binary().unwrap()).unwrap(),
            &BigRat::from_integer(BigInt::from(3) * (BigInt::from(1) << 14))
        );
        assert_eq!(
            e4.terms.get(&n1.reduce_binary().unwrap()).unwrap(),
            &BigRat::from_integer(BigInt::from(1) << 29)
        );
    }

    #[test]
    fn det_method_degenerate_row() {
        // proportional rows give a zero determinant
        let one = QuadFieldElem::from_int(1);
        let two = QuadFieldElem::from_int(2);
        let tableau = DetTableau {
            e: vec![one.clone(), two.clone()],
            lambdas: vec![vec![one.clone()], vec![two.clone()]],
        };
        assert!(det_method(&tableau).unwrap().is_zero());
    }
}
