//! Fourier coefficients of (normalized) Siegel-Eisenstein series, the
//! Siegel Phi operator, and the degree-two Hecke T(p) action with
//! eigenvalue extraction.
//!
//! The coefficient of the normalized series at a psd index T of rank m is
//!
//!   a(T) = 2^[(m+1)/2] prod_{p | det(2 T~)} F_p^*(T, p^(k-m-1)) * tail(m),
//!
//! with tail(m) the zeta/L product depending on the parity of m, rank-0
//! convention a(0) = Z(n, k). The unnormalized series divides by Z(n, k).

use crate::error::{Error, Result};
use crate::exact::BigRat;
use crate::siegel::{chi_t_star, fp, nondegenerate_part, HalfIntegralMat};
use crate::special::{l_neg, z_norm, zeta_at_nonpositive};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Degree, weight and normalization of a Siegel-Eisenstein series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EisensteinSpec {
    pub degree: usize,
    pub weight: i64,
    /// true: the Z(n,k)-normalized series with rational coefficients.
    pub normalized: bool,
}

impl EisensteinSpec {
    pub fn new(degree: usize, weight: i64, normalized: bool) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Domain("degree must be positive".into()));
        }
        if weight % 2 != 0 {
            return Err(Error::Domain("weight must be even".into()));
        }
        // existence hypotheses: 2k >= n+1, excluding the two congruence
        // cases 2k = n+2 resp. n+3 with k = 2 mod 4
        let (n, k) = (degree as i64, weight);
        if 2 * k < n + 1 {
            return Err(Error::Domain(format!(
                "weight {k} too small for degree {n}"
            )));
        }
        if (2 * k == n + 2 || 2 * k == n + 3) && k.rem_euclid(4) == 2 {
            return Err(Error::Domain(format!(
                "excluded weight/degree congruence case (k = {k}, n = {n})"
            )));
        }
        Ok(EisensteinSpec { degree, weight, normalized })
    }
}

/// Fourier coefficient of the series described by `spec` at the psd index
/// T. Rank >= 5 local factors are a declared capability gap.
pub fn eisenstein_coeff(spec: &EisensteinSpec, t: &HalfIntegralMat) -> Result<BigRat> {
    if t.size() != spec.degree {
        return Err(Error::Usage(format!(
            "index has size {}, spec degree is {}",
            t.size(),
            spec.degree
        )));
    }
    if !t.is_psd() {
        return Err(Error::Domain("Fourier index must be psd".into()));
    }
    let mut a = eisenstein_coeff_normalized(spec.degree, spec.weight, t)?;
    if !spec.normalized {
        a /= z_norm(spec.degree as u64, spec.weight)?;
    }
    Ok(a)
}

fn eisenstein_coeff_normalized(n: usize, k: i64, t: &HalfIntegralMat) -> Result<BigRat> {
    let (tilde, _) = nondegenerate_part(t)?;
    let m = tilde.size();
    // local product over p | det(2 T~)
    let mut local = BigRat::one();
    if m > 0 {
        if m > 4 {
            return Err(Error::Capability(format!(
                "rank-{m} local factors are not implemented (fixture extension point)"
            )));
        }
        let det = tilde.det_twice();
        let det_u64 = u64::try_from(det.magnitude().clone())
            .map_err(|_| Error::Capability("det(2T~) exceeds u64".into()))?;
        for (p, _) in crate::exact::factorize(det_u64) {
            let x = BigRat::from_integer(BigInt::from(p).pow((k - m as i64 - 1) as u32));
            local *= fp(&tilde, p)?.fp.eval(&x);
        }
    }
    let two_pow = BigInt::one() << ((m + 1) / 2);
    // zeta/L tail by the parity of the rank
    let half_n = (n / 2) as i64;
    let tail = if m % 2 == 0 {
        let mut acc = BigRat::one();
        for i in (m as i64 / 2 + 1)..=half_n {
            acc *= zeta_at_nonpositive(1 + 2 * i - 2 * k)?;
        }
        let chi = chi_t_star(t)?;
        acc * l_neg(k - m as i64 / 2, &chi)?
    } else {
        let mut acc = BigRat::one();
        for i in ((m as i64 + 1) / 2)..=half_n {
            acc *= zeta_at_nonpositive(1 + 2 * i - 2 * k)?;
        }
        acc
    };
    Ok(BigRat::from_integer(two_pow) * local * tail)
}

/// A coefficient source for degree-n Fourier tables. Eisenstein series
/// compute on demand (with an internal cache); explicit tables serve tests
/// and the Phi operator of arbitrary data.
#[derive(Debug)]
pub enum CoeffTable {
    Eisenstein {
        spec: EisensteinSpec,
        cache: Mutex<HashMap<HalfIntegralMat, BigRat>>,
    },
    Explicit {
        degree: usize,
        weight: i64,
        map: HashMap<HalfIntegralMat, BigRat>,
    },
}

impl CoeffTable {
    pub fn eisenstein(spec: EisensteinSpec) -> Self {
        CoeffTable::Eisenstein { spec, cache: Mutex::new(HashMap::new()) }
    }

    pub fn explicit(degree: usize, weight: i64, map: HashMap<HalfIntegralMat, BigRat>) -> Self {
        CoeffTable::Explicit { degree, weight, map }
    }

    pub fn degree(&self) -> usize {
        match self {
            CoeffTable::Eisenstein { spec, .. } => spec.degree,
            CoeffTable::Explicit { degree, .. } => *degree,
        }
    }

    pub fn weight(&self) -> i64 {
        match self {
            CoeffTable::Eisenstein { spec, .. } => spec.weight,
            CoeffTable::Explicit { weight, .. } => *weight,
        }
    }

    pub fn coeff(&self, t: &HalfIntegralMat) -> Result<BigRat> {
        match self {
            CoeffTable::Eisenstein { spec, cache } => {
                if let Some(v) = cache.lock().unwrap().get(t) {
                    return Ok(v.clone());
                }
                let v = eisenstein_coeff(spec, t)?;
                cache.lock().unwrap().insert(t.clone(), v.clone());
                Ok(v)
            }
            CoeffTable::Explicit { map, .. } => Ok(map.get(t).cloned().unwrap_or_else(BigRat::zero)),
        }
    }
}

/// The Siegel Phi operator on coefficient tables: a(T, Phi F) = a(T _|_ 0, F).
pub struct PhiTable<'a> {
    inner: &'a CoeffTable,
}

pub fn phi_operator(table: &CoeffTable) -> Result<PhiTable<'_>> {
    if table.degree() == 0 {
        return Err(Error::Domain("Phi needs positive degree".into()));
    }
    Ok(PhiTable { inner: table })
}

impl PhiTable<'_> {
    pub fn degree(&self) -> usize {
        self.inner.degree() - 1
    }

    pub fn coeff(&self, t: &HalfIntegralMat) -> Result<BigRat> {
        if t.size() + 1 != self.inner.degree() {
            return Err(Error::Usage("Phi index size mismatch".into()));
        }
        let padded = t.direct_sum(&HalfIntegralMat::zero(1));
        self.inner.coeff(&padded)
    }
}

/// Coset representatives of GL_2(Z) U_p GL_2(Z) / GL_2(Z):
/// [[1,0],[j,p]] for 0 <= j < p, plus [[p,0],[0,1]].
pub fn coset_reps_deg2(p: u64) -> Vec<Vec<Vec<i64>>> {
    let mut reps: Vec<Vec<Vec<i64>>> = (0..p)
        .map(|j| vec![vec![1, 0], vec![j as i64, p as i64]])
        .collect();
    reps.push(vec![vec![p as i64, 0], vec![0, 1]]);
    reps
}

/// Coefficient of F | T(p) at the 2x2 index T:
/// a(pT) + p^(2k-3) a(T/p) + p^(k-2) sum_D a(T[D]/p), indices that are not
/// half-integral contributing zero.
pub fn hecke_tp_deg2(table: &CoeffTable, p: u64, t: &HalfIntegralMat) -> Result<BigRat> {
    if table.degree() != 2 || t.size() != 2 {
        return Err(Error::Usage("degree-2 Hecke action needs 2x2 data".into()));
    }
    let k = table.weight();
    let mut acc = table.coeff(&t.scale(p as i64))?;
    if let Some(tp) = t.div_exact(p as i64) {
        let w = BigRat::from_integer(BigInt::from(p).pow((2 * k - 3) as u32));
        acc += w * table.coeff(&tp)?;
    }
    let wk = BigRat::from_integer(BigInt::from(p).pow((k - 2) as u32));
    for d in coset_reps_deg2(p) {
        let td = t.transform(&d)?;
        if let Some(tdp) = td.div_exact(p as i64) {
            acc += &wk * table.coeff(&tdp)?;
        }
    }
    Ok(acc)
}

/// Extract the T(p) eigenvalue of the form behind `table` by probing at
/// several indices and insisting on agreement.
pub fn eigenvalue_extract(table: &CoeffTable, p: u64, probes: &[HalfIntegralMat]) -> Result<BigRat> {
    let mut seen: Option<BigRat> = None;
    let mut used = 0;
    for t in probes {
        let a = table.coeff(t)?;
        if a.is_zero() {
            continue;
        }
        let num = hecke_tp_deg2(table, p, t)?;
        let lambda = num / a;
        match &seen {
            None => seen = Some(lambda),
            Some(prev) => {
                if *prev != lambda {
                    return Err(Error::Assertion(format!(
                        "eigenvalue mismatch across probes: {} vs {}",
                        prev, lambda
                    )));
                }
            }
        }
        used += 1;
    }
    if used < 3 {
        return Err(Error::Usage(format!(
            "need at least 3 probes with nonzero coefficient, got {used}"
        )));
    }
    seen.ok_or_else(|| Error::Domain("zero table".into()))
}

/// Standard probe set: small positive definite binary forms.
pub fn default_probes() -> Vec<HalfIntegralMat> {
    vec![
        HalfIntegralMat::from_twice(vec![vec![2, 1], vec![1, 2]]).unwrap(),
        HalfIntegralMat::diag(&[1, 1]),
        HalfIntegralMat::diag(&[1, 2]),
        HalfIntegralMat::diag(&[1, 3]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rat;
    use crate::qexp::eisenstein_q;
    use crate::special::zeta_neg;

    #[test]
    fn rank_zero_is_z_norm() {
        for (n, k) in [(2usize, 12i64), (3, 12), (4, 16), (6, 16)] {
            let spec = EisensteinSpec::new(n, k, true).unwrap();
            let a0 = eisenstein_coeff(&spec, &HalfIntegralMat::zero(n)).unwrap();
            assert_eq!(a0, z_norm(n as u64, k).unwrap(), "n={n} k={k}");
        }
    }

    #[test]
    fn degree_one_matches_classical_series() {
        // a(t, E_{1,k}) = -(2k/B_k) sigma_{k-1}(t)
        for k in [12i64, 16] {
            let spec = EisensteinSpec::new(1, k, false).unwrap();
            let classical = eisenstein_q(k, 8).unwrap();
            for t in 0..=6i64 {
                let a = eisenstein_coeff(&spec, &HalfIntegralMat::diag(&[t])).unwrap();
                assert_eq!(
                    &a,
                    &classical.coeff(t as usize).as_rat().unwrap(),
                    "k={k} t={t}"
                );
            }
        }
    }

    #[test]
    fn degree_two_unimodular_class_invariance() {
        let spec = EisensteinSpec::new(2, 12, true).unwrap();
        let t = HalfIntegralMat::from_twice(vec![vec![2, 1], vec![1, 4]]).unwrap();
        for uni in [vec![vec![1, -1], vec![0, 1]], vec![vec![0, 1], vec![-1, 3]]] {
            let tu = t.transform(&uni).unwrap();
            assert_eq!(
                eisenstein_coeff(&spec, &t).unwrap(),
                eisenstein_coeff(&spec, &tu).unwrap()
            );
        }
    }

    #[test]
    fn phi_compatibility_degree2_to_1() {
        // a(T (+) 0, E_{2,k}) = a(T, E_{1,k}) for the unnormalized series
        for k in [12i64, 16] {
            let e2 = CoeffTable::eisenstein(EisensteinSpec::new(2, k, false).unwrap());
            let e1 = CoeffTable::eisenstein(EisensteinSpec::new(1, k, false).unwrap());
            let phi = phi_operator(&e2).unwrap();
            for t in 0..=6i64 {
                let idx = HalfIntegralMat::diag(&[t]);
                assert_eq!(phi.coeff(&idx).unwrap(), e1.coeff(&idx).unwrap(), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn phi_of_cuspidal_support_vanishes() {
        // a table supported on definite indices only maps to zero
        let mut map = HashMap::new();
        map.insert(HalfIntegralMat::diag(&[1, 1]), parse_rat("5").unwrap());
        let table = CoeffTable::explicit(2, 10, map);
        let phi = phi_operator(&table).unwrap();
        for t in 0..=3i64 {
            assert!(phi.coeff(&HalfIntegralMat::diag(&[t])).unwrap().is_zero());
        }
    }

    #[test]
    fn hecke_t0_branches() {
        // at T = 0: lambda-multiplier is 1 + p^(2k-3) + (p+1)p^(k-2)
        let k = 12i64;
        let table = CoeffTable::eisenstein(EisensteinSpec::new(2, k, true).unwrap());
        let zero = HalfIntegralMat::zero(2);
        let got = hecke_tp_deg2(&table, 2, &zero).unwrap();
        let a0 = table.coeff(&zero).unwrap();
        let p = BigInt::from(2);
        let factor = BigRat::from_integer(
            BigInt::one() + p.pow((2 * k - 3) as u32) + (p.clone() + 1) * p.pow((k - 2) as u32),
        );
        assert_eq!(got, factor * a0);
    }

    #[test]
    fn eisenstein_eigenvalue_weight_12() {
        // end to end: lambda_{E_{2,12}}(T(2)) = (1 + 2^10)(1 + 2^11)
        let table = CoeffTable::eisenstein(EisensteinSpec::new(2, 12, true).unwrap());
        let lambda = eigenvalue_extract(&table, 2, &default_probes()).unwrap();
        let expect = BigRat::from_integer(BigInt::from((1 + (1 << 10)) * (1 + (1 << 11)) as i64));
        assert_eq!(lambda, expect);
    }

    #[test]
    fn spec_hypotheses() {
        assert!(EisensteinSpec::new(2, 12, true).is_ok());
        assert!(EisensteinSpec::new(2, 1, true).is_err());
        assert!(EisensteinSpec::new(2, 0, true).is_err());
        // excluded case: 2k = n+2 with k = 2 mod 4: n = 10, k = 6
        assert!(EisensteinSpec::new(10, 6, true).is_err());
        assert!(EisensteinSpec::new(9, 6, true).is_err()); // 2k = n+3
        assert!(EisensteinSpec::new(8, 6, true).is_ok());
    }

    #[test]
    fn normalization_flag() {
        let spec_n = EisensteinSpec::new(2, 12, true).unwrap();
        let spec_u = EisensteinSpec::new(2, 12, false).unwrap();
        let t = HalfIntegralMat::diag(&[1, 0]);
        let a_n = eisenstein_coeff(&spec_n, &t).unwrap();
        let a_u = eisenstein_coeff(&spec_u, &t).unwrap();
        assert_eq!(a_n, a_u * z_norm(2, 12).unwrap());
        // by-hand value at rank 1: 2 * F_2((1), 2^10) * zeta(-21) = 2 zeta(-21)
        assert_eq!(a_n, parse_rat("2").unwrap() * zeta_neg(22).unwrap());
    }
}
