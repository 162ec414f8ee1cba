//! q-expansions of level-one elliptic modular forms: Eisenstein series,
//! echelonized cusp bases with integer coefficients, Hecke operators, and
//! eigenform splitting over at most quadratic Hecke fields.

use crate::error::{Error, Result};
use crate::exact::{squarefree_kernel, BigRat, QuadFieldElem};
use crate::special::bernoulli;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A q-expansion sum a(n) q^n, 0 <= n <= precision, with exact
/// coefficients in Q or a quadratic field.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    pub weight: i64,
    coeffs: Vec<QuadFieldElem>,
}

impl QExpansion {
    pub fn new(weight: i64, coeffs: Vec<QuadFieldElem>) -> Self {
        assert!(!coeffs.is_empty());
        QExpansion { weight, coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &QuadFieldElem {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[QuadFieldElem] {
        &self.coeffs
    }

    pub fn truncate(&self, prec: usize) -> QExpansion {
        assert!(prec <= self.precision(), "cannot extend precision by truncation");
        QExpansion::new(self.weight, self.coeffs[..=prec].to_vec())
    }

    pub fn add(&self, rhs: &QExpansion) -> QExpansion {
        assert_eq!(self.weight, rhs.weight);
        let prec = self.precision().min(rhs.precision());
        let coeffs = (0..=prec)
            .map(|n| &self.coeffs[n] + &rhs.coeffs[n])
            .collect();
        QExpansion::new(self.weight, coeffs)
    }

    pub fn scale(&self, f: &QuadFieldElem) -> QExpansion {
        QExpansion::new(self.weight, self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn mul(&self, rhs: &QExpansion) -> QExpansion {
        let prec = self.precision().min(rhs.precision());
        let zero = QuadFieldElem::from_int(0);
        let mut coeffs = vec![zero; prec + 1];
        for i in 0..=prec {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(prec - i) {
                let add = &self.coeffs[i] * &rhs.coeffs[j];
                coeffs[i + j] = &coeffs[i + j] + &add;
            }
        }
        QExpansion::new(self.weight + rhs.weight, coeffs)
    }

    pub fn pow(&self, e: u32, prec: usize) -> QExpansion {
        let mut acc = QExpansion::new(0, {
            let mut v = vec![QuadFieldElem::from_int(0); prec + 1];
            v[0] = QuadFieldElem::from_int(1);
            v
        });
        for _ in 0..e {
            acc = acc.mul(&self.truncate(prec));
        }
        acc
    }
}

fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            s += BigInt::from(d).pow(k);
        }
    }
    s
}

/// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
pub fn eisenstein_q(k: i64, prec: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::Domain(format!("E_k needs even k >= 4, got {k}")));
    }
    let factor = -BigRat::from_integer(BigInt::from(2 * k)) / bernoulli(k as u64);
    let mut coeffs = vec![QuadFieldElem::from_int(1)];
    for n in 1..=prec {
        let a = &factor * BigRat::from_integer(sigma(k as u32 - 1, n as u64));
        coeffs.push(QuadFieldElem::from_rat(&a));
    }
    Ok(QExpansion::new(k, coeffs))
}

/// The discriminant cusp form as (E4^3 - E6^2)/1728.
pub fn delta_q(prec: usize) -> QExpansion {
    let e4 = eisenstein_q(4, prec).unwrap();
    let e6 = eisenstein_q(6, prec).unwrap();
    let diff = e4.pow(3, prec).add(&e6.mul(&e6).scale(&QuadFieldElem::from_int(-1)));
    diff.scale(&QuadFieldElem::from_rat(&BigRat::new(1.into(), 1728.into())))
}

pub fn dim_cusp_forms(k: i64) -> usize {
    if k < 12 || k % 2 != 0 {
        return 0;
    }
    let m = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
    (m - 1) as usize
}

/// Echelonized basis of S_k(SL2(Z)): f_j has a(i, f_j) = delta_ij for
/// 1 <= i, j <= dim, with integer coefficients (Victor Miller style).
pub fn cusp_basis(k: i64, prec: usize) -> Result<Vec<QExpansion>> {
    if k % 2 != 0 || k < 0 {
        return Err(Error::Domain(format!("cusp basis needs even k >= 0, got {k}")));
    }
    let dim = dim_cusp_forms(k);
    if dim == 0 {
        return Ok(vec![]);
    }
    if prec < dim + 1 {
        return Err(Error::Usage(format!(
            "precision {prec} too small for dim {dim} (need at least dim+1)"
        )));
    }
    let e4 = eisenstein_q(4, prec).unwrap();
    let e6 = eisenstein_q(6, prec).unwrap();
    let delta = delta_q(prec);
    let mut raw: Vec<QExpansion> = Vec::with_capacity(dim);
    for j in 1..=dim as i64 {
        let w = k - 12 * j;
        let (a, b) = match w.rem_euclid(4) {
            0 => (w / 4, 0),
            2 => ((w - 6) / 4, 1),
            _ => unreachable!("w is even"),
        };
        if a < 0 {
            return Err(Error::Domain(format!("no monomial of weight {w}")));
        }
        let mut f = delta.pow(j as u32, prec);
        f.weight = k;
        if a > 0 {
            f = f.mul(&e4.pow(a as u32, prec));
        }
        if b > 0 {
            f = f.mul(&e6);
        }
        f.weight = k;
        raw.push(f);
    }
    // echelonize on coefficients 1..dim
    for j in 0..dim {
        let pivot = raw[j].coeff(j + 1).clone();
        let inv = pivot.inv().map_err(|_| Error::Domain("echelon pivot vanished".into()))?;
        let normalized = raw[j].scale(&inv);
        raw[j] = normalized;
        for i in 0..dim {
            if i != j {
                let f = raw[i].coeff(j + 1).clone();
                if !f.is_zero() {
                    let sub = raw[j].scale(&(-&f));
                    let updated = raw[i].add(&sub);
                    raw[i] = updated;
                }
            }
        }
    }
    Ok(raw)
}

/// Degree-one Hecke operator: a(n, f|T(m)) = sum_{d | gcd(m,n)} d^(k-1)
/// a(mn/d^2, f). Output precision is floor(prec(f)/m).
pub fn hecke_t_deg1(m: u64, f: &QExpansion) -> Result<QExpansion> {
    if m == 0 {
        return Err(Error::Domain("T(0) undefined".into()));
    }
    let out_prec = f.precision() / m as usize;
    if out_prec == 0 {
        return Err(Error::Usage(format!(
            "precision {} too small for T({m})",
            f.precision()
        )));
    }
    let k = f.weight;
    let mut coeffs = Vec::with_capacity(out_prec + 1);
    for n in 0..=out_prec as u64 {
        let mut acc = QuadFieldElem::from_int(0);
        for d in 1..=m {
            // d runs over divisors of gcd(m, n), with gcd(m, 0) = m
            if m % d != 0 || (n > 0 && n % d != 0) {
                continue;
            }
            let dk = BigRat::from_integer(BigInt::from(d).pow(k as u32 - 1));
            let idx = (m * n / (d * d)) as usize;
            acc = &acc + &f.coeff(idx).scale(&dk);
        }
        coeffs.push(acc);
    }
    Ok(QExpansion::new(k, coeffs))
}

/// A normalized Hecke eigenform with exact coefficients in Q(sqrt(D)).
#[derive(Debug, Clone)]
pub struct PrimitiveForm {
    pub weight: i64,
    /// 1 for rational eigenforms, else the squarefree Hecke field radicand.
    pub hecke_field_d: i64,
    pub eigen_coeffs: QExpansion,
    /// "+" or "-" per the a(2) = a +- b sqrt(D), b > 0 convention.
    pub label: &'static str,
}

impl PrimitiveForm {
    pub fn coeff(&self, n: usize) -> &QuadFieldElem {
        self.eigen_coeffs.coeff(n)
    }

    /// The Galois-conjugate eigenform.
    pub fn conjugate(&self) -> PrimitiveForm {
        let coeffs = self
            .eigen_coeffs
            .coeffs()
            .iter()
            .map(|c| c.conj())
            .collect();
        PrimitiveForm {
            weight: self.weight,
            hecke_field_d: self.hecke_field_d,
            eigen_coeffs: QExpansion::new(self.weight, coeffs),
            label: if self.label == "+" { "-" } else { "+" },
        }
    }
}

/// All primitive forms of weight k, for dim S_k <= 2 (splitting happens in
/// at most a quadratic extension). The "+" form is listed first.
pub fn eigenforms(k: i64, prec: usize) -> Result<Vec<PrimitiveForm>> {
    let dim = dim_cusp_forms(k);
    match dim {
        0 => Ok(vec![]),
        1 => {
            let basis = cusp_basis(k, prec.max(3))?;
            Ok(vec![PrimitiveForm {
                weight: k,
                hecke_field_d: 1,
                eigen_coeffs: basis.into_iter().next().unwrap(),
                label: "+",
            }])
        }
        2 => {
            // need a(n, f_j | T(2)) for n <= dim: precision 2*(dim+...)
            let work_prec = (2 * prec.max(3)).max(6);
            let basis = cusp_basis(k, work_prec)?;
            let t2: Vec<QExpansion> = basis
                .iter()
                .map(hecke_t2)
                .collect::<Result<_>>()?;
            // matrix entries alpha_ij = a_i(f_j | T2), i, j in {1, 2}
            let a = |i: usize, j: usize| t2[j].coeff(i).as_rat().expect("rational basis");
            let trace = a(1, 0) + a(2, 1);
            let det = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
            let disc = &trace * &trace - BigRat::from_integer(4.into()) * det;
            // lambda = (trace +- sqrt(disc))/2 in Q(sqrt(kernel))
            let num = disc.numer() * disc.denom();
            let num_i64: i64 = i64::try_from(&num).map_err(|_| {
                Error::Capability("Hecke discriminant exceeds word size".into())
            })?;
            if num_i64 <= 0 {
                return Err(Error::Domain("T(2) discriminant not positive".into()));
            }
            let (d_kernel, root) = squarefree_kernel(num_i64)?;
            let sqrt_disc = QuadFieldElem::sqrt_d(d_kernel)?
                .scale(&BigRat::new(root.into(), disc.denom().clone()));
            let half = BigRat::new(1.into(), 2.into());
            let lam_plus = (&QuadFieldElem::from_rat(&trace) + &sqrt_disc).scale(&half);
            let mut forms = Vec::new();
            for lam in [lam_plus.clone(), lam_plus.conj()] {
                // eigenform g = f1 + c f2 with c fixed by the T2 action:
                // a2(g|T2) = lam * c and a2(g|T2) = a(2,f1|T2) + c a(2,f2|T2)
                let denom = &QuadFieldElem::from_rat(&a(1, 1));
                let c = if denom.is_zero() {
                    // T2 triangular on this basis; fall back to the a2 row
                    let d22 = &lam - &QuadFieldElem::from_rat(&a(2, 1));
                    &QuadFieldElem::from_rat(&a(2, 0)) / &d22
                } else {
                    &(&lam - &QuadFieldElem::from_rat(&a(1, 0))) / denom
                };
                let coeffs: Vec<QuadFieldElem> = (0..=prec.max(3))
                    .map(|n| &(basis[1].coeff(n) * &c) + basis[0].coeff(n))
                    .collect();
                let g = QExpansion::new(k, coeffs);
                let label = if g.coeff(2).quad_part().is_positive() { "+" } else { "-" };
                forms.push(PrimitiveForm {
                    weight: k,
                    hecke_field_d: d_kernel,
                    eigen_coeffs: g,
                    label,
                });
            }
            forms.sort_by_key(|f| f.label != "+");
            Ok(forms)
        }
        d => Err(Error::Capability(format!(
            "dim S_{k} = {d} > 2: only quadratic Hecke fields are implemented"
        ))),
    }
}

fn hecke_t2(f: &QExpansion) -> Result<QExpansion> {
    hecke_t_deg1(2, f)
}
