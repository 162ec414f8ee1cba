//! Completed L-functions of level-one eigenforms at integer points in the
//! critical strip, exact recognition of period-free critical-value ratios,
//! and the prime-divisibility scan behind the congruence conjectures.
//!
//! Lambda(s, f) = (2 pi)^(-s) Gamma(s) L(s, f) is evaluated by the
//! incomplete-gamma split
//!
//!   Lambda(s) = sum_n a(n) [ (2 pi n)^(-s)  Gamma(s,   2 pi n)
//!                + (-1)^(k/2) (2 pi n)^(s-k) Gamma(k-s, 2 pi n) ],
//!
//! with Gamma(s, x) = (s-1)! e^(-x) sum_{i<s} x^i/i! exact at integer s.
//! Same-parity ratios Lambda(l1)/Lambda(l2) eliminate the period and are
//! recognized exactly in the Hecke field.

use crate::bigfloat::Bf;
use crate::error::{Error, Result};
use crate::exact::{
    ord_frkp, prime_split, rational_reconstruct, BigRat, PrimeIdealSpec, QuadFieldElem, Splitting,
};
use crate::qexp::{eigenforms, PrimitiveForm};
use num_bigint::BigInt;
use num_traits::Zero;

/// Guard bits carried beyond the requested precision.
const GUARD_BITS: u32 = 96;

/// One archimedean evaluation of the completed L-function.
#[derive(Debug, Clone)]
pub struct CompletedL {
    pub s: i64,
    pub value: Bf,
    pub prec_bits: u32,
}

/// Exact same-parity critical ratio Lambda(l1)/Lambda(l2) in the Hecke
/// field of the form.
#[derive(Debug, Clone)]
pub struct CriticalRatio {
    pub l1: i64,
    pub l2: i64,
    pub value: QuadFieldElem,
}

/// Embed a quadratic field element using the given sign of sqrt(D).
fn embed(x: &QuadFieldElem, sqrt_d: &Bf, positive: bool) -> Bf {
    let fb = sqrt_d.frac_bits();
    let rat = Bf::from_rat(&x.rat_part(), fb);
    let quad = Bf::from_rat(&x.quad_part(), fb).mul(sqrt_d);
    if positive {
        rat.add(&quad)
    } else {
        rat.sub(&quad)
    }
}

/// Gamma(s, x) for integer s >= 1: (s-1)! e^(-x) sum_{i<s} x^i / i!.
fn incomplete_gamma(s: u32, x: &Bf, exp_neg_x: &Bf) -> Bf {
    assert!(s >= 1);
    let fb = x.frac_bits();
    let mut term = Bf::from_int(1, fb);
    let mut sum = Bf::from_int(1, fb);
    let mut fact = BigRat::from_integer(1.into());
    for i in 1..s {
        term = term.mul(x).div_int(i as i64);
        sum = sum.add(&term);
        fact *= BigRat::from_integer(BigInt::from(i));
    }
    sum.mul(exp_neg_x).mul(&Bf::from_rat(&fact, fb))
}

/// Number of q-expansion terms needed so the tail is below 2^-(bits).
/// Uses |a(n)| <= n^((k+1)/2) (Deligne with d(n) <= n) and
/// Gamma(s, x) <= s x^(s-1) e^(-x) for x >= s.
pub fn terms_needed(k: i64, bits: u32) -> usize {
    let kf = k as f64;
    let target = -((bits as f64) + 8.0) * std::f64::consts::LN_2;
    let mut n = 2usize;
    loop {
        let nf = n as f64;
        let log_term =
            (2.0 * kf).ln() + 0.5 * (kf + 1.0) * nf.ln() - 2.0 * std::f64::consts::PI * nf;
        if log_term < target {
            return n;
        }
        n += 1;
    }
}

/// Lambda(s, f) for one real embedding of the coefficients.
pub fn lambda_complete(
    form: &PrimitiveForm,
    positive_embedding: bool,
    s: i64,
    prec_bits: u32,
) -> Result<CompletedL> {
    let k = form.weight;
    if s <= 0 || s >= k {
        return Err(Error::Domain(format!(
            "s = {s} outside the critical strip of weight {k}"
        )));
    }
    let fb = prec_bits + GUARD_BITS;
    let n_terms = terms_needed(k, prec_bits + 16);
    if form.eigen_coeffs.precision() < n_terms {
        return Err(Error::Usage(format!(
            "need {n_terms} coefficients, form carries {}",
            form.eigen_coeffs.precision()
        )));
    }
    let sqrt_d = if form.hecke_field_d == 1 {
        Bf::from_int(0, fb)
    } else {
        Bf::from_int(form.hecke_field_d, fb).sqrt()
    };
    let two_pi = Bf::pi(fb).mul_int(2);
    let exp_neg_2pi = two_pi.exp_neg();
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };

    let mut acc = Bf::zero(fb);
    let mut exp_neg = Bf::from_int(1, fb);
    for n in 1..=n_terms {
        exp_neg = exp_neg.mul(&exp_neg_2pi); // e^(-2 pi n)
        let a_n = embed(form.coeff(n), &sqrt_d, positive_embedding);
        if a_n.below_2pow(fb as i64) {
            continue;
        }
        let x = two_pi.mul_int(n as i64);
        let g1 = incomplete_gamma(s as u32, &x, &exp_neg);
        let g2 = incomplete_gamma((k - s) as u32, &x, &exp_neg);
        let xs = x.powi(s as u32);
        let xks = x.powi((k - s) as u32);
        // (2 pi n)^(-s) Gamma(s, x) + sign * (2 pi n)^(s-k) Gamma(k-s, x)
        let mut term = g1.div(&xs);
        let second = g2.div(&xks);
        term = if sign > 0 { term.add(&second) } else { term.sub(&second) };
        acc = acc.add(&a_n.mul(&term));
    }
    Ok(CompletedL { s, value: acc, prec_bits })
}

/// Exact recognition of Lambda(l1)/Lambda(l2) in the Hecke field: both
/// conjugate embeddings are evaluated, trace and sqrt-coordinate are
/// reconstructed rationally, and the result is validated by re-embedding.
/// Working precision starts at 128 bits and doubles on failure up to 1024.
pub fn critical_ratio(form: &PrimitiveForm, l1: i64, l2: i64) -> Result<CriticalRatio> {
    critical_ratio_from(form, l1, l2, 128)
}

/// Same ladder with an explicit starting precision.
pub fn critical_ratio_from(
    form: &PrimitiveForm,
    l1: i64,
    l2: i64,
    start_prec: u32,
) -> Result<CriticalRatio> {
    if (l1 - l2) % 2 != 0 {
        return Err(Error::Domain(format!("{l1} and {l2} have different parity")));
    }
    let k = form.weight;
    for l in [l1, l2] {
        if l <= 0 || l >= k {
            return Err(Error::Domain(format!("{l} is not critical for weight {k}")));
        }
    }
    let mut prec: u32 = start_prec;
    let mut last_err = None;
    while prec <= 1024 {
        match critical_ratio_at(form, l1, l2, prec) {
            Ok(r) => return Ok(r),
            Err(e @ Error::Reconstruction(_)) => {
                last_err = Some(e);
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Budget("precision ladder exhausted".into())))
}

fn height_bound(prec: u32) -> BigInt {
    // H = 10^30 at 128 bits, raised with precision
    BigInt::from(10u32).pow(30 * (prec / 128).max(1))
}

fn critical_ratio_at(form: &PrimitiveForm, l1: i64, l2: i64, prec: u32) -> Result<CriticalRatio> {
    if l1 == l2 {
        return Ok(CriticalRatio { l1, l2, value: QuadFieldElem::from_int(1) });
    }
    let h = height_bound(prec);
    let err_bits = prec - 24;
    let ratio_embedded = |positive: bool| -> Result<Bf> {
        let num = lambda_complete(form, positive, l1, prec)?.value;
        let den = lambda_complete(form, positive, l2, prec)?.value;
        if den.below_2pow(prec as i64 / 2) {
            return Err(Error::Domain("denominator L-value vanishes to precision".into()));
        }
        Ok(num.div(&den))
    };
    let value = if form.hecke_field_d == 1 {
        let ratio = ratio_embedded(true)?.to_rat();
        let (rec, _) = rational_reconstruct(&ratio, &h, err_bits)?;
        QuadFieldElem::from_rat(&rec)
    } else {
        let ratio_plus = ratio_embedded(true)?;
        let ratio_minus = ratio_embedded(false)?;
        let fb = ratio_plus.frac_bits();
        let sqrt_d = Bf::from_int(form.hecke_field_d, fb).sqrt();
        // ratio = x + y sqrt(D): x = (r+ + r-)/2, y = (r+ - r-)/(2 sqrt D)
        let x_approx = ratio_plus.add(&ratio_minus).div_int(2).to_rat();
        let y_approx = ratio_plus.sub(&ratio_minus).div(&sqrt_d).div_int(2).to_rat();
        let (x, _) = rational_reconstruct(&x_approx, &h, err_bits)?;
        let (y, _) = rational_reconstruct(&y_approx, &h, err_bits)?;
        let value =
            &QuadFieldElem::from_rat(&x) + &QuadFieldElem::sqrt_d(form.hecke_field_d)?.scale(&y);
        // validate by re-embedding
        let re = embed(&value, &sqrt_d, true);
        if !re.sub(&ratio_plus).below_2pow(err_bits as i64 - 8) {
            return Err(Error::Reconstruction("re-embedding check failed".into()));
        }
        value
    };
    Ok(CriticalRatio { l1, l2, value })
}

/// One qualifying prime from the divisibility scan.
#[derive(Debug, Clone)]
pub struct ScanHit {
    pub p: u64,
    pub splitting: Splitting,
    /// label of the eigenform whose ratio p divides
    pub form_label: String,
    pub ord: i64,
}

/// k_j = k + j/2 or k + j/2 + 1 according as j = 0 or 2 mod 4.
pub fn harder_denominator_point(k: i64, j: i64) -> i64 {
    if j % 4 == 0 {
        k + j / 2
    } else {
        k + j / 2 + 1
    }
}

/// Scan primes 2k+j-2 < p <= p_max for prime ideals dividing the ratio
/// Lambda(k+j)/Lambda(k_j) of some eigenform of weight 2k+j-2.
pub fn harder_prime_scan(k: i64, j: i64, p_max: u64) -> Result<Vec<ScanHit>> {
    if j % 2 != 0 {
        return Err(Error::Domain("j must be even".into()));
    }
    let weight = 2 * k + j - 2;
    let l1 = k + j;
    let l2 = harder_denominator_point(k, j);
    let n_coeffs = terms_needed(weight, 1024 + 16);
    let forms = eigenforms(weight, n_coeffs)?;
    let mut hits: Vec<ScanHit> = Vec::new();
    for form in &forms {
        if form.label == "-" {
            continue; // the conjugate embedding is already covered below
        }
        let ratio = critical_ratio(form, l1, l2)?.value;
        for p in (weight as u64 + 1)..=p_max {
            if !crate::exact::is_prime(p) {
                continue;
            }
            let (ord, splitting) = max_ord_above(&ratio, p, form.hecke_field_d)?;
            if ord > 0 {
                hits.push(ScanHit {
                    p,
                    splitting,
                    form_label: format!("weight {weight} form {}", form.label),
                    ord,
                });
            }
        }
    }
    hits.sort_by_key(|h| h.p);
    hits.dedup_by_key(|h| h.p);
    Ok(hits)
}

/// Largest valuation of x at the primes above p (norm-based for inert p).
pub fn max_ord_above(x: &QuadFieldElem, p: u64, field_d: i64) -> Result<(i64, Splitting)> {
    if x.is_rational() || field_d == 1 {
        let r = x.as_rat().ok_or_else(|| Error::Domain("expected rational".into()))?;
        return Ok((ord_p_rat(&r, p), Splitting::Split));
    }
    let splitting = prime_split(p, field_d)?;
    match splitting {
        Splitting::Inert => {
            let n = x.norm();
            Ok((ord_p_rat(&n, p) / 2, splitting))
        }
        _ => {
            let mut spec = PrimeIdealSpec::new(p, field_d, 16)?;
            let mut best = ord_frkp(x, &mut spec)?;
            if splitting == Splitting::Split {
                let mut conj = spec.conjugate();
                best = best.max(ord_frkp(x, &mut conj)?);
            }
            Ok((best, splitting))
        }
    }
}

/// p-adic valuation of a rational number.
pub fn ord_p_rat(r: &BigRat, p: u64) -> i64 {
    if r.is_zero() {
        return i64::MAX;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = r.numer().clone();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = r.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn phi22() -> PrimitiveForm {
        let n = terms_needed(22, 160);
        eigenforms(22, n).unwrap().into_iter().next().unwrap()
    }

    #[test]
    fn functional_equation_residual() {
        let f = phi22();
        // k/2 = 11 odd: Lambda(s) = -Lambda(k-s); s = 9 vs 13
        let a = lambda_complete(&f, true, 9, 128).unwrap().value;
        let b = lambda_complete(&f, true, 13, 128).unwrap().value;
        assert!(a.add(&b).below_2pow(120), "residual too large");
    }

    #[test]
    fn doubling_precision_is_consistent() {
        let n = terms_needed(22, 256 + 16);
        let f = eigenforms(22, n).unwrap().into_iter().next().unwrap();
        let a = lambda_complete(&f, true, 14, 128).unwrap().value;
        let b = lambda_complete(&f, true, 14, 256).unwrap().value;
        let diff = a.to_rat() - b.to_rat();
        assert!(diff.abs() < BigRat::new(1.into(), BigInt::from(1) << 120));
    }

    #[test]
    fn central_positivity_weight_12() {
        let n = terms_needed(12, 144);
        let delta = eigenforms(12, n).unwrap().into_iter().next().unwrap();
        // (-1)^(k/2) = +1: Lambda(11) > 0 off-center
        let v = lambda_complete(&delta, true, 11, 128).unwrap().value;
        assert!(!v.is_negative() && !v.below_2pow(64));
    }

    #[test]
    fn conjugate_coherence_weight_30() {
        // the ratio of the "-" form is the sqrt-conjugate of the "+" one
        let n = terms_needed(30, 144);
        let forms = eigenforms(30, n).unwrap();
        let plus = forms.iter().find(|f| f.label == "+").unwrap();
        let minus = forms.iter().find(|f| f.label == "-").unwrap();
        let rp = critical_ratio(plus, 18, 16).unwrap().value;
        let rm = critical_ratio(minus, 18, 16).unwrap().value;
        assert_eq!(rp.conj(), rm);
    }

    #[test]
    fn ratio_idempotence_and_known_divisor() {
        let f = phi22();
        let r = critical_ratio(&f, 14, 12).unwrap().value;
        let q = r.as_rat().expect("rational Hecke field");
        // the numerator prime that drives the (10,4) case
        assert!(ord_p_rat(&q, 41) >= 1, "41 should divide the (14,12) ratio");
        // trivial ratio
        let one = critical_ratio(&f, 12, 12).unwrap().value;
        assert_eq!(one, QuadFieldElem::from_int(1));
        // parity guard
        assert!(critical_ratio(&f, 14, 13).is_err());
    }
}
