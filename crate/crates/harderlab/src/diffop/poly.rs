//! Sparse multivariate polynomials over the rationals with interned
//! variable names. Monomials are kept in a canonical sorted order and zero
//! coefficients are never stored, so equality is structural.

use crate::exact::BigRat;
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

static INTERN: OnceLock<Mutex<Vec<String>>> = OnceLock::new();

/// Intern a variable name, returning its id.
pub fn var(name: &str) -> u32 {
    let table = INTERN.get_or_init(|| Mutex::new(Vec::new()));
    let mut t = table.lock().unwrap();
    if let Some(i) = t.iter().position(|s| s == name) {
        return i as u32;
    }
    t.push(name.to_string());
    (t.len() - 1) as u32
}

pub fn var_name(id: u32) -> String {
    INTERN.get_or_init(|| Mutex::new(Vec::new())).lock().unwrap()[id as usize].clone()
}

/// Sorted (variable, exponent) pairs; the empty monomial is 1.
pub type Monomial = Vec<(u32, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Monomial::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: BigRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(), c);
        }
        MultiPoly { terms }
    }

    pub fn one() -> Self {
        MultiPoly::constant(BigRat::one())
    }

    pub fn from_int(n: i64) -> Self {
        MultiPoly::constant(BigRat::from_integer(n.into()))
    }

    pub fn variable(id: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(id, 1)], BigRat::one());
        MultiPoly { terms }
    }

    pub fn named(name: &str) -> Self {
        MultiPoly::variable(var(name))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: BigRat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        MultiPoly { terms }
    }

    pub fn scale(&self, f: &BigRat) -> MultiPoly {
        if f.is_zero() {
            return MultiPoly::zero();
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * f)).collect();
        MultiPoly { terms }
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute each listed variable by a polynomial; unlisted variables
    /// stay.
    pub fn substitute(&self, map: &BTreeMap<u32, MultiPoly>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, coeff) in &self.terms {
            let mut term = MultiPoly::constant(coeff.clone());
            for &(v, e) in mono {
                match map.get(&v) {
                    Some(rep) => term = term.mul(&rep.pow(e)),
                    None => term = term.mul(&MultiPoly::variable(v).pow(e)),
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, v: u32) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (mono, coeff) in &self.terms {
            if let Some(pos) = mono.iter().position(|&(mv, _)| mv == v) {
                let e = mono[pos].1;
                let mut m = mono.clone();
                if e == 1 {
                    m.remove(pos);
                } else {
                    m[pos].1 -= 1;
                }
                out.add_term(m, coeff * BigRat::from_integer(e.into()));
            }
        }
        out
    }

    /// Total degree in the given set of variables.
    pub fn degree_in(&self, vars: &[u32]) -> u32 {
        self.terms
            .keys()
            .map(|m| {
                m.iter()
                    .filter(|(v, _)| vars.contains(v))
                    .map(|&(_, e)| e)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Group terms by their sub-monomial in `vars`: returns pairs of
    /// (monomial restricted to vars, polynomial in the remaining vars).
    pub fn coefficients_in(&self, vars: &[u32]) -> BTreeMap<Monomial, MultiPoly> {
        let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (mono, coeff) in &self.terms {
            let (inside, outside): (Monomial, Monomial) =
                mono.iter().partition(|(v, _)| vars.contains(v));
            out.entry(inside)
                .or_default()
                .add_term(outside, coeff.clone());
        }
        out
    }

    /// Evaluate with every variable bound to a rational.
    pub fn eval(&self, values: &BTreeMap<u32, BigRat>) -> BigRat {
        let mut acc = BigRat::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for &(v, e) in mono {
                let x = values
                    .get(&v)
                    .unwrap_or_else(|| panic!("unbound variable {}", var_name(v)));
                term *= x.pow(e as i32);
            }
            acc += term;
        }
        acc
    }

    pub fn constant_term(&self) -> BigRat {
        self.terms.get(&Monomial::new()).cloned().unwrap_or_else(BigRat::zero)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            let s = crate::exact::format_rat(coeff);
            let (sign, mag) = match s.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", s),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                let vars: Vec<String> = mono
                    .iter()
                    .map(|&(v, e)| {
                        if e == 1 {
                            var_name(v)
                        } else {
                            format!("{}^{}", var_name(v), e)
                        }
                    })
                    .collect();
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_smoke() {
        let x = MultiPoly::named("x");
        let y = MultiPoly::named("y");
        let p = x.add(&y).pow(2);
        let q = x.pow(2).add(&x.mul(&y).scale(&BigRat::from_integer(2.into()))).add(&y.pow(2));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
        let dp = p.derivative(var("x"));
        let expect = x.add(&y).scale(&BigRat::from_integer(2.into()));
        assert_eq!(dp, expect);
    }

    #[test]
    fn substitution_and_eval() {
        let x = MultiPoly::named("sx");
        let y = MultiPoly::named("sy");
        let p = x.mul(&y).add(&MultiPoly::from_int(3));
        let mut map = BTreeMap::new();
        map.insert(var("sx"), y.add(&MultiPoly::one()));
        let q = p.substitute(&map);
        // (y+1)y + 3
        let mut vals = BTreeMap::new();
        vals.insert(var("sy"), BigRat::from_integer(4.into()));
        assert_eq!(q.eval(&vals), BigRat::from_integer(23.into()));
    }
}
