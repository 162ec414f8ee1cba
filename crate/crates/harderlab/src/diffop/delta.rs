//! The delta-calculus: symbolic evaluation of the kernel operators on the
//! automorphy factor delta^(-k).
//!
//! Expressions are polynomials in the ten symmetric symbols D_ab
//! (1 <= a <= b <= 4) and the formal weight k, optionally carrying one
//! factor delta^(-k). The three rewrite rules are
//!
//!   (D1) first-order operators are derivations,
//!   (D2) d[a,b] delta^(-k) = -k delta^(-k) D_ab,
//!   (D3) d[a,b] D_cd = -1/2 (D_ac D_bd + D_ad D_bc),
//!
//! and every operator built from the block invariants reduces through
//! them. The fundamental-formula table, the product-lemma consistency
//! checks and the closed-form action on delta^(-k) are all verified by
//! exact polynomial identity.

use crate::diffop::poly::{var, MultiPoly};
use crate::error::{Error, Result};
use crate::exact::BigRat;
use crate::linalg::solve;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn d_var(a: usize, b: usize) -> u32 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    var(&format!("dl_{a}_{b}"))
}

fn k_var() -> u32 {
    var("k")
}

fn k_poly() -> MultiPoly {
    MultiPoly::variable(k_var())
}

/// A formal sum delta^(-k) * P(D, k) or plain P(D, k).
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaExpr {
    pub has_delta: bool,
    pub poly: MultiPoly,
}

impl DeltaExpr {
    pub fn delta_pow_minus_k() -> Self {
        DeltaExpr { has_delta: true, poly: MultiPoly::one() }
    }

    pub fn plain(poly: MultiPoly) -> Self {
        DeltaExpr { has_delta: false, poly }
    }

    pub fn with_delta(poly: MultiPoly) -> Self {
        DeltaExpr { has_delta: true, poly }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn mul(&self, rhs: &DeltaExpr) -> DeltaExpr {
        assert!(
            !(self.has_delta && rhs.has_delta),
            "product would carry delta^(-2k)"
        );
        DeltaExpr {
            has_delta: self.has_delta || rhs.has_delta,
            poly: self.poly.mul(&rhs.poly),
        }
    }

    pub fn add(&self, rhs: &DeltaExpr) -> DeltaExpr {
        assert_eq!(self.has_delta, rhs.has_delta, "mixed delta weights");
        DeltaExpr { has_delta: self.has_delta, poly: self.poly.add(&rhs.poly) }
    }

    pub fn sub(&self, rhs: &DeltaExpr) -> DeltaExpr {
        assert_eq!(self.has_delta, rhs.has_delta, "mixed delta weights");
        DeltaExpr { has_delta: self.has_delta, poly: self.poly.sub(&rhs.poly) }
    }

    pub fn scale(&self, f: &BigRat) -> DeltaExpr {
        DeltaExpr { has_delta: self.has_delta, poly: self.poly.scale(f) }
    }
}

/// The first-order operator d[a, b] acting by (D1)-(D3).
pub fn apply_partial(a: usize, b: usize, e: &DeltaExpr) -> DeltaExpr {
    // derivation on the D variables
    let mut out = MultiPoly::zero();
    for c in 1..=4 {
        for d in c..=4 {
            let dp = e.poly.derivative(d_var(c, d));
            if dp.is_zero() {
                continue;
            }
            // (D3): d[a,b] D_cd = -1/2 (D_ac D_bd + D_ad D_bc)
            let image = MultiPoly::variable(d_var(a, c))
                .mul(&MultiPoly::variable(d_var(b, d)))
                .add(&MultiPoly::variable(d_var(a, d)).mul(&MultiPoly::variable(d_var(b, c))))
                .scale(&BigRat::new((-1).into(), 2.into()));
            out = out.add(&dp.mul(&image));
        }
    }
    if e.has_delta {
        // (D2): the delta factor contributes -k D_ab times the operand
        let extra = e
            .poly
            .mul(&MultiPoly::variable(d_var(a, b)))
            .mul(&k_poly())
            .neg();
        out = out.add(&extra);
    }
    DeltaExpr { has_delta: e.has_delta, poly: out }
}

/// A second-order generator: signed sum of two-fold compositions.
type Order2 = Vec<(i64, (usize, usize), (usize, usize))>;

fn f1_generator() -> Order2 {
    vec![(1, (1, 3), (2, 4)), (-1, (1, 4), (2, 3))]
}

fn f4_generator() -> Order2 {
    vec![(1, (1, 1), (2, 2)), (-1, (1, 2), (1, 2))]
}

fn f5_generator() -> Order2 {
    vec![(1, (3, 3), (4, 4)), (-1, (3, 4), (3, 4))]
}

fn apply_order2(op: &Order2, e: &DeltaExpr) -> DeltaExpr {
    let mut out = DeltaExpr { has_delta: e.has_delta, poly: MultiPoly::zero() };
    for (sign, xy, zw) in op {
        let step = apply_partial(xy.0, xy.1, &apply_partial(zw.0, zw.1, e));
        out = out.add(&step.scale(&BigRat::from_integer((*sign).into())));
    }
    out
}

/// The operators F_1, F_4, F_5 (order two), F_2 = F_4 F_5 and F_3 = det
/// of the full 4 x 4 operator matrix (order four).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FOp {
    F1,
    F2,
    F3,
    F4,
    F5,
}

pub fn apply_f(op: FOp, e: &DeltaExpr) -> DeltaExpr {
    match op {
        FOp::F1 => apply_order2(&f1_generator(), e),
        FOp::F4 => apply_order2(&f4_generator(), e),
        FOp::F5 => apply_order2(&f5_generator(), e),
        FOp::F2 => apply_f(FOp::F4, &apply_f(FOp::F5, e)),
        FOp::F3 => {
            // signed sum over permutations of d[1,s1] d[2,s2] d[3,s3] d[4,s4]
            let mut out = DeltaExpr { has_delta: e.has_delta, poly: MultiPoly::zero() };
            let perms = permutations4();
            for (sigma, sign) in perms {
                let mut cur = e.clone();
                for (i, &s) in sigma.iter().enumerate().rev() {
                    cur = apply_partial(i + 1, s, &cur);
                }
                out = out.add(&cur.scale(&BigRat::from_integer(sign.into())));
            }
            out
        }
    }
}

fn permutations4() -> Vec<([usize; 4], i64)> {
    let mut out = Vec::with_capacity(24);
    let mut items = [1usize, 2, 3, 4];
    permute(&mut items, 0, 1, &mut out);
    out
}

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

/// Bracket {A, B}_F = F(AB) - F(A)B - A F(B) for an order-two generator.
pub fn bracket(op: FOp, a: &DeltaExpr, b: &DeltaExpr) -> DeltaExpr {
    let gen = match op {
        FOp::F1 => f1_generator(),
        FOp::F4 => f4_generator(),
        FOp::F5 => f5_generator(),
        _ => panic!("brackets are defined for the order-two generators"),
    };
    let mut out = DeltaExpr {
        has_delta: a.has_delta || b.has_delta,
        poly: MultiPoly::zero(),
    };
    for (sign, xy, zw) in &gen {
        let da_x = apply_partial(xy.0, xy.1, a);
        let db_z = apply_partial(zw.0, zw.1, b);
        let da_z = apply_partial(zw.0, zw.1, a);
        let db_x = apply_partial(xy.0, xy.1, b);
        let term = da_x.mul(&db_z).add(&da_z.mul(&db_x));
        out = out.add(&term.scale(&BigRat::from_integer((*sign).into())));
    }
    out
}

/// The five invariant combinations of the D symbols.
pub fn c_basis(i: usize) -> MultiPoly {
    let d = |a: usize, b: usize| MultiPoly::variable(d_var(a, b));
    match i {
        1 => d(1, 3).mul(&d(2, 4)).sub(&d(1, 4).mul(&d(2, 3))),
        4 => d(1, 1).mul(&d(2, 2)).sub(&d(1, 2).pow(2)),
        5 => d(3, 3).mul(&d(4, 4)).sub(&d(3, 4).pow(2)),
        2 => c_basis(4).mul(&c_basis(5)),
        3 => {
            // det of the symmetric 4x4 matrix of D symbols
            let m: Vec<Vec<MultiPoly>> = (1..=4)
                .map(|a| (1..=4).map(|b| d(a, b)).collect())
                .collect();
            det4_poly(&m)
        }
        _ => panic!("C_i with i in 1..=5"),
    }
}

fn det4_poly(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for (sigma, sign) in permutations4() {
        let mut term = MultiPoly::constant(BigRat::from_integer(sign.into()));
        for (i, &s) in sigma.iter().enumerate() {
            term = term.mul(&m[i][s - 1]);
        }
        acc = acc.add(&term);
    }
    acc
}

// --- the fundamental formula table ------------------------------------------

pub struct TableRow {
    pub name: String,
    pub pass: bool,
    pub computed: String,
    pub expected: String,
}

pub struct TableReport {
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn count(&self) -> (usize, usize) {
        let pass = self.rows.iter().filter(|r| r.pass).count();
        (pass, self.rows.len())
    }
}

fn kq(num: i64, den: i64) -> BigRat {
    BigRat::new(num.into(), den.into())
}

/// Verify the full fundamental-formula table by re-deriving every entry
/// with the rewrite engine and comparing exactly.
pub fn verify_fundamental_table() -> TableReport {
    let delta = DeltaExpr::delta_pow_minus_k();
    let k = k_poly();
    let c = |i: usize| DeltaExpr::plain(c_basis(i));
    let _cd = |i: usize| DeltaExpr::with_delta(c_basis(i));
    let mut rows: Vec<(String, DeltaExpr, DeltaExpr)> = Vec::new();
    let half = kq(1, 2);

    // k (2k - 1)/2 as a polynomial
    let k2k1_half = k.mul(&k.scale(&kq(2, 1)).sub(&MultiPoly::one())).scale(&half);

    // F1 block
    rows.push((
        "F1(delta^-k)".into(),
        apply_f(FOp::F1, &delta),
        DeltaExpr::with_delta(k2k1_half.mul(&c_basis(1))),
    ));
    rows.push(("F1(C1)".into(), apply_f(FOp::F1, &c(1)), c(2).scale(&half)));
    rows.push((
        "F1(C2)".into(),
        apply_f(FOp::F1, &c(2)),
        DeltaExpr::plain(c_basis(1).mul(&c_basis(2)).scale(&kq(3, 1))),
    ));
    rows.push((
        "F1(C3)".into(),
        apply_f(FOp::F1, &c(3)),
        DeltaExpr::plain(c_basis(1).mul(&c_basis(3)).scale(&half)),
    ));
    let three_c1sq_c2_c3 = c_basis(1)
        .pow(2)
        .scale(&kq(3, 1))
        .add(&c_basis(2))
        .sub(&c_basis(3));
    rows.push((
        "{delta^-k, C1}_1".into(),
        bracket(FOp::F1, &delta, &c(1)),
        DeltaExpr::with_delta(k.scale(&half).mul(&three_c1sq_c2_c3)),
    ));
    rows.push((
        "{delta^-k, C2}_1".into(),
        bracket(FOp::F1, &delta, &c(2)),
        DeltaExpr::with_delta(k.scale(&kq(4, 1)).mul(&c_basis(1)).mul(&c_basis(2))),
    ));
    rows.push((
        "{delta^-k, C3}_1".into(),
        bracket(FOp::F1, &delta, &c(3)),
        DeltaExpr::with_delta(k.scale(&kq(2, 1)).mul(&c_basis(1)).mul(&c_basis(3))),
    ));
    // the printed source drops a C1 factor here; degree counting forces it
    rows.push((
        "{C1, C1}_1".into(),
        bracket(FOp::F1, &c(1), &c(1)),
        DeltaExpr::plain(
            c_basis(1)
                .mul(
                    &c_basis(1)
                        .pow(2)
                        .scale(&kq(2, 1))
                        .add(&c_basis(2).scale(&kq(2, 1)))
                        .sub(&c_basis(3)),
                )
                .scale(&half),
        ),
    ));
    rows.push((
        "{C1, C2}_1".into(),
        bracket(FOp::F1, &c(1), &c(2)),
        DeltaExpr::plain(c_basis(2).mul(&three_c1sq_c2_c3)),
    ));
    rows.push((
        "{C1, C3}_1".into(),
        bracket(FOp::F1, &c(1), &c(3)),
        DeltaExpr::plain(c_basis(3).mul(&three_c1sq_c2_c3).scale(&half)),
    ));
    rows.push((
        "{C2, C2}_1".into(),
        bracket(FOp::F1, &c(2), &c(2)),
        DeltaExpr::plain(c_basis(1).mul(&c_basis(2).pow(2)).scale(&kq(8, 1))),
    ));
    rows.push((
        "{C2, C3}_1".into(),
        bracket(FOp::F1, &c(2), &c(3)),
        DeltaExpr::plain(c_basis(1).mul(&c_basis(2)).mul(&c_basis(3)).scale(&kq(4, 1))),
    ));
    rows.push((
        "{C3, C3}_1".into(),
        bracket(FOp::F1, &c(3), &c(3)),
        DeltaExpr::plain(c_basis(1).mul(&c_basis(3).pow(2)).scale(&kq(2, 1))),
    ));

    // F4 block
    rows.push((
        "F4(delta^-k)".into(),
        apply_f(FOp::F4, &delta),
        DeltaExpr::with_delta(k2k1_half.mul(&c_basis(4))),
    ));
    rows.push((
        "F4(C1)".into(),
        apply_f(FOp::F4, &c(1)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(1)).scale(&half)),
    ));
    let four_c1sq = c_basis(1)
        .pow(2)
        .scale(&kq(4, 1))
        .add(&c_basis(2).scale(&kq(2, 1)))
        .sub(&c_basis(3));
    rows.push((
        "F4(C2)".into(),
        apply_f(FOp::F4, &c(2)),
        DeltaExpr::plain(c_basis(4).mul(&four_c1sq).scale(&half)),
    ));
    rows.push((
        "F4(C3)".into(),
        apply_f(FOp::F4, &c(3)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(3)).scale(&half)),
    ));
    let c1sq_3c2_c3 = c_basis(1)
        .pow(2)
        .add(&c_basis(2).scale(&kq(3, 1)))
        .sub(&c_basis(3));
    rows.push((
        "{delta^-k, C1}_4".into(),
        bracket(FOp::F4, &delta, &c(1)),
        DeltaExpr::with_delta(k.scale(&kq(2, 1)).mul(&c_basis(4)).mul(&c_basis(1))),
    ));
    rows.push((
        "{delta^-k, C2}_4".into(),
        bracket(FOp::F4, &delta, &c(2)),
        DeltaExpr::with_delta(k.mul(&c_basis(4)).mul(&c1sq_3c2_c3)),
    ));
    rows.push((
        "{delta^-k, C3}_4".into(),
        bracket(FOp::F4, &delta, &c(3)),
        DeltaExpr::with_delta(k.scale(&kq(2, 1)).mul(&c_basis(4)).mul(&c_basis(3))),
    ));
    rows.push((
        "{C1, C1}_4".into(),
        bracket(FOp::F4, &c(1), &c(1)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(1).pow(2)).scale(&kq(2, 1))),
    ));
    rows.push((
        "{C1, C2}_4".into(),
        bracket(FOp::F4, &c(1), &c(2)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(1)).mul(&c1sq_3c2_c3)),
    ));
    rows.push((
        "{C1, C3}_4".into(),
        bracket(FOp::F4, &c(1), &c(3)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(1)).mul(&c_basis(3)).scale(&kq(2, 1))),
    ));
    let two_c1sq_2c2_c3 = c_basis(1)
        .pow(2)
        .scale(&kq(2, 1))
        .add(&c_basis(2).scale(&kq(2, 1)))
        .sub(&c_basis(3));
    rows.push((
        "{C2, C2}_4".into(),
        bracket(FOp::F4, &c(2), &c(2)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(2)).mul(&two_c1sq_2c2_c3).scale(&kq(2, 1))),
    ));
    rows.push((
        "{C2, C3}_4".into(),
        bracket(FOp::F4, &c(2), &c(3)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(3)).mul(&c1sq_3c2_c3)),
    ));
    rows.push((
        "{C3, C3}_4".into(),
        bracket(FOp::F4, &c(3), &c(3)),
        DeltaExpr::plain(c_basis(4).mul(&c_basis(3).pow(2)).scale(&kq(2, 1))),
    ));

    // F5 block
    rows.push((
        "F5(delta^-k)".into(),
        apply_f(FOp::F5, &delta),
        DeltaExpr::with_delta(k2k1_half.mul(&c_basis(5))),
    ));
    rows.push((
        "F5(C1)".into(),
        apply_f(FOp::F5, &c(1)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(1)).scale(&half)),
    ));
    rows.push((
        "F5(C2)".into(),
        apply_f(FOp::F5, &c(2)),
        DeltaExpr::plain(c_basis(5).mul(&four_c1sq).scale(&half)),
    ));
    rows.push((
        "F5(C3)".into(),
        apply_f(FOp::F5, &c(3)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(3)).scale(&half)),
    ));
    let two_c1sq_mc2_c3 = c_basis(1)
        .pow(2)
        .scale(&kq(2, 1))
        .sub(&c_basis(2))
        .add(&c_basis(3));
    rows.push((
        "F5(C4)".into(),
        apply_f(FOp::F5, &c(4)),
        DeltaExpr::plain(two_c1sq_mc2_c3.scale(&half)),
    ));
    rows.push((
        "{delta^-k, C1}_5".into(),
        bracket(FOp::F5, &delta, &c(1)),
        DeltaExpr::with_delta(k.scale(&kq(2, 1)).mul(&c_basis(5)).mul(&c_basis(1))),
    ));
    rows.push((
        "{delta^-k, C2}_5".into(),
        bracket(FOp::F5, &delta, &c(2)),
        DeltaExpr::with_delta(k.mul(&c_basis(5)).mul(&c1sq_3c2_c3)),
    ));
    rows.push((
        "{delta^-k, C3}_5".into(),
        bracket(FOp::F5, &delta, &c(3)),
        DeltaExpr::with_delta(k.scale(&kq(2, 1)).mul(&c_basis(5)).mul(&c_basis(3))),
    ));
    let c1sq_c2_c3 = c_basis(1).pow(2).add(&c_basis(2)).sub(&c_basis(3));
    rows.push((
        "{delta^-k, C4}_5".into(),
        bracket(FOp::F5, &delta, &c(4)),
        DeltaExpr::with_delta(k.mul(&c1sq_c2_c3)),
    ));
    rows.push((
        "{C1, C1}_5".into(),
        bracket(FOp::F5, &c(1), &c(1)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(1).pow(2)).scale(&kq(2, 1))),
    ));
    rows.push((
        "{C1, C2}_5".into(),
        bracket(FOp::F5, &c(1), &c(2)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(1)).mul(&c1sq_3c2_c3)),
    ));
    rows.push((
        "{C1, C3}_5".into(),
        bracket(FOp::F5, &c(1), &c(3)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(1)).mul(&c_basis(3)).scale(&kq(2, 1))),
    ));
    rows.push((
        "{C2, C2}_5".into(),
        bracket(FOp::F5, &c(2), &c(2)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(2)).mul(&two_c1sq_2c2_c3).scale(&kq(2, 1))),
    ));
    rows.push((
        "{C2, C3}_5".into(),
        bracket(FOp::F5, &c(2), &c(3)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(3)).mul(&c1sq_3c2_c3)),
    ));
    rows.push((
        "{C3, C3}_5".into(),
        bracket(FOp::F5, &c(3), &c(3)),
        DeltaExpr::plain(c_basis(5).mul(&c_basis(3).pow(2)).scale(&kq(2, 1))),
    ));
    rows.push((
        "{C1, C4}_5".into(),
        bracket(FOp::F5, &c(1), &c(4)),
        DeltaExpr::plain(c_basis(1).mul(&c1sq_c2_c3)),
    ));
    rows.push((
        "{C2, C4}_5".into(),
        bracket(FOp::F5, &c(2), &c(4)),
        DeltaExpr::plain(c_basis(2).mul(&three_c1sq_c2_c3)),
    ));
    rows.push((
        "{C3, C4}_5".into(),
        bracket(FOp::F5, &c(3), &c(4)),
        DeltaExpr::plain(c_basis(3).mul(&c1sq_c2_c3)),
    ));

    let rows = rows
        .into_iter()
        .map(|(name, lhs, rhs)| TableRow {
            pass: lhs == rhs,
            computed: format!("{}", lhs.poly),
            expected: format!("{}", rhs.poly),
            name,
        })
        .collect();
    TableReport { rows }
}

// --- ideal membership -------------------------------------------------------

/// Is `p` (a polynomial in the D symbols and k) in the ideal generated by
/// C3 (include_c2 = false) or by C2 and C3 (include_c2 = true), with
/// polynomial coefficients in C1, C2, C3 and k?
pub fn in_c_ideal(p: &MultiPoly, include_c2: bool) -> bool {
    if p.is_zero() {
        return true;
    }
    // split by powers of k; each piece is homogeneous in the D symbols
    for (_, piece) in p.coefficients_in(&[k_var()]) {
        let dvars: Vec<u32> = (1..=4)
            .flat_map(|a| (a..=4).map(move |b| d_var(a, b)))
            .collect();
        let deg = piece.degree_in(&dvars);
        if deg % 2 != 0 {
            return false;
        }
        let w = deg / 2; // weighted degree: C1 is 1, C2 and C3 are 2
        // generators C1^a C2^b C3^c with a + 2b + 2c = w and (c >= 1, or
        // b >= 1 when C2 is allowed)
        let mut gens: Vec<MultiPoly> = Vec::new();
        for b in 0..=(w / 2) {
            for cexp in 0..=(w / 2 - b) {
                let a = w - 2 * b - 2 * cexp;
                if cexp == 0 && !(include_c2 && b >= 1) {
                    continue;
                }
                gens.push(c_basis(1).pow(a).mul(&c_basis(2).pow(b)).mul(&c_basis(3).pow(cexp)));
            }
        }
        if gens.is_empty() {
            return false;
        }
        // linear solve for the coordinates
        let mut monomials: std::collections::BTreeMap<Vec<(u32, u32)>, usize> = Default::default();
        for g in gens.iter().chain(std::iter::once(&piece)) {
            for (m, _) in g.terms() {
                let next = monomials.len();
                monomials.entry(m.clone()).or_insert(next);
            }
        }
        let mut a_mat = vec![vec![BigRat::zero(); gens.len()]; monomials.len()];
        let mut b_vec = vec![BigRat::zero(); monomials.len()];
        for (j, g) in gens.iter().enumerate() {
            for (m, c) in g.terms() {
                a_mat[monomials[m]][j] = c.clone();
            }
        }
        for (m, c) in piece.terms() {
            b_vec[monomials[m]] = c.clone();
        }
        if solve(&a_mat, &b_vec).is_none() {
            return false;
        }
    }
    true
}

// --- product-lemma and closed-form verification ------------------------------

/// Pochhammer with a rational (or half-integer) base on polynomials in k:
/// (x)_m = x (x+1) ... (x+m-1).
fn poch_poly(x: &MultiPoly, m: u32) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for i in 0..m {
        acc = acc.mul(&x.add(&MultiPoly::from_int(i as i64)));
    }
    acc
}

/// F_1^a F_2^b F_3^c applied to delta^(-k).
pub fn f_word_on_delta(a: u32, b: u32, c: u32) -> DeltaExpr {
    let mut cur = DeltaExpr::delta_pow_minus_k();
    for _ in 0..c {
        cur = apply_f(FOp::F3, &cur);
    }
    for _ in 0..b {
        cur = apply_f(FOp::F2, &cur);
    }
    for _ in 0..a {
        cur = apply_f(FOp::F1, &cur);
    }
    cur
}

/// Verify the graded product lemmas feeding the closed form:
///  - F3 action: F3(delta^-k C3^r) for r in 0..=r_max,
///  - F2 powers mod (C3): b in 0..=b_max,
///  - F1 powers on C1^p mod (C2, C3),
///  - the mixed-word coefficient mod (C2, C3),
///  - operator-composition consistency F1(F1(delta^-k)) both ways.
pub fn verify_product_lemmas(r_max: u32, b_max: u32) -> Result<()> {
    let k = k_poly();
    // F3 action on delta^-k C3^r
    for r in 0..=r_max {
        let operand = DeltaExpr::with_delta(c_basis(3).pow(r));
        let got = apply_f(FOp::F3, &operand);
        let kr = k.add(&MultiPoly::from_int(r as i64));
        let coeff = kr
            .sub(&MultiPoly::one())
            .mul(&kr)
            .mul(&kr.scale(&kq(2, 1)).sub(&MultiPoly::from_int(3)))
            .mul(&kr.scale(&kq(2, 1)).sub(&MultiPoly::one()))
            .scale(&kq(1, 4));
        let expect = DeltaExpr::with_delta(coeff.mul(&c_basis(3).pow(r + 1)));
        if got != expect {
            return Err(Error::Assertion(format!("F3 action mismatch at r = {r}")));
        }
    }
    // F2 powers mod (C3)
    for b in 0..=b_max {
        let got = f_word_on_delta(0, b, 0);
        let mut expect = MultiPoly::zero();
        for p in 0..=b {
            // p! C(b,p)^2 (k)_{2b} (k - 1/2)_b (k + p - 1/2)_{b-p}
            let mut binom = BigInt::one();
            for i in 0..p {
                binom = binom * BigInt::from((b - i) as i64) / BigInt::from((i + 1) as i64);
            }
            let mut fact = BigInt::one();
            for i in 1..=p {
                fact *= BigInt::from(i as i64);
            }
            let scalar = BigRat::from_integer(fact * &binom * &binom);
            let term = poch_poly(&k, 2 * b)
                .mul(&poch_poly(&k.add(&MultiPoly::constant(-kq(1, 2))), b))
                .mul(&poch_poly(
                    &k.add(&MultiPoly::constant(
                        BigRat::from_integer((p as i64).into()) - kq(1, 2),
                    )),
                    b - p,
                ))
                .scale(&scalar);
            expect = expect.add(&term.mul(&c_basis(1).pow(2 * p)).mul(&c_basis(2).pow(b - p)));
        }
        let diff = got.poly.sub(&expect);
        if !in_c_ideal(&diff, false) {
            return Err(Error::Assertion(format!("F2 power lemma fails at b = {b}")));
        }
    }
    // F1 exact first step and powers on C1^p mod (C2, C3)
    for p in 0..=2u32 {
        let operand = DeltaExpr::with_delta(c_basis(1).pow(p));
        let got = apply_f(FOp::F1, &operand);
        let kp = k.add(&MultiPoly::from_int(p as i64));
        let k2p1 = k.scale(&kq(2, 1)).add(&MultiPoly::from_int(p as i64 - 1));
        let expect = DeltaExpr::with_delta(
            kp.mul(&k2p1).scale(&kq(1, 2)).mul(&c_basis(1).pow(p + 1)).add(
                &kp.scale(&kq(1, 2))
                    .scale(&BigRat::from_integer((p as i64).into()))
                    .mul(&c_basis(1).pow(p.max(1) - 1))
                    .mul(&c_basis(2))
                    .sub(
                        &k2p1
                            .scale(&kq(1, 4))
                            .scale(&BigRat::from_integer((p as i64).into()))
                            .mul(&c_basis(1).pow(p.max(1) - 1))
                            .mul(&c_basis(3)),
                    ),
            ),
        );
        if got != expect {
            return Err(Error::Assertion(format!(
                "F1 first-step formula fails at p = {p}"
            )));
        }
        for a in 1..=2u32 {
            let mut cur = operand.clone();
            for _ in 0..a {
                cur = apply_f(FOp::F1, &cur);
            }
            let closed = poch_poly(&kp, a)
                .mul(&poch_poly(&k2p1.add(&MultiPoly::one()).sub(&MultiPoly::one()), a))
                .scale(&BigRat::new(BigInt::one(), BigInt::from(1) << a))
                .mul(&c_basis(1).pow(a + p));
            let diff = cur.poly.sub(&closed);
            if !in_c_ideal(&diff, true) {
                return Err(Error::Assertion(format!(
                    "F1 power lemma fails at a = {a}, p = {p}"
                )));
            }
        }
    }
    // mixed words mod (C2, C3): F1^a F2^b
    for b in 0..=b_max.min(1) {
        for a in 0..=2u32 {
            let got = f_word_on_delta(a, b, 0);
            let mut fact_b = BigInt::one();
            for i in 1..=b {
                fact_b *= BigInt::from(i as i64);
            }
            let closed = poch_poly(&k, 2 * b)
                .mul(&poch_poly(&k.add(&MultiPoly::constant(-kq(1, 2))), b))
                .mul(&poch_poly(&k.add(&MultiPoly::from_int(2 * b as i64)), a))
                .mul(&poch_poly(
                    &k.scale(&kq(2, 1)).add(&MultiPoly::from_int(2 * b as i64 - 1)),
                    a,
                ))
                .scale(&BigRat::new(fact_b, BigInt::from(1) << a))
                .mul(&c_basis(1).pow(a + 2 * b));
            let diff = got.poly.sub(&closed);
            if !in_c_ideal(&diff, true) {
                return Err(Error::Assertion(format!(
                    "mixed-word coefficient fails at a = {a}, b = {b}"
                )));
            }
        }
    }
    // composition consistency: F1(F1(delta^-k)) directly vs via the product
    // rule on the first output
    let once = apply_f(FOp::F1, &DeltaExpr::delta_pow_minus_k());
    let twice_direct = apply_f(FOp::F1, &once);
    // product rule: F1(delta^-k C1) scaled by k(2k-1)/2
    let via_product = apply_f(FOp::F1, &DeltaExpr::with_delta(c_basis(1)))
        .scale(&kq(1, 2));
    let k2k1_half = k.mul(&k.scale(&kq(2, 1)).sub(&MultiPoly::one()));
    let via_product = DeltaExpr::with_delta(via_product.poly.mul(&k2k1_half));
    if twice_direct != via_product {
        return Err(Error::Assertion("F1 composition consistency fails".into()));
    }
    Ok(())
}

/// The closed-form action of the order-2l kernel operator:
/// D_l(delta^-k) = (1/(2^(2l) l!)) (2k-3)_l (2k-1)_{2l} C1^l delta^-k,
/// verified against the full operator expansion with formal k. (The power
/// of C1 is l: the operator has order 2l and each C1 carries two of the
/// Delta symbols.)
pub fn action_on_delta(l: u32) -> Result<DeltaExpr> {
    let k = k_poly();
    let mut total = DeltaExpr::with_delta(MultiPoly::zero());
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
            let base = k.add(&MultiPoly::constant(
                BigRat::from_integer((c as i64).into()) - kq(3, 2),
            ));
            let word = f_word_on_delta(a, b, c);
            total = total.add(&DeltaExpr::with_delta(
                word.poly.mul(&poch_poly(&base, a + b + c)).scale(&coeff),
            ));
        }
    }
    // closed form
    let mut fact_l = BigInt::one();
    for i in 1..=l {
        fact_l *= BigInt::from(i);
    }
    let scalar = BigRat::new(BigInt::one(), fact_l << (2 * l));
    let closed = poch_poly(&k.scale(&kq(2, 1)).sub(&MultiPoly::from_int(3)), l)
        .mul(&poch_poly(&k.scale(&kq(2, 1)).sub(&MultiPoly::one()), 2 * l))
        .scale(&scalar)
        .mul(&c_basis(1).pow(l));
    if total.poly != closed {
        return Err(Error::Assertion(format!(
            "closed-form action mismatch at l = {l}"
        )));
    }
    Ok(total)
}

// --- pullback constants -------------------------------------------------------

/// A constant of the form sign * 2^pow2 * rational * pi^pi_pow with the
/// rational part odd (2-free) and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct CValue {
    pub sign: i32,
    pub pow2: i64,
    pub pi_pow: u32,
    pub rational: BigRat,
}

impl CValue {
    fn normalize(mut value: BigRat, pi_pow: u32) -> CValue {
        let mut sign = 1;
        if value.is_negative() {
            sign = -1;
            value = -value;
        }
        let mut pow2 = 0i64;
        let two = BigRat::from_integer(2.into());
        // pull out powers of two
        loop {
            let n2 = value.numer().clone() % BigInt::from(2);
            let d2 = value.denom().clone() % BigInt::from(2);
            if n2.is_zero() {
                value /= &two;
                pow2 += 1;
            } else if d2.is_zero() {
                value *= &two;
                pow2 -= 1;
            } else {
                break;
            }
        }
        CValue { sign, pow2, pi_pow, rational: value }
    }

    pub fn display(&self) -> String {
        format!(
            "{}2^{} * {} * pi^{}",
            if self.sign < 0 { "-" } else { "" },
            self.pow2,
            crate::exact::format_rat(&self.rational),
            self.pi_pow
        )
    }
}

/// Ascending Pochhammer on rationals with the negative-index convention
/// (x)_{-m} = 1/((x-1)...(x-m)).
pub fn poch_rat(x: &BigRat, m: i64) -> BigRat {
    if m >= 0 {
        let mut acc = BigRat::one();
        for i in 0..m {
            acc *= x + BigRat::from_integer(i.into());
        }
        acc
    } else {
        let mut acc = BigRat::one();
        for i in 1..=(-m) {
            acc /= x - BigRat::from_integer(i.into());
        }
        acc
    }
}

/// c(0, rho_2) = 2^(9 - 2(k + 2l)) (-1)^(k+l) pi^3 (2k-3)_l (2k-1)_{2l-3} / l!.
pub fn constant_c0_rho2(k: i64, l: i64) -> Result<CValue> {
    if k % 2 != 0 || k < 4 || l < 0 {
        return Err(Error::Domain("c(0, rho_2) wants even k >= 4, l >= 0".into()));
    }
    let kq2 = BigRat::from_integer((2 * k - 3).into());
    let kq1 = BigRat::from_integer((2 * k - 1).into());
    let mut fact_l = BigInt::one();
    for i in 1..=l {
        fact_l *= BigInt::from(i);
    }
    let mut value = poch_rat(&kq2, l) * poch_rat(&kq1, 2 * l - 3) / BigRat::from_integer(fact_l);
    // 2^(9 - 2(k + 2l)) and the sign
    let e2 = 9 - 2 * (k + 2 * l);
    value = value * pow2_rat(e2);
    if (k + l) % 2 != 0 {
        value = -value;
    }
    Ok(CValue::normalize(value, 3))
}

fn pow2_rat(e: i64) -> BigRat {
    if e >= 0 {
        BigRat::from_integer(BigInt::from(1) << e)
    } else {
        BigRat::new(BigInt::one(), BigInt::from(1) << (-e))
    }
}

/// The general pullback constant c_r for 2 <= r.
pub fn constant_cr(r: i64, k: i64, l: i64) -> Result<CValue> {
    if r < 2 || k % 2 != 0 || k < 4 || l < 0 {
        return Err(Error::Domain("c_r wants r >= 2, even k >= 4, l >= 0".into()));
    }
    let kq2 = BigRat::from_integer((2 * k - 3).into());
    let kq1 = BigRat::from_integer((2 * k - 1).into());
    let mut fact_l = BigInt::one();
    for i in 1..=l {
        fact_l *= BigInt::from(i);
    }
    let mut denom = BigRat::from_integer(fact_l);
    for nu in 2..=4 {
        denom *= BigRat::from_integer((2 * k + 2 * l - nu).into());
    }
    for mu in 1..=2 {
        for nu in 3..=r {
            denom *= BigRat::from_integer((2 * k + l - mu - nu).into());
        }
    }
    for mu in 3..=r {
        for nu in mu..=r {
            denom *= BigRat::from_integer((2 * k - mu - nu).into());
        }
    }
    let mut value = poch_rat(&kq2, l) * poch_rat(&kq1, 2 * l) / denom;
    let e2 = (r + 1) * (r + 1) - (r * k + 2 * l) - 2 * l;
    value = value * pow2_rat(e2);
    if (r * k / 2 + l) % 2 != 0 {
        value = -value;
    }
    let pi_pow = (r * (r + 1) / 2) as u32;
    Ok(CValue::normalize(value, pi_pow))
}
