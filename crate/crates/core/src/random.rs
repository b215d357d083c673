//! Seeded generators of random test inputs. Every function takes the RNG
//! explicitly so suites are reproducible.

use rand::Rng;

use crate::matpoly::{UniPoly, UniPolyMatrix};
use crate::ncpoly::{Letter, MatrixPoint, NCPoly, Word};
use crate::qmat::QMat;
use crate::rational::{frac, rat, Rational};

pub fn rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let n = rng.gen_range(-max_num..=max_num);
    let d = rng.gen_range(1..=max_den.max(1));
    frac(n, d)
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    loop {
        let q = rational(rng, max_num, max_den);
        if q != rat(0) {
            return q;
        }
    }
}

pub fn word<R: Rng>(rng: &mut R, g: usize, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter::from_code(rng.gen_range(0..2 * g) as u8)))
}

/// Up to `terms` random monomials of degree at most `max_deg`; the result has
/// degree exactly `max_deg` unless `exact` is false.
pub fn poly<R: Rng>(rng: &mut R, g: usize, max_deg: usize, terms: usize, exact: bool) -> NCPoly {
    let mut p = NCPoly::zero();
    if exact {
        p.add_term(word(rng, g, max_deg), nonzero_rational(rng, 5, 3));
    }
    for _ in 0..terms.saturating_sub(exact as usize) {
        let len = rng.gen_range(0..=max_deg);
        p.add_term(word(rng, g, len), nonzero_rational(rng, 5, 3));
    }
    if exact && p.degree() != Some(max_deg) {
        return poly(rng, g, max_deg, terms, exact);
    }
    p
}

/// `Σ rⱼ* rⱼ` for random `rⱼ` of degree at most `half`.
pub fn sum_of_squares<R: Rng>(rng: &mut R, g: usize, half: usize, count: usize) -> NCPoly {
    let mut s = NCPoly::zero();
    for _ in 0..count {
        let r = poly(rng, g, half, 2, true);
        s = &s + &(&r.adjoint() * &r);
    }
    s
}

/// A mix of plain random generators and sums of squares, top degree exactly
/// `d`. Sums of squares make the real radical nontrivial.
pub fn ideal<R: Rng>(rng: &mut R, g: usize, d: usize) -> Vec<NCPoly> {
    let n = rng.gen_range(1..=2);
    let mut out = Vec::new();
    for i in 0..n {
        let p = if d >= 2 && rng.gen_bool(0.6) {
            let count = rng.gen_range(1..=2);
            sum_of_squares(rng, g, d / 2, count)
        } else {
            let deg = if i == 0 { d } else { rng.gen_range(1..=d) };
            poly(rng, g, deg, 3, true)
        };
        if !p.is_zero() {
            out.push(p);
        }
    }
    if out.iter().all(|p| p.degree() != Some(d)) {
        out.push(poly(rng, g, d, 2, true));
    }
    out
}

pub fn qmat<R: Rng>(rng: &mut R, rows: usize, cols: usize, max_num: i64) -> QMat {
    QMat::from_fn(rows, cols, |_, _| rational(rng, max_num, 3))
}

pub fn point<R: Rng>(rng: &mut R, g: usize, n: usize, with_metric: bool) -> MatrixPoint {
    let mats = (0..g).map(|_| qmat(rng, n, n, 3)).collect();
    let v = (0..n).map(|_| rational(rng, 3, 2)).collect();
    let mut pt = MatrixPoint::new(mats, v).expect("sizes agree");
    if with_metric {
        pt.metric = Some((0..n).map(|_| frac(rng.gen_range(1..=4), rng.gen_range(1..=3))).collect());
    }
    pt
}

pub fn unipoly<R: Rng>(rng: &mut R, max_deg: usize) -> UniPoly {
    let deg = rng.gen_range(0..=max_deg);
    UniPoly::from_coeffs((0..=deg).map(|_| rational(rng, 4, 2)).collect())
}

pub fn unipoly_matrix<R: Rng>(rng: &mut R, n: usize, max_deg: usize) -> UniPolyMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| if rng.gen_bool(0.3) { UniPoly::zero() } else { unipoly(rng, max_deg) }).collect())
        .collect();
    UniPolyMatrix::from_rows(rows)
}

/// Product of random elementary matrices: determinant is a nonzero constant.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, max_deg: usize) -> UniPolyMatrix {
    let mut m = UniPolyMatrix::identity(n);
    if n < 2 {
        return UniPolyMatrix::diag(&[UniPoly::constant(nonzero_rational(rng, 3, 2))]);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut e = UniPolyMatrix::identity(n);
        e.set(i, j, unipoly(rng, max_deg));
        m = e.mul(&m);
    }
    m
}
