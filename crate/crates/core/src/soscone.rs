//! Gram parameterization of the symmetric elements of `I + I*` supported on
//! products of complement elements.

use num_traits::{One, Zero};

use crate::linsolve::{Complement, NormalizedIdeal, SpanBasis};
use crate::ncpoly::{NCPoly, Word};
use crate::qmat::QMat;
use crate::rational::Rational;
use crate::sparse::{kernel, SparseVec};

/// Basis of the hermitian elements of `(I + I*)` of degree at most
/// `2d − 2`.
#[derive(Clone, Debug)]
pub struct SymSpan {
    pub basis: SpanBasis,
    pub degree: usize,
    /// Set for the unit ideal, where every hermitian polynomial qualifies and
    /// `basis` is left empty.
    pub everything: bool,
}

impl SymSpan {
    pub fn contains(&self, p: &NCPoly) -> bool {
        p.degree().is_none_or(|k| k <= self.degree)
            && if self.everything {
                p.is_hermitian()
            } else {
                self.basis.contains(p)
            }
    }
}

/// `{A symmetric : Σ A_ij v_i* v_j ∈ S}` for a list `v` and a span `S`.
#[derive(Clone, Debug)]
pub struct GramSubspace {
    pub v: Vec<NCPoly>,
    pub mats: Vec<QMat>,
}

impl GramSubspace {
    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn size(&self) -> usize {
        self.v.len()
    }

    /// `vᵀ A v` with the row index on the starred factor.
    pub fn sandwich(&self, a: &QMat) -> NCPoly {
        sandwich(&self.v, a)
    }
}

pub fn sandwich(v: &[NCPoly], a: &QMat) -> NCPoly {
    let adj: Vec<NCPoly> = v.iter().map(NCPoly::adjoint).collect();
    let mut out = NCPoly::zero();
    for i in 0..v.len() {
        for j in 0..v.len() {
            let c = &a[(i, j)];
            if c.is_zero() {
                continue;
            }
            for (wa, ca) in adj[i].terms() {
                for (wb, cb) in v[j].terms() {
                    out.add_term(wa.concat(wb), c * ca * cb);
                }
            }
        }
    }
    out
}

/// Hermitian part of `(I + I*)` up to degree `2d − 2`, from the spanning set
/// `{m·pᵢ + pᵢ*·m* : |m| ≤ d − 1} ∪ {q + q* : q ∈ I_{d−1}}`.
pub fn sym_span_of_ideal(n: &NormalizedIdeal) -> SymSpan {
    let d = n.d();
    let top = (2 * d).saturating_sub(2);
    let mut b = SpanBasis::new();
    if n.is_unit() {
        return SymSpan {
            basis: b,
            degree: top,
            everything: true,
        };
    }
    for m in Word::all_up_to(n.g(), d.saturating_sub(1)) {
        for p in n.pivots() {
            let mp = p.left_mul_word(&m);
            b.insert(&(&mp + &mp.adjoint()));
        }
    }
    for q in n.low().elements() {
        b.insert(&(&q + &q.adjoint()));
    }
    SymSpan {
        basis: b.restrict(top),
        degree: top,
        everything: false,
    }
}

/// Gram subspace for arbitrary `v` and target span: solves
/// `Σ_{i≤j} c_ij (v_i* v_j + v_j* v_i) ∈ S` exactly (diagonal terms taken once).
pub fn gram_over(v: &[NCPoly], span: &SpanBasis) -> GramSubspace {
    let l = v.len();
    let adj: Vec<NCPoly> = v.iter().map(NCPoly::adjoint).collect();
    let mut pairs = Vec::new();
    let mut residuals: Vec<SparseVec<Word>> = Vec::new();
    for i in 0..l {
        for j in i..l {
            let mut p = &adj[i] * &v[j];
            if i != j {
                p = &p + &(&adj[j] * &v[i]);
            }
            residuals.push(span.reduce(&p).into_terms());
            pairs.push((i, j));
        }
    }
    let mut mats = Vec::new();
    for k in kernel(&residuals) {
        let mut a = QMat::zeros(l, l);
        for (t, c) in k {
            let (i, j) = pairs[t];
            a[(i, j)] = c.clone();
            a[(j, i)] = c;
        }
        mats.push(a);
    }
    mats.sort_by_key(first_nonzero);
    GramSubspace { v: v.to_vec(), mats }
}

fn first_nonzero(a: &QMat) -> (usize, usize) {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a[(i, j)].is_zero() {
                return (i, j);
            }
        }
    }
    (a.rows(), a.cols())
}

pub fn gram_subspace(_n: &NormalizedIdeal, v: &Complement, s: &SymSpan) -> GramSubspace {
    gram_over(&v.polys(), &s.basis)
}

/// Indices whose diagonal entry vanishes on the whole subspace.
pub fn identically_zero_diagonal(mats: &[QMat], l: usize) -> Vec<usize> {
    (0..l)
        .filter(|&i| mats.iter().all(|a| a[(i, i)].is_zero()))
        .collect()
}

/// `E_ij + E_ji` (or `E_ii`), a convenience for tests and examples.
pub fn sym_unit(l: usize, i: usize, j: usize) -> QMat {
    let mut a = QMat::zeros(l, l);
    a[(i, j)] = Rational::one();
    a[(j, i)] = Rational::one();
    a
}
