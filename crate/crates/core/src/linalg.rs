//! Dense exact linear algebra: reduced row echelon form, kernels, and
//! symmetric pivoted LDLᵀ.

use num_traits::{One, Signed, Zero};

use crate::qmat::QMat;
use crate::rational::Rational;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn row_echelon(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    rref(rows).0
}

/// Basis of the right kernel `{x : M x = 0}` of a matrix with `ncols` columns.
pub fn kernel(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Solves `M x = b`, returning one solution if any exists.
pub fn solve(rows: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &pc) in r.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Symmetric pivoted factorization `Pᵀ B P = L D Lᵀ` with unit lower
/// triangular `L`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ldl {
    /// `perm[k]` is the original index eliminated at step `k`.
    pub perm: Vec<usize>,
    pub d: Vec<Rational>,
    /// Columns of `L` in original coordinates: `l[k][perm[k]] = 1` and
    /// `B = Σ_k d[k] · l[k] l[k]ᵀ`.
    pub l: Vec<Vec<Rational>>,
}

impl Ldl {
    pub fn all_nonnegative(&self) -> bool {
        self.d.iter().all(|x| !x.is_negative())
    }

    pub fn all_positive(&self) -> bool {
        self.d.iter().all(Signed::is_positive)
    }

    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn reconstruct(&self, n: usize) -> QMat {
        let mut out = QMat::zeros(n, n);
        for (dk, lk) in self.d.iter().zip(&self.l) {
            if dk.is_zero() {
                continue;
            }
            for i in 0..n {
                if lk[i].is_zero() {
                    continue;
                }
                let a = dk * &lk[i];
                for j in 0..n {
                    if !lk[j].is_zero() {
                        out[(i, j)] += &a * &lk[j];
                    }
                }
            }
        }
        out
    }
}

/// Outcome of the PSD test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LdlOutcome {
    /// Factorization with every pivot ≥ 0 (zero pivots only where the whole
    /// remaining Schur complement vanished).
    Psd(Ldl),
    /// Some principal direction is negative, or a zero diagonal sits above a
    /// nonzero off-diagonal entry.
    NotPsd,
}

/// Exact test of positive semidefiniteness by diagonal pivoting.
///
/// At each step the remaining Schur complement is inspected: a negative
/// diagonal entry refutes PSD; if every diagonal entry is zero then the
/// complement must be zero; otherwise the first positive diagonal is used.
pub fn ldl_psd(b: &QMat) -> LdlOutcome {
    assert!(b.is_square());
    let n = b.rows();
    let mut s = b.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut perm = Vec::new();
    let mut d = Vec::new();
    let mut l = Vec::new();
    while !active.is_empty() {
        if active.iter().any(|&i| s[(i, i)].is_negative()) {
            return LdlOutcome::NotPsd;
        }
        let Some(pos) = active.iter().position(|&i| s[(i, i)].is_positive()) else {
            if active
                .iter()
                .any(|&i| active.iter().any(|&j| !s[(i, j)].is_zero()))
            {
                return LdlOutcome::NotPsd;
            }
            for &i in &active {
                let mut col = vec![Rational::zero(); n];
                col[i] = Rational::one();
                perm.push(i);
                d.push(Rational::zero());
                l.push(col);
            }
            break;
        };
        let p = active.remove(pos);
        let dp = s[(p, p)].clone();
        let mut col = vec![Rational::zero(); n];
        col[p] = Rational::one();
        for &i in &active {
            col[i] = &s[(i, p)] / &dp;
        }
        for &i in &active {
            if col[i].is_zero() {
                continue;
            }
            let f = &col[i] * &dp;
            for &j in &active {
                if !col[j].is_zero() {
                    let delta = &f * &col[j];
                    s[(i, j)] -= delta;
                }
            }
        }
        perm.push(p);
        d.push(dp);
        l.push(col);
    }
    LdlOutcome::Psd(Ldl { perm, d, l })
}

/// Exact positive definiteness; returns the factorization on success.
pub fn ldl_pd(b: &QMat) -> Option<Ldl> {
    match ldl_psd(b) {
        LdlOutcome::Psd(f) if f.all_positive() => Some(f),
        _ => None,
    }
}
