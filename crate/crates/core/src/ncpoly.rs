//! Polynomials in the free *-algebra over ℚ.
//!
//! Letters are packed into one byte: `2·(i−1) + starred`, so the natural
//! byte order is `x1 < x1* < x2 < x2* < …`. Words compare by length first,
//! then lexicographically; a polynomial's terms are kept in that order, so
//! the last key is always a top-degree monomial.

use std::collections::BTreeMap;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::qmat::QMat;
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// `var` is 1-based.
    pub fn new(var: usize, starred: bool) -> Letter {
        assert!((1..=128).contains(&var), "variable index out of range");
        Letter((2 * (var - 1)) as u8 + starred as u8)
    }

    pub fn from_code(code: u8) -> Letter {
        Letter(code)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn var_index(self) -> usize {
        (self.0 / 2) as usize + 1
    }

    pub fn starred(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn adjoint(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// All `2g` letters in canonical order.
    pub fn all(g: usize) -> impl Iterator<Item = Letter> {
        (0..2 * g as u8).map(Letter)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}{}", self.var_index(), if self.starred() { "*" } else { "" })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 16]>);

impl Word {
    pub fn one() -> Word {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        Word(letters.into_iter().collect())
    }

    pub fn letter(l: Letter) -> Word {
        Word::from_letters([l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    /// Split into the first `k` letters and the rest.
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(k);
        (Word(a.into()), Word(b.into()))
    }

    pub fn max_var(&self) -> usize {
        self.0.iter().map(|l| l.var_index()).max().unwrap_or(0)
    }

    /// Every word of length exactly `n` over `g` variables, ascending.
    pub fn all_of_len(g: usize, n: usize) -> Vec<Word> {
        let mut out = vec![Word::one()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * 2 * g);
            for w in &out {
                for l in Letter::all(g) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }

    /// Every word of length at most `n`, ascending.
    pub fn all_up_to(g: usize, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| Word::all_of_len(g, k)).collect()
    }

    /// `Σ_{k ≤ n} (2g)^k`.
    pub fn count_up_to(g: usize, n: usize) -> usize {
        (0..=n).map(|k| (2 * g).pow(k as u32)).sum()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Rational>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> NCPoly {
        NCPoly::monomial(Word::one(), c)
    }

    pub fn monomial(w: Word, c: Rational) -> NCPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { terms }
    }

    pub fn word(w: Word) -> NCPoly {
        NCPoly::monomial(w, Rational::one())
    }

    pub fn var(i: usize) -> NCPoly {
        NCPoly::word(Word::letter(Letter::new(i, false)))
    }

    pub fn var_star(i: usize) -> NCPoly {
        NCPoly::word(Word::letter(Letter::new(i, true)))
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_terms(it: impl IntoIterator<Item = (Word, Rational)>) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    /// Takes a map that already has no zero coefficients.
    pub fn from_map(terms: BTreeMap<Word, Rational>) -> NCPoly {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        NCPoly { terms }
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(t) => {
                *t += c;
                if t.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Rational> {
        self.terms
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    /// Largest variable index occurring (0 for constants).
    pub fn max_var(&self) -> usize {
        self.terms.keys().map(Word::max_var).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    pub fn adjoint(&self) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.adjoint(), c.clone()))
                .collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// `(p + p*) / 2`.
    pub fn hermitian_part(&self) -> NCPoly {
        (self + &self.adjoint()).scale(&Rational::new(1.into(), 2.into()))
    }

    pub fn left_mul_word(&self, m: &Word) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (m.concat(w), c.clone())).collect(),
        }
    }

    pub fn right_mul_word(&self, m: &Word) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.concat(m), c.clone())).collect(),
        }
    }

    /// Component of degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> HomPoly {
        HomPoly(NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        })
    }

    pub fn leading_polynomial(&self) -> Result<HomPoly> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    /// `p(X)·v`.
    pub fn evaluate(&self, pt: &MatrixPoint) -> Result<Vec<Rational>> {
        let n = pt.size();
        let mut acc = vec![Rational::zero(); n];
        for (w, c) in &self.terms {
            let wv = pt.apply_word(w, &pt.v)?;
            for (a, b) in acc.iter_mut().zip(wv) {
                if !b.is_zero() {
                    *a += c * b;
                }
            }
        }
        Ok(acc)
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_poly(self))
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_poly(self))
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: NCPoly) -> NCPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

/// A polynomial all of whose monomials have one length.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HomPoly(NCPoly);

impl HomPoly {
    /// `None` if `p` mixes degrees.
    pub fn new(p: NCPoly) -> Option<HomPoly> {
        let mut lens = p.terms.keys().map(Word::len);
        let first = lens.next();
        match first {
            Some(k) if lens.any(|l| l != k) => None,
            _ => Some(HomPoly(p)),
        }
    }

    pub fn poly(&self) -> &NCPoly {
        &self.0
    }

    pub fn into_poly(self) -> NCPoly {
        self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }
}

/// A tuple of square rational matrices with a vector, optionally carrying a
/// diagonal inner-product metric. Starred letters act as the adjoint with
/// respect to that metric, `D⁻¹ Xᵀ D`; without a metric this is `Xᵀ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixPoint {
    pub mats: Vec<QMat>,
    pub v: Vec<Rational>,
    pub metric: Option<Vec<Rational>>,
}

impl MatrixPoint {
    pub fn new(mats: Vec<QMat>, v: Vec<Rational>) -> Result<MatrixPoint> {
        let n = v.len();
        for m in &mats {
            if m.rows() != n || m.cols() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: if m.rows() != n { m.rows() } else { m.cols() },
                });
            }
        }
        Ok(MatrixPoint {
            mats,
            v,
            metric: None,
        })
    }

    pub fn size(&self) -> usize {
        self.v.len()
    }

    pub fn g(&self) -> usize {
        self.mats.len()
    }

    pub fn apply_letter(&self, l: Letter, u: &[Rational]) -> Result<Vec<Rational>> {
        let i = l.var_index();
        let x = self.mats.get(i - 1).ok_or(Error::VariableOutOfRange {
            index: i,
            available: self.mats.len(),
        })?;
        if u.len() != x.cols() {
            return Err(Error::SizeMismatch {
                expected: x.cols(),
                found: u.len(),
            });
        }
        if !l.starred() {
            return Ok(x.mul_vec(u));
        }
        let n = u.len();
        let mut out = vec![Rational::zero(); n];
        match &self.metric {
            None => {
                for (j, uj) in u.iter().enumerate() {
                    if uj.is_zero() {
                        continue;
                    }
                    for (i, o) in out.iter_mut().enumerate() {
                        if !x[(j, i)].is_zero() {
                            *o += &x[(j, i)] * uj;
                        }
                    }
                }
            }
            Some(d) => {
                for (j, uj) in u.iter().enumerate() {
                    if uj.is_zero() {
                        continue;
                    }
                    let duj = &d[j] * uj;
                    for (i, o) in out.iter_mut().enumerate() {
                        if !x[(j, i)].is_zero() {
                            *o += &x[(j, i)] * &duj;
                        }
                    }
                }
                for (o, di) in out.iter_mut().zip(d) {
                    *o /= di;
                }
            }
        }
        Ok(out)
    }

    /// `w(X)·u`, applying the rightmost letter first.
    pub fn apply_word(&self, w: &Word, u: &[Rational]) -> Result<Vec<Rational>> {
        let mut cur = u.to_vec();
        for &l in w.letters().iter().rev() {
            cur = self.apply_letter(l, &cur)?;
        }
        Ok(cur)
    }

    fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            match &self.metric {
                Some(d) => s += &d[i] * x * y,
                None => s += x * y,
            }
        }
        s
    }
}

/// Result of compressing a point onto `V = span{w(X)v : |w| ≤ d}`.
#[derive(Clone, Debug)]
pub struct CompressedPoint {
    /// The compressed tuple acting on coordinates of `V`; its vector is `e₀`.
    pub point: MatrixPoint,
    /// Basis of `V` in the ambient coordinates, mutually orthogonal for the
    /// ambient metric.
    pub basis: Vec<Vec<Rational>>,
    pub ambient: usize,
}

impl CompressedPoint {
    /// Maps a coordinate vector on `V` back to the ambient space.
    pub fn embed(&self, coords: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }
}

/// Compression to the finite-dimensional subspace reached from `v` by words
/// of length at most `d`.
///
/// The basis is built by exact Gram–Schmidt without normalization, so the
/// projection onto `V` is orthogonal for the point's metric and the
/// compressed tuple carries the induced diagonal metric. Every `r` of degree
/// at most `d` then satisfies `embed(r(X')v') = r(X)v`, starred letters
/// included.
pub fn compress_point(pt: &MatrixPoint, d: usize) -> Result<CompressedPoint> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();

    let push = |u: Vec<Rational>, basis: &mut Vec<Vec<Rational>>, norms: &mut Vec<Rational>| {
        let mut r = u;
        for (b, nb) in basis.iter().zip(norms.iter()) {
            let c = pt.inner(&r, b) / nb;
            if c.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        if r.iter().all(Zero::is_zero) {
            return false;
        }
        let nr = pt.inner(&r, &r);
        basis.push(r);
        norms.push(nr);
        true
    };

    let mut frontier = Vec::new();
    if push(pt.v.clone(), &mut basis, &mut norms) {
        frontier.push(0);
    }
    for _ in 0..d {
        let mut next = Vec::new();
        for &idx in &frontier {
            for l in Letter::all(pt.g()) {
                let u = pt.apply_letter(l, &basis[idx].clone())?;
                if push(u, &mut basis, &mut norms) {
                    next.push(basis.len() - 1);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let k = basis.len();
    let mut mats = Vec::with_capacity(pt.g());
    for x in &pt.mats {
        let mut m = QMat::zeros(k, k);
        for j in 0..k {
            let xb = x.mul_vec(&basis[j]);
            for i in 0..k {
                m[(i, j)] = pt.inner(&xb, &basis[i]) / &norms[i];
            }
        }
        mats.push(m);
    }
    let mut v = vec![Rational::zero(); k];
    if k > 0 {
        v[0] = Rational::one();
    }
    Ok(CompressedPoint {
        point: MatrixPoint {
            mats,
            v,
            metric: Some(norms),
        },
        basis,
        ambient: pt.size(),
    })
}
