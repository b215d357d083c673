//! Degree-truncated linear algebra on left ideals: echelon spans of
//! polynomials, ideal normalization, membership and complements.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::ncpoly::{Letter, NCPoly, Word};
use crate::rational::Rational;
use crate::sparse::{kernel, Echelon, SparseVec};

/// Reduced echelon basis of a span of polynomials. The pivot of an element
/// is its largest monomial, so elements of pivot degree at most `e` form a
/// basis of the span's intersection with polynomials of degree at most `e`.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    ech: Echelon<Word>,
}

impl SpanBasis {
    pub fn new() -> SpanBasis {
        SpanBasis::default()
    }

    /// Inserts `p`; returns the new reduced element when the span grew.
    pub fn insert(&mut self, p: &NCPoly) -> Option<NCPoly> {
        self.ech
            .insert(p.terms())
            .map(|i| NCPoly::from_map(self.ech.rows()[i].clone()))
    }

    pub fn reduce(&self, p: &NCPoly) -> NCPoly {
        NCPoly::from_map(self.ech.reduce(p.terms()))
    }

    pub fn contains(&self, p: &NCPoly) -> bool {
        self.ech.reduce(p.terms()).is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ech.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ech.is_empty()
    }

    pub fn elements(&self) -> Vec<NCPoly> {
        self.ech
            .rows()
            .iter()
            .map(|r| NCPoly::from_map(r.clone()))
            .collect()
    }

    /// Elements sorted by pivot.
    pub fn sorted_elements(&self) -> Vec<NCPoly> {
        let mut v = self.elements();
        v.sort_by(|a, b| a.terms().keys().next_back().cmp(&b.terms().keys().next_back()));
        v
    }

    pub fn pivot_words(&self) -> Vec<Word> {
        let mut w: Vec<Word> = (0..self.ech.len()).map(|i| self.ech.pivot(i).clone()).collect();
        w.sort();
        w
    }

    pub fn is_pivot(&self, w: &Word) -> bool {
        self.ech.is_pivot(w)
    }

    /// The element whose pivot is `w`.
    pub fn element_for_pivot(&self, w: &Word) -> Option<NCPoly> {
        self.ech.row_for_pivot(w).map(|r| NCPoly::from_map(r.clone()))
    }

    pub fn degree_bound(&self) -> Option<usize> {
        (0..self.ech.len()).map(|i| self.ech.pivot(i).len()).max()
    }

    /// Basis of the span intersected with degree at most `e`.
    pub fn restrict(&self, e: usize) -> SpanBasis {
        let mut out = SpanBasis::new();
        for r in self.ech.rows() {
            if r.keys().next_back().is_some_and(|w| w.len() <= e) {
                out.ech.insert(r);
            }
        }
        out
    }

    /// `dims[k]` = number of elements whose pivot has degree `k`.
    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree_bound().map_or(0, |d| d + 1)];
        for i in 0..self.ech.len() {
            out[self.ech.pivot(i).len()] += 1;
        }
        out
    }

    pub fn same_span(&self, other: &SpanBasis) -> bool {
        self.dim() == other.dim() && other.elements().iter().all(|p| self.contains(p))
    }
}

pub fn echelonize(polys: &[NCPoly]) -> SpanBasis {
    let mut b = SpanBasis::new();
    for p in polys {
        b.insert(p);
    }
    b
}

/// Exact intersection of two spans.
pub fn sym_intersection(a: &SpanBasis, b: &SpanBasis) -> SpanBasis {
    let ea = a.elements();
    let eb = b.elements();
    let vs: Vec<SparseVec<Word>> = ea
        .iter()
        .chain(eb.iter())
        .map(|p| p.terms().clone())
        .collect();
    let mut out = SpanBasis::new();
    for k in kernel(&vs) {
        let mut acc = NCPoly::zero();
        for (i, c) in k {
            if i < ea.len() {
                acc = &acc + &ea[i].scale(&c);
            }
        }
        out.insert(&acc);
    }
    out
}

/// A left ideal presented by degree-`d` elements with independent leading
/// polynomials (`pivots`) and a basis of its degree `< d` part (`low`), so
/// that `I = ⊕ 𝒜·pᵢ ⊕ I_{d−1}`.
#[derive(Clone, Debug)]
pub struct NormalizedIdeal {
    g: usize,
    d: usize,
    generators: Vec<NCPoly>,
    pivots: Vec<NCPoly>,
    lead_index: BTreeMap<Word, usize>,
    low: SpanBasis,
    unit: bool,
}

impl NormalizedIdeal {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[NCPoly] {
        &self.generators
    }

    pub fn pivots(&self) -> &[NCPoly] {
        &self.pivots
    }

    pub fn low(&self) -> &SpanBasis {
        &self.low
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    /// Leading polynomials of the pivots.
    pub fn leading_polys(&self) -> Vec<NCPoly> {
        self.pivots
            .iter()
            .map(|p| p.homogeneous_part(self.d).into_poly())
            .collect()
    }

    /// Basis of `I_d`: pivots followed by the low part.
    pub fn basis_d(&self) -> Vec<NCPoly> {
        let mut v = self.pivots.clone();
        v.extend(self.low.elements());
        v
    }

    /// Polynomials generating the same ideal, pivots then low basis.
    pub fn presentation(&self) -> Vec<NCPoly> {
        if self.unit {
            return vec![NCPoly::one()];
        }
        let mut v = self.pivots.clone();
        v.extend(self.low.sorted_elements());
        v
    }

    pub fn dim_low(&self) -> usize {
        if self.unit {
            Word::count_up_to(self.g, self.d.saturating_sub(1))
        } else {
            self.low.dim()
        }
    }

    /// Splits `q = Σ m·pᵢ-combination + Σ m·gₘ + u` where each `gₘ` is
    /// homogeneous of degree `d` with no pivot monomials, and `u` has degree
    /// `< d`. Returns `(Σ m·gₘ, u)`; `q ∈ I` iff both the first part is zero
    /// and `u ∈ I_{d−1}`.
    fn divide(&self, q: &NCPoly) -> (NCPoly, NCPoly) {
        let d = self.d;
        let mut r = q.clone();
        let mut obstruction = NCPoly::zero();
        while let Some(deg) = r.degree() {
            if deg < d {
                break;
            }
            let k = deg - d;
            let smallest = Word::from_letters(std::iter::repeat_n(Letter::from_code(0), deg));
            let steps: Vec<(Word, usize, Rational)> = r
                .terms()
                .range(smallest..)
                .filter_map(|(w, c)| {
                    let (m, s) = w.split_at(k);
                    self.lead_index.get(&s).map(|&i| (m, i, c.clone()))
                })
                .collect();
            for (m, i, c) in steps {
                for (w, x) in self.pivots[i].terms() {
                    r.add_term(m.concat(w), -(&c * x));
                }
            }
            // whatever is left at the top degree is not reachable
            let top = r.homogeneous_part(deg).into_poly();
            if !top.is_zero() {
                obstruction = &obstruction + &top;
                r = &r - &top;
            }
        }
        (obstruction, r)
    }

    pub fn member(&self, q: &NCPoly) -> bool {
        if self.unit {
            return true;
        }
        let (obstruction, rest) = self.divide(q);
        obstruction.is_zero() && self.low.contains(&rest)
    }

    /// Whether `q ∈ I ⊕ 𝒜_{d−1}`. Elements outside cannot be reached by any
    /// sum of squares landing in `I + I*`.
    pub fn within_low_degree_of(&self, q: &NCPoly) -> bool {
        self.unit || self.divide(q).0.is_zero()
    }

    /// Reduction of `q` modulo `I` into `𝒜G ⊕ U` form (obstruction part plus
    /// low remainder reduced against `I_{d−1}`).
    pub fn normal_form(&self, q: &NCPoly) -> NCPoly {
        if self.unit {
            return NCPoly::zero();
        }
        let (o, rest) = self.divide(q);
        &o + &self.low.reduce(&rest)
    }

    /// Basis of the leading space at degree `big_d ≥ d`:
    /// `span{m·pᵢ' : |m| = big_d − d}`.
    pub fn leading_space(&self, big_d: usize) -> Result<SpanBasis> {
        if big_d < self.d {
            return Err(Error::DegreeTooSmall {
                requested: big_d,
                bound: self.d,
            });
        }
        let lead = self.leading_polys();
        let mut out = SpanBasis::new();
        for m in Word::all_of_len(self.g, big_d - self.d) {
            for p in &lead {
                out.insert(&p.left_mul_word(&m));
            }
        }
        Ok(out)
    }
}

/// Normalizes with `g` taken from the generators and `d` their maximum degree.
pub fn normalize_ideal(gens: &[NCPoly]) -> Result<NormalizedIdeal> {
    let g = gens.iter().map(NCPoly::max_var).max().unwrap_or(0).max(1);
    let d = gens.iter().filter_map(NCPoly::degree).max().ok_or(Error::EmptyGenerators)?;
    normalize_ideal_at(gens, g, d)
}

/// Computes `I_d` for the left ideal generated by `gens` by closing the span
/// under left multiplication by letters, processing lower degrees first.
pub fn normalize_ideal_at(gens: &[NCPoly], g: usize, d: usize) -> Result<NormalizedIdeal> {
    let nonzero: Vec<NCPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let top = nonzero.iter().filter_map(NCPoly::degree).max().unwrap();
    if top > d {
        return Err(Error::DegreeTooSmall {
            requested: d,
            bound: top,
        });
    }
    let g = g.max(nonzero.iter().map(NCPoly::max_var).max().unwrap_or(0)).max(1);

    let mut basis = SpanBasis::new();
    // buckets by degree; always pop from the lowest nonempty one
    let mut queue: Vec<VecDeque<NCPoly>> = vec![VecDeque::new(); d + 1];
    for p in &nonzero {
        queue[p.degree().unwrap()].push_back(p.clone());
    }
    let mut unit = false;
    'outer: loop {
        let Some(k) = queue.iter().position(|q| !q.is_empty()) else {
            break;
        };
        let p = queue[k].pop_front().unwrap();
        if let Some(r) = basis.insert(&p) {
            let deg = r.degree().unwrap();
            if deg == 0 {
                unit = true;
                break 'outer;
            }
            if deg < d {
                for l in Letter::all(g) {
                    queue[deg + 1].push_back(r.left_mul_word(&Word::letter(l)));
                }
            }
        }
    }

    if unit {
        let mut low = SpanBasis::new();
        low.insert(&NCPoly::one());
        return Ok(NormalizedIdeal {
            g,
            d,
            generators: nonzero,
            pivots: Vec::new(),
            lead_index: BTreeMap::new(),
            low,
            unit: true,
        });
    }

    let mut pivots = Vec::new();
    let mut pivot_words = Vec::new();
    let mut low = SpanBasis::new();
    for p in basis.sorted_elements() {
        let w = p.terms().keys().next_back().unwrap().clone();
        if w.len() == d {
            pivots.push(p);
            pivot_words.push(w);
        } else {
            low.insert(&p);
        }
    }
    let lead_index = pivot_words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    Ok(NormalizedIdeal {
        g,
        d,
        generators: nonzero,
        pivots,
        lead_index,
        low,
        unit: false,
    })
}

/// Monomial complement `V` with `𝒜_{d−1} = I_{d−1} ⊕ V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    words: Vec<Word>,
}

impl Complement {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn polys(&self) -> Vec<NCPoly> {
        self.words.iter().cloned().map(NCPoly::word).collect()
    }

    /// Same complement listed in a caller-chosen order; `order` must be a
    /// permutation of the current words.
    pub fn reordered(&self, order: Vec<Word>) -> Result<Complement> {
        let mut a = self.words.clone();
        let mut b = order.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::ShapeMismatch(
                "requested order is not a permutation of the complement".into(),
            ));
        }
        Ok(Complement { words: order })
    }
}

pub fn complement_low(n: &NormalizedIdeal) -> Complement {
    if n.unit {
        return Complement { words: Vec::new() };
    }
    let words = Word::all_up_to(n.g, n.d.saturating_sub(1))
        .into_iter()
        .filter(|w| !n.low.is_pivot(w))
        .collect();
    Complement { words }
}

/// Monomials of degree `d` that are not pivot monomials of the leading
/// span: a complement `G` of `I_d^ℓ` in the homogeneous degree-`d` part.
pub fn leading_complement(n: &NormalizedIdeal) -> Vec<Word> {
    Word::all_of_len(n.g, n.d)
        .into_iter()
        .filter(|w| !n.lead_index.contains_key(w))
        .collect()
}

/// Greedy subset of `gens` (by ascending degree) generating the same ideal.
pub fn prune_generators(gens: &[NCPoly]) -> Result<Vec<NCPoly>> {
    let mut sorted: Vec<NCPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    if sorted.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    sorted.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.terms().len().cmp(&b.terms().len())));
    let g = sorted.iter().map(NCPoly::max_var).max().unwrap_or(0).max(1);
    let mut kept: Vec<NCPoly> = Vec::new();
    let mut current: Option<NormalizedIdeal> = None;
    for p in sorted {
        let dp = p.degree().unwrap();
        // membership by division is valid above the normalization degree
        let redundant = current.as_ref().is_some_and(|n| n.member(&p));
        if !redundant {
            kept.push(p);
            current = Some(normalize_ideal_at(&kept, g, dp)?);
        }
    }
    Ok(kept)
}

/// Two ideals are equal iff each generator of one is a member of the other.
pub fn same_ideal(a: &[NCPoly], b: &[NCPoly]) -> Result<bool> {
    let g = a.iter().chain(b).map(NCPoly::max_var).max().unwrap_or(0).max(1);
    let da = a.iter().filter_map(NCPoly::degree).max().ok_or(Error::EmptyGenerators)?;
    let db = b.iter().filter_map(NCPoly::degree).max().ok_or(Error::EmptyGenerators)?;
    let na = normalize_ideal_at(a, g, da)?;
    let nb = normalize_ideal_at(b, g, db)?;
    Ok(b.iter().all(|p| na.member(p)) && a.iter().all(|p| nb.member(p)))
}

/// Brute-force membership: echelonize `m·gen` for all words with
/// `deg(m·gen) ≤ deg q + slack` and reduce. Exponential; for cross-checks.
pub fn member_bruteforce(gens: &[NCPoly], q: &NCPoly, g: usize, slack: usize) -> bool {
    if q.is_zero() {
        return true;
    }
    let top = q.degree().unwrap() + slack;
    let mut b = SpanBasis::new();
    for p in gens.iter().filter(|p| !p.is_zero()) {
        let dp = p.degree().unwrap();
        if dp > top {
            continue;
        }
        for m in Word::all_up_to(g, top - dp) {
            b.insert(&p.left_mul_word(&m));
        }
    }
    b.contains(q)
}
