//! Sparse rational vectors and incremental reduced row echelon form.
//!
//! Keys are totally ordered; the pivot of a vector is its largest key. A
//! reduced echelon keeps every pivot key out of every other stored vector,
//! so reducing a vector is a single pass over its support.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `target += c * src`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, c: &Rational, src: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        let delta = c * v;
        match target.get_mut(k) {
            Some(t) => {
                *t += delta;
                if t.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                target.insert(k.clone(), delta);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone + Hash> {
    rows: Vec<SparseVec<K>>,
    pivot_of: HashMap<K, usize>,
}

impl<K: Ord + Clone + Hash> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivot_of.contains_key(k)
    }

    pub fn row_for_pivot(&self, k: &K) -> Option<&SparseVec<K>> {
        self.pivot_of.get(k).map(|&i| &self.rows[i])
    }

    pub fn pivot(&self, i: usize) -> &K {
        self.rows[i].keys().next_back().expect("stored rows are nonzero")
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        for (k, c) in v {
            if let Some(&i) = self.pivot_of.get(k) {
                let c = -c.clone();
                axpy(&mut out, &c, &self.rows[i]);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        v.iter().all(|(k, c)| {
            // quick reject: a non-pivot key that no stored row touches
            c.is_zero() || self.pivot_of.contains_key(k) || self.rows.iter().any(|r| r.contains_key(k))
        }) && self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns the index of the new row when the span grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<usize> {
        let mut r = self.reduce(v);
        let (pk, lead) = match r.iter().next_back() {
            Some((k, c)) => (k.clone(), c.clone()),
            None => return None,
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for c in r.values_mut() {
                *c *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(&pk).cloned() {
                let c = -c;
                axpy(row, &c, &r);
            }
        }
        self.rows.push(r);
        let idx = self.rows.len() - 1;
        self.pivot_of.insert(pk, idx);
        Some(idx)
    }

    pub fn extend<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec<K>>)
    where
        K: 'a,
    {
        for v in vs {
            self.insert(v);
        }
    }

    pub fn into_rows(self) -> Vec<SparseVec<K>> {
        self.rows
    }
}

/// Key used when tracking how each echelon row was combined from inputs:
/// data keys sort above tags so pivots land on data first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tagged<K> {
    Tag(usize),
    Data(K),
}

/// Basis of `{c : Σ c_i v_i = 0}`, each kernel vector normalized so that its
/// largest tag has coefficient one.
pub fn kernel<K: Ord + Clone + Hash>(vs: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut ech: Echelon<Tagged<K>> = Echelon::new();
    for (i, v) in vs.iter().enumerate() {
        let mut row: SparseVec<Tagged<K>> = v
            .iter()
            .map(|(k, c)| (Tagged::Data(k.clone()), c.clone()))
            .collect();
        row.insert(Tagged::Tag(i), Rational::one());
        ech.insert(&row);
    }
    let mut out: Vec<SparseVec<usize>> = ech
        .into_rows()
        .into_iter()
        .filter(|r| matches!(r.keys().next_back(), Some(Tagged::Tag(_))))
        .map(|r| {
            r.into_iter()
                .map(|(k, c)| match k {
                    Tagged::Tag(i) => (i, c),
                    Tagged::Data(_) => unreachable!("data part cancelled"),
                })
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.keys().next_back().cmp(&b.keys().next_back()));
    out
}

/// One solution of `Σ_k rows[i][k] x_k = rhs[i]` in `n` unknowns, free
/// unknowns set to zero; `None` if the system is inconsistent.
pub fn solve(rows: &[SparseVec<usize>], rhs: &[Rational], n: usize) -> Option<Vec<Rational>> {
    // the right-hand side sorts below every unknown, so it only becomes a
    // pivot in a contradictory row
    let mut ech: Echelon<Tagged<usize>> = Echelon::new();
    for (r, b) in rows.iter().zip(rhs) {
        let mut v: SparseVec<Tagged<usize>> = r
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&k, c)| (Tagged::Data(k), c.clone()))
            .collect();
        if !b.is_zero() {
            v.insert(Tagged::Tag(0), -b.clone());
        }
        ech.insert(&v);
    }
    let mut x = vec![Rational::zero(); n];
    for row in ech.rows() {
        match row.keys().next_back() {
            Some(Tagged::Data(k)) => {
                x[*k] = row.get(&Tagged::Tag(0)).map_or_else(Rational::zero, |c| -c.clone());
            }
            _ => return None,
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn sv(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, rat(c))).collect()
    }

    #[test]
    fn reduced_form_keeps_pivots_private() {
        let mut e = Echelon::new();
        e.insert(&sv(&[(1, 1), (2, 1)]));
        e.insert(&sv(&[(1, 1)]));
        // second insertion pivots on key 1 and clears it from the first row
        assert_eq!(e.rows()[0], sv(&[(2, 1)]));
        assert_eq!(e.rows()[1], sv(&[(1, 1)]));
        assert!(e.insert(&sv(&[(1, 3), (2, -2)])).is_none());
    }

    #[test]
    fn kernel_of_dependent_vectors() {
        let vs = vec![sv(&[(1, 1)]), sv(&[(1, 2)]), sv(&[(2, 1)])];
        let k = kernel(&vs);
        assert_eq!(k.len(), 1);
        let expect: SparseVec<usize> = [(0, rat(-2)), (1, rat(1))].into_iter().collect();
        assert_eq!(k[0], expect);
        let _ = frac(1, 2);
    }

    #[test]
    fn sparse_solve() {
        let rows: Vec<SparseVec<usize>> = vec![
            [(0, rat(1)), (1, rat(1))].into_iter().collect(),
            [(1, rat(2)), (2, rat(1))].into_iter().collect(),
        ];
        let x = solve(&rows, &[rat(3), rat(4)], 3).unwrap();
        assert_eq!(&x[0] + &x[1], rat(3));
        assert_eq!(&x[1] * rat(2) + &x[2], rat(4));
        let bad: Vec<SparseVec<usize>> = vec![
            [(0, rat(1))].into_iter().collect(),
            [(0, rat(2))].into_iter().collect(),
        ];
        assert!(solve(&bad, &[rat(1), rat(1)], 1).is_none());
        assert!(solve(&bad, &[rat(1), frac(2, 1)], 1).is_some());
    }
}
