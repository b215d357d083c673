use num_traits::{One, Zero};

use super::unipoly::{UniPoly, UniPolyMatrix};
use crate::rational::Rational;

/// `P = U · D · V` with `U`, `V` unimodular and `D` diagonal, each nonzero
/// diagonal entry monic and dividing the next. `v_inv` is `V⁻¹`, kept so
/// callers can move between `P` and `D` without inverting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: UniPolyMatrix,
    pub d: UniPolyMatrix,
    pub v: UniPolyMatrix,
    pub v_inv: UniPolyMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<UniPoly> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

struct State {
    a: UniPolyMatrix,
    u: UniPolyMatrix,
    v: UniPolyMatrix,
    v_inv: UniPolyMatrix,
}

impl State {
    /// `row_i += q · row_t`.
    fn row_axpy(&mut self, i: usize, q: &UniPoly, t: usize) {
        for j in 0..self.a.cols() {
            let add = q * self.a.get(t, j);
            if !add.is_zero() {
                let e = self.a.entry_mut(i, j);
                *e = &*e + &add;
            }
        }
        // U ← U · (I − q e_i e_tᵀ)
        for r in 0..self.u.rows() {
            let sub = q * self.u.get(r, i);
            if !sub.is_zero() {
                let e = self.u.entry_mut(r, t);
                *e = &*e - &sub;
            }
        }
    }

    /// `col_j += q · col_t`.
    fn col_axpy(&mut self, j: usize, q: &UniPoly, t: usize) {
        for i in 0..self.a.rows() {
            let add = q * self.a.get(i, t);
            if !add.is_zero() {
                let e = self.a.entry_mut(i, j);
                *e = &*e + &add;
            }
        }
        // V ← (I − q e_t e_jᵀ) · V
        for c in 0..self.v.cols() {
            let sub = q * self.v.get(j, c);
            if !sub.is_zero() {
                let e = self.v.entry_mut(t, c);
                *e = &*e - &sub;
            }
        }
        // V⁻¹ ← V⁻¹ · (I + q e_t e_jᵀ)
        for r in 0..self.v_inv.rows() {
            let add = q * self.v_inv.get(r, t);
            if !add.is_zero() {
                let e = self.v_inv.entry_mut(r, j);
                *e = &*e + &add;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        for j in 0..self.a.cols() {
            let x = self.a.get(i, j).clone();
            let y = self.a.get(t, j).clone();
            self.a.set(i, j, y);
            self.a.set(t, j, x);
        }
        for r in 0..self.u.rows() {
            let x = self.u.get(r, i).clone();
            let y = self.u.get(r, t).clone();
            self.u.set(r, i, y);
            self.u.set(r, t, x);
        }
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        if j == t {
            return;
        }
        for i in 0..self.a.rows() {
            let x = self.a.get(i, j).clone();
            let y = self.a.get(i, t).clone();
            self.a.set(i, j, y);
            self.a.set(i, t, x);
        }
        for c in 0..self.v.cols() {
            let x = self.v.get(j, c).clone();
            let y = self.v.get(t, c).clone();
            self.v.set(j, c, y);
            self.v.set(t, c, x);
        }
        for r in 0..self.v_inv.rows() {
            let x = self.v_inv.get(r, j).clone();
            let y = self.v_inv.get(r, t).clone();
            self.v_inv.set(r, j, y);
            self.v_inv.set(r, t, x);
        }
    }

    fn scale_row(&mut self, t: usize, s: &Rational) {
        for j in 0..self.a.cols() {
            let e = self.a.entry_mut(t, j);
            *e = e.scale(s);
        }
        let inv = s.recip();
        for r in 0..self.u.rows() {
            let e = self.u.entry_mut(r, t);
            *e = e.scale(&inv);
        }
    }

    /// Position of a nonzero entry of least degree in the trailing block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                if let Some(deg) = self.a.get(i, j).degree() {
                    if best.is_none_or(|(b, _, _)| deg < b) {
                        best = Some((deg, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Smith normal form by Euclidean row and column reduction over `ℚ[x]`.
pub fn smith_normal_form(p: &UniPolyMatrix) -> SmithForm {
    let (n, m) = (p.rows(), p.cols());
    let mut st = State {
        a: p.clone(),
        u: UniPolyMatrix::identity(n),
        v: UniPolyMatrix::identity(m),
        v_inv: UniPolyMatrix::identity(m),
    };
    for t in 0..n.min(m) {
        loop {
            let Some((i, j)) = st.min_entry(t) else {
                break;
            };
            st.swap_rows(t, i);
            st.swap_cols(t, j);
            let pivot = st.a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..n {
                if st.a.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = st.a.get(i, t).div_rem(&pivot);
                st.row_axpy(i, &-&q, t);
                dirty |= !r.is_zero();
            }
            for j in t + 1..m {
                if st.a.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = st.a.get(t, j).div_rem(&pivot);
                st.col_axpy(j, &-&q, t);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| !pivot.divides(st.a.get(i, j))));
            match bad {
                Some(i) => st.row_axpy(t, &UniPoly::one(), i),
                None => break,
            }
        }
        if let Some(l) = st.a.get(t, t).lead().cloned() {
            if !l.is_one() {
                st.scale_row(t, &l.recip());
            }
        }
    }
    debug_assert!(st.a.is_diagonal());
    debug_assert!(st.a.entries().iter().all(|e| e.is_zero() || e.is_monic()));
    SmithForm {
        u: st.u,
        d: st.a,
        v: st.v,
        v_inv: st.v_inv,
    }
}

/// Checks every defining property exactly; returns a description of the
/// first violation.
pub fn verify_smith(p: &UniPolyMatrix, s: &SmithForm) -> Result<(), String> {
    if s.u.mul(&s.d).mul(&s.v) != *p {
        return Err("U·D·V differs from P".into());
    }
    if !s.d.is_diagonal() {
        return Err("D is not diagonal".into());
    }
    let diag = s.diagonal();
    for (k, e) in diag.iter().enumerate() {
        if !e.is_zero() && !e.is_monic() {
            return Err(format!("d_{k} is not monic"));
        }
    }
    for w in diag.windows(2) {
        if !w[0].divides(&w[1]) {
            return Err("divisibility chain broken".into());
        }
    }
    for (name, m) in [("U", &s.u), ("V", &s.v)] {
        let det = m.det();
        if det.is_zero() || !det.is_constant() {
            return Err(format!("det {name} is not a nonzero constant"));
        }
    }
    let n = s.v.rows();
    if s.v.mul(&s.v_inv) != UniPolyMatrix::identity(n) {
        return Err("V·V⁻¹ is not the identity".into());
    }
    let _ = Rational::zero();
    Ok(())
}
