//! Row Hermite normal form: the canonical generator of a left ideal
//! `M_n(ℚ[x])·G`.

use super::unipoly::{UniPoly, UniPolyMatrix};

fn row_sub(m: &mut UniPolyMatrix, target: usize, src: usize, q: &UniPoly) {
    for j in 0..m.cols() {
        let v = m.get(target, j) - &(q * m.get(src, j));
        m.set(target, j, v);
    }
}

fn row_swap(m: &mut UniPolyMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

/// `H = U·G` with `U` unimodular, `H` upper staircase, monic pivots and
/// entries above each pivot of lower degree than it. Zero rows go last.
/// Two matrices generate the same left ideal iff their forms agree.
pub fn hermite_form(g: &UniPolyMatrix) -> UniPolyMatrix {
    let mut m = g.clone();
    let rows = m.rows();
    let mut r = 0;
    for j in 0..m.cols() {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !m.get(i, j).is_zero())
                .min_by_key(|&i| m.get(i, j).degree());
            let Some(p) = best else { break };
            row_swap(&mut m, r, p);
            let mut done = true;
            for i in r + 1..rows {
                if m.get(i, j).is_zero() {
                    continue;
                }
                let (q, rem) = m.get(i, j).div_rem(m.get(r, j));
                row_sub(&mut m, i, r, &q);
                done &= rem.is_zero();
            }
            if done {
                break;
            }
        }
        if m.get(r, j).is_zero() {
            continue;
        }
        let lead = m.get(r, j).lead().cloned().expect("nonzero pivot");
        let inv = UniPoly::constant(lead.recip());
        for k in 0..m.cols() {
            let v = m.get(r, k) * &inv;
            m.set(r, k, v);
        }
        for i in 0..r {
            let (q, _) = m.get(i, j).div_rem(m.get(r, j));
            if !q.is_zero() {
                row_sub(&mut m, i, r, &q);
            }
        }
        r += 1;
    }
    m
}
