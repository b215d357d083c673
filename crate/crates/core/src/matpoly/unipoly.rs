use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::qmat::QMat;
use crate::rational::Rational;

/// Polynomial in one commuting variable; coefficients stored from the
/// constant term upward with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    c: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> UniPoly {
        UniPoly::from_coeffs(vec![q])
    }

    pub fn x() -> UniPoly {
        UniPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `c · x^k`.
    pub fn monomial(c: Rational, k: usize) -> UniPoly {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        UniPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<Rational>) -> UniPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly { c }
    }

    /// `Π (x − r)`.
    pub fn from_roots(roots: &[Rational]) -> UniPoly {
        roots.iter().fold(UniPoly::one(), |acc, r| {
            &acc * &UniPoly::from_coeffs(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.c.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.c.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(One::is_one)
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> UniPoly {
        UniPoly::from_coeffs(self.c.iter().map(|x| x * q).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for x in self.c.iter().rev() {
            acc = acc * a + x;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.c[dd].recip();
        let mut r = self.c.clone();
        let n = self.c.len();
        if n <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); n - dd];
        for k in (dd..n).rev() {
            if r[k].is_zero() {
                continue;
            }
            let f = &r[k] * &lead_inv;
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k - dd + j] -= &f * dj;
                }
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::from_coeffs(q), UniPoly::from_coeffs(r))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic squarefree part `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return if self.is_zero() { UniPoly::zero() } else { UniPoly::one() };
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        (0..n).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    /// Sign of the value as `x → +∞`.
    pub fn sign_at_pos_inf(&self) -> i32 {
        self.lead().map_or(0, |l| if l.is_positive() { 1 } else { -1 })
    }

    /// Sign of the value as `x → −∞`.
    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = self.sign_at_pos_inf();
        if self.degree().unwrap_or(0) % 2 == 1 {
            -s
        } else {
            s
        }
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_unipoly(self))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_unipoly(self))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            c: self.c.iter().map(|x| -x.clone()).collect(),
        }
    }
}

/// Rectangular matrix of univariate polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<UniPoly>,
}

impl UniPolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> UniPolyMatrix {
        UniPolyMatrix {
            rows,
            cols,
            data: vec![UniPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> UniPolyMatrix {
        let mut m = UniPolyMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, UniPoly::one());
        }
        m
    }

    pub fn diag(entries: &[UniPoly]) -> UniPolyMatrix {
        let n = entries.len();
        let mut m = UniPolyMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<UniPoly>>) -> UniPolyMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        UniPolyMatrix { rows: r, cols: c, data }
    }

    pub fn from_qmat(m: &QMat) -> UniPolyMatrix {
        UniPolyMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| UniPoly::constant(m[(i, j)].clone()))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: UniPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[UniPoly] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(UniPoly::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(UniPoly::degree).max()
    }

    pub fn transpose(&self) -> UniPolyMatrix {
        let mut t = UniPolyMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &UniPolyMatrix) -> UniPolyMatrix {
        assert_eq!(self.cols, o.rows, "inner dimensions differ");
        let mut out = UniPolyMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        let s = cur + &(a * b);
                        out.set(i, j, s);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &UniPolyMatrix) -> UniPolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        UniPolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn eval(&self, a: &Rational) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(a))
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> UniPoly {
        assert!(self.is_square());
        fn rec(m: &UniPolyMatrix, rows: &[usize], cols: &[usize]) -> UniPoly {
            if rows.is_empty() {
                return UniPoly::one();
            }
            let r = rows[0];
            let mut acc = UniPoly::zero();
            for (k, &c) in cols.iter().enumerate() {
                let e = m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = rec(m, &rows[1..], &sub_cols);
                let term = e * &minor;
                acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        rec(self, &idx, &idx)
    }

    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut UniPoly {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for UniPolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_unipoly_matrix(self))
    }
}

impl fmt::Display for UniPolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_unipoly_matrix(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 1]).scale(&rat(3))), p(&[1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[0, 1])), UniPoly::one());
    }

    #[test]
    fn squarefree() {
        // (x - 1)^2 (x + 2)
        let f = &p(&[-1, 1]).pow(2) * &p(&[2, 1]);
        assert_eq!(f.squarefree_part(), &p(&[-1, 1]) * &p(&[2, 1]));
        assert_eq!(p(&[5]).squarefree_part(), UniPoly::one());
    }

    #[test]
    fn determinant_and_eval() {
        let m = UniPolyMatrix::from_rows(vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[0]), p(&[0, 1])]]);
        assert_eq!(m.det(), p(&[0, 0, 1]));
        assert_eq!(m.eval(&frac(1, 2))[(0, 0)], frac(1, 2));
    }
}
