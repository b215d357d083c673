//! Does a span of rational symmetric matrices contain a nonzero PSD matrix?
//!
//! Numeric alternating projections propose a candidate, which is rounded to
//! rationals and verified exactly. The answer is either a rational PSD
//! member (with its LDLᵀ factorization) or a rational positive definite
//! matrix orthogonal to the span; if neither can be certified the result is
//! [`Error::Undecided`].

use std::cell::OnceCell;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{self, ldl_pd, ldl_psd, Ldl, LdlOutcome};
use crate::ncpoly::NCPoly;
use crate::qmat::QMat;
use crate::rational::{approximate, Rational};
use crate::sparse::{self, kernel, Echelon, SparseVec};

#[derive(Clone, Debug, PartialEq)]
pub struct FeasConfig {
    pub max_iterations: usize,
    pub numeric_tolerance: f64,
    pub rounding_denominator_cap: u64,
    pub random_seed: u64,
}

impl Default for FeasConfig {
    fn default() -> Self {
        FeasConfig {
            max_iterations: 10_000,
            numeric_tolerance: 1e-9,
            rounding_denominator_cap: 1_000_000,
            random_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibleCert {
    /// Coordinates of `b` in the input matrices.
    pub alpha: Vec<Rational>,
    pub b: QMat,
    pub ldl: Ldl,
    /// Columns of `L` with positive pivot, and those pivots:
    /// `b = Σ pivots[k] · rows[k] rows[k]ᵀ`.
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibleCert {
    pub w: QMat,
    pub ldl_pd: Ldl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdCertificate {
    Feasible(FeasibleCert),
    Infeasible(InfeasibleCert),
}

impl PsdCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PsdCertificate::Feasible(_))
    }
}

fn feasible_from(alpha: Vec<Rational>, b: QMat, ldl: Ldl) -> FeasibleCert {
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    for (dk, lk) in ldl.d.iter().zip(&ldl.l) {
        if dk.is_positive() {
            rows.push(lk.clone());
            pivots.push(dk.clone());
        }
    }
    FeasibleCert {
        alpha,
        b,
        ldl,
        rows,
        pivots,
    }
}

/// Re-derives every claim of a certificate from scratch.
pub fn verify_certificate(mats: &[QMat], cert: &PsdCertificate) -> std::result::Result<(), String> {
    match cert {
        PsdCertificate::Feasible(f) => {
            let n = f.b.rows();
            if f.alpha.len() != mats.len() {
                return Err("alpha has the wrong length".into());
            }
            if QMat::combination(&f.alpha, mats, n) != f.b {
                return Err("B is not the stated combination".into());
            }
            if f.b.is_zero() {
                return Err("B is zero".into());
            }
            match ldl_psd(&f.b) {
                LdlOutcome::Psd(l) if l == f.ldl => {}
                LdlOutcome::Psd(_) => return Err("stored factorization differs".into()),
                LdlOutcome::NotPsd => return Err("B is not PSD".into()),
            }
            if !f.ldl.all_nonnegative() || f.ldl.reconstruct(n) != f.b {
                return Err("LDL factorization does not reproduce B".into());
            }
            let mut acc = QMat::zeros(n, n);
            for (d, r) in f.pivots.iter().zip(&f.rows) {
                if !d.is_positive() {
                    return Err("nonpositive pivot among extracted rows".into());
                }
                let outer = QMat::from_fn(n, n, |i, j| &r[i] * &r[j]);
                acc.add_scaled(d, &outer);
            }
            if acc != f.b {
                return Err("rows do not reproduce B".into());
            }
            Ok(())
        }
        PsdCertificate::Infeasible(c) => {
            if !c.w.is_symmetric() {
                return Err("W is not symmetric".into());
            }
            if mats.iter().any(|a| !a.dot(&c.w).is_zero()) {
                return Err("W is not orthogonal to the span".into());
            }
            match ldl_pd(&c.w) {
                Some(l) if l == c.ldl_pd => Ok(()),
                Some(_) => Err("stored factorization differs".into()),
                None => Err("W is not positive definite".into()),
            }
        }
    }
}

/// `q_k = l_k · v` for every positive pivot.
pub fn extract_generators(cert: &FeasibleCert, v: &[NCPoly]) -> Vec<NCPoly> {
    cert.rows
        .iter()
        .map(|row| {
            let mut q = NCPoly::zero();
            for (c, p) in row.iter().zip(v) {
                if !c.is_zero() {
                    q = &q + &p.scale(c);
                }
            }
            q
        })
        .collect()
}

// ---------------------------------------------------------------------------
// faces

/// The problem restricted to a face of the cone. Every PSD member of the
/// caller's span still under consideration is `q B qᵀ` with `B` a PSD member
/// of span(`mats`); `coords` holds the coordinates of each basis matrix in
/// the caller's matrices.
#[derive(Clone, Debug)]
struct Face {
    mats: Vec<QMat>,
    coords: Vec<SparseVec<usize>>,
    /// Number of the caller's matrices.
    m0: usize,
    q: QMat,
}

/// Pieces of a restriction `B r = 0`: the child face, the basis change `Q`
/// of the complement of the `r`s, and a left inverse `P` with `P Q = I`.
struct Restriction {
    child: Face,
    q: QMat,
    p: QMat,
}

impl Face {
    fn full(mats: &[QMat]) -> Face {
        let m = mats.len();
        let n = mats.first().map_or(0, QMat::rows);
        Face {
            mats: mats.to_vec(),
            coords: (0..m).map(|t| SparseVec::from([(t, Rational::one())])).collect(),
            m0: m,
            q: QMat::identity(n),
        }
    }

    fn size(&self) -> usize {
        self.q.cols()
    }

    /// Keeps the members with `B r = 0` for every `r` and rewrites them on
    /// the orthogonal complement of the `r`s.
    fn restrict(&self, rs: &[Vec<Rational>]) -> Restriction {
        let k = self.size();
        let vs: Vec<SparseVec<(usize, usize)>> = self
            .mats
            .iter()
            .map(|a| {
                let mut v = SparseVec::new();
                for (t, r) in rs.iter().enumerate() {
                    let nz: Vec<usize> = (0..k).filter(|&i| !r[i].is_zero()).collect();
                    let col = if let [j] = nz[..] {
                        (0..k)
                            .map(|i| if r[j].is_one() { a[(i, j)].clone() } else { &a[(i, j)] * &r[j] })
                            .collect()
                    } else {
                        a.mul_vec(r)
                    };
                    for (i, x) in col.into_iter().enumerate() {
                        if !x.is_zero() {
                            v.insert((t, i), x);
                        }
                    }
                }
                v
            })
            .collect();
        let cols = linalg::kernel(rs.to_vec(), k);
        let q = QMat::from_fn(k, cols.len(), |i, j| cols[j][i].clone());
        let qt = q.transpose();
        let sel = selection(&q);
        let p = match sel {
            Some(_) => qt.clone(),
            None => inverse(&qt.mul(&q)).mul(&qt),
        };
        let pt = p.transpose();
        let mut mats = Vec::new();
        let mut coords = Vec::new();
        for kv in kernel(&vs) {
            let mut a = QMat::zeros(k, k);
            let mut c = SparseVec::new();
            for (t, x) in kv {
                a.add_scaled(&x, &self.mats[t]);
                sparse::axpy(&mut c, &x, &self.coords[t]);
            }
            mats.push(match &sel {
                Some(idx) => QMat::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])].clone()),
                None => p.mul(&a).mul(&pt),
            });
            coords.push(c);
        }
        Restriction {
            child: Face {
                mats,
                coords,
                m0: self.m0,
                q: self.q.mul(&q),
            },
            q,
            p,
        }
    }
}

/// Row positions when every column of `q` is a standard unit vector.
fn selection(q: &QMat) -> Option<Vec<usize>> {
    (0..q.cols())
        .map(|j| {
            let nz: Vec<usize> = (0..q.rows()).filter(|&i| !q[(i, j)].is_zero()).collect();
            (nz.len() == 1 && q[(nz[0], j)].is_one()).then(|| nz[0])
        })
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if j == i { Rational::one() } else { Rational::zero() }).collect()
}

/// Inverse of a nonsingular matrix, through the reduced echelon form of
/// `[A | I]`.
fn inverse(a: &QMat) -> QMat {
    let n = a.rows();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend(unit(n, i));
            r
        })
        .collect();
    let (r, pivots) = linalg::rref(rows);
    assert!(r.len() == n && pivots.iter().enumerate().all(|(i, &c)| i == c), "singular matrix");
    QMat::from_fn(n, n, |i, j| r[i][n + j].clone())
}

/// Projects onto the orthogonal complement of a span. The oblique variant
/// only moves the pivot entries of a reduced echelon basis and is cheap;
/// the orthogonal one needs the inverse Gram matrix and is kept for small
/// spans.
struct PerpFixer {
    rows: Vec<SparseVec<(usize, usize)>>,
    mats: Vec<QMat>,
    gram_inverse: OnceCell<QMat>,
}

const ORTHOGONAL_LIMIT: usize = 120;

impl PerpFixer {
    fn new(mats: &[QMat]) -> PerpFixer {
        let mut ech: Echelon<(usize, usize)> = Echelon::new();
        for a in mats {
            let n = a.rows();
            let v: SparseVec<(usize, usize)> = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[(i, j)].is_zero())
                .map(|(i, j)| ((i, j), a[(i, j)].clone()))
                .collect();
            ech.insert(&v);
        }
        PerpFixer {
            rows: ech.into_rows(),
            mats: independent(mats),
            gram_inverse: OnceCell::new(),
        }
    }

    fn oblique(&self, x: &QMat) -> QMat {
        let mut w = x.clone();
        for row in &self.rows {
            let mut ip = Rational::zero();
            for (&(i, j), c) in row {
                let e = c * &x[(i, j)];
                ip += if i == j { e.clone() } else { &e + &e };
            }
            if ip.is_zero() {
                continue;
            }
            let (&(i, j), lead) = row.iter().next_back().expect("nonzero row");
            let weight = if i == j { lead.clone() } else { lead + lead };
            let delta = ip / weight;
            w[(i, j)] -= &delta;
            if i != j {
                w[(j, i)] -= &delta;
            }
        }
        w
    }

    fn orthogonal(&self, x: &QMat) -> QMat {
        let m = self.mats.len();
        let ginv = self.gram_inverse.get_or_init(|| {
            inverse(&QMat::from_fn(m, m, |s, t| self.mats[s].dot(&self.mats[t])))
        });
        let b: Vec<Rational> = self.mats.iter().map(|a| a.dot(x)).collect();
        let beta = ginv.mul_vec(&b);
        let mut out = x.clone();
        for (c, a) in beta.iter().zip(&self.mats) {
            out.add_scaled(&-c.clone(), a);
        }
        out
    }

    /// A positive definite matrix of the complement close to `x`, if one of
    /// the projections gives it.
    fn positive_definite(&self, x: &QMat) -> Option<QMat> {
        let w = self.oblique(x);
        if ldl_pd(&w).is_some() {
            return Some(w);
        }
        if self.mats.is_empty() || self.mats.len() > ORTHOGONAL_LIMIT {
            return None;
        }
        let o = self.orthogonal(x);
        (o != w && ldl_pd(&o).is_some()).then_some(o)
    }
}

/// A basis of span(mats), taken from the reduced echelon form of the
/// flattened matrices.
fn independent(mats: &[QMat]) -> Vec<QMat> {
    let Some(first) = mats.first() else {
        return Vec::new();
    };
    let (r, c) = (first.rows(), first.cols());
    let flat: Vec<Vec<Rational>> = mats.iter().map(|a| (0..r * c).map(|t| a[(t / c, t % c)].clone()).collect()).collect();
    linalg::row_echelon(flat)
        .into_iter()
        .map(|v| QMat::from_fn(r, c, |i, j| v[i * c + j].clone()))
        .collect()
}

// ---------------------------------------------------------------------------
// floating point helpers

fn svec(m: &DMatrix<f64>) -> DVector<f64> {
    let k = m.nrows();
    let mut v = DVector::zeros(k * (k + 1) / 2);
    let mut t = 0;
    for a in 0..k {
        for b in a..k {
            let x = m[(a, b)];
            v[t] = if a == b { x } else { x * std::f64::consts::SQRT_2 };
            t += 1;
        }
    }
    v
}

fn smat(v: &DVector<f64>, k: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(k, k);
    let mut t = 0;
    for a in 0..k {
        for b in a..k {
            if a == b {
                m[(a, a)] = v[t];
            } else {
                let x = v[t] / std::f64::consts::SQRT_2;
                m[(a, b)] = x;
                m[(b, a)] = x;
            }
            t += 1;
        }
    }
    m
}

/// Orthonormal basis (modified Gram–Schmidt, twice) of the given vectors.
fn orthonormal(vs: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let n = w.norm();
        if n > 1e-10 * v.norm().max(1.0) {
            out.push(w / n);
        }
    }
    out
}

fn project(basis: &[DVector<f64>], x: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(x.len());
    for q in basis {
        out.axpy(q.dot(x), q, 1.0);
    }
    out
}

/// Nearest matrix with every eigenvalue at least `floor`.
fn clip_eigen(m: &DMatrix<f64>, floor: f64) -> DMatrix<f64> {
    let e = SymmetricEigen::new(m.clone());
    let mut lam = e.eigenvalues.clone();
    for x in lam.iter_mut() {
        if *x < floor {
            *x = floor;
        }
    }
    &e.eigenvectors * DMatrix::from_diagonal(&lam) * e.eigenvectors.transpose()
}

fn random_symmetric(rng: &mut ChaCha8Rng, k: usize, scale: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let x: f64 = rng.gen_range(-1.0..1.0) * scale;
            m[(a, b)] = x;
            m[(b, a)] = x;
        }
    }
    m
}

/// Projection onto a subspace given by an orthonormal basis of it or of
/// its complement.
enum Proj<'a> {
    Onto(&'a [DVector<f64>]),
    Perp(&'a [DVector<f64>]),
}

impl Proj<'_> {
    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Proj::Onto(b) => project(b, x),
            Proj::Perp(b) => x - project(b, x),
        }
    }
}

enum Search {
    /// Point of the affine slice within tolerance of the cone.
    Converged(DVector<f64>),
    /// Distance between the sets stopped shrinking well above tolerance.
    Separated,
    /// Budget exhausted without a verdict; last iterate attached.
    Exhausted(DVector<f64>),
}

/// Alternating projections between `{x ∈ L : ⟨u, x⟩ = level}` and the
/// matrices with eigenvalues at least `floor`. `u` must lie in `L`.
#[allow(clippy::too_many_arguments)]
fn alternate(
    proj: &Proj,
    u: &DVector<f64>,
    level: f64,
    k: usize,
    floor: f64,
    cfg: &FeasConfig,
    rng: &mut ChaCha8Rng,
) -> Search {
    let uu = u.dot(u);
    let to_affine = |x: &DVector<f64>| -> DVector<f64> {
        let y = proj.apply(x);
        let c = (level - u.dot(&y)) / uu;
        y + u * c
    };
    let mut start = DMatrix::identity(k, k) * (level / k as f64);
    start += random_symmetric(rng, k, 1e-3 * level / k as f64);
    let mut x = to_affine(&svec(&start));
    let mut history: Vec<f64> = Vec::new();
    for it in 0..cfg.max_iterations {
        let y = svec(&clip_eigen(&smat(&x, k), floor));
        let dist = (&y - &x).norm();
        if dist < cfg.numeric_tolerance * level.max(1.0) {
            return Search::Converged(x);
        }
        history.push(dist);
        if it >= 400 && it % 100 == 0 {
            let old = history[it - 300];
            // linear-rate stalls at a positive gap mean the sets are apart
            if dist > 1e-5 * level && (old - dist) < 1e-4 * old {
                return Search::Separated;
            }
        }
        x = to_affine(&y);
    }
    Search::Exhausted(x)
}

const CAPS: [u64; 18] = [
    1, 2, 3, 4, 6, 8, 10, 12, 16, 20, 24, 30, 50, 100, 1_000, 10_000, 100_000, 1_000_000,
];

fn caps_upto(cap: u64) -> impl Iterator<Item = u64> {
    CAPS.into_iter().filter(move |&c| c <= cap).chain(
        if cap > 1_000_000 { Some(cap) } else { None },
    )
}

/// Roundings of a dual candidate: small denominators first, then dyadic
/// grids fine enough for badly conditioned witnesses.
fn dual_roundings(x: f64, cfg: &FeasConfig) -> Vec<Rational> {
    let mut out: Vec<Rational> = [10, 100, 1_000, 10_000, 1_000_000]
        .into_iter()
        .filter(|&c| c <= cfg.rounding_denominator_cap)
        .map(|c| approximate(x, c))
        .collect();
    for bits in [30u32, 45] {
        let scale = (1u64 << bits) as f64;
        let n = (x * scale).round();
        out.push(if n.abs() < 9e18 {
            Rational::new(BigInt::from(n as i64), BigInt::from(1u64 << bits))
        } else {
            approximate(x, cfg.rounding_denominator_cap)
        });
    }
    out
}

/// Numeric coordinates of `target` in span(mats) by least squares.
fn coordinates(mats: &[QMat], target: &DVector<f64>) -> DVector<f64> {
    let vs: Vec<DVector<f64>> = mats.iter().map(|a| svec(&a.to_f64())).collect();
    let m = vs.len();
    let g = DMatrix::from_fn(m, m, |s, t| vs[s].dot(&vs[t]));
    let b = DVector::from_fn(m, |s, _| vs[s].dot(target));
    g.clone()
        .cholesky()
        .map(|c| c.solve(&b))
        .unwrap_or_else(|| g.pseudo_inverse(1e-12).map(|p| p * &b).unwrap_or(b))
}

/// Numeric reduced row echelon form of the rows, entries snapped to
/// rationals with denominators at most `cap`. Entries below `tiny` are never
/// pivots.
fn snap_rows(mut rows: Vec<Vec<f64>>, cap: u64, tiny: f64) -> Vec<Vec<Rational>> {
    let k = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..k {
        if r == rows.len() {
            break;
        }
        let (p, best) = (r..rows.len())
            .map(|i| (i, rows[i][c].abs()))
            .fold((r, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < tiny {
            continue;
        }
        rows.swap(r, p);
        let piv = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= piv;
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.into_iter()
        .map(|row| row.into_iter().map(|x| approximate(x, cap)).collect())
        .collect()
}

/// Denominator caps and pivot thresholds for snapping, coarsest first.
const SNAPS: [(u64, f64); 3] = [(1_000, 1e-5), (1_000, 1e-8), (1_000_000, 1e-8)];

// ---------------------------------------------------------------------------
// the search

enum Found {
    /// Coordinates, in the caller's matrices, of a nonzero PSD member.
    Primal(Vec<Rational>),
    /// Positive definite matrix orthogonal to the face's span.
    Dual(QMat),
}

struct Ctx<'a> {
    cfg: &'a FeasConfig,
    rng: ChaCha8Rng,
    /// Primal normalization `⟨N, B⟩ = 1` in the caller's coordinates.
    normal: QMat,
}

const KERNEL_GUESS_DEPTH: usize = 3;

fn solve(face: &Face, ctx: &mut Ctx, depth: usize) -> Option<Found> {
    let k = face.size();
    if face.mats.is_empty() {
        return Some(Found::Dual(QMat::identity(k)));
    }
    let fixer = PerpFixer::new(&face.mats);
    if let Some(w0) = fixer.positive_definite(&QMat::identity(k)) {
        return Some(Found::Dual(w0));
    }
    // a PSD matrix with a zero diagonal entry has that whole row zero
    let dead: Vec<usize> = (0..k).filter(|&i| face.mats.iter().all(|a| a[(i, i)].is_zero())).collect();
    if !dead.is_empty() {
        let rs: Vec<Vec<Rational>> = dead.iter().map(|&i| unit(k, i)).collect();
        let w1 = QMat::from_fn(k, k, |i, j| {
            if i == j && dead.contains(&i) {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        return facial(face, &rs, w1, ctx, depth);
    }

    let vs: Vec<DVector<f64>> = face.mats.iter().map(|a| svec(&a.to_f64())).collect();
    let basis = orthonormal(&vs);
    let normal = face.q.transpose().mul(&ctx.normal).mul(&face.q);
    let u = project(&basis, &svec(&normal.to_f64()));
    let primal_ok = u.norm() > 1e-12;

    // an interior point is easiest to round
    if primal_ok {
        for floor in [0.25 / k as f64, 1e-3 / k as f64, 1e-5 / k as f64] {
            let x = match alternate(&Proj::Onto(&basis), &u, 1.0, k, floor, ctx.cfg, &mut ctx.rng) {
                Search::Converged(x) | Search::Exhausted(x) => x,
                Search::Separated => continue,
            };
            if let Some(a) = round_primal(face, &normal, &x, ctx.cfg) {
                return Some(Found::Primal(a));
            }
        }
    }

    // dual side; a singular witness still cuts the problem down to a face
    let id = svec(&DMatrix::identity(k, k));
    let ud = &id - project(&basis, &id);
    if ud.norm() > 1e-12 {
        for floor in [0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5, 0.0] {
            let x = match alternate(&Proj::Perp(&basis), &ud, k as f64, k, floor, ctx.cfg, &mut ctx.rng) {
                Search::Converged(x) | Search::Exhausted(x) => x,
                Search::Separated => continue,
            };
            for (rs, w1) in dual_witnesses(face, &smat(&x, k), ctx.cfg, &mut ctx.rng) {
                if let Some(f) = facial(face, &rs, w1, ctx, depth) {
                    return Some(f);
                }
            }
        }
    }

    // boundary point: guess its kernel and look inside that face
    if primal_ok {
        let (Search::Converged(x) | Search::Exhausted(x)) =
            alternate(&Proj::Onto(&basis), &u, 1.0, k, 0.0, ctx.cfg, &mut ctx.rng)
        else {
            return None;
        };
        let mut points = polish_primal(&basis, &normal, &x, k);
        points.push(x);
        for x in &points {
            if let Some(a) = round_primal(face, &normal, x, ctx.cfg) {
                return Some(Found::Primal(a));
            }
        }
        let x = points.swap_remove(0);
        if depth < KERNEL_GUESS_DEPTH {
            for ker in kernel_guesses(&smat(&x, k)) {
                let r = face.restrict(&ker);
                if let Some(Found::Primal(a)) = solve(&r.child, ctx, depth + 1) {
                    return Some(Found::Primal(a));
                }
            }
        }
    }
    None
}

/// Restricts to `B r = 0` for the rows `rs`, justified by the PSD matrix
/// `w1` orthogonal to the face whose range is spanned by `rs`.
fn facial(face: &Face, rs: &[Vec<Rational>], w1: QMat, ctx: &mut Ctx, depth: usize) -> Option<Found> {
    let k = face.size();
    if rs.len() >= k {
        return ldl_pd(&w1).map(|_| Found::Dual(w1));
    }
    let r = face.restrict(rs);
    match solve(&r.child, ctx, depth + 1)? {
        Found::Primal(a) => Some(Found::Primal(a)),
        Found::Dual(wh) => lift_dual(face, rs, &r, &wh, &w1).map(Found::Dual),
    }
}

/// Turns a witness `Ŵ` for the child face into one for `face`.
///
/// `PᵀŴP` agrees with `Ŵ` on the child coordinates; a correction `Z`
/// vanishing there restores orthogonality to the face, and a large
/// multiple of `w1` supplies definiteness on the range of `rs`.
fn lift_dual(face: &Face, rs: &[Vec<Rational>], r: &Restriction, wh: &QMat, w1: &QMat) -> Option<QMat> {
    let k = face.size();
    let nr = rs.len();
    let nq = r.q.cols();
    let rm = QMat::from_fn(k, nr, |i, j| rs[j][i].clone());
    let rt = rm.transpose();
    let l = r.p.transpose().mul(wh).mul(&r.p);
    let nx = nr * (nr + 1) / 2;
    let two = Rational::from_integer(BigInt::from(2));
    let mut rows: Vec<SparseVec<usize>> = Vec::new();
    let mut rhs = Vec::new();
    for a in &face.mats {
        let ra = rt.mul(a);
        let rar = ra.mul(&rm);
        let raq = ra.mul(&r.q);
        let mut row = SparseVec::new();
        let mut t = 0;
        for i in 0..nr {
            for j in i..nr {
                let c = if i == j { rar[(i, i)].clone() } else { &two * &rar[(i, j)] };
                if !c.is_zero() {
                    row.insert(t, c);
                }
                t += 1;
            }
        }
        for i in 0..nr {
            for j in 0..nq {
                if !raq[(i, j)].is_zero() {
                    row.insert(nx + i * nq + j, &two * &raq[(i, j)]);
                }
            }
        }
        rows.push(row);
        rhs.push(-l.dot(a));
    }
    let z = sparse::solve(&rows, &rhs, nx + nr * nq)?;
    let mut xm = QMat::zeros(nr, nr);
    let mut t = 0;
    for i in 0..nr {
        for j in i..nr {
            xm[(i, j)] = z[t].clone();
            xm[(j, i)] = z[t].clone();
            t += 1;
        }
    }
    let ym = QMat::from_fn(nr, nq, |i, j| z[nx + i * nq + j].clone());
    let ryq = rm.mul(&ym).mul(&r.q.transpose());
    let base = l.add(&rm.mul(&xm).mul(&rt)).add(&ryq).add(&ryq.transpose());
    // locate the multiplier numerically, then confirm exactly
    let (bf, wf) = (base.to_f64(), w1.to_f64());
    let mut e = 0;
    while e < 120 && SymmetricEigen::new(&bf + &wf * 2f64.powi(e)).eigenvalues.min() <= 0.0 {
        e += 1;
    }
    let mut c = Rational::from_integer(BigInt::from(2).pow(e as u32));
    for _ in 0..8 {
        let mut w = base.clone();
        w.add_scaled(&c, w1);
        if ldl_pd(&w).is_some() {
            return Some(w);
        }
        c *= &two;
    }
    None
}

fn round_primal(face: &Face, normal: &QMat, x: &DVector<f64>, cfg: &FeasConfig) -> Option<Vec<Rational>> {
    let beta = coordinates(&face.mats, x);
    let scale = beta.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    let k = face.size();
    for normalized in [false, true] {
        for cap in caps_upto(cfg.rounding_denominator_cap) {
            let q: Vec<Rational> = beta
                .iter()
                .map(|x| approximate(if normalized { x / scale } else { *x }, cap))
                .collect();
            if q.iter().all(Zero::is_zero) {
                continue;
            }
            let b = QMat::combination(&q, &face.mats, k);
            if normal.dot(&b).is_zero() {
                continue;
            }
            if matches!(ldl_psd(&b), LdlOutcome::Psd(_)) {
                let mut alpha = vec![Rational::zero(); face.m0];
                for (qk, ck) in q.iter().zip(&face.coords) {
                    for (&t, c) in ck {
                        alpha[t] += qk * c;
                    }
                }
                return Some(alpha);
            }
        }
    }
    None
}

/// Candidate kernels of a numerically singular PSD matrix, split off at the
/// clearest eigenvalue gaps and snapped to small rationals.
fn kernel_guesses(m: &DMatrix<f64>) -> Vec<Vec<Vec<Rational>>> {
    let k = m.nrows();
    let spec = spectrum(m);
    let lam: Vec<f64> = spec.iter().map(|x| x.0).collect();
    if lam[0] <= 0.0 {
        return Vec::new();
    }
    let mut out: Vec<Vec<Vec<Rational>>> = Vec::new();
    for rank in gap_ranks(&lam, 10.0).into_iter().filter(|&r| r < k).take(2) {
        let rows: Vec<Vec<f64>> = spec[rank..].iter().map(|x| x.1.clone()).collect();
        for (cap, tiny) in SNAPS {
            let ker = snap_rows(rows.clone(), cap, tiny);
            if ker.len() == k - rank && !out.contains(&ker) {
                out.push(ker);
                break;
            }
        }
    }
    out
}

/// Gauss–Newton on a factor `V` (`k × r`) so that `V Vᵀ` satisfies
/// `⟨V Vᵀ, A_i⟩ = b_i`. Minimal-norm steps converge fast near a regular
/// solution, which alternating projections on a degenerate face do not.
fn polish_factor(cons: &[DMatrix<f64>], b: &[f64], v0: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let (k, r) = v0.shape();
    let mut v = v0;
    let scale = b.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    for _ in 0..100 {
        let w = &v * v.transpose();
        let f = DVector::from_fn(cons.len(), |i, _| w.dot(&cons[i]) - b[i]);
        if f.norm() < 1e-14 * scale {
            return Some(v);
        }
        let mut j = DMatrix::zeros(cons.len(), k * r);
        for (i, a) in cons.iter().enumerate() {
            let g = a * &v * 2.0;
            for (t, x) in g.iter().enumerate() {
                j[(i, t)] = *x;
            }
        }
        let step = j.svd(true, true).solve(&f, 1e-12).ok()?;
        let step = DMatrix::from_column_slice(k, r, step.as_slice());
        v -= step;
        if !v.iter().all(|x| x.is_finite()) {
            return None;
        }
    }
    let w = &v * v.transpose();
    let res: f64 = cons.iter().zip(b).map(|(a, bi)| (w.dot(a) - bi).powi(2)).sum();
    (res.sqrt() < 1e-9 * scale).then_some(v)
}

/// Largest face size for which the primal point is polished; the Jacobian
/// has `O(k⁴)` entries.
const POLISH_LIMIT: usize = 40;

/// Low-rank refinements of a numeric boundary point `x` of the primal slice
/// `{B ∈ span : ⟨N, B⟩ = 1}`, one per plausible rank, as svec vectors.
fn polish_primal(basis: &[DVector<f64>], normal: &QMat, x: &DVector<f64>, k: usize) -> Vec<DVector<f64>> {
    if k > POLISH_LIMIT {
        return Vec::new();
    }
    let dim = k * (k + 1) / 2;
    let mut all: Vec<DVector<f64>> = basis.to_vec();
    all.extend((0..dim).map(|t| DVector::from_fn(dim, |i, _| if i == t { 1.0 } else { 0.0 })));
    let perp = orthonormal(&all).split_off(basis.len());
    let mut cons: Vec<DMatrix<f64>> = perp.iter().map(|p| smat(p, k)).collect();
    cons.push(normal.to_f64());
    let mut b = vec![0.0; perp.len()];
    b.push(1.0);
    let spec = spectrum(&smat(x, k));
    let lam: Vec<f64> = spec.iter().map(|x| x.0).collect();
    if lam[0] <= 0.0 {
        return Vec::new();
    }
    gap_ranks(&lam, 10.0)
        .into_iter()
        .take(2)
        .filter_map(|r| {
            let v0 = DMatrix::from_fn(k, r, |i, c| spec[c].1[i] * spec[c].0.max(0.0).sqrt());
            polish_factor(&cons, &b, v0).map(|v| svec(&(&v * v.transpose())))
        })
        .collect()
}

/// Eigenvalues in decreasing order with their eigenvectors as rows.
fn spectrum(w: &DMatrix<f64>) -> Vec<(f64, Vec<f64>)> {
    let k = w.nrows();
    let e = SymmetricEigen::new(w.clone());
    let mut out: Vec<(f64, Vec<f64>)> = (0..k)
        .map(|c| (e.eigenvalues[c], (0..k).map(|i| e.eigenvectors[(i, c)]).collect()))
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

/// Ranks after the clearest eigenvalue gaps, best first.
fn gap_ranks(lam: &[f64], min_gap: f64) -> Vec<usize> {
    let k = lam.len();
    let top = lam[0];
    let mut ranks: Vec<(f64, usize)> = (1..=k)
        .filter(|&r| lam[r - 1] > 1e-9 * top)
        .map(|r| {
            let gap = if r == k {
                f64::INFINITY
            } else {
                lam[r - 1] / lam[r].max(1e-300 * top)
            };
            (gap, r)
        })
        .filter(|&(gap, _)| gap > min_gap)
        .collect();
    ranks.sort_by(|a, b| b.0.total_cmp(&a.0));
    ranks.into_iter().map(|(_, r)| r).collect()
}

/// Exact PSD matrices `R C Rᵀ` orthogonal to the face, with `R` a snapped
/// basis of a dominant eigenspace of the numeric dual point `w`.
fn dual_witnesses(
    face: &Face,
    w: &DMatrix<f64>,
    cfg: &FeasConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<(Vec<Vec<Rational>>, QMat)> {
    let k = w.nrows();
    let spec = spectrum(w);
    if spec[0].0 <= 0.0 {
        return Vec::new();
    }
    let lam: Vec<f64> = spec.iter().map(|x| x.0).collect();
    let mut cons: Vec<DMatrix<f64>> = face.mats.iter().map(QMat::to_f64).collect();
    cons.push(DMatrix::identity(k, k));
    let mut b = vec![0.0; face.mats.len()];
    b.push(k as f64);
    let mut out = Vec::new();
    let mut tried = Vec::new();
    for r in gap_ranks(&lam, 10.0).into_iter().take(3) {
        let v0 = DMatrix::from_fn(k, r, |i, c| spec[c].1[i] * spec[c].0.sqrt());
        let mut points = vec![w.clone()];
        if let Some(v) = polish_factor(&cons, &b, v0) {
            points.insert(0, &v * v.transpose());
        }
        for p in points {
            let sp = spectrum(&p);
            let lp: Vec<f64> = sp.iter().map(|x| x.0).collect();
            let Some(&rank) = gap_ranks(&lp, 1e3).first().or(Some(&r)) else {
                continue;
            };
            let rows: Vec<Vec<f64>> = sp[..rank].iter().map(|x| x.1.clone()).collect();
            for (cap, tiny) in SNAPS {
                let rs = snap_rows(rows.clone(), cap, tiny);
                if rs.len() != rank || linalg::rref(rs.clone()).0.len() != rank || tried.contains(&rs) {
                    continue;
                }
                tried.push(rs.clone());
                if let Some(w1) = witness_on_range(face, &rs, &p, cfg, rng) {
                    out.push((rs, w1));
                    break;
                }
            }
        }
    }
    out
}

fn witness_on_range(
    face: &Face,
    rs: &[Vec<Rational>],
    w: &DMatrix<f64>,
    cfg: &FeasConfig,
    rng: &mut ChaCha8Rng,
) -> Option<QMat> {
    let k = face.size();
    let r = rs.len();
    let rm = QMat::from_fn(k, r, |i, j| rs[j][i].clone());
    let rt = rm.transpose();
    let rf = rm.to_f64();
    let g = (rf.transpose() * &rf).try_inverse()?;
    let cf: Vec<DVector<f64>> = face
        .mats
        .iter()
        .map(|a| svec(&(rf.transpose() * a.to_f64() * &rf)))
        .collect();
    let basis = orthonormal(&cf);
    let definite = |c: &DMatrix<f64>| {
        let ev = SymmetricEigen::new(c.clone()).eigenvalues;
        ev.min() > 1e-9 * ev.max()
    };
    // the compression of `w` first, then a search of the admissible `C`s
    let cv = svec(&(&g * rf.transpose() * w * &rf * &g));
    let mut cands = vec![smat(&(&cv - project(&basis, &cv)), r)];
    if !definite(&cands[0]) {
        cands.clear();
        let id = svec(&DMatrix::identity(r, r));
        let u = &id - project(&basis, &id);
        if u.norm() < 1e-12 {
            return None;
        }
        for floor in [0.1, 1e-3, 1e-5] {
            match alternate(&Proj::Perp(&basis), &u, r as f64, r, floor, cfg, rng) {
                Search::Converged(x) | Search::Exhausted(x) => {
                    let c = smat(&x, r);
                    if definite(&c) {
                        cands.push(c);
                        break;
                    }
                }
                Search::Separated => {}
            }
        }
    }
    let cons = independent(&face.mats.iter().map(|a| rt.mul(a).mul(&rm)).collect::<Vec<_>>());
    let fixer = PerpFixer::new(&cons);
    for c in cands.into_iter().filter(|c| definite(c)) {
        let per_entry: Vec<Vec<Rational>> = (0..r * r)
            .map(|t| {
                let (i, j) = (t / r, t % r);
                let (i, j) = if i <= j { (i, j) } else { (j, i) };
                dual_roundings(c[(i, j)], cfg)
            })
            .collect();
        for lv in 0..per_entry[0].len() {
            let cq = QMat::from_fn(r, r, |i, j| per_entry[i * r + j][lv].clone());
            if let Some(cp) = fixer.positive_definite(&cq) {
                return Some(rm.mul(&cp).mul(&rt));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// entry points

fn infeasible_from(w: QMat) -> Option<PsdCertificate> {
    ldl_pd(&w).map(|l| PsdCertificate::Infeasible(InfeasibleCert { w, ldl_pd: l }))
}

/// Searches span(`mats`) for a nonzero PSD matrix.
///
/// `mats` must be linearly independent symmetric matrices of one size.
pub fn find_nonzero_psd(mats: &[QMat], cfg: &FeasConfig) -> Result<PsdCertificate> {
    let n = match mats.first() {
        Some(a) => a.rows(),
        None => {
            return Err(Error::Undecided(
                "empty span: the size of the dual witness is unknown".into(),
            ))
        }
    };
    if let Some(a) = mats.iter().find(|a| a.rows() != n || !a.is_symmetric()) {
        return Err(Error::ShapeMismatch(format!(
            "expected symmetric {n}x{n} matrices, found {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut ctx = Ctx {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.random_seed),
        normal: QMat::identity(n),
    };
    let undecided = || {
        Error::Undecided(format!(
            "no certificate found for a {}-dimensional span of {n}x{n} matrices",
            mats.len()
        ))
    };
    match solve(&Face::full(mats), &mut ctx, 0) {
        Some(Found::Primal(alpha)) => {
            let b = QMat::combination(&alpha, mats, n);
            match ldl_psd(&b) {
                LdlOutcome::Psd(ldl) if !b.is_zero() => Ok(PsdCertificate::Feasible(feasible_from(alpha, b, ldl))),
                _ => Err(undecided()),
            }
        }
        Some(Found::Dual(w)) => infeasible_from(w).ok_or_else(undecided),
        None => Err(undecided()),
    }
}

/// Same as [`find_nonzero_psd`] for an empty span of `n × n` matrices:
/// the identity witnesses that only zero is in it.
pub fn empty_span_certificate(n: usize) -> PsdCertificate {
    let w = QMat::identity(n);
    let l = ldl_pd(&w).expect("identity is positive definite");
    PsdCertificate::Infeasible(InfeasibleCert { w, ldl_pd: l })
}

/// Searches `{B ∈ span(mats) : B ⪰ 0, ⟨N, B⟩ ≠ 0}` for a general linear
/// form `N`; only a primal answer is produced.
pub fn find_psd_normalized(mats: &[QMat], normal: &QMat, cfg: &FeasConfig) -> Option<FeasibleCert> {
    let n = mats.first()?.rows();
    let mut ctx = Ctx {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.random_seed),
        normal: normal.clone(),
    };
    let Some(Found::Primal(alpha)) = solve(&Face::full(mats), &mut ctx, 0) else {
        return None;
    };
    let b = QMat::combination(&alpha, mats, n);
    match ldl_psd(&b) {
        LdlOutcome::Psd(ldl) if !normal.dot(&b).is_zero() => Some(feasible_from(alpha, b, ldl)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sym(n: usize, entries: &[(usize, usize, i64)]) -> QMat {
        let mut m = QMat::zeros(n, n);
        for &(i, j, x) in entries {
            m[(i, j)] = rat(x);
            m[(j, i)] = rat(x);
        }
        m
    }

    #[test]
    fn traceless_offdiagonal_is_infeasible_with_identity() {
        let a = sym(7, &[(2, 3, 1)]);
        let c = find_nonzero_psd(std::slice::from_ref(&a), &FeasConfig::default()).unwrap();
        match &c {
            PsdCertificate::Infeasible(i) => assert_eq!(i.w, QMat::identity(7)),
            _ => panic!("expected infeasible"),
        }
        verify_certificate(&[a], &c).unwrap();
    }

    #[test]
    fn single_diagonal_unit_is_feasible() {
        let a = sym(3, &[(0, 0, 1)]);
        let c = find_nonzero_psd(std::slice::from_ref(&a), &FeasConfig::default()).unwrap();
        match &c {
            PsdCertificate::Feasible(f) => {
                assert_eq!(f.b, a);
                assert_eq!(f.rows, vec![vec![rat(1), rat(0), rat(0)]]);
            }
            _ => panic!("expected feasible"),
        }
        verify_certificate(&[a], &c).unwrap();
    }

    #[test]
    fn indefinite_pencil_is_infeasible() {
        let a = sym(2, &[(0, 0, 1), (1, 1, -1)]);
        let b = sym(2, &[(0, 1, 1)]);
        let c = find_nonzero_psd(&[a.clone(), b.clone()], &FeasConfig::default()).unwrap();
        assert!(!c.is_feasible());
        verify_certificate(&[a, b], &c).unwrap();
    }

    #[test]
    fn dependent_span_with_zero_member() {
        let a = sym(3, &[(0, 0, 1), (1, 1, -1), (0, 2, 1)]);
        let span = [a.clone(), QMat::zeros(3, 3), a.scale(&rat(2))];
        let c = find_nonzero_psd(&span, &FeasConfig::default()).unwrap();
        assert!(!c.is_feasible());
        verify_certificate(&span, &c).unwrap();
    }

    #[test]
    fn needs_numeric_search() {
        // span{diag(1,-1,0), [[0,0,1],[0,0,0],[1,0,0]] + diag(0,0,1)} meets PSD:
        // diag(1,-1,0) + ... is indefinite but the second matrix alone is not
        // PSD either; a combination like A + 2B is not PSD. Use a span that
        // contains diag(2,1,1) only through a combination.
        let a = sym(3, &[(0, 0, 1), (1, 1, 1), (0, 1, 1)]);
        let b = sym(3, &[(0, 0, 1), (1, 1, -1), (2, 2, 1), (0, 1, -1)]);
        let mats = vec![a, b];
        let c = find_nonzero_psd(&mats, &FeasConfig::default()).unwrap();
        assert!(c.is_feasible());
        verify_certificate(&mats, &c).unwrap();
    }

    #[test]
    fn deterministic_under_seed() {
        let a = sym(3, &[(0, 0, 2), (1, 2, 1)]);
        let b = sym(3, &[(1, 1, 1), (0, 2, 1)]);
        let mats = vec![a, b];
        let cfg = FeasConfig::default();
        let c1 = find_nonzero_psd(&mats, &cfg).unwrap();
        let c2 = find_nonzero_psd(&mats, &cfg).unwrap();
        assert_eq!(c1, c2);
        verify_certificate(&mats, &c1).unwrap();
    }

    #[test]
    fn singular_face_is_found_by_polishing() {
        let mats: Vec<QMat> = [
            "[-2, -4, 0, 0, 0, 1; -4, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; 1, 0, 0, 0, 0, 0]",
            "[49/900, 14/45, 0, 0, 0, 0; 14/45, 1/225, 0, 0, 0, 1/15; 0, 0, 16/9, 0, 0, 0; \
              0, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; 0, 1/15, 0, 0, 0, 1]",
            "[0, -1, 1, 0, 0, 0; -1, 0, 0, 0, 0, 0; 1, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0]",
            "[0, 0, 0, -1, 1, 0; 0, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0; -1, 0, 0, 0, 0, 0; 1, 0, 0, 0, 0, 0; 0, 0, 0, 0, 0, 0]",
        ]
        .iter()
        .map(|t| crate::parse::parse_qmat(t).unwrap())
        .collect();
        // every PSD member vanishes on e₃, e₄ and on e₁ − e₅/15
        let c = find_nonzero_psd(&mats, &FeasConfig::default()).unwrap();
        assert!(c.is_feasible());
        verify_certificate(&mats, &c).unwrap();
    }
}
