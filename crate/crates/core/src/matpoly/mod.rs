//! Left ideals of matrices over `ℚ[x]`: principal reduction, Smith normal
//! form, univariate real radicals and the resulting real radical of a
//! matrix ideal, plus the constant-matrix case.

mod factor;
mod hermite;
mod smith;
mod sturm;
mod unipoly;

pub use factor::{factor_squarefree, DEFAULT_DEGREE_CAP};
pub use hermite::hermite_form;
pub use smith::{smith_normal_form, verify_smith, SmithForm};
pub use sturm::{count_real_roots, SturmChain};
pub use unipoly::{UniPoly, UniPolyMatrix};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::qmat::QMat;
use crate::rational::Rational;

/// `Σ Gᵢᵀ Gᵢ`.
pub fn principal_reduce(gens: &[UniPolyMatrix]) -> Result<UniPolyMatrix> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let n = first.cols();
    let mut acc = UniPolyMatrix::zeros(n, n);
    for g in gens {
        if !g.is_square() || g.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n}, found {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        acc = acc.add(&g.transpose().mul(g));
    }
    Ok(acc)
}

/// Monic generator of the polynomials vanishing on the real zeros of `p`.
pub fn real_radical_unipoly(p: &UniPoly) -> Result<UniPoly> {
    real_radical_unipoly_capped(p, DEFAULT_DEGREE_CAP)
}

pub fn real_radical_unipoly_capped(p: &UniPoly, cap: usize) -> Result<UniPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = p.squarefree_part();
    let roots = count_real_roots(&s, None)?;
    if roots == 0 {
        return Ok(UniPoly::one());
    }
    if Some(roots) == s.degree() {
        return Ok(s);
    }
    let mut r = UniPoly::one();
    for f in factor_squarefree(&s, cap)? {
        if count_real_roots(&f, None)? > 0 {
            r = &r * &f;
        }
    }
    Ok(r)
}

/// The real radical of a left ideal of `M_n(ℚ[x])`, presented by the single
/// generator `G = diag(r₁,…,r_n)·V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ERadical {
    pub generator: UniPolyMatrix,
    pub radicals: Vec<UniPoly>,
    pub smith: SmithForm,
}

impl ERadical {
    /// Hermite normal form of the generator; equal for equal ideals.
    pub fn canonical_generator(&self) -> UniPolyMatrix {
        hermite_form(&self.generator)
    }

    /// `Q ∈ M_n(ℚ[x])·G`: column `i` of `Q·V⁻¹` must be divisible by `rᵢ`.
    pub fn contains(&self, q: &UniPolyMatrix) -> Result<bool> {
        let n = self.radicals.len();
        if q.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n} columns, found {}",
                q.cols()
            )));
        }
        let w = q.mul(&self.smith.v_inv);
        for (j, r) in self.radicals.iter().enumerate() {
            for i in 0..w.rows() {
                if !r.divides(w.get(i, j)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn eradical_matpoly(gens: &[UniPolyMatrix]) -> Result<ERadical> {
    eradical_matpoly_capped(gens, DEFAULT_DEGREE_CAP)
}

/// As [`eradical_matpoly`], factoring invariant factors of degree at most `cap`.
pub fn eradical_matpoly_capped(gens: &[UniPolyMatrix], cap: usize) -> Result<ERadical> {
    let p = principal_reduce(gens)?;
    let smith = smith_normal_form(&p);
    let radicals: Vec<UniPoly> = smith
        .diagonal()
        .iter()
        .map(|d| {
            if d.is_zero() {
                Ok(UniPoly::zero())
            } else {
                real_radical_unipoly_capped(d, cap)
            }
        })
        .collect::<Result<_>>()?;
    let generator = UniPolyMatrix::diag(&radicals).mul(&smith.v);
    Ok(ERadical {
        generator,
        radicals,
        smith,
    })
}

pub fn eradical_member(q: &UniPolyMatrix, gens: &[UniPolyMatrix]) -> Result<bool> {
    eradical_matpoly(gens)?.contains(q)
}

/// Left ideal of `M_n(ℚ)` generated by constant matrices: its elements are
/// exactly the matrices whose rows lie in the stacked row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantIdeal {
    pub n: usize,
    /// Reduced row echelon basis of the row space.
    pub basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl ConstantIdeal {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, c: &QMat) -> Result<bool> {
        if c.cols() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} columns, found {}",
                self.n,
                c.cols()
            )));
        }
        for i in 0..c.rows() {
            let mut row = c.row(i).to_vec();
            for (b, &p) in self.basis.iter().zip(&self.pivots) {
                let f = row[p].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn eradical_constant(gens: &[QMat]) -> Result<ConstantIdeal> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let n = first.cols();
    let mut rows = Vec::new();
    for g in gens {
        if g.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n} columns, found {}",
                g.cols()
            )));
        }
        rows.extend(g.to_rows());
    }
    let (basis, pivots) = rref(rows);
    Ok(ConstantIdeal { n, basis, pivots })
}
