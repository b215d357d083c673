//! Factorization of squarefree polynomials over ℚ: rational roots first,
//! then Kronecker's interpolation search for higher-degree factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rational};

pub const DEFAULT_DEGREE_CAP: usize = 12;

/// Largest integer whose divisors we enumerate by trial division.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;
/// Budget on candidate factors tried per degree.
const COMBINATION_LIMIT: u64 = 2_000_000;

fn integer_coeffs(p: &UniPoly) -> Vec<BigInt> {
    let l = common_denominator(p.coeffs());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

fn positive_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let n = xs.len();
    let mut coef: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = UniPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UniPoly::from_coeffs(vec![-xs[i].clone(), Rational::one()]);
        out = &(&out * &lin) + &UniPoly::constant(coef[i].clone());
    }
    out
}

fn rational_roots(f: &UniPoly) -> Result<Vec<Rational>> {
    let ints = integer_coeffs(f);
    let mut roots = Vec::new();
    let mut low = 0;
    while ints.get(low).is_some_and(Zero::is_zero) {
        low += 1;
    }
    if low > 0 {
        roots.push(Rational::zero());
    }
    let deg = f.degree().unwrap_or(0);
    if deg == low {
        return Ok(roots);
    }
    let too_big = Error::DegreeCapExceeded {
        cap: DEFAULT_DEGREE_CAP,
        degree: deg,
    };
    let ps = positive_divisors(&ints[low]).ok_or_else(|| too_big.clone())?;
    let qs = positive_divisors(&ints[deg]).ok_or(too_big)?;
    for p in &ps {
        for q in &qs {
            if p.gcd(q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = Rational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if f.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    Ok(roots)
}

/// Smallest-degree factor of degree exactly `k`, if any.
fn kronecker_factor(f: &UniPoly, k: usize) -> Result<Option<UniPoly>> {
    let deg = f.degree().unwrap_or(0);
    let mut candidates: Vec<(usize, Rational, Vec<u64>)> = Vec::new();
    for t in 0..=40i64 {
        for x in if t == 0 { vec![0] } else { vec![t, -t] } {
            let xr = Rational::from_integer(x.into());
            let y = f.eval(&xr);
            // values are integral multiples of 1/lcm; scale to integers
            let scaled = &y * Rational::from_integer(common_denominator(f.coeffs()));
            if !scaled.is_integer() {
                continue;
            }
            if let Some(divs) = positive_divisors(&scaled.to_integer()) {
                candidates.push((divs.len(), xr, divs));
            }
        }
    }
    if candidates.len() < k + 1 {
        return Err(Error::DegreeCapExceeded {
            cap: DEFAULT_DEGREE_CAP,
            degree: deg,
        });
    }
    candidates.sort_by_key(|a| a.0);
    candidates.truncate(k + 1);
    let total: u64 = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| c.0 as u64 * if i == 0 { 1 } else { 2 })
        .try_fold(1u64, |acc, n| acc.checked_mul(n))
        .unwrap_or(u64::MAX);
    if total > COMBINATION_LIMIT {
        return Err(Error::DegreeCapExceeded {
            cap: DEFAULT_DEGREE_CAP,
            degree: deg,
        });
    }
    let xs: Vec<Rational> = candidates.iter().map(|c| c.1.clone()).collect();
    let mut idx = vec![0usize; k + 1];
    let mut signs = vec![false; k + 1];
    loop {
        let ys: Vec<Rational> = (0..=k)
            .map(|i| {
                let v = Rational::from_integer(candidates[i].2[idx[i]].into());
                if signs[i] {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let g = interpolate(&xs, &ys);
        if g.degree() == Some(k) && f.rem(&g).is_zero() {
            return Ok(Some(g.monic()));
        }
        // odometer over divisor choices and signs (first point stays positive)
        let mut pos = 0;
        loop {
            if pos > k {
                return Ok(None);
            }
            if pos > 0 && !signs[pos] {
                signs[pos] = true;
                break;
            }
            signs[pos] = false;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].2.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial, ascending degree.
pub fn factor_squarefree(s: &UniPoly, cap: usize) -> Result<Vec<UniPoly>> {
    let deg = s.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg > cap {
        return Err(Error::DegreeCapExceeded { cap, degree: deg });
    }
    let mut rest = s.monic();
    let mut out = Vec::new();
    for r in rational_roots(&rest)? {
        let lin = UniPoly::from_coeffs(vec![-r, Rational::one()]);
        rest = rest.div_rem(&lin).0;
        out.push(lin);
    }
    let mut k = 2;
    loop {
        let n = rest.degree().unwrap_or(0);
        if n == 0 {
            break;
        }
        if 2 * k > n {
            out.push(rest.monic());
            break;
        }
        match kronecker_factor(&rest, k)? {
            Some(g) => {
                rest = rest.div_rem(&g).0;
                out.push(g);
            }
            None => k += 1,
        }
    }
    out.sort_by_key(|f| f.degree());
    Ok(out)
}
