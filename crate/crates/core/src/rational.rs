//! Exact rational scalars and small helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `"num/den"` form used by every JSON document, integers included.
pub fn to_wire(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Inverse of [`to_wire`]; also accepts a bare integer.
pub fn from_wire(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator or denominator: shift both down first
            let bits = q.numer().bits().max(q.denom().bits());
            let shift = bits.saturating_sub(900);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Best rational approximation of `x` with denominator at most `cap`,
/// via continued-fraction convergents and semiconvergents.
pub fn approximate(x: f64, cap: u64) -> Rational {
    if !x.is_finite() {
        return zero();
    }
    let neg = x < 0.0;
    let mut y = x.abs();
    let cap = cap.max(1) as i128;
    // convergents h/k
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut best = (y.round() as i128, 1i128);
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > cap {
            // largest admissible semiconvergent
            let t = (cap - k0) / k1.max(1);
            if t > 0 {
                let hs = t * h1 + h0;
                let ks = t * k1 + k0;
                let err_s = (hs as f64 / ks as f64 - x.abs()).abs();
                let err_c = (best.0 as f64 / best.1 as f64 - x.abs()).abs();
                if err_s < err_c {
                    best = (hs, ks);
                }
            }
            break;
        }
        best = (h2, k2);
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac_part = y - a as f64;
        if frac_part < 1e-15 {
            break;
        }
        y = 1.0 / frac_part;
    }
    let q = Rational::new(BigInt::from(best.0), BigInt::from(best.1));
    if neg {
        -q
    } else {
        q
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
