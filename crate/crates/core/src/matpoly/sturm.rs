use num_traits::{Signed, Zero};

use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Signed remainder sequence `p₀ = p, p₁ = p', p_{k+1} = −(p_{k−1} mod p_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain(pub Vec<UniPoly>);

impl SturmChain {
    pub fn new(p: &UniPoly) -> SturmChain {
        let mut chain = vec![p.clone()];
        let mut cur = p.derivative();
        while !cur.is_zero() {
            let prev = chain.last().unwrap().clone();
            chain.push(cur.clone());
            cur = -&prev.rem(&cur);
        }
        SturmChain(chain)
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, a: &Rational) -> usize {
        Self::variations(self.0.iter().map(|p| {
            let y = p.eval(a);
            if y.is_zero() {
                0
            } else if y.is_positive() {
                1
            } else {
                -1
            }
        }))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.0.iter().map(UniPoly::sign_at_pos_inf))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.0.iter().map(UniPoly::sign_at_neg_inf))
    }
}

/// Number of distinct real roots, in `(a, b]` when an interval is given.
pub fn count_real_roots(p: &UniPoly, interval: Option<(&Rational, &Rational)>) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = p.squarefree_part();
    let chain = SturmChain::new(&s);
    Ok(match interval {
        None => chain.variations_at_neg_inf() - chain.variations_at_pos_inf(),
        Some((a, b)) => {
            if a >= b {
                0
            } else {
                chain.variations_at(a) - chain.variations_at(b)
            }
        }
    })
}
