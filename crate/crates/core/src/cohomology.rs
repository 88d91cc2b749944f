//! The mod-2 cohomology ring of complex projective space,
//! `H^*(CP^{k-1}; F_2) = F_2[x] / (x^k)` with `x` in degree 2.
//!
//! The circle bundle over `CP^{k-1}` is the Hopf bundle, whose second
//! Stiefel–Whitney class is the generator `x`. Its Stiefel–Whitney number
//! `w_2^{k-1}[CP^{k-1}]` is the coefficient of the top class `x^{k-1}` in
//! `x^{k-1}`.

use crate::gf2::BitRow;

/// Element of `F_2[x] / (x^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    k: usize,
    coeffs: BitRow,
}

impl TruncatedPoly {
    pub fn zero(k: usize) -> Self {
        assert!(k >= 1, "truncation degree must be positive");
        TruncatedPoly {
            k,
            coeffs: BitRow::zeros(k),
        }
    }

    pub fn one(k: usize) -> Self {
        Self::monomial(k, 0)
    }

    /// `x^d`, which is zero once `d ≥ k`.
    pub fn monomial(k: usize, d: usize) -> Self {
        let mut p = Self::zero(k);
        if d < k {
            p.coeffs.set(d, true);
        }
        p
    }

    /// The generator `x` (zero when `k = 1`).
    pub fn generator(k: usize) -> Self {
        Self::monomial(k, 1)
    }

    pub fn coeff(&self, d: usize) -> bool {
        d < self.k && self.coeffs.get(d)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.k).all(|d| !self.coeffs.get(d))
    }

    pub fn mul(&self, other: &TruncatedPoly) -> TruncatedPoly {
        assert_eq!(self.k, other.k);
        let mut out = Self::zero(self.k);
        for i in (0..self.k).filter(|&i| self.coeffs.get(i)) {
            for j in (0..self.k - i).filter(|&j| other.coeffs.get(j)) {
                let cur = out.coeffs.get(i + j);
                out.coeffs.set(i + j, !cur);
            }
        }
        out
    }

    pub fn pow(&self, mut e: usize) -> TruncatedPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluation on the fundamental class: the coefficient of `x^{k-1}`.
    pub fn evaluate_top(&self) -> bool {
        self.coeff(self.k - 1)
    }
}

/// `w_2^{k-1}[CP^{k-1}]` of the Hopf bundle, as an element of `F_2`.
pub fn hopf_w2_number(k: usize) -> u8 {
    let w2 = TruncatedPoly::generator(k);
    w2.pow(k - 1).evaluate_top() as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_relations() {
        let k = 4;
        let x = TruncatedPoly::generator(k);
        assert_eq!(x.mul(&x), TruncatedPoly::monomial(k, 2));
        assert!(x.pow(4).is_zero());
        assert!(!x.pow(3).is_zero());
        let one_plus_x = {
            let mut p = TruncatedPoly::one(k);
            p.coeffs.set(1, true);
            p
        };
        // (1 + x)^2 = 1 + x^2 in characteristic 2
        let sq = one_plus_x.mul(&one_plus_x);
        assert!(sq.coeff(0) && !sq.coeff(1) && sq.coeff(2) && !sq.coeff(3));
    }

    #[test]
    fn point_case() {
        // CP^0 is a point; x = 0 but x^0 = 1 is the top class.
        assert_eq!(hopf_w2_number(1), 1);
    }

    #[test]
    fn top_number_is_one() {
        for k in 1..=64 {
            assert_eq!(hopf_w2_number(k), 1, "k = {k}");
        }
    }
}
