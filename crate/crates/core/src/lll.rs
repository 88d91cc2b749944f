//! LLL reduction of a positive definite Gram matrix in exact arithmetic.
//!
//! Works on the Gram matrix alone (the lattice is never embedded), following
//! the incremental rational algorithm: Gram–Schmidt coefficients `μ` and
//! squared lengths `B` are updated in place by size reduction and swaps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::GramMatrix;

/// A reduced basis `b_i = Σ_j basis[i][j] e_j` of the original lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// `H G H^T`.
    pub gram: GramMatrix,
    /// `H`, rows are the new basis vectors in old coordinates.
    pub basis: Vec<Vec<BigInt>>,
    /// `H^{-1}`.
    pub inverse: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect()
}

struct State {
    n: usize,
    a: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    hinv: Vec<Vec<BigInt>>,
    mu: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
}

impl State {
    /// `b_k -= q b_l` with `q` the nearest integer to `μ_kl`.
    fn reduce(&mut self, k: usize, l: usize) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if self.mu[k][l].abs() <= half {
            return;
        }
        let q = (&self.mu[k][l] + &half).floor().to_integer();
        let n = self.n;
        for c in 0..n {
            let t = &q * &self.h[l][c];
            self.h[k][c] -= t;
            let t = &q * &self.hinv[c][k];
            self.hinv[c][l] += t;
        }
        for c in 0..n {
            let t = &q * &self.a[l][c];
            self.a[k][c] -= t;
        }
        for r in 0..n {
            let t = &q * &self.a[r][l];
            self.a[r][k] -= t;
        }
        let qr = BigRational::from_integer(q);
        self.mu[k][l] -= &qr;
        for i in 0..l {
            let t = &qr * &self.mu[l][i];
            self.mu[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.h.swap(k, k - 1);
        for row in self.hinv.iter_mut() {
            row.swap(k, k - 1);
        }
        self.a.swap(k, k - 1);
        for row in self.a.iter_mut() {
            row.swap(k, k - 1);
        }
        for j in 0..k - 1 {
            let t = self.mu[k][j].clone();
            self.mu[k][j] = std::mem::replace(&mut self.mu[k - 1][j], t);
        }
        let m = self.mu[k][k - 1].clone();
        let bnew = &self.b[k] + &m * &m * &self.b[k - 1];
        self.mu[k][k - 1] = &m * &self.b[k - 1] / &bnew;
        self.b[k] = &self.b[k - 1] * &self.b[k] / &bnew;
        self.b[k - 1] = bnew;
        for i in k + 1..=kmax {
            let t = self.mu[i][k].clone();
            self.mu[i][k] = &self.mu[i][k - 1] - &m * &t;
            self.mu[i][k - 1] = t + &self.mu[k][k - 1] * &self.mu[i][k];
        }
    }
}

/// LLL-reduces a positive definite form with parameter `δ = 99/100`.
///
/// The caller guarantees positive definiteness; a zero Gram–Schmidt length
/// would divide by zero.
pub fn lll_reduce(g: &GramMatrix) -> Reduction {
    let n = g.rank();
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let mut s = State {
        n,
        a: g.rows(),
        h: identity(n),
        hinv: identity(n),
        mu: vec![vec![BigRational::zero(); n]; n],
        b: vec![BigRational::zero(); n],
    };
    if n > 0 {
        s.b[0] = BigRational::from_integer(s.a[0][0].clone());
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..k {
                let mut v = BigRational::from_integer(s.a[k][j].clone());
                for i in 0..j {
                    v -= &s.mu[j][i] * &s.mu[k][i] * &s.b[i];
                }
                s.mu[k][j] = v / &s.b[j];
            }
            let mut bk = BigRational::from_integer(s.a[k][k].clone());
            for j in 0..k {
                bk -= &s.mu[k][j] * &s.mu[k][j] * &s.b[j];
            }
            s.b[k] = bk;
        }
        s.reduce(k, k - 1);
        let m = &s.mu[k][k - 1];
        if s.b[k] < (&delta - m * m) * &s.b[k - 1] {
            s.swap(k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                s.reduce(k, l);
            }
            k += 1;
        }
    }
    Reduction {
        gram: GramMatrix::new(s.a).expect("congruent Gram matrices stay symmetric"),
        basis: s.h,
        inverse: s.hinv,
    }
}
