//! Integral lattices given by their Gram matrix.
//!
//! Everything here is exact: entries are [`BigInt`], eliminations are
//! fraction-free where possible and fall back to [`BigRational`] otherwise.
//! A [`GramMatrix`] is validated on construction and never mutated afterwards;
//! every operation returns a new value.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix is not symmetric: entry ({row},{col}) differs from ({col},{row})")]
    NotSymmetric { row: usize, col: usize },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("transform is not unimodular (determinant {0})")]
    NotUnimodularTransform(BigInt),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Classification of a symmetric form by the signs of its eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    /// Singular and semidefinite (no sign violation, some zero eigenvalue).
    Degenerate,
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Definiteness::PositiveDefinite => "positive definite",
            Definiteness::NegativeDefinite => "negative definite",
            Definiteness::Indefinite => "indefinite",
            Definiteness::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Coordinates of a lattice vector in the basis of some [`GramMatrix`].
///
/// Ordering is lexicographic on the coordinates, compared by value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Symmetric integral bilinear form on `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    rank: usize,
    entries: Vec<BigInt>,
}

/// Checks that `rows` is a nonempty square symmetric array.
pub fn validate(rows: &[Vec<BigInt>]) -> Result<(), LatticeError> {
    let n = rows.len();
    if n == 0 {
        return Err(LatticeError::BadShape("rank must be at least 1".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(LatticeError::BadShape(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rows[i][j] != rows[j][i] {
                return Err(LatticeError::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        validate(&rows)?;
        let rank = rows.len();
        Ok(GramMatrix {
            rank,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1; n])
    }

    /// Diagonal form; panics on an empty diagonal.
    pub fn diagonal(diag: &[i64]) -> Self {
        assert!(!diag.is_empty(), "diagonal form needs rank >= 1");
        let n = diag.len();
        let mut entries = vec![BigInt::zero(); n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = BigInt::from(d);
        }
        GramMatrix { rank: n, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.rank + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.rank..(i + 1) * self.rank]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank).map(|i| self.row(i).to_vec()).collect()
    }

    /// Re-checks the construction invariants.
    pub fn validate(&self) -> Result<(), LatticeError> {
        validate(&self.rows())
    }

    /// `(u, v)` for integer vectors.
    pub fn inner(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        debug_assert_eq!(u.len(), self.rank);
        debug_assert_eq!(v.len(), self.rank);
        let mut acc = BigInt::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for (gij, vj) in self.row(i).iter().zip(v) {
                if !vj.is_zero() {
                    row += gij * vj;
                }
            }
            acc += ui * row;
        }
        acc
    }

    /// `(v, v)`.
    pub fn norm(&self, v: &[BigInt]) -> BigInt {
        self.inner(v, v)
    }

    /// `x^T G x` for a rational vector.
    pub fn rational_norm(&self, x: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.rank {
            if x[i].is_zero() {
                continue;
            }
            let mut row = BigRational::zero();
            for j in 0..self.rank {
                let g = self.get(i, j);
                if !g.is_zero() && !x[j].is_zero() {
                    row += &x[j] * BigRational::from_integer(g.clone());
                }
            }
            acc += &x[i] * row;
        }
        acc
    }

    pub fn determinant(&self) -> BigInt {
        matrix::bareiss_determinant(&self.rows())
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Leading principal minors `D_1, ..., D_n`.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        matrix::leading_principal_minors(&self.rows())
    }

    /// Exact inertia. Uses the sign pattern of the leading principal minors
    /// when none of them vanishes, otherwise a congruence diagonalization
    /// over the rationals.
    pub fn inertia(&self) -> Inertia {
        let minors = self.leading_minors();
        if minors.iter().all(|d| !d.is_zero()) {
            let mut prev_negative = false;
            let mut negative = 0;
            for d in &minors {
                let neg = d.is_negative();
                if neg != prev_negative {
                    negative += 1;
                }
                prev_negative = neg;
            }
            return Inertia {
                positive: self.rank - negative,
                negative,
                zero: 0,
            };
        }
        let diag = matrix::congruence_diagonal(&self.rows());
        let mut inertia = Inertia {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for d in diag {
            if d.is_positive() {
                inertia.positive += 1;
            } else if d.is_negative() {
                inertia.negative += 1;
            } else {
                inertia.zero += 1;
            }
        }
        inertia
    }

    pub fn definiteness(&self) -> Definiteness {
        let Inertia {
            positive,
            negative,
            zero,
        } = self.inertia();
        if positive == self.rank {
            Definiteness::PositiveDefinite
        } else if negative == self.rank {
            Definiteness::NegativeDefinite
        } else if positive > 0 && negative > 0 {
            Definiteness::Indefinite
        } else {
            debug_assert!(zero > 0);
            Definiteness::Degenerate
        }
    }

    /// Even iff every diagonal entry is even, i.e. `(v,v)` is even for all `v`.
    pub fn parity(&self) -> Parity {
        let two = BigInt::from(2);
        if (0..self.rank).all(|i| (self.get(i, i) % &two).is_zero()) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn signature(&self) -> Result<i64, LatticeError> {
        let inertia = self.inertia();
        if inertia.zero > 0 {
            return Err(LatticeError::DegenerateForm);
        }
        Ok(inertia.positive as i64 - inertia.negative as i64)
    }

    pub fn negate(&self) -> GramMatrix {
        GramMatrix {
            rank: self.rank,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Orthogonal direct sum (block diagonal).
    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let n = self.rank + other.rank;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                entries[i * n + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                entries[(self.rank + i) * n + self.rank + j] = other.get(i, j).clone();
            }
        }
        GramMatrix { rank: n, entries }
    }

    /// Returns `u^T G u`. The columns of `u` are the new basis vectors.
    pub fn basis_change(&self, u: &[Vec<BigInt>]) -> Result<GramMatrix, LatticeError> {
        let n = self.rank;
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(LatticeError::BadShape(format!(
                "transform must be {n}x{n}"
            )));
        }
        let det = matrix::bareiss_determinant(u);
        if !det.abs().is_one() {
            return Err(LatticeError::NotUnimodularTransform(det));
        }
        // gu = G u
        let mut gu = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                let g = self.get(i, k);
                if g.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !u[k][j].is_zero() {
                        gu[i][j] += g * &u[k][j];
                    }
                }
            }
        }
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    if !u[k][i].is_zero() {
                        acc += &u[k][i] * &gu[k][j];
                    }
                }
                entries[i * n + j] = acc;
            }
        }
        Ok(GramMatrix { rank: n, entries })
    }

    /// Exact `LDL^T` decomposition of a positive definite form.
    pub fn cholesky(&self) -> Result<RationalCholesky, LatticeError> {
        let n = self.rank;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let mut diag = Vec::with_capacity(n);
        let mut upper = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let d = a[i][i].clone();
            if !d.is_positive() {
                return Err(LatticeError::NotPositiveDefinite);
            }
            for j in (i + 1)..n {
                upper[i][j] = &a[i][j] / &d;
            }
            for j in (i + 1)..n {
                if a[i][j].is_zero() {
                    continue;
                }
                for k in j..n {
                    let delta = &upper[i][j] * &a[i][k];
                    a[j][k] -= &delta;
                    if k != j {
                        a[k][j] = a[j][k].clone();
                    }
                }
            }
            diag.push(d);
        }
        Ok(RationalCholesky { diag, upper })
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rank {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `Q(x) = sum_i diag[i] * (x_i + sum_{j>i} upper[i][j] x_j)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCholesky {
    pub diag: Vec<BigRational>,
    /// Strictly upper triangular; entries on and below the diagonal are zero.
    pub upper: Vec<Vec<BigRational>>,
}

impl RationalCholesky {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Evaluates the form through the factorization.
    pub fn evaluate(&self, x: &[BigRational]) -> BigRational {
        let n = self.rank();
        let mut acc = BigRational::zero();
        for i in 0..n {
            let mut y = x[i].clone();
            for j in (i + 1)..n {
                if !self.upper[i][j].is_zero() {
                    y += &self.upper[i][j] * &x[j];
                }
            }
            acc += &self.diag[i] * &y * &y;
        }
        acc
    }

    /// Diagonal of the inverse Gram matrix, `(G^{-1})_{ii}`.
    pub fn inverse_diagonal(&self) -> Vec<BigRational> {
        // G = U^T D U, so G^{-1} = U^{-1} D^{-1} U^{-T} and
        // (G^{-1})_{ii} = sum_k (U^{-1})_{ik}^2 / d_k.
        let n = self.rank();
        let mut inv = vec![vec![BigRational::zero(); n]; n];
        for col in 0..n {
            // Solve U y = e_col by back substitution.
            for i in (0..n).rev() {
                let mut v = if i == col {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                for j in (i + 1)..n {
                    if !self.upper[i][j].is_zero() && !inv[j][col].is_zero() {
                        v -= &self.upper[i][j] * &inv[j][col];
                    }
                }
                inv[i][col] = v;
            }
        }
        (0..n)
            .map(|i| {
                let mut s = BigRational::zero();
                for (k, d) in self.diag.iter().enumerate() {
                    if !inv[i][k].is_zero() {
                        s += &inv[i][k] * &inv[i][k] / d;
                    }
                }
                s
            })
            .collect()
    }
}

/// Random element of `GL(n, Z)` whose entries stay within `[-bound, bound]`.
///
/// Starts from a random signed permutation and applies random elementary row
/// additions, rejecting any that would leave the entry bound.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<BigInt>> {
    assert!(bound >= 1);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut u = vec![vec![0i64; n]; n];
    for (i, &p) in perm.iter().enumerate() {
        u[i][p] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    if n > 1 {
        let target = 4 * n;
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < target && attempts < 50 * target {
            attempts += 1;
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            if (0..n).all(|c| (u[i][c] + s * u[j][c]).abs() <= bound) {
                for c in 0..n {
                    u[i][c] += s * u[j][c];
                }
                accepted += 1;
            }
        }
    }
    u.into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}
