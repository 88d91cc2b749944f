//! Characteristic vectors and the short-vector dichotomy for unimodular forms.
//!
//! `w` is characteristic when `(v, v + w) ≡ 0 (mod 2)` for every `v`, which
//! reduces to `(e_i, w) ≡ (e_i, e_i)` on basis vectors: the linear system
//! `G w ≡ diag(G) (mod 2)`. The characteristic vectors form the coset
//! `w0 + 2Z^n`. Writing `w = w0 + 2u` gives `(w, w) = 4 Q(u + w0/2)`, so the
//! minimal norm is a shifted-ball minimum for the enumeration engine.
//!
//! A positive definite unimodular form is `Z^n` exactly when its minimal
//! characteristic norm equals `n`; otherwise it is at most `n - 8`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{
    enumerate_coset_with, minimize_coset_with, EnumConfig, EnumError, EnumQuery, EnumStats,
};
use crate::gf2::{self, BitRow};
use crate::lattice::{Definiteness, GramMatrix, LatticeVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharVecError {
    #[error("form has no characteristic vector (mod-2 system is inconsistent)")]
    NoSolution,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not unimodular")]
    NotUnimodular,
    #[error("the mod-8 check needs a definite form")]
    NotDefinite,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// The characteristic vectors `base + 2Z^n` of `lattice`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharCoset {
    /// Lexicographically least 0/1 characteristic vector.
    pub base: LatticeVector,
    pub lattice: GramMatrix,
    /// Set when the form is not unimodular; the coset is still exact.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharVecResult {
    /// Lexicographically least characteristic vector of minimal norm.
    pub minimizer: LatticeVector,
    pub norm_m: u64,
    /// `(n - m) / 8`.
    pub k: i64,
    pub count_minimizers: u64,
    pub base: LatticeVector,
    pub stats: EnumStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElkiesVerdict {
    Identity(CharVecResult),
    HasShortCharVector(CharVecResult),
}

impl ElkiesVerdict {
    pub fn result(&self) -> &CharVecResult {
        match self {
            ElkiesVerdict::Identity(r) | ElkiesVerdict::HasShortCharVector(r) => r,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, ElkiesVerdict::Identity(_))
    }

    pub fn label(&self) -> VerdictLabel {
        match self {
            ElkiesVerdict::Identity(_) => VerdictLabel::Identity,
            ElkiesVerdict::HasShortCharVector(_) => VerdictLabel::HasShortCharVector,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictLabel {
    Identity,
    HasShortCharVector,
}

/// `(v, v + w) ≡ 0 (mod 2)` for the given `v`.
pub fn satisfies_char_condition(g: &GramMatrix, v: &[BigInt], w: &[BigInt]) -> bool {
    let vw: Vec<BigInt> = v.iter().zip(w).map(|(a, b)| a + b).collect();
    g.inner(v, &vw).is_even()
}

/// Checks the characteristic condition on the standard basis, which implies it
/// for all vectors.
pub fn is_characteristic(g: &GramMatrix, w: &[BigInt]) -> bool {
    let n = g.rank();
    (0..n).all(|i| {
        let row_dot: BigInt = g.row(i).iter().zip(w).map(|(a, b)| a * b).sum();
        (row_dot - g.get(i, i)).is_even()
    })
}

pub fn solve_char_coset(g: &GramMatrix) -> Result<CharCoset, CharVecError> {
    let n = g.rank();
    let rows: Vec<BitRow> = (0..n)
        .map(|i| {
            let mut r = BitRow::zeros(n);
            for j in 0..n {
                r.set(j, g.get(i, j).is_odd());
            }
            r
        })
        .collect();
    let rhs: Vec<bool> = (0..n).map(|i| g.get(i, i).is_odd()).collect();
    let w = gf2::solve_lex_least(&rows, &rhs, n).ok_or(CharVecError::NoSolution)?;
    let warning = if g.is_unimodular() {
        None
    } else {
        Some("form is not unimodular; characteristic vectors are not unique mod 2".into())
    };
    Ok(CharCoset {
        base: LatticeVector(w.into_iter().map(|b| BigInt::from(b as u8)).collect()),
        lattice: g.clone(),
        warning,
    })
}

pub fn min_char_vector(g: &GramMatrix) -> Result<CharVecResult, CharVecError> {
    min_char_vector_with(g, &EnumConfig::default())
}

pub fn min_char_vector_with(
    g: &GramMatrix,
    cfg: &EnumConfig,
) -> Result<CharVecResult, CharVecError> {
    if g.definiteness() != Definiteness::PositiveDefinite {
        return Err(CharVecError::NotPositiveDefinite);
    }
    if !g.is_unimodular() {
        return Err(CharVecError::NotUnimodular);
    }
    let n = g.rank();
    let coset = solve_char_coset(g)?;
    let w0 = coset.base.0;
    // Q(w0) is attained at u = 0 and n bounds the minimum for unimodular forms.
    let radius = g.norm(&w0).min(BigInt::from(n));
    let two = BigInt::from(2);
    let query = EnumQuery::new(
        g.clone(),
        w0.iter()
            .map(|c| BigRational::new(c.clone(), two.clone()))
            .collect(),
        BigRational::new(radius, BigInt::from(4)),
    )?;
    let found = minimize_coset_with(&query, cfg)?;
    let Some(min) = found.minimum else {
        return Err(CharVecError::Inconsistent(
            "no characteristic vector within the initial radius".into(),
        ));
    };
    let m = min * BigRational::from_integer(BigInt::from(4));
    if !m.is_integer() {
        return Err(CharVecError::Inconsistent(format!(
            "characteristic norm {m} is not an integer"
        )));
    }
    let m = m.to_integer();
    let diff = BigInt::from(n) - &m;
    if !(&diff % BigInt::from(8)).is_zero() {
        return Err(CharVecError::Inconsistent(format!(
            "minimal characteristic norm {m} is not congruent to {n} mod 8"
        )));
    }
    // u -> w0 + 2u is increasing in every coordinate, so the order is kept.
    let minimizers: Vec<LatticeVector> = found
        .minimizers
        .iter()
        .map(|u| {
            LatticeVector(
                u.0.iter()
                    .zip(&w0)
                    .map(|(ui, wi)| wi + &two * ui)
                    .collect(),
            )
        })
        .collect();
    let minimizer = minimizers
        .iter()
        .min()
        .cloned()
        .expect("minimum is attained");
    Ok(CharVecResult {
        minimizer,
        norm_m: m.to_u64().expect("norm is nonnegative and small"),
        k: (diff / BigInt::from(8)).to_i64().expect("k fits"),
        count_minimizers: minimizers.len() as u64,
        base: LatticeVector(w0),
        stats: found.stats,
    })
}

pub fn elkies_verdict(g: &GramMatrix) -> Result<ElkiesVerdict, CharVecError> {
    elkies_verdict_with(g, &EnumConfig::default())
}

pub fn elkies_verdict_with(g: &GramMatrix, cfg: &EnumConfig) -> Result<ElkiesVerdict, CharVecError> {
    let r = min_char_vector_with(g, cfg)?;
    let n = g.rank() as u64;
    if r.norm_m == n {
        Ok(ElkiesVerdict::Identity(r))
    } else if r.norm_m + 8 <= n {
        Ok(ElkiesVerdict::HasShortCharVector(r))
    } else {
        Err(CharVecError::Inconsistent(format!(
            "minimal characteristic norm {} exceeds rank {n}",
            r.norm_m
        )))
    }
}

/// `(w, w) ≡ signature (mod 8)` for a minimal characteristic `w` of a definite
/// unimodular form. The norm is taken in the form itself, so negative definite
/// forms compare `-m` with `-n`.
pub fn signature_mod8_check(g: &GramMatrix) -> Result<bool, CharVecError> {
    signature_mod8_check_with(g, &EnumConfig::default())
}

pub fn signature_mod8_check_with(g: &GramMatrix, cfg: &EnumConfig) -> Result<bool, CharVecError> {
    if !g.is_unimodular() {
        return Err(CharVecError::NotUnimodular);
    }
    let (positive, sign) = match g.definiteness() {
        Definiteness::PositiveDefinite => (g.clone(), 1i64),
        Definiteness::NegativeDefinite => (g.negate(), -1i64),
        _ => return Err(CharVecError::NotDefinite),
    };
    let r = min_char_vector_with(&positive, cfg)?;
    let norm = sign * r.norm_m as i64;
    let sigma = g
        .signature()
        .map_err(|e| CharVecError::Inconsistent(e.to_string()))?;
    Ok((norm - sigma).rem_euclid(8) == 0)
}

/// Number of vectors of norm 1. A positive definite unimodular form is
/// isometric to `Z^n` iff this is `2n`.
pub fn count_unit_vectors(g: &GramMatrix) -> Result<u64, CharVecError> {
    count_unit_vectors_with(g, &EnumConfig::default())
}

pub fn count_unit_vectors_with(g: &GramMatrix, cfg: &EnumConfig) -> Result<u64, CharVecError> {
    let query = EnumQuery::centered(g.clone(), BigRational::from_integer(BigInt::from(1)));
    let r = enumerate_coset_with(&query, cfg).map_err(|e| match e {
        EnumError::NotPositiveDefinite => CharVecError::NotPositiveDefinite,
        other => CharVecError::Enum(other),
    })?;
    Ok(r.norms.iter().filter(|x| x.numer().is_positive()).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_base_is_all_ones() {
        for n in 1..=6 {
            let g = GramMatrix::identity(n);
            let c = solve_char_coset(&g).unwrap();
            assert_eq!(c.base, LatticeVector::from_i64(&vec![1; n]));
            // (b) checked on every 0/1 vector
            for mask in 0u32..(1 << n) {
                let v: Vec<BigInt> = (0..n).map(|i| BigInt::from((mask >> i) & 1)).collect();
                assert!(satisfies_char_condition(&g, &v, &c.base.0));
            }
        }
    }

    #[test]
    fn e8_base_is_zero() {
        let c = solve_char_coset(&catalog::e8()).unwrap();
        assert_eq!(c.base, LatticeVector::zero(8));
        assert!(c.warning.is_none());
    }

    #[test]
    fn d12plus_base_is_characteristic() {
        let g = catalog::d_n_plus(12).unwrap();
        let c = solve_char_coset(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let v: Vec<BigInt> = (0..12).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
            assert!(satisfies_char_condition(&g, &v, &c.base.0));
        }
    }

    #[test]
    fn symmetric_systems_always_solvable() {
        // For symmetric G over GF(2) and Gv = 0, diag·v = v^T G v = 0, so the
        // diagonal lies in the image and NoSolution cannot occur.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let n = rng.gen_range(1..=7);
            let mut rows = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    let x = rng.gen_range(-3..=3);
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
            }
            let g = GramMatrix::from_i64(&rows).unwrap();
            let c = solve_char_coset(&g).unwrap();
            assert!(is_characteristic(&g, &c.base.0));
            assert_eq!(c.warning.is_some(), !g.is_unimodular());
        }
    }

    #[test]
    fn min_char_examples() {
        let r = min_char_vector(&GramMatrix::identity(3)).unwrap();
        assert_eq!((r.norm_m, r.k), (3, 0));
        assert_eq!(r.minimizer, LatticeVector::from_i64(&[-1, -1, -1]));
        assert_eq!(r.count_minimizers, 8);

        let r = min_char_vector(&catalog::e8()).unwrap();
        assert_eq!((r.norm_m, r.k), (0, 1));
        assert_eq!(r.minimizer, LatticeVector::zero(8));
        assert_eq!(r.count_minimizers, 1);

        let e8z = catalog::e8().direct_sum(&GramMatrix::identity(1));
        let r = min_char_vector(&e8z).unwrap();
        assert_eq!((r.norm_m, r.k), (1, 1));

        let r = min_char_vector(&catalog::d_n_plus(12).unwrap()).unwrap();
        assert_eq!((r.norm_m, r.k), (4, 1));
        assert!(is_characteristic(&catalog::d_n_plus(12).unwrap(), &r.minimizer.0));
    }

    #[test]
    fn min_char_errors() {
        assert_eq!(
            min_char_vector(&GramMatrix::identity(2).negate()),
            Err(CharVecError::NotPositiveDefinite)
        );
        assert_eq!(
            min_char_vector(&catalog::d_n(4).unwrap()),
            Err(CharVecError::NotUnimodular)
        );
    }

    #[test]
    fn verdicts() {
        assert!(elkies_verdict(&GramMatrix::identity(5)).unwrap().is_identity());
        match elkies_verdict(&catalog::e8()).unwrap() {
            ElkiesVerdict::HasShortCharVector(r) => assert_eq!((r.norm_m, r.k), (0, 1)),
            v => panic!("unexpected {v:?}"),
        }
        match elkies_verdict(&catalog::d_n_plus(12).unwrap()).unwrap() {
            ElkiesVerdict::HasShortCharVector(r) => assert_eq!((r.norm_m, r.k), (4, 1)),
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn mod8_examples() {
        for n in 1..=8 {
            assert!(signature_mod8_check(&GramMatrix::identity(n)).unwrap());
        }
        assert!(signature_mod8_check(&catalog::e8()).unwrap());
        assert!(signature_mod8_check(&catalog::e8().negate()).unwrap());
        assert!(signature_mod8_check(&GramMatrix::identity(3).negate()).unwrap());
        assert_eq!(
            signature_mod8_check(&GramMatrix::diagonal(&[1, -1])),
            Err(CharVecError::NotDefinite)
        );
    }

    #[test]
    fn unit_vector_counts() {
        assert_eq!(count_unit_vectors(&GramMatrix::identity(4)).unwrap(), 8);
        assert_eq!(count_unit_vectors(&catalog::e8()).unwrap(), 0);
        let u = vec![ints(&[1, 1, 0]), ints(&[0, 1, 0]), ints(&[2, 1, 1])];
        let g = GramMatrix::identity(3).basis_change(&u).unwrap();
        assert_ne!(g, GramMatrix::identity(3));
        assert_eq!(count_unit_vectors(&g).unwrap(), 6);
        assert_eq!(
            count_unit_vectors(&GramMatrix::identity(2).negate()),
            Err(CharVecError::NotPositiveDefinite)
        );
    }
}
