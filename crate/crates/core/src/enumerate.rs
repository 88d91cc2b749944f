//! Exhaustive enumeration of the lattice points of a shifted ball.
//!
//! [`enumerate_coset`] returns every `u ∈ Z^n` with `Q(u + t) ≤ R` using a
//! Fincke–Pohst depth-first search over the exact rational `LDL^T`
//! factorization of the form. [`brute_force_coset`] answers the same query by
//! scanning a box and shares no code with the search; it exists to check it.
//!
//! The search runs in an LLL-reduced basis and maps solutions back.
//! When the problem scaled to a common denominator fits in `i128`, the search
//! runs in exact machine integers; any overflow falls back to the rational
//! walker. The top-level coordinate range is split into independent branches,
//! which may run on the rayon pool. Each branch is searched with its own state, so
//! the merged output and the statistics do not depend on the worker count.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Definiteness, GramMatrix, LatticeError, LatticeVector};
use crate::lll::lll_reduce;

pub const DEFAULT_RANK_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("rank {rank} exceeds the enumeration cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("shift has length {got}, form has rank {expected}")]
    ShiftLength { expected: usize, got: usize },
    #[error("radius must be nonnegative")]
    NegativeRadius,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumConfig {
    pub rank_cap: usize,
    /// Run top-level branches on the rayon pool.
    pub parallel: bool,
    /// Try the scaled `i128` search before the rational one.
    pub machine_ints: bool,
    /// Search in an LLL-reduced basis.
    pub reduce: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            rank_cap: DEFAULT_RANK_CAP,
            parallel: true,
            machine_ints: true,
            reduce: true,
        }
    }
}

/// Find every `u` with `Q(u + shift) ≤ radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumQuery {
    pub form: GramMatrix,
    pub shift: Vec<BigRational>,
    pub radius: BigRational,
}

impl EnumQuery {
    pub fn new(
        form: GramMatrix,
        shift: Vec<BigRational>,
        radius: BigRational,
    ) -> Result<Self, EnumError> {
        let q = EnumQuery {
            form,
            shift,
            radius,
        };
        q.check()?;
        Ok(q)
    }

    /// Query around the origin.
    pub fn centered(form: GramMatrix, radius: BigRational) -> Self {
        let n = form.rank();
        EnumQuery {
            form,
            shift: vec![BigRational::zero(); n],
            radius,
        }
    }

    fn check(&self) -> Result<(), EnumError> {
        if self.shift.len() != self.form.rank() {
            return Err(EnumError::ShiftLength {
                expected: self.form.rank(),
                got: self.shift.len(),
            });
        }
        if self.radius.is_negative() {
            return Err(EnumError::NegativeRadius);
        }
        Ok(())
    }
}

/// Search-tree counters, reported by `--stats`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumStats {
    /// Interior and leaf nodes visited.
    pub nodes: u64,
    /// Nodes whose admissible coordinate interval was empty.
    pub prunes: u64,
    /// Points accepted at the bottom level.
    pub leaves: u64,
    /// Independent top-level branches.
    pub branches: u64,
}

impl EnumStats {
    fn absorb(&mut self, other: &EnumStats) {
        self.nodes += other.nodes;
        self.prunes += other.prunes;
        self.leaves += other.leaves;
        self.branches += other.branches;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumResult {
    /// Lexicographically sorted, duplicate free.
    pub vectors: Vec<LatticeVector>,
    /// `norms[i] = Q(vectors[i] + shift)`.
    pub norms: Vec<BigRational>,
    pub exhaustive: bool,
    pub stats: EnumStats,
}

impl EnumResult {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn from_hits(mut hits: Vec<(LatticeVector, BigRational)>, stats: EnumStats) -> Self {
        hits.sort_by(|a, b| a.0.cmp(&b.0));
        hits.dedup_by(|a, b| a.0 == b.0);
        let (vectors, norms) = hits.into_iter().unzip();
        EnumResult {
            vectors,
            norms,
            exhaustive: true,
            stats,
        }
    }
}

/// Result of a minimum search over a shifted ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinResult {
    /// `None` when no point lies within the initial radius.
    pub minimum: Option<BigRational>,
    /// Every point attaining the minimum, sorted.
    pub minimizers: Vec<LatticeVector>,
    pub stats: EnumStats,
}

// Cholesky fails only on forms that are not positive definite.
fn from_lattice(_: LatticeError) -> EnumError {
    EnumError::NotPositiveDefinite
}

pub fn enumerate_coset(q: &EnumQuery) -> Result<EnumResult, EnumError> {
    enumerate_coset_with(q, &EnumConfig::default())
}

pub fn enumerate_coset_with(q: &EnumQuery, cfg: &EnumConfig) -> Result<EnumResult, EnumError> {
    let prep = Prepared::new(q, cfg)?;
    let (hits, stats) = prep.search(Mode::Collect, &q.radius, cfg);
    Ok(EnumResult::from_hits(hits, stats))
}

/// Minimum of `Q(u + t)` over the points within the query radius, with all
/// minimizers. The radius shrinks to the best value found in each branch.
pub fn minimize_coset_with(q: &EnumQuery, cfg: &EnumConfig) -> Result<MinResult, EnumError> {
    let prep = Prepared::new(q, cfg)?;
    let (hits, stats) = prep.search(Mode::Minimize, &q.radius, cfg);
    let minimum = hits.iter().map(|h| &h.1).min().cloned();
    let mut minimizers: Vec<LatticeVector> = match &minimum {
        Some(min) => hits
            .into_iter()
            .filter(|h| &h.1 == min)
            .map(|h| h.0)
            .collect(),
        None => Vec::new(),
    };
    minimizers.sort();
    minimizers.dedup();
    Ok(MinResult {
        minimum,
        minimizers,
        stats,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Collect,
    Minimize,
}

struct Prepared {
    n: usize,
    diag: Vec<BigRational>,
    /// Per row, the nonzero strictly-upper entries `(j, upper[i][j])`.
    upper: Vec<Vec<(usize, BigRational)>>,
    shift: Vec<BigRational>,
    /// `H^T` when the search runs in an LLL-reduced basis `H`; a solution
    /// `v` there is `H^T v` in the caller's coordinates.
    back: Option<Vec<Vec<BigInt>>>,
}

impl Prepared {
    fn new(q: &EnumQuery, cfg: &EnumConfig) -> Result<Self, EnumError> {
        q.check()?;
        let n = q.form.rank();
        if n > cfg.rank_cap {
            return Err(EnumError::RankCapExceeded {
                rank: n,
                cap: cfg.rank_cap,
            });
        }
        let mut chol = q.form.cholesky().map_err(from_lattice)?;
        let mut shift = q.shift.clone();
        let mut back = None;
        if cfg.reduce && n > 1 {
            let red = lll_reduce(&q.form);
            let moved = red
                .basis
                .iter()
                .enumerate()
                .any(|(i, row)| row.iter().enumerate().any(|(j, x)| *x != BigInt::from((i == j) as u8)));
            if moved {
                chol = red.gram.cholesky().map_err(from_lattice)?;
                // s = H^{-T} t
                shift = (0..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&j| !red.inverse[j][i].is_zero() && !q.shift[j].is_zero())
                            .map(|j| BigRational::from_integer(red.inverse[j][i].clone()) * &q.shift[j])
                            .sum()
                    })
                    .collect();
                back = Some(
                    (0..n)
                        .map(|c| (0..n).map(|i| red.basis[i][c].clone()).collect())
                        .collect(),
                );
            }
        }
        let upper = chol
            .upper
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .skip(i + 1)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Ok(Prepared {
            n,
            diag: chol.diag,
            upper,
            shift,
            back,
        })
    }

    fn search(&self, mode: Mode, radius: &BigRational, cfg: &EnumConfig) -> (Vec<Hit>, EnumStats) {
        let scaled = if cfg.machine_ints {
            Scaled::new(self, radius).and_then(|s| s.run(mode, cfg.parallel))
        } else {
            None
        };
        let (mut hits, stats) = scaled.unwrap_or_else(|| self.run(mode, radius, cfg.parallel));
        if let Some(back) = &self.back {
            for (v, _) in hits.iter_mut() {
                *v = LatticeVector(
                    back.iter()
                        .map(|row| {
                            row.iter()
                                .zip(&v.0)
                                .filter(|(h, x)| !h.is_zero() && !x.is_zero())
                                .map(|(h, x)| h * x)
                                .sum()
                        })
                        .collect(),
                );
            }
        }
        (hits, stats)
    }

    fn run(
        &self,
        mode: Mode,
        radius: &BigRational,
        parallel: bool,
    ) -> (Vec<Hit>, EnumStats) {
        let top = self.n - 1;
        let mut root = Walker::new(self, mode, radius.clone());
        root.stats.nodes += 1;
        let c = self.shift[top].clone();
        let zero = BigRational::zero();
        let Some(low) = root.interval_low(top, &zero, &c) else {
            root.stats.prunes += 1;
            return (Vec::new(), root.stats);
        };
        let mut firsts = Vec::new();
        let mut u = low;
        while let Some(next) = root.fits(top, &zero, &u, &c) {
            firsts.push((u.clone(), next));
            u += 1;
        }
        let branch = |(u, acc): &(BigInt, BigRational)| {
            let mut w = Walker::new(self, mode, radius.clone());
            w.stats.branches = 1;
            w.set(top, u);
            if top == 0 {
                w.stats.nodes += 1;
                w.leaf(acc.clone());
            } else {
                w.descend(top - 1, acc.clone());
            }
            (w.hits, w.stats)
        };
        let parts: Vec<_> = if parallel && firsts.len() > 1 {
            firsts.par_iter().map(branch).collect()
        } else {
            firsts.iter().map(branch).collect()
        };
        let mut stats = root.stats;
        let mut hits = Vec::new();
        for (h, s) in parts {
            stats.absorb(&s);
            hits.extend(h);
        }
        (hits, stats)
    }
}

struct Walker<'a> {
    p: &'a Prepared,
    mode: Mode,
    radius: BigRational,
    coords: Vec<BigInt>,
    /// `x = coords + shift`.
    x: Vec<BigRational>,
    hits: Vec<(LatticeVector, BigRational)>,
    stats: EnumStats,
}

impl<'a> Walker<'a> {
    fn new(p: &'a Prepared, mode: Mode, radius: BigRational) -> Self {
        Walker {
            p,
            mode,
            radius,
            coords: vec![BigInt::zero(); p.n],
            x: p.shift.clone(),
            hits: Vec::new(),
            stats: EnumStats::default(),
        }
    }

    fn set(&mut self, level: usize, u: &BigInt) {
        self.coords[level] = u.clone();
        self.x[level] = BigRational::from_integer(u.clone()) + &self.p.shift[level];
    }

    /// Offset `c` such that the level term is `diag * (u + c)^2`.
    fn offset(&self, level: usize) -> BigRational {
        let mut c = self.p.shift[level].clone();
        for (j, mu) in &self.p.upper[level] {
            if !self.x[*j].is_zero() {
                c += mu * &self.x[*j];
            }
        }
        c
    }

    /// `acc + diag * (u + c)^2` if it stays within the radius.
    fn fits(
        &self,
        level: usize,
        acc: &BigRational,
        u: &BigInt,
        c: &BigRational,
    ) -> Option<BigRational> {
        let y = BigRational::from_integer(u.clone()) + c;
        let next = acc + &self.p.diag[level] * &y * &y;
        if next <= self.radius {
            Some(next)
        } else {
            None
        }
    }

    /// Smallest admissible integer at this level, or `None` if there is none.
    ///
    /// The admissible set is an interval around `-c`. A floating-point guess
    /// for its left end is corrected by exact tests, so the result is exact.
    fn interval_low(&self, level: usize, acc: &BigRational, c: &BigRational) -> Option<BigInt> {
        let center = -c;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let nearest = (&center + &half).floor().to_integer();
        self.fits(level, acc, &nearest, c)?;
        let rem = &self.radius - acc;
        let guess = (&rem / &self.p.diag[level])
            .to_f64()
            .zip(center.to_f64())
            .filter(|(b, m)| b.is_finite() && m.is_finite())
            .map(|(b, m)| (m - b.sqrt()).ceil())
            .and_then(bigint_from_f64);
        let mut g = match guess {
            Some(g) if g < nearest => g,
            _ => nearest.clone(),
        };
        while g < nearest && self.fits(level, acc, &g, c).is_none() {
            g += 1;
        }
        loop {
            let prev = &g - 1;
            if self.fits(level, acc, &prev, c).is_some() {
                g = prev;
            } else {
                break;
            }
        }
        Some(g)
    }

    fn descend(&mut self, level: usize, acc: BigRational) {
        self.stats.nodes += 1;
        let c = self.offset(level);
        let Some(mut u) = self.interval_low(level, &acc, &c) else {
            self.stats.prunes += 1;
            return;
        };
        // The radius may shrink while iterating (minimize mode), so
        // admissibility is re-tested for every candidate. A candidate left of
        // the centre can fail while later ones still fit.
        loop {
            match self.fits(level, &acc, &u, &c) {
                Some(next) => {
                    self.set(level, &u);
                    if level == 0 {
                        self.stats.nodes += 1;
                        self.leaf(next);
                    } else {
                        self.descend(level - 1, next);
                    }
                }
                None if (BigRational::from_integer(u.clone()) + &c).is_positive() => break,
                None => {}
            }
            u += 1;
        }
        self.coords[level] = BigInt::zero();
        self.x[level] = self.p.shift[level].clone();
    }

    fn leaf(&mut self, norm: BigRational) {
        self.stats.leaves += 1;
        if self.mode == Mode::Minimize && norm < self.radius {
            self.radius = norm.clone();
            self.hits.clear();
        }
        self.hits.push((LatticeVector(self.coords.clone()), norm));
    }
}

type Hit = (LatticeVector, BigRational);
/// Scaled hits `(coords, norm numerator)` and counters of one top-level branch.
type ScaledBranch = (Vec<(Vec<i64>, i128)>, EnumStats);

/// The search problem multiplied through by a common denominator.
///
/// With `x = u + t = X / D` and `L` clearing the denominators of the `LDL^T`
/// multipliers, `Y_i = L X_i + Σ_{j>i} L μ_ij X_j` is an integer and
/// `S Q(x) = Σ d'_i Y_i^2` with integer `d'_i`, so every partial sum and the
/// radius `S R` are integers.
struct Scaled {
    n: usize,
    d: Vec<i128>,
    nu: Vec<Vec<(usize, i128)>>,
    a: Vec<i128>,
    den: i128,
    l: i128,
    limit: i128,
    scale: BigInt,
}

fn lcm_of_denoms<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

impl Scaled {
    fn new(p: &Prepared, radius: &BigRational) -> Option<Scaled> {
        let den = lcm_of_denoms(p.shift.iter());
        let l = lcm_of_denoms(p.upper.iter().flatten().map(|(_, v)| v));
        let e = lcm_of_denoms(p.diag.iter());
        let m = &l * &den;
        let d_scale = &e * radius.denom();
        let scale = &d_scale * &m * &m;
        let small = |x: BigInt| x.to_i128();
        let int = |r: &BigRational, f: &BigInt| {
            let v = r * BigRational::from_integer(f.clone());
            debug_assert!(v.is_integer());
            v.to_integer().to_i128()
        };
        Some(Scaled {
            n: p.n,
            d: p.diag.iter().map(|x| int(x, &d_scale)).collect::<Option<_>>()?,
            nu: p
                .upper
                .iter()
                .map(|row| row.iter().map(|(j, v)| Some((*j, int(v, &l)?))).collect())
                .collect::<Option<_>>()?,
            a: p.shift.iter().map(|t| int(t, &den)).collect::<Option<_>>()?,
            den: small(den)?,
            l: small(l)?,
            limit: small(radius.numer() * &e * &m * &m)?,
            scale,
        })
    }

    /// Admissible `u` at `level` given the contribution `k` of the levels
    /// above: all `u` with `acc + d (M u + k)^2 ≤ limit`, where `M = L D`.
    fn interval(&self, level: usize, acc: i128, limit: i128, k: i128) -> Option<(i128, i128)> {
        let rem = limit.checked_sub(acc)?;
        if rem < 0 {
            return Some((1, 0));
        }
        let s = (rem / self.d[level]).sqrt();
        let m = self.l.checked_mul(self.den)?;
        let lo = -Integer::div_floor(&s.checked_add(k)?, &m);
        let hi = Integer::div_floor(&s.checked_sub(k)?, &m);
        Some((lo, hi))
    }

    fn term(&self, level: usize, u: i128, k: i128) -> Option<i128> {
        let y = self.l.checked_mul(self.den)?.checked_mul(u)?.checked_add(k)?;
        self.d[level].checked_mul(y.checked_mul(y)?)
    }

    fn run(&self, mode: Mode, parallel: bool) -> Option<(Vec<Hit>, EnumStats)> {
        let top = self.n - 1;
        let mut stats = EnumStats {
            nodes: 1,
            ..Default::default()
        };
        let k = self.l.checked_mul(self.a[top])?;
        let (lo, hi) = self.interval(top, 0, self.limit, k)?;
        if lo > hi {
            stats.prunes += 1;
            return Some((Vec::new(), stats));
        }
        let mut firsts = Vec::new();
        for u in lo..=hi {
            firsts.push((u, self.term(top, u, k)?));
        }
        let branch = |&(u, acc): &(i128, i128)| -> Option<ScaledBranch> {
            let mut w = ScaledWalker {
                s: self,
                mode,
                limit: self.limit,
                coords: vec![0; self.n],
                x: vec![0; self.n],
                hits: Vec::new(),
                stats: EnumStats {
                    branches: 1,
                    ..Default::default()
                },
            };
            w.set(top, u)?;
            if top == 0 {
                w.stats.nodes += 1;
                w.leaf(acc);
            } else {
                w.descend(top - 1, acc)?;
            }
            Some((w.hits, w.stats))
        };
        let parts: Option<Vec<_>> = if parallel && firsts.len() > 1 {
            firsts.par_iter().map(branch).collect()
        } else {
            firsts.iter().map(branch).collect()
        };
        let mut hits = Vec::new();
        for (h, st) in parts? {
            stats.absorb(&st);
            hits.extend(h.into_iter().map(|(c, norm)| {
                (
                    LatticeVector(c.into_iter().map(BigInt::from).collect()),
                    BigRational::new(BigInt::from(norm), self.scale.clone()),
                )
            }));
        }
        Some((hits, stats))
    }
}

struct ScaledWalker<'a> {
    s: &'a Scaled,
    mode: Mode,
    limit: i128,
    coords: Vec<i64>,
    /// `X_j = D u_j + a_j` for the levels already fixed.
    x: Vec<i128>,
    hits: Vec<(Vec<i64>, i128)>,
    stats: EnumStats,
}

impl ScaledWalker<'_> {
    fn set(&mut self, level: usize, u: i128) -> Option<()> {
        self.coords[level] = i64::try_from(u).ok()?;
        self.x[level] = self.s.den.checked_mul(u)?.checked_add(self.s.a[level])?;
        Some(())
    }

    fn descend(&mut self, level: usize, acc: i128) -> Option<()> {
        self.stats.nodes += 1;
        let s = self.s;
        let mut k = s.l.checked_mul(s.a[level])?;
        for &(j, nu) in &s.nu[level] {
            k = k.checked_add(nu.checked_mul(self.x[j])?)?;
        }
        let (mut u, mut hi) = s.interval(level, acc, self.limit, k)?;
        if u > hi {
            self.stats.prunes += 1;
            return Some(());
        }
        while u <= hi {
            let next = acc.checked_add(s.term(level, u, k)?)?;
            if next <= self.limit {
                self.set(level, u)?;
                if level == 0 {
                    self.stats.nodes += 1;
                    self.leaf(next);
                } else {
                    let before = self.limit;
                    self.descend(level - 1, next)?;
                    if self.limit < before {
                        hi = s.interval(level, acc, self.limit, k)?.1;
                    }
                }
            }
            u += 1;
        }
        Some(())
    }

    fn leaf(&mut self, norm: i128) {
        self.stats.leaves += 1;
        if self.mode == Mode::Minimize && norm < self.limit {
            self.limit = norm;
            self.hits.clear();
        }
        self.hits.push((self.coords.clone(), norm));
    }
}

fn bigint_from_f64(v: f64) -> Option<BigInt> {
    if v.is_finite() && v.abs() < 1e15 {
        Some(BigInt::from(v as i64))
    } else {
        None
    }
}

fn is_positive_definite(g: &GramMatrix) -> bool {
    g.definiteness() == Definiteness::PositiveDefinite
}

/// Same contract as [`enumerate_coset`], by scanning `[-bbox, bbox]^n`.
///
/// Works on the Gram matrix directly in scaled integer arithmetic and shares
/// nothing with the search. Exhaustive only if `bbox` is at least
/// [`sufficient_box`].
pub fn brute_force_coset(q: &EnumQuery, bbox: u64) -> Result<EnumResult, EnumError> {
    q.check()?;
    if !is_positive_definite(&q.form) {
        return Err(EnumError::NotPositiveDefinite);
    }
    let n = q.form.rank();
    // x = u + t = (D u + a) / D with a common denominator D.
    let den = q
        .shift
        .iter()
        .fold(BigInt::one(), |acc, t| num_integer::Integer::lcm(&acc, t.denom()));
    let numer: Vec<BigInt> = q
        .shift
        .iter()
        .map(|t| t.numer() * (&den / t.denom()))
        .collect();
    let den_sq = &den * &den;
    // Q(x) <= p/r  <=>  X^T G X * r <= p * D^2.
    let limit = q.radius.numer() * &den_sq;
    let rdenom = q.radius.denom().clone();
    let b = bbox as i64;
    // Machine-integer copies, used for a point whenever nothing overflows.
    let small_g: Option<Vec<Vec<i128>>> = (0..n)
        .map(|i| q.form.row(i).iter().map(|x| x.to_i128()).collect())
        .collect();
    let small_a: Option<Vec<i128>> = numer.iter().map(|x| x.to_i128()).collect();
    let small = small_g.zip(small_a).zip(den.to_i128());
    let small_bound = rdenom.to_i128().zip(limit.to_i128());
    let small_norm = |u: &[i64]| -> Option<i128> {
        let ((g, a), d) = small.as_ref()?;
        let xs: Vec<i128> = u
            .iter()
            .zip(a)
            .map(|(&ui, ai)| (ui as i128).checked_mul(*d)?.checked_add(*ai))
            .collect::<Option<_>>()?;
        let mut total: i128 = 0;
        for (row, xi) in g.iter().zip(&xs) {
            let mut r: i128 = 0;
            for (gij, xj) in row.iter().zip(&xs) {
                r = r.checked_add(gij.checked_mul(*xj)?)?;
            }
            total = total.checked_add(r.checked_mul(*xi)?)?;
        }
        Some(total)
    };
    let mut u = vec![-b; n];
    let mut hits = Vec::new();
    let mut stats = EnumStats::default();
    loop {
        stats.nodes += 1;
        let within = |scaled: &BigInt| scaled * &rdenom <= limit;
        let hit = match small_norm(&u) {
            Some(v) => {
                let fast = small_bound.and_then(|(r, l)| Some(v.checked_mul(r)? <= l));
                let v = BigInt::from(v);
                match fast {
                    Some(true) => Some(v),
                    Some(false) => None,
                    None => within(&v).then_some(v),
                }
            }
            None => {
                let xs: Vec<BigInt> = u
                    .iter()
                    .zip(&numer)
                    .map(|(&ui, a)| BigInt::from(ui) * &den + a)
                    .collect();
                let v = q.form.norm(&xs);
                within(&v).then_some(v)
            }
        };
        if let Some(scaled) = hit {
            stats.leaves += 1;
            hits.push((
                LatticeVector(u.iter().map(|&v| BigInt::from(v)).collect()),
                BigRational::new(scaled, den_sq.clone()),
            ));
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return Ok(EnumResult::from_hits(hits, stats));
            }
            if u[i] < b {
                u[i] += 1;
                break;
            }
            u[i] = -b;
            i += 1;
        }
    }
}

/// Smallest integer `s ≥ 0` with `s^2 ≥ r`.
pub fn ceil_sqrt(r: &BigRational) -> BigInt {
    if !r.is_positive() {
        return BigInt::zero();
    }
    let c = r.ceil().to_integer();
    let mut s = c.sqrt();
    if &s * &s < c {
        s += 1;
    }
    s
}

/// A box half-width `B` such that every solution has all `|u_i| ≤ B`.
///
/// On the ellipsoid `x^T G x ≤ R` the largest `x_i^2` is `R (G^{-1})_{ii}`,
/// and the inverse diagonal comes from the Cholesky factors. Then
/// `|u_i| ≤ sqrt(R (G^{-1})_{ii}) + |t_i|`.
pub fn sufficient_box(q: &EnumQuery) -> Result<u64, EnumError> {
    q.check()?;
    let chol = q.form.cholesky().map_err(from_lattice)?;
    let inv = chol.inverse_diagonal();
    let mut best = BigInt::one();
    for (gi, t) in inv.iter().zip(&q.shift) {
        let b = ceil_sqrt(&(&q.radius * gi)) + t.abs().ceil().to_integer();
        if b > best {
            best = b;
        }
    }
    Ok(best.to_u64().unwrap_or(u64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn vecs(r: &EnumResult) -> Vec<Vec<i64>> {
        r.vectors
            .iter()
            .map(|v| v.0.iter().map(|x| x.to_i64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn unit_disc_in_z2() {
        let r = enumerate_coset(&EnumQuery::centered(GramMatrix::identity(2), q(1, 1))).unwrap();
        assert_eq!(
            vecs(&r),
            vec![vec![-1, 0], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, 0]]
        );
        assert!(r.exhaustive);
    }

    #[test]
    fn half_shift_in_z2() {
        let query = EnumQuery::new(
            GramMatrix::identity(2),
            vec![q(1, 2), q(1, 2)],
            q(1, 2),
        )
        .unwrap();
        let r = enumerate_coset(&query).unwrap();
        assert_eq!(
            vecs(&r),
            vec![vec![-1, -1], vec![-1, 0], vec![0, -1], vec![0, 0]]
        );
        assert!(r.norms.iter().all(|n| *n == q(1, 2)));
        // Oracle over the box [-3, 2]^2, written out by hand.
        let mut expect = Vec::new();
        for a in -3..=2i64 {
            for b in -3..=2i64 {
                let x = q(2 * a + 1, 2);
                let y = q(2 * b + 1, 2);
                if &x * &x + &y * &y <= q(1, 2) {
                    expect.push(vec![a, b]);
                }
            }
        }
        assert_eq!(vecs(&r), expect);
    }

    #[test]
    fn brute_force_examples() {
        let query = EnumQuery::centered(GramMatrix::identity(2), q(1, 1));
        assert_eq!(
            brute_force_coset(&query, 2).unwrap().vectors,
            enumerate_coset(&query).unwrap().vectors
        );
        let zero = brute_force_coset(&EnumQuery::centered(catalog::e8(), q(0, 1)), 1).unwrap();
        assert_eq!(zero.vectors, vec![LatticeVector::zero(8)]);
    }

    #[test]
    fn sufficient_box_examples() {
        let b = sufficient_box(&EnumQuery::centered(GramMatrix::identity(2), q(1, 1))).unwrap();
        assert!(b >= 1);
        let query = EnumQuery::new(
            GramMatrix::identity(3),
            vec![q(1, 2), q(1, 2), q(1, 2)],
            q(3, 4),
        )
        .unwrap();
        assert!(sufficient_box(&query).unwrap() >= 1);
    }

    #[test]
    fn errors() {
        let nd = GramMatrix::identity(2).negate();
        assert_eq!(
            enumerate_coset(&EnumQuery::centered(nd.clone(), q(1, 1))),
            Err(EnumError::NotPositiveDefinite)
        );
        assert_eq!(
            brute_force_coset(&EnumQuery::centered(nd, q(1, 1)), 1),
            Err(EnumError::NotPositiveDefinite)
        );
        let cfg = EnumConfig {
            rank_cap: 4,
            ..Default::default()
        };
        assert_eq!(
            enumerate_coset_with(&EnumQuery::centered(GramMatrix::identity(5), q(1, 1)), &cfg),
            Err(EnumError::RankCapExceeded { rank: 5, cap: 4 })
        );
        assert_eq!(
            EnumQuery::new(GramMatrix::identity(2), vec![q(0, 1)], q(1, 1)),
            Err(EnumError::ShiftLength {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(
            EnumQuery::new(GramMatrix::identity(1), vec![q(0, 1)], q(-1, 1)),
            Err(EnumError::NegativeRadius)
        );
    }

    #[test]
    fn rank_one_and_empty_results() {
        let g = GramMatrix::diagonal(&[3]);
        let r = enumerate_coset(&EnumQuery::centered(g.clone(), q(3, 1))).unwrap();
        assert_eq!(vecs(&r), vec![vec![-1], vec![0], vec![1]]);
        let query = EnumQuery::new(g, vec![q(1, 2)], q(1, 2)).unwrap();
        let r = enumerate_coset(&query).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn minimize_keeps_all_ties() {
        let query = EnumQuery::new(
            GramMatrix::identity(3),
            vec![q(1, 2), q(1, 2), q(1, 2)],
            q(3, 1),
        )
        .unwrap();
        let r = minimize_coset_with(&query, &EnumConfig::default()).unwrap();
        assert_eq!(r.minimum, Some(q(3, 4)));
        assert_eq!(r.minimizers.len(), 8);
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(&q(0, 1)), BigInt::from(0));
        assert_eq!(ceil_sqrt(&q(1, 1)), BigInt::from(1));
        assert_eq!(ceil_sqrt(&q(2, 1)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&q(9, 4)), BigInt::from(2));
        assert_eq!(ceil_sqrt(&q(1, 100)), BigInt::from(1));
    }
}
