//! Closed oriented 4-manifolds described by `b1` and an intersection form,
//! and the moduli-space argument that forbids non-diagonal negative definite
//! forms.
//!
//! The pipeline in [`donaldson_verdict`]:
//!
//! 1. surger loops until `b1 = 0` (the form is untouched);
//! 2. pick `c1(L)` as a shortest characteristic vector, so that
//!    `c1(L)^2 = -b2 + 8k`;
//! 3. the moduli space has dimension `(c1^2 - (2χ + 3σ)) / 4 = 2k - 1 + b1`;
//! 4. for `k ≥ 1` the reducible point is cut out along `CP^{k-1}`, where the
//!    Hopf bundle has `w_2^{k-1}[CP^{k-1}] = 1`, while a bundle extending over
//!    the compact remainder must have all such numbers zero.
//!
//! Connectedness is assumed, so `b0 = b4 = 1`, `b3 = b1` and
//! `χ = 2 - 2 b1 + b2`. Torsion is not modelled; the form is the intersection
//! form on `H_2` modulo torsion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charvec::{min_char_vector_with, CharVecError, CharVecResult};
use crate::cohomology::hopf_w2_number;
use crate::enumerate::EnumConfig;
use crate::lattice::{Definiteness, GramMatrix, LatticeError, LatticeVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifoldError {
    #[error("b1 = 0: there is no loop to surger")]
    NoLoopToSurger,
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("intersection form is not unimodular")]
    NotUnimodular,
    #[error("virtual dimension mismatch: direct {direct}, via k {via_k}")]
    InconsistentDimension { direct: String, via_k: i64 },
    #[error("k must be at least 1, got {0}")]
    InvalidK(i64),
    #[error("perturbation norm must be nonnegative")]
    NegativePerturbationNorm,
    #[error("surgery bookkeeping failed: {0}")]
    Bookkeeping(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    CharVec(#[from] CharVecError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub b1: u64,
    /// Intersection form as given (negative definite in the main case).
    pub form: GramMatrix,
}

impl ManifoldDescriptor {
    pub fn new(b1: u64, form: GramMatrix) -> Self {
        ManifoldDescriptor { b1, form }
    }

    pub fn b2(&self) -> i64 {
        self.form.rank() as i64
    }

    pub fn chi(&self) -> i64 {
        2 - 2 * self.b1 as i64 + self.b2()
    }

    pub fn sigma(&self) -> Result<i64, ManifoldError> {
        Ok(self.form.signature()?)
    }
}

/// One term of an exact sequence with its rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTerm {
    pub group: String,
    pub rank: i64,
}

/// Real-coefficient exact sequence `0 → T_0 → T_1 → ... → 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequence {
    pub label: String,
    pub terms: Vec<SequenceTerm>,
    pub alternating_sum: i64,
}

impl ExactSequence {
    fn new(label: &str, terms: Vec<SequenceTerm>) -> Self {
        let alternating_sum = terms
            .iter()
            .enumerate()
            .map(|(i, t)| if i % 2 == 0 { t.rank } else { -t.rank })
            .sum();
        ExactSequence {
            label: label.to_string(),
            terms,
            alternating_sum,
        }
    }
}

fn term(group: &str, rank: i64) -> SequenceTerm {
    SequenceTerm {
        group: group.to_string(),
        rank,
    }
}

/// Rank ledger for surgery on one loop `S^1 ⊂ X`, replacing the neighbourhood
/// `X_- ≅ S^1 × B^3` by `B^2 × S^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryCertificate {
    pub b1_before: u64,
    pub b1_after: u64,
    pub b2_before: i64,
    pub b2_after: i64,
    pub chi_before: i64,
    pub chi_after: i64,
    /// Mayer–Vietoris before and after the surgery.
    pub sequences: Vec<ExactSequence>,
    pub ok: bool,
}

/// Surgery along a loop representing a free class in `H_1`.
///
/// Before: `0 → H_2(X_-) ⊕ H_2(X_+) → H_2(X) → 0` with `H_2(S^1×B^3) = 0`,
/// which gives `rank H_2(X_+) = b2`. After:
/// `0 → H_2(S^1×S^2) → H_2(B^2×S^2) ⊕ H_2(X_+) → H_2(X') → 0`; the two new
/// rank-one groups enter on consecutive terms, so exactness gives
/// `rank H_2(X') = (1 + b2) - 1 = b2`.
pub fn surgery_reduce_b1(
    m: &ManifoldDescriptor,
) -> Result<(ManifoldDescriptor, SurgeryCertificate), ManifoldError> {
    if m.b1 == 0 {
        return Err(ManifoldError::NoLoopToSurger);
    }
    let b2 = m.b2();
    let h2_nbhd = 0; // H_2(S^1 × B^3)
    let h2_complement = b2 - h2_nbhd;
    let before = ExactSequence::new(
        "H2(X-) + H2(X+) -> H2(X)",
        vec![
            term("H2(S1xB3) + H2(X+)", h2_nbhd + h2_complement),
            term("H2(X)", b2),
        ],
    );
    let h2_neck = 1; // H_2(S^1 × S^2)
    let h2_cap = 1; // H_2(B^2 × S^2)
    let middle = h2_cap + h2_complement;
    let b2_after = middle - h2_neck;
    let after = ExactSequence::new(
        "H2(S1xS2) -> H2(B2xS2) + H2(X+) -> H2(X')",
        vec![
            term("H2(S1xS2)", h2_neck),
            term("H2(B2xS2) + H2(X+)", middle),
            term("H2(X')", b2_after),
        ],
    );
    let out = ManifoldDescriptor::new(m.b1 - 1, m.form.clone());
    let ok = before.alternating_sum == 0
        && after.alternating_sum == 0
        && b2_after == out.b2()
        && out.chi() == m.chi() + 2;
    let cert = SurgeryCertificate {
        b1_before: m.b1,
        b1_after: out.b1,
        b2_before: b2,
        b2_after,
        chi_before: m.chi(),
        chi_after: out.chi(),
        sequences: vec![before, after],
        ok,
    };
    if !ok {
        return Err(ManifoldError::Bookkeeping(format!("{cert:?}")));
    }
    Ok((out, cert))
}

/// Surgers until `b1 = 0`, returning one certificate per loop.
pub fn reduce_to_b1_zero(
    m: &ManifoldDescriptor,
) -> Result<(ManifoldDescriptor, Vec<SurgeryCertificate>), ManifoldError> {
    let mut cur = m.clone();
    let mut certs = Vec::with_capacity(m.b1 as usize);
    while cur.b1 > 0 {
        let (next, cert) = surgery_reduce_b1(&cur)?;
        cur = next;
        certs.push(cert);
    }
    Ok((cur, certs))
}

/// `c1(L)` chosen as a shortest characteristic vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleClass {
    pub c1_squared: i64,
    pub k: i64,
    pub source: CharVecResult,
}

pub fn choose_line_bundle(m: &ManifoldDescriptor) -> Result<LineBundleClass, ManifoldError> {
    choose_line_bundle_with(m, &EnumConfig::default())
}

/// Runs the characteristic-vector search on the positive definite `-Q`.
pub fn choose_line_bundle_with(
    m: &ManifoldDescriptor,
    cfg: &EnumConfig,
) -> Result<LineBundleClass, ManifoldError> {
    if m.form.definiteness() != Definiteness::NegativeDefinite {
        return Err(ManifoldError::NotNegativeDefinite);
    }
    if !m.form.is_unimodular() {
        return Err(ManifoldError::NotUnimodular);
    }
    let source = min_char_vector_with(&m.form.negate(), cfg)?;
    let mm = source.norm_m as i64;
    Ok(LineBundleClass {
        c1_squared: -mm,
        k: (m.b2() - mm) / 8,
        source,
    })
}

/// `(c1^2 - (2χ + 3σ)) / 4`, cross-checked against `2k - 1 + b1`.
pub fn virtual_dimension(m: &ManifoldDescriptor, l: &LineBundleClass) -> Result<i64, ManifoldError> {
    let numerator = l.c1_squared - (2 * m.chi() + 3 * m.sigma()?);
    let via_k = 2 * l.k - 1 + m.b1 as i64;
    if numerator.rem_euclid(4) != 0 {
        return Err(ManifoldError::InconsistentDimension {
            direct: format!("{numerator}/4"),
            via_k,
        });
    }
    let direct = numerator / 4;
    if direct != via_k {
        return Err(ManifoldError::InconsistentDimension {
            direct: direct.to_string(),
            via_k,
        });
    }
    Ok(direct)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwBoundaryNumber {
    pub value: u8,
    pub nonzero: bool,
}

/// `w_2^{k-1}[CP^{k-1}]` for the Hopf bundle over the link of the reducible
/// point.
pub fn sw_boundary_number(k: i64) -> Result<SwBoundaryNumber, ManifoldError> {
    if k < 1 {
        return Err(ManifoldError::InvalidK(k));
    }
    let value = hopf_w2_number(k as usize);
    Ok(SwBoundaryNumber {
        value,
        nonzero: value != 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuliVerdict {
    /// The form is minus the identity.
    Realizable,
    /// A nonzero boundary Stiefel–Whitney number that would have to vanish.
    Forbidden,
    NotApplicable(String),
}

impl ModuliVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ModuliVerdict::Realizable => "Realizable",
            ModuliVerdict::Forbidden => "Forbidden",
            ModuliVerdict::NotApplicable(_) => "NotApplicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub b1_input: u64,
    /// After surgery; 0 whenever the pipeline ran.
    pub b1: u64,
    pub b2: i64,
    pub chi: i64,
    pub sigma: Option<i64>,
    pub definiteness: Definiteness,
    pub c1_squared: Option<i64>,
    /// The chosen characteristic vector, in the basis of the form.
    pub c1_class: Option<LatticeVector>,
    pub k: Option<i64>,
    pub virtual_dim: Option<i64>,
    /// Dimension of the based moduli space, `virtual_dim + 1`.
    pub based_dim: Option<i64>,
    /// `CP^{k-1}`, present iff `k ≥ 1`.
    pub boundary: Option<String>,
    pub sw_boundary_number: Option<u8>,
    pub sw_number_nonzero: bool,
    /// The circle bundle extends over the truncated moduli space, which
    /// forces every boundary Stiefel–Whitney number to vanish.
    pub extension_forces_vanishing: bool,
    pub verdict: ModuliVerdict,
    pub surgery: Vec<SurgeryCertificate>,
}

pub fn donaldson_verdict(m: &ManifoldDescriptor) -> Result<ModuliReport, ManifoldError> {
    donaldson_verdict_with(m, &EnumConfig::default())
}

pub fn donaldson_verdict_with(
    m: &ManifoldDescriptor,
    cfg: &EnumConfig,
) -> Result<ModuliReport, ManifoldError> {
    let (reduced, surgery) = reduce_to_b1_zero(m)?;
    let definiteness = reduced.form.definiteness();
    let mut report = ModuliReport {
        b1_input: m.b1,
        b1: reduced.b1,
        b2: reduced.b2(),
        chi: reduced.chi(),
        sigma: reduced.sigma().ok(),
        definiteness,
        c1_squared: None,
        c1_class: None,
        k: None,
        virtual_dim: None,
        based_dim: None,
        boundary: None,
        sw_boundary_number: None,
        sw_number_nonzero: false,
        extension_forces_vanishing: false,
        verdict: ModuliVerdict::Realizable,
        surgery,
    };
    let reason = match definiteness {
        Definiteness::NegativeDefinite => None,
        Definiteness::PositiveDefinite => Some("orientation-reversed case: no reducible point"),
        Definiteness::Indefinite => Some("indefinite intersection form: no reducible point argument"),
        Definiteness::Degenerate => Some("degenerate intersection form"),
    };
    if let Some(reason) = reason {
        report.verdict = ModuliVerdict::NotApplicable(reason.to_string());
        return Ok(report);
    }
    if !reduced.form.is_unimodular() {
        return Err(ManifoldError::NotUnimodular);
    }
    let l = choose_line_bundle_with(&reduced, cfg)?;
    let d = virtual_dimension(&reduced, &l)?;
    report.c1_squared = Some(l.c1_squared);
    report.c1_class = Some(l.source.minimizer.clone());
    report.k = Some(l.k);
    report.virtual_dim = Some(d);
    report.based_dim = Some(d + 1);
    if l.k >= 1 {
        let sw = sw_boundary_number(l.k)?;
        report.boundary = Some(format!("CP^{}", l.k - 1));
        report.sw_boundary_number = Some(sw.value);
        report.sw_number_nonzero = sw.nonzero;
        report.extension_forces_vanishing = true;
        report.verdict = ModuliVerdict::Forbidden;
    } else {
        report.verdict = ModuliVerdict::Realizable;
    }
    Ok(report)
}

/// A-priori bound `|φ|^2 ≤ max(0, 4p - 2 s_min)` at a maximum of `|φ|`,
/// from `0 ≤ -(s/2)|φ|^2 - |φ|^4/4 + p|φ|^2`.
pub fn weitzenbock_bound(s_min: &BigRational, p: &BigRational) -> Result<BigRational, ManifoldError> {
    if p.is_negative() {
        return Err(ManifoldError::NegativePerturbationNorm);
    }
    let four = BigRational::from_integer(BigInt::from(4));
    let two = BigRational::from_integer(BigInt::from(2));
    let b = four * p - two * s_min;
    Ok(if b.is_negative() { BigRational::zero() } else { b })
}
