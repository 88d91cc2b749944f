//! Analysis reports shared by the command line and the Python bindings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::catalog::Golden;
use crate::charvec::{count_unit_vectors_with, min_char_vector_with, CharVecResult, VerdictLabel};
use crate::enumerate::{
    brute_force_coset, enumerate_coset_with, sufficient_box, EnumConfig, EnumQuery, EnumStats,
};
use crate::json::bigint_number;
use crate::lattice::{Definiteness, GramMatrix, LatticeVector, Parity};
use crate::manifold::{donaldson_verdict_with, ManifoldDescriptor, ManifoldError, ModuliReport, ModuliVerdict};

pub const FORMAT_VERSION: u32 = 1;

/// Largest box `(2B + 1)^n` the brute-force cross-check will scan.
pub const ORACLE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    /// File path, or `catalog`.
    pub source: String,
    pub form_id: Option<String>,
    pub b1: Option<u64>,
    pub negated: bool,
    pub form: GramMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharVecReport {
    /// True when the search ran on the negation of a negative definite form.
    pub on_negation: bool,
    pub n: usize,
    pub m: u64,
    pub k: i64,
    pub base: LatticeVector,
    pub minimizer: LatticeVector,
    pub count_minimizers: u64,
    pub verdict: VerdictLabel,
    pub unit_vectors: u64,
    /// `unit_vectors == 2n` exactly when the verdict is `Identity`.
    pub unit_vectors_agree: bool,
    pub mod8_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Agrees,
    Mismatch,
    Skipped,
}

/// Enumeration of the minimal characteristic shell against a box scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub status: OracleStatus,
    pub box_half_width: u64,
    pub engine_count: u64,
    pub oracle_count: Option<u64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub expected: Golden,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    pub validation: String,
    #[serde(with = "bigint_number")]
    pub determinant: BigInt,
    pub unimodular: bool,
    pub definiteness: Definiteness,
    pub parity: Parity,
    pub signature: Option<i64>,
    pub charvec: Option<CharVecReport>,
    pub oracle: Option<OracleReport>,
    pub golden: Option<GoldenCheck>,
    pub moduli: Option<ModuliReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: u32,
    pub command: String,
    pub input: InputEcho,
    pub stages: Stages,
    pub notes: Vec<String>,
    /// Verification failures; empty on success.
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<EnumStats>,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub oracle: bool,
    pub stats: bool,
    pub golden: Option<Golden>,
    pub config: EnumConfig,
}

fn structural(form: &GramMatrix) -> Stages {
    Stages {
        validation: "ok".into(),
        determinant: form.determinant(),
        unimodular: form.is_unimodular(),
        definiteness: form.definiteness(),
        parity: form.parity(),
        signature: form.signature().ok(),
        charvec: None,
        oracle: None,
        golden: None,
        moduli: None,
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render_text(&self) -> String {
        match self.command.as_str() {
            "donaldson" => render_donaldson(self),
            _ => render_analyze(self),
        }
    }
}

/// Structural checks, characteristic-vector search and optional cross-checks
/// for one form.
pub fn analyze(input: InputEcho, opts: &AnalyzeOptions) -> Report {
    let form = input.form.clone();
    let mut stages = structural(&form);
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let mut stats = None;

    let target = match (stages.definiteness, stages.unimodular) {
        (Definiteness::PositiveDefinite, true) => Some((form.clone(), false)),
        (Definiteness::NegativeDefinite, true) => {
            notes.push("negative definite: characteristic search runs on the negation".into());
            Some((form.negate(), true))
        }
        (_, false) => {
            notes.push("form is not unimodular: no characteristic-vector stage".into());
            None
        }
        _ => {
            notes.push("form is not definite: no characteristic-vector stage".into());
            None
        }
    };

    if let Some((pos, on_negation)) = target {
        match min_char_vector_with(&pos, &opts.config) {
            Ok(r) => {
                let n = pos.rank();
                let verdict = if r.norm_m == n as u64 {
                    VerdictLabel::Identity
                } else {
                    VerdictLabel::HasShortCharVector
                };
                if verdict == VerdictLabel::HasShortCharVector && r.k < 1 {
                    failures.push(format!("short characteristic vector with k = {}", r.k));
                }
                let sigma = stages.signature.unwrap_or(0);
                let signed_norm = if on_negation { -(r.norm_m as i64) } else { r.norm_m as i64 };
                let mod8_ok = (signed_norm - sigma).rem_euclid(8) == 0;
                if !mod8_ok {
                    failures.push("characteristic norm is not congruent to the signature mod 8".into());
                }
                let unit_vectors = match count_unit_vectors_with(&pos, &opts.config) {
                    Ok(c) => c,
                    Err(e) => {
                        failures.push(format!("unit vector count failed: {e}"));
                        0
                    }
                };
                let unit_vectors_agree =
                    (unit_vectors == 2 * n as u64) == (verdict == VerdictLabel::Identity);
                if !unit_vectors_agree {
                    failures.push(format!(
                        "{unit_vectors} unit vectors disagree with verdict {verdict:?}"
                    ));
                }
                if opts.oracle {
                    let o = oracle_check(&pos, &r, &opts.config);
                    if o.status == OracleStatus::Mismatch {
                        failures.push("enumeration disagrees with the brute-force oracle".into());
                    }
                    stages.oracle = Some(o);
                }
                if opts.stats {
                    stats = Some(r.stats.clone());
                }
                stages.charvec = Some(CharVecReport {
                    on_negation,
                    n,
                    m: r.norm_m,
                    k: r.k,
                    base: r.base.clone(),
                    minimizer: r.minimizer.clone(),
                    count_minimizers: r.count_minimizers,
                    verdict,
                    unit_vectors,
                    unit_vectors_agree,
                    mod8_ok,
                });
            }
            Err(e) => failures.push(format!("characteristic search failed: {e}")),
        }
    }
    if opts.oracle && stages.charvec.is_none() {
        notes.push("oracle skipped: no characteristic-vector stage".into());
    }

    if let Some(expected) = &opts.golden {
        let mut mismatches = expected.structural_mismatches(&form);
        if let Some(c) = &stages.charvec {
            if let Some(m) = expected.m {
                if m != c.m {
                    mismatches.push(format!("m {} != golden {m}", c.m));
                }
            }
            if let Some(k) = expected.k {
                if k != c.k {
                    mismatches.push(format!("k {} != golden {k}", c.k));
                }
            }
        }
        failures.extend(mismatches.iter().map(|m| format!("golden: {m}")));
        stages.golden = Some(GoldenCheck {
            expected: expected.clone(),
            mismatches,
        });
    }

    Report {
        format: FORMAT_VERSION,
        command: "analyze".into(),
        input,
        stages,
        notes,
        failures,
        stats,
    }
}

/// Compares the engine and the box scan on the shell of minimal
/// characteristic vectors, `Q(u + w0/2) ≤ m/4`.
pub fn oracle_check(pos: &GramMatrix, r: &CharVecResult, cfg: &EnumConfig) -> OracleReport {
    let two = BigInt::from(2);
    let shift: Vec<BigRational> = r
        .base
        .0
        .iter()
        .map(|c| BigRational::new(c.clone(), two.clone()))
        .collect();
    let radius = BigRational::new(BigInt::from(r.norm_m), BigInt::from(4));
    let query = match EnumQuery::new(pos.clone(), shift, radius) {
        Ok(q) => q,
        Err(e) => return skipped(0, 0, format!("bad query: {e}")),
    };
    let engine = match enumerate_coset_with(&query, cfg) {
        Ok(e) => e,
        Err(e) => return skipped(0, 0, format!("enumeration failed: {e}")),
    };
    let engine_count = engine.len() as u64;
    let bbox = match sufficient_box(&query) {
        Ok(b) => b,
        Err(e) => return skipped(0, engine_count, format!("no box bound: {e}")),
    };
    let side = 2 * bbox as u128 + 1;
    let volume = side.checked_pow(pos.rank() as u32);
    if volume.is_none_or(|v| v > ORACLE_BUDGET) {
        return skipped(
            bbox,
            engine_count,
            format!(
                "box [-{bbox}, {bbox}]^{} exceeds the scan budget of {ORACLE_BUDGET} points",
                pos.rank()
            ),
        );
    }
    match brute_force_coset(&query, bbox) {
        Ok(o) => OracleReport {
            status: if o.vectors == engine.vectors && o.norms == engine.norms {
                OracleStatus::Agrees
            } else {
                OracleStatus::Mismatch
            },
            box_half_width: bbox,
            engine_count,
            oracle_count: Some(o.len() as u64),
            note: None,
        },
        Err(e) => skipped(bbox, engine_count, format!("oracle failed: {e}")),
    }
}

fn skipped(bbox: u64, engine_count: u64, note: String) -> OracleReport {
    OracleReport {
        status: OracleStatus::Skipped,
        box_half_width: bbox,
        engine_count,
        oracle_count: None,
        note: Some(note),
    }
}

/// Runs the manifold pipeline and wraps it in a report.
pub fn donaldson(
    input: InputEcho,
    b1: u64,
    cfg: &EnumConfig,
) -> Result<Report, ManifoldError> {
    let m = ManifoldDescriptor::new(b1, input.form.clone());
    let moduli = donaldson_verdict_with(&m, cfg)?;
    let mut stages = structural(&input.form);
    let mut notes = Vec::new();
    if let ModuliVerdict::NotApplicable(reason) = &moduli.verdict {
        notes.push(reason.clone());
    }
    let mut failures = Vec::new();
    if let Some(k) = moduli.k {
        if k >= 1 && moduli.sw_boundary_number != Some(1) {
            failures.push("boundary Stiefel-Whitney number is not 1".into());
        }
    }
    if moduli.surgery.iter().any(|c| !c.ok) {
        failures.push("surgery certificate failed".into());
    }
    stages.moduli = Some(moduli);
    Ok(Report {
        format: FORMAT_VERSION,
        command: "donaldson".into(),
        input: InputEcho {
            b1: Some(b1),
            ..input
        },
        stages,
        notes,
        failures,
        stats: None,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn header(out: &mut String, r: &Report) {
    let i = &r.input;
    let name = match &i.form_id {
        Some(id) => format!("{id} (catalog)"),
        None => i.source.clone(),
    };
    let neg = if i.negated { ", negated" } else { "" };
    let _ = writeln!(out, "latgate {}: {name}{neg}", r.command);
    let s = &r.stages;
    let _ = writeln!(out, "  rank          {}", i.form.rank());
    let _ = writeln!(out, "  determinant   {}", s.determinant);
    let _ = writeln!(out, "  unimodular    {}", yes_no(s.unimodular));
    let _ = writeln!(out, "  definiteness  {}", s.definiteness);
    let _ = writeln!(out, "  parity        {}", s.parity);
    match s.signature {
        Some(sig) => {
            let _ = writeln!(out, "  signature     {sig}");
        }
        None => {
            let _ = writeln!(out, "  signature     undefined (degenerate)");
        }
    }
}

fn footer(out: &mut String, r: &Report) {
    if let Some(st) = &r.stats {
        let _ = writeln!(
            out,
            "stats: {} nodes, {} prunes, {} leaves, {} branches",
            st.nodes, st.prunes, st.leaves, st.branches
        );
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    for f in &r.failures {
        let _ = writeln!(out, "FAILED: {f}");
    }
}

fn render_analyze(r: &Report) -> String {
    let mut out = String::new();
    header(&mut out, r);
    if let Some(c) = &r.stages.charvec {
        let on = if c.on_negation { " (of the negation)" } else { "" };
        let _ = writeln!(out, "characteristic vectors{on}");
        let _ = writeln!(out, "  base          {}", c.base);
        let _ = writeln!(out, "  minimal norm  m = {}", c.m);
        let _ = writeln!(out, "  k             {} = ({} - {}) / 8", c.k, c.n, c.m);
        let _ = writeln!(out, "  minimizer     {}", c.minimizer);
        let _ = writeln!(out, "  minimizers    {}", c.count_minimizers);
        let _ = writeln!(out, "  mod 8         {}", if c.mod8_ok { "ok" } else { "FAIL" });
        let _ = writeln!(
            out,
            "  unit vectors  {} (2n = {}){}",
            c.unit_vectors,
            2 * c.n,
            if c.unit_vectors_agree { "" } else { " DISAGREES" }
        );
        let verdict = match c.verdict {
            VerdictLabel::Identity => "Identity (isometric to Z^n)".to_string(),
            VerdictLabel::HasShortCharVector => {
                format!("HasShortCharVector (m = n - 8k, k = {})", c.k)
            }
        };
        let _ = writeln!(out, "verdict: {verdict}");
    }
    if let Some(o) = &r.stages.oracle {
        let status = match o.status {
            OracleStatus::Agrees => "agrees",
            OracleStatus::Mismatch => "MISMATCH",
            OracleStatus::Skipped => "skipped",
        };
        let _ = write!(out, "oracle: {status}, engine {} vectors", o.engine_count);
        if let Some(c) = o.oracle_count {
            let _ = write!(out, ", box scan {c} vectors in [-{b}, {b}]^n", b = o.box_half_width);
        }
        if let Some(n) = &o.note {
            let _ = write!(out, " ({n})");
        }
        out.push('\n');
    }
    if let Some(g) = &r.stages.golden {
        if g.mismatches.is_empty() {
            let _ = writeln!(out, "goldens: reproduced");
        }
    }
    footer(&mut out, r);
    out
}

fn render_donaldson(r: &Report) -> String {
    let mut out = String::new();
    header(&mut out, r);
    let Some(m) = &r.stages.moduli else {
        footer(&mut out, r);
        return out;
    };
    let _ = writeln!(out, "pipeline");
    let loops = m.surgery.len();
    if loops == 0 {
        let _ = writeln!(out, "  1. surgery: b1 = 0 already, nothing to do");
    } else {
        let sums: Vec<String> = m
            .surgery
            .iter()
            .flat_map(|c| c.sequences.iter().map(|s| s.alternating_sum.to_string()))
            .collect();
        let _ = writeln!(
            out,
            "  1. surgery: b1 {} -> 0 along {loops} loop(s), form unchanged, \
             Mayer-Vietoris rank sums [{}]",
            m.b1_input,
            sums.join(", ")
        );
    }
    let (Some(c1sq), Some(k), Some(d)) = (m.c1_squared, m.k, m.virtual_dim) else {
        let reason = match &m.verdict {
            ModuliVerdict::NotApplicable(reason) => reason.as_str(),
            _ => "",
        };
        let _ = writeln!(out, "  stopped: {reason}");
        let _ = writeln!(out, "verdict: NotApplicable");
        footer(&mut out, r);
        return out;
    };
    let sigma = m.sigma.unwrap_or(0);
    if let Some(c1) = &m.c1_class {
        let _ = writeln!(
            out,
            "  2. line bundle: c1(L) = {c1}, a shortest characteristic vector of -Q"
        );
    }
    let _ = writeln!(
        out,
        "     c1(L)^2 = {c1sq} = -b2 + 8k with b2 = {}, k = {k}",
        m.b2
    );
    let _ = writeln!(
        out,
        "  3. virtual dimension: (c1^2 - (2chi + 3sigma)) / 4 = ({c1sq} - (2*{} + 3*({sigma}))) / 4 = {d} = 2k - 1 + b1",
        m.chi
    );
    match (&m.boundary, m.sw_boundary_number) {
        (Some(b), Some(w)) => {
            let _ = writeln!(
                out,
                "  4. reducible point: based moduli space of dimension {}, link {b}, \
                 w2^{}[{b}] = {w}",
                m.based_dim.unwrap_or(d + 1),
                k - 1
            );
            let _ = writeln!(
                out,
                "  5. the circle bundle extends over the compact truncated moduli space, \
                 so every boundary Stiefel-Whitney number must vanish: contradiction"
            );
        }
        _ => {
            let _ = writeln!(
                out,
                "  4. k = 0: dimension {d} < 0, no moduli argument; the form is minus the identity"
            );
        }
    }
    let _ = writeln!(out, "verdict: {}", m.verdict.label());
    footer(&mut out, r);
    out
}
