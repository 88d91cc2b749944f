//! The invariant suite behind `latgate selftest`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{standard_catalog, CatalogEntry, Golden};
use crate::charvec::{count_unit_vectors_with, elkies_verdict_with, min_char_vector_with};
use crate::enumerate::{
    brute_force_coset, enumerate_coset_with, sufficient_box, EnumConfig, EnumQuery,
};
use crate::lattice::{random_unimodular, Definiteness, GramMatrix};
use crate::manifold::{
    choose_line_bundle_with, donaldson_verdict_with, reduce_to_b1_zero, sw_boundary_number,
    virtual_dimension, weitzenbock_bound, ManifoldDescriptor, ModuliVerdict,
};

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    pub max_rank: usize,
    /// Replaces the built-in goldens of the named catalog entries.
    pub golden_overrides: BTreeMap<String, Golden>,
    pub seed: u64,
    /// Random conjugates per form in the mod-8 and invariance checks.
    pub conjugates: usize,
    pub oracle_queries: usize,
    /// Largest box the brute-force comparison scans per query.
    pub box_budget: u128,
    pub config: EnumConfig,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            max_rank: 16,
            golden_overrides: BTreeMap::new(),
            seed: 0x5eed,
            conjugates: 5,
            oracle_queries: 10,
            box_budget: 1_000_000,
            config: EnumConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

struct Rows(Vec<CheckRow>);

impl Rows {
    fn push(&mut self, name: &str, errors: Vec<String>, ok_detail: String) {
        let passed = errors.is_empty();
        self.0.push(CheckRow {
            name: name.into(),
            passed,
            detail: if passed { ok_detail } else { errors.join("; ") },
        });
    }
}

fn is_zn(id: &str) -> bool {
    id.starts_with("Zn:")
}

fn conjugate(rng: &mut ChaCha8Rng, g: &GramMatrix) -> GramMatrix {
    let u = random_unimodular(rng, g.rank(), 2);
    g.basis_change(&u).expect("random transforms are unimodular")
}

fn rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> BigRational {
    BigRational::new(rng.gen_range(lo..=hi).into(), rng.gen_range(1..=den).into())
}

pub fn run_selftest(opts: &SelftestOptions) -> Vec<CheckRow> {
    let cfg = &opts.config;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let entries: Vec<CatalogEntry> = standard_catalog()
        .into_iter()
        .filter(|e| e.gram.rank() <= opts.max_rank)
        .map(|mut e| {
            if let Some(g) = opts.golden_overrides.get(&e.id) {
                e.expected = Some(g.clone());
            }
            e
        })
        .collect();
    let unimodular_pd: Vec<&CatalogEntry> = entries
        .iter()
        .filter(|e| e.gram.is_unimodular() && e.gram.definiteness() == Definiteness::PositiveDefinite)
        .collect();
    let mut rows = Rows(Vec::new());

    // goldens
    let mut errors = Vec::new();
    for e in &entries {
        let Some(gold) = &e.expected else { continue };
        for m in gold.structural_mismatches(&e.gram) {
            errors.push(format!("{}: {m}", e.id));
        }
        if gold.m.is_some() || gold.k.is_some() {
            match min_char_vector_with(&e.gram, cfg) {
                Ok(r) => {
                    if gold.m.is_some_and(|m| m != r.norm_m) {
                        errors.push(format!("{}: m {} != golden {:?}", e.id, r.norm_m, gold.m));
                    }
                    if gold.k.is_some_and(|k| k != r.k) {
                        errors.push(format!("{}: k {} != golden {:?}", e.id, r.k, gold.k));
                    }
                }
                Err(err) => errors.push(format!("{}: {err}", e.id)),
            }
        }
    }
    rows.push("catalog goldens", errors, format!("{} entries", entries.len()));

    // dichotomy
    let mut errors = Vec::new();
    for e in &unimodular_pd {
        match elkies_verdict_with(&e.gram, cfg) {
            Ok(v) => {
                if v.is_identity() != is_zn(&e.id) {
                    errors.push(format!("{}: verdict {:?}", e.id, v.label()));
                }
                let r = v.result();
                if !v.is_identity() && (r.k < 1 || r.norm_m as i64 != e.gram.rank() as i64 - 8 * r.k) {
                    errors.push(format!("{}: m {} k {}", e.id, r.norm_m, r.k));
                }
            }
            Err(err) => errors.push(format!("{}: {err}", e.id)),
        }
    }
    rows.push("short-vector dichotomy", errors, format!("{} forms", unimodular_pd.len()));

    // oracle equivalence
    let mut errors = Vec::new();
    let mut compared = 0;
    for e in entries.iter().filter(|e| e.gram.rank() <= 6) {
        if e.gram.definiteness() != Definiteness::PositiveDefinite {
            continue;
        }
        let n = e.gram.rank();
        for _ in 0..opts.oracle_queries {
            let shift: Vec<BigRational> = (0..n).map(|_| rat(&mut rng, -4, 4, 4)).collect();
            let radius = rat(&mut rng, 0, 12, 4);
            let q = EnumQuery::new(e.gram.clone(), shift, radius).expect("well-formed query");
            let b = sufficient_box(&q).expect("positive definite");
            if (2 * b as u128 + 1).checked_pow(n as u32).is_none_or(|v| v > opts.box_budget) {
                continue;
            }
            let fast = enumerate_coset_with(&q, cfg).expect("enumeration");
            let slow = brute_force_coset(&q, b).expect("oracle");
            if fast.vectors != slow.vectors || fast.norms != slow.norms {
                errors.push(format!("{}: {} vs {} vectors", e.id, fast.len(), slow.len()));
            }
            compared += 1;
        }
    }
    rows.push("enumeration = brute force", errors, format!("{compared} queries"));

    // mod 8 and GL(n, Z) invariance on conjugates
    let mut errors = Vec::new();
    let mut conjugates = 0;
    for e in unimodular_pd.iter().filter(|e| e.gram.rank() <= 10) {
        let n = e.gram.rank() as u64;
        let base = match min_char_vector_with(&e.gram, cfg) {
            Ok(r) => r,
            Err(err) => {
                errors.push(format!("{}: {err}", e.id));
                continue;
            }
        };
        for _ in 0..opts.conjugates {
            let h = conjugate(&mut rng, &e.gram);
            conjugates += 1;
            if h.determinant() != e.gram.determinant() || h.parity() != e.gram.parity() {
                errors.push(format!("{}: structural invariant changed", e.id));
            }
            match min_char_vector_with(&h, cfg) {
                Ok(r) => {
                    if !(n + 8 - r.norm_m % 8).is_multiple_of(8) {
                        errors.push(format!("{}: m {} not = {n} mod 8", e.id, r.norm_m));
                    }
                    if r.norm_m != base.norm_m || r.count_minimizers != base.count_minimizers {
                        errors.push(format!("{}: conjugate m {} vs {}", e.id, r.norm_m, base.norm_m));
                    }
                }
                Err(err) => errors.push(format!("{}: {err}", e.id)),
            }
        }
    }
    rows.push("mod 8 and basis invariance", errors, format!("{conjugates} conjugates"));

    // dimension identity
    let mut errors = Vec::new();
    for e in &unimodular_pd {
        let neg = e.gram.negate();
        let l = match choose_line_bundle_with(&ManifoldDescriptor::new(0, neg.clone()), cfg) {
            Ok(l) => l,
            Err(err) => {
                errors.push(format!("{}: {err}", e.id));
                continue;
            }
        };
        for b1 in 0..=3 {
            match virtual_dimension(&ManifoldDescriptor::new(b1, neg.clone()), &l) {
                Ok(d) if d == 2 * l.k - 1 + b1 as i64 => {}
                Ok(d) => errors.push(format!("{} b1={b1}: d = {d}", e.id)),
                Err(err) => errors.push(format!("{} b1={b1}: {err}", e.id)),
            }
        }
    }
    rows.push("virtual dimension identity", errors, "b1 in 0..=3".into());

    // verdict dichotomy with unit vectors
    let mut errors = Vec::new();
    for e in &unimodular_pd {
        let n = e.gram.rank() as u64;
        let verdict = donaldson_verdict_with(&ManifoldDescriptor::new(0, e.gram.negate()), cfg);
        let units = count_unit_vectors_with(&e.gram, cfg);
        match (verdict, units) {
            (Ok(r), Ok(u)) => {
                let identity = u == 2 * n;
                let expected = if identity {
                    ModuliVerdict::Realizable
                } else {
                    ModuliVerdict::Forbidden
                };
                if r.verdict != expected {
                    errors.push(format!("{}: {:?} with {u} unit vectors", e.id, r.verdict));
                }
            }
            (Err(err), _) => errors.push(format!("{}: {err}", e.id)),
            (_, Err(err)) => errors.push(format!("{}: {err}", e.id)),
        }
    }
    rows.push("verdict vs unit vectors", errors, format!("{} forms", unimodular_pd.len()));

    // surgery
    let mut errors = Vec::new();
    for e in &entries {
        let m = ManifoldDescriptor::new(3, e.gram.clone());
        match reduce_to_b1_zero(&m) {
            Ok((out, certs)) => {
                if out.b1 != 0 || out.form != e.gram || certs.len() != 3 {
                    errors.push(format!("{}: bad reduction", e.id));
                }
                if certs
                    .iter()
                    .any(|c| !c.ok || c.sequences.iter().any(|s| s.alternating_sum != 0))
                {
                    errors.push(format!("{}: certificate", e.id));
                }
            }
            Err(err) => errors.push(format!("{}: {err}", e.id)),
        }
    }
    rows.push("surgery bookkeeping", errors, "b1 = 3 -> 0".into());

    // boundary numbers
    let errors: Vec<String> = (1..=64)
        .filter(|&k| sw_boundary_number(k).map(|s| s.value) != Ok(1))
        .map(|k| format!("k = {k}"))
        .collect();
    rows.push("boundary number w2^(k-1)[CP^(k-1)] = 1", errors, "k = 1..64".into());

    // a-priori bound
    let mut errors = Vec::new();
    let zero = BigRational::zero();
    for _ in 0..1000 {
        let s = rat(&mut rng, -50, 50, 12);
        let p = rat(&mut rng, 0, 50, 12);
        let dp = rat(&mut rng, 0, 10, 12);
        let ds = rat(&mut rng, 0, 10, 12);
        let b = weitzenbock_bound(&s, &p).expect("p >= 0");
        let two = BigRational::from_integer(BigInt::from(2));
        let more_p = weitzenbock_bound(&s, &(&p + &dp)).expect("p >= 0");
        let more_s = weitzenbock_bound(&(&s + &ds), &p).expect("p >= 0");
        if b < zero || more_p < b || more_s > b || (b == zero) != (s >= two * &p) {
            errors.push(format!("s = {s}, p = {p}"));
        }
    }
    rows.push("a-priori bound properties", errors, "1000 samples".into());

    rows.0
}

pub fn render_table(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{mark}  {:width$}  {}\n", r.name, r.detail));
    }
    out
}
