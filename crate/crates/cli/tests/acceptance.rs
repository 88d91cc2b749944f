//! Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use latgate::catalog::{catalog_get, standard_catalog, CatalogEntry};
use latgate::charvec::{count_unit_vectors, elkies_verdict, min_char_vector};
use latgate::enumerate::{brute_force_coset, enumerate_coset, sufficient_box, EnumQuery};
use latgate::lattice::random_unimodular;
use latgate::manifold::{
    choose_line_bundle, donaldson_verdict, reduce_to_b1_zero, weitzenbock_bound,
};
use latgate::{Definiteness, ElkiesVerdict, GramMatrix, ManifoldDescriptor, ModuliVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// The dichotomy corpus: every catalog form except the non-unimodular D4.
fn corpus() -> Vec<CatalogEntry> {
    standard_catalog().into_iter().filter(|e| e.id != "D4").collect()
}

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(int(n), int(d))
}

fn conjugate(g: &GramMatrix, rng: &mut ChaCha8Rng) -> GramMatrix {
    let u = random_unimodular(rng, g.rank(), 2);
    g.basis_change(&u).expect("unimodular transform")
}

/// Minimal characteristic norm of D12+ computed in the coordinate model
/// `D12 ∪ (D12 + (1/2,...,1/2))`, using doubled coordinates to stay integral.
fn d12_plus_min_char_norm() -> i64 {
    const N: usize = 12;
    let mut gens: Vec<[i64; N]> = Vec::new();
    for i in 0..N - 1 {
        let mut v = [0; N];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = [0; N];
    v[N - 2] = 2;
    v[N - 1] = 2;
    gens.push(v);
    gens.push([1; N]);
    // doubled coordinates: true inner product is dot / 4
    let dot = |a: &[i64; N], b: &[i64; N]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let characteristic = |w: &[i64; N]| {
        gens.iter()
            .all(|g| (dot(g, w) / 4 - dot(g, g) / 4).rem_euclid(2) == 0)
    };

    let mut best = i64::MAX;
    // integer points (even coordinate sum) of norm at most 4
    fn walk(i: usize, left: i64, v: &mut [i64; 12], out: &mut Vec<[i64; 12]>) {
        if i == 12 {
            if v.iter().sum::<i64>() % 4 == 0 {
                out.push(*v);
            }
            return;
        }
        for x in -2i64..=2 {
            if x * x <= left {
                v[i] = 2 * x;
                walk(i + 1, left - x * x, v, out);
            }
        }
        v[i] = 0;
    }
    let mut pts = Vec::new();
    walk(0, 4, &mut [0; N], &mut pts);
    // glue coset: all coordinates ±1/2 with an even number of minus signs
    for mask in 0u32..1 << N {
        if mask.count_ones() % 2 == 0 {
            let mut v = [1; N];
            for (i, x) in v.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    *x = -1;
                }
            }
            pts.push(v);
        }
    }
    for w in &pts {
        if characteristic(w) {
            best = best.min(dot(w, w) / 4);
        }
    }
    best
}

/// Minimal characteristic norm from the structure of the form alone: zero
/// for even forms, `n` for `Z^n`, additive over orthogonal sums.
fn expected_m(e: &CatalogEntry) -> i64 {
    let g = &e.gram;
    let even = (0..g.rank()).all(|i| g.get(i, i) % 2 == int(0));
    if even {
        return 0;
    }
    e.id.split('+')
        .map(|atom| match atom {
            "E8" => 0,
            "D12plus" => d12_plus_min_char_norm(),
            a if a.starts_with("Zn:") => a[3..].parse().unwrap(),
            a if a.starts_with('Z') => a[1..].parse().unwrap(),
            a => panic!("no oracle for {a}"),
        })
        .sum()
}

fn is_zn(id: &str) -> bool {
    id.starts_with("Zn:") && !id.contains('+')
}

fn elkies_dichotomy() -> Outcome {
    let forms = corpus();
    for e in &forms {
        let n = e.gram.rank() as i64;
        let v = elkies_verdict(&e.gram).map_err(|err| format!("{}: {err}", e.id))?;
        let m = v.result().norm_m as i64;
        let k = v.result().k;
        let want = expected_m(e);
        if m != want {
            return Err(format!("{}: m = {m}, oracle {want}", e.id));
        }
        match (&v, is_zn(&e.id)) {
            (ElkiesVerdict::Identity(_), true) => {}
            (ElkiesVerdict::HasShortCharVector(_), false) if k >= 1 && m == n - 8 * k => {}
            _ => return Err(format!("{}: verdict {:?} with m = {m}, k = {k}", e.id, v.label())),
        }
    }
    Ok(format!("{} forms", forms.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let forms: Vec<_> = standard_catalog().into_iter().filter(|e| e.gram.rank() <= 6).collect();
    let mut hits = 0;
    for e in &forms {
        let n = e.gram.rank();
        for _ in 0..25 {
            // only the shift modulo the lattice matters
            let shift = (0..n)
                .map(|_| {
                    let d = rng.gen_range(1..=4);
                    rat(rng.gen_range(-d..=d), d)
                })
                .collect();
            let radius = rat(rng.gen_range(0..=24), rng.gen_range(1..=4));
            let q = EnumQuery::new(e.gram.clone(), shift, radius).map_err(|x| x.to_string())?;
            let fast = enumerate_coset(&q).map_err(|x| x.to_string())?;
            let bbox = sufficient_box(&q).map_err(|x| x.to_string())?;
            let slow = brute_force_coset(&q, bbox).map_err(|x| x.to_string())?;
            if fast.vectors != slow.vectors || fast.norms != slow.norms {
                return Err(format!("{}: {} vs {} vectors", e.id, fast.len(), slow.len()));
            }
            hits += fast.len();
        }
    }
    Ok(format!("{} forms x 25 queries, {hits} vectors", forms.len()))
}

fn positive_unimodular(max_rank: usize) -> Vec<CatalogEntry> {
    standard_catalog()
        .into_iter()
        .filter(|e| {
            e.gram.rank() <= max_rank
                && e.gram.is_unimodular()
                && e.gram.definiteness() == Definiteness::PositiveDefinite
        })
        .collect()
}

fn mod8_congruence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let forms = positive_unimodular(10);
    for e in &forms {
        let n = e.gram.rank() as u64;
        let base = min_char_vector(&e.gram).map_err(|x| x.to_string())?.norm_m;
        for i in 0..50 {
            let h = conjugate(&e.gram, &mut rng);
            let m = min_char_vector(&h).map_err(|x| x.to_string())?.norm_m;
            if m % 8 != n % 8 || m != base {
                return Err(format!("{} conjugate {i}: m = {m}, n = {n}", e.id));
            }
        }
    }
    Ok(format!("{} forms x 50 conjugates", forms.len()))
}

fn dimension_identity() -> Outcome {
    let forms = corpus();
    for e in &forms {
        let g = e.gram.negate();
        let n = g.rank() as i64;
        for b1 in 0..=3i64 {
            let m = ManifoldDescriptor::new(b1 as u64, g.clone());
            let l = choose_line_bundle(&m).map_err(|x| x.to_string())?;
            // χ = 2 - 2 b1 + b2 and σ = -n for a negative definite form
            let chi = 2 - 2 * b1 + n;
            let sigma = -n;
            let num = l.c1_squared - (2 * chi + 3 * sigma);
            if num % 4 != 0 || num / 4 != 2 * l.k - 1 + b1 {
                return Err(format!("-{} b1={b1}: c1^2 = {}, k = {}", e.id, l.c1_squared, l.k));
            }
            // the verdict is computed after surgery down to b1 = 0
            let report = donaldson_verdict(&m).map_err(|x| x.to_string())?;
            if report.virtual_dim != Some(2 * l.k - 1) {
                return Err(format!("-{} b1={b1}: report d = {:?}", e.id, report.virtual_dim));
            }
        }
    }
    let e8 = donaldson_verdict(&ManifoldDescriptor::new(0, catalog_get("E8").unwrap().gram.negate()))
        .map_err(|x| x.to_string())?;
    if e8.virtual_dim != Some(1) {
        return Err(format!("-E8 b1=0: d = {:?}", e8.virtual_dim));
    }
    Ok(format!("{} forms x b1 in 0..=3, -E8 d = 1", forms.len()))
}

fn donaldson_dichotomy() -> Outcome {
    let forms = corpus();
    for e in &forms {
        let n = e.gram.rank() as u64;
        let r = donaldson_verdict(&ManifoldDescriptor::new(0, e.gram.negate()))
            .map_err(|x| x.to_string())?;
        let minus_identity = count_unit_vectors(&e.gram).map_err(|x| x.to_string())? == 2 * n;
        let ok = match r.verdict {
            ModuliVerdict::Realizable => minus_identity,
            ModuliVerdict::Forbidden => !minus_identity,
            ModuliVerdict::NotApplicable(_) => false,
        };
        if !ok {
            return Err(format!("-{}: {} with 2n unit vectors = {minus_identity}", e.id, r.verdict.label()));
        }
    }
    let r = donaldson_verdict(&ManifoldDescriptor::new(0, catalog_get("E8").unwrap().gram.negate()))
        .map_err(|x| x.to_string())?;
    if r.verdict != ModuliVerdict::Forbidden
        || r.boundary.as_deref() != Some("CP^0")
        || r.sw_boundary_number != Some(1)
    {
        return Err(format!("-E8: {:?} {:?} {:?}", r.verdict, r.boundary, r.sw_boundary_number));
    }
    Ok(format!("{} negated forms, -E8 Forbidden at CP^0", forms.len()))
}

fn unit_vectors_vs_verdict() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let forms = positive_unimodular(usize::MAX);
    let mut checked = 0;
    for e in &forms {
        let n = e.gram.rank() as u64;
        let mut grams = vec![e.gram.clone()];
        grams.extend((0..50).map(|_| conjugate(&e.gram, &mut rng)));
        for g in &grams {
            let identity = elkies_verdict(g).map_err(|x| x.to_string())?.is_identity();
            let units = count_unit_vectors(g).map_err(|x| x.to_string())?;
            if identity != (units == 2 * n) || identity != is_zn(&e.id) {
                return Err(format!("{}: identity = {identity}, units = {units}", e.id));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} forms ({} catalog + 50 conjugates each)", forms.len()))
}

fn surgery_bookkeeping() -> Outcome {
    let forms = standard_catalog();
    let mut certs = 0;
    for e in &forms {
        for b1 in 0..=4u64 {
            let m = ManifoldDescriptor::new(b1, e.gram.clone());
            let (out, steps) = reduce_to_b1_zero(&m).map_err(|x| x.to_string())?;
            if out.form.rows() != e.gram.rows() || out.b1 != 0 || steps.len() as u64 != b1 {
                return Err(format!("{} b1={b1}: form or b1 changed", e.id));
            }
            for c in &steps {
                for s in &c.sequences {
                    let alt: i64 = s
                        .terms
                        .iter()
                        .enumerate()
                        .map(|(i, t)| if i % 2 == 0 { t.rank } else { -t.rank })
                        .sum();
                    if alt != 0 || s.alternating_sum != 0 {
                        return Err(format!("{} b1={b1}: {} sums to {alt}", e.id, s.label));
                    }
                }
                certs += 1;
            }
        }
    }
    Ok(format!("{} forms x b1 in 0..=4, {certs} certificates", forms.len()))
}

fn weitzenbock_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let zero = rat(0, 1);
    let two = rat(2, 1);
    let bound = |s: &BigRational, p: &BigRational| weitzenbock_bound(s, p).map_err(|x| x.to_string());
    for i in 0..10_000 {
        let s = rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=60));
        let p = rat(rng.gen_range(0..=1000), rng.gen_range(1..=60));
        let ds = rat(rng.gen_range(0..=1000), rng.gen_range(1..=60));
        let dp = rat(rng.gen_range(0..=1000), rng.gen_range(1..=60));
        let b = bound(&s, &p)?;
        let ok = b >= zero
            && bound(&s, &(&p + &dp))? >= b
            && bound(&(&s + &ds), &p)? <= b
            && (b == zero) == (s >= &two * &p);
        if !ok {
            return Err(format!("pair {i}: s = {s}, p = {p}, bound = {b}"));
        }
    }
    let spot = [((2, 0), 0), ((-4, 1), 12)];
    for ((s, p), want) in spot {
        let b = bound(&rat(s, 1), &rat(p, 1))?;
        if b != rat(want, 1) {
            return Err(format!("({s},{p}) -> {b}, want {want}"));
        }
    }
    Ok("10000 pairs, (2,0)->0, (-4,1)->12".into())
}

fn cli_json(extra: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_latgate"))
        .args(["analyze", "--catalog", "D12plus", "--json"])
        .args(extra)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let first = cli_json(&[])?;
    for run in 1..5 {
        if cli_json(&[])? != first {
            return Err(format!("run {run} differs"));
        }
    }
    for w in ["1", "4"] {
        if cli_json(&["--workers", w])? != first {
            return Err(format!("--workers {w} differs"));
        }
    }
    Ok(format!("5 runs + workers 1,4 identical ({} bytes)", first.len()))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("elkies dichotomy", elkies_dichotomy, Duration::from_secs(60)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(30)),
        ("mod-8 congruence", mod8_congruence, Duration::from_secs(120)),
        ("dimension identity", dimension_identity, Duration::MAX),
        ("donaldson dichotomy", donaldson_dichotomy, Duration::MAX),
        ("unit vectors vs verdict", unit_vectors_vs_verdict, Duration::MAX),
        ("surgery bookkeeping", surgery_bookkeeping, Duration::MAX),
        ("weitzenbock bound", weitzenbock_sweep, Duration::MAX),
        ("determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(detail) if took > budget => Err(format!("{detail}; took {took:.1?} over {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("acceptance {}: PASS {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {}: FAIL {name}: {detail} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
