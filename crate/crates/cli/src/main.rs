use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latgate::catalog::{catalog_get, Golden};
use latgate::enumerate::EnumConfig;
use latgate::json::{load_gram, load_manifold};
use latgate::manifold::ManifoldError;
use latgate::report::{self, AnalyzeOptions, InputEcho, Report};
use latgate::selftest::{render_table, run_selftest, SelftestOptions};
use latgate::GramMatrix;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;

#[derive(Parser)]
#[command(name = "latgate", version, about = "Exact unimodular lattice and intersection form checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural invariants, minimal characteristic vectors and the dichotomy verdict.
    Analyze(AnalyzeArgs),
    /// Moduli-space argument for a 4-manifold with the given intersection form.
    Donaldson(DonaldsonArgs),
    /// Run the invariant suite and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct Source {
    /// Input JSON file.
    file: Option<PathBuf>,
    /// Built-in lattice id such as E8, Zn:8, D12plus or E8+Z1.
    #[arg(long, conflicts_with = "file")]
    catalog: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Cross-check the minimal shell against a brute-force box scan.
    #[arg(long)]
    oracle: bool,
    /// Include search statistics.
    #[arg(long)]
    stats: bool,
    /// Worker threads for the search.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
}

#[derive(Args)]
struct DonaldsonArgs {
    #[command(flatten)]
    source: Source,
    /// First Betti number (catalog input; overrides the file value).
    #[arg(long)]
    b1: Option<u64>,
    /// Use the negation of the form.
    #[arg(long)]
    negate: bool,
    #[arg(long)]
    json: bool,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Skip catalog forms above this rank.
    #[arg(long, default_value_t = 16)]
    max_rank: usize,
    /// JSON object mapping catalog ids to golden values, replacing the built-ins.
    #[arg(long)]
    goldens: Option<PathBuf>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("latgate: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn with_workers<T: Send>(workers: Option<u16>, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    match workers {
        None => Ok(f()),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| e.to_string()),
    }
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}

fn file_echo(path: &Path, form: GramMatrix) -> InputEcho {
    InputEcho {
        source: path.display().to_string(),
        form_id: None,
        b1: None,
        negated: false,
        form,
    }
}

fn analyze(args: AnalyzeArgs) -> ExitCode {
    let (input, golden) = match (&args.source.file, &args.source.catalog) {
        (_, Some(id)) => match catalog_get(id) {
            Ok(e) => (
                InputEcho {
                    source: "catalog".into(),
                    form_id: Some(e.id),
                    b1: None,
                    negated: false,
                    form: e.gram,
                },
                e.expected,
            ),
            Err(e) => return fail(e),
        },
        (Some(path), None) => match load_gram(path) {
            Ok(g) => (file_echo(path, g), None),
            Err(e) => return fail(e),
        },
        (None, None) => return fail("analyze needs a FILE or --catalog ID"),
    };
    let opts = AnalyzeOptions {
        oracle: args.oracle,
        stats: args.stats,
        golden,
        config: EnumConfig::default(),
    };
    match with_workers(args.workers, || report::analyze(input, &opts)) {
        Ok(r) => emit(&r, args.json),
        Err(e) => fail(e),
    }
}

fn donaldson(args: DonaldsonArgs) -> ExitCode {
    let (mut input, file_b1) = match (&args.source.file, &args.source.catalog) {
        (_, Some(id)) => match catalog_get(id) {
            Ok(e) => (
                InputEcho {
                    source: "catalog".into(),
                    form_id: Some(e.id),
                    b1: None,
                    negated: false,
                    form: e.gram,
                },
                None,
            ),
            Err(e) => return fail(e),
        },
        (Some(path), None) => match load_manifold(path) {
            Ok(m) => (file_echo(path, m.form), Some(m.b1)),
            Err(e) => return fail(e),
        },
        (None, None) => return fail("donaldson needs a FILE or --catalog ID"),
    };
    let b1 = args.b1.or(file_b1).unwrap_or(0);
    if args.negate {
        input.form = input.form.negate();
        input.negated = true;
    }
    let cfg = EnumConfig::default();
    match with_workers(args.workers, || report::donaldson(input, b1, &cfg)) {
        Ok(Ok(r)) => emit(&r, args.json),
        Ok(Err(e @ ManifoldError::NotUnimodular)) => fail(e),
        Ok(Err(e)) => {
            eprintln!("latgate: {e}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(e) => fail(e),
    }
}

fn selftest(args: SelftestArgs) -> ExitCode {
    let mut golden_overrides = BTreeMap::new();
    if let Some(path) = &args.goldens {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(format!("cannot read {}: {e}", path.display())),
        };
        golden_overrides = match serde_json::from_str::<BTreeMap<String, Golden>>(&text) {
            Ok(g) => g,
            Err(e) => return fail(format!("{}: {e}", path.display())),
        };
    }
    let rows = run_selftest(&SelftestOptions {
        max_rank: args.max_rank,
        golden_overrides,
        seed: args.seed,
        ..Default::default()
    });
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows).expect("rows serialize"));
    } else {
        print!("{}", render_table(&rows));
    }
    if rows.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Donaldson(a) => donaldson(a),
        Command::Selftest(a) => selftest(a),
    }
}
