//! Command-line harness: construct instances, run the named verification
//! suites, and emit human-readable and JSON reports.

use clap::{Args, Parser, Subcommand};
use locmult_core::interval::SupFn;
use locmult_core::localize::{minimal_ideal_dominates, LocalClass};
use locmult_core::monoid::{in_m, IdealCtx};
use locmult_core::monster::{build_monster, monster_tower, MuSeqRule};
use locmult_core::pwl::PwlFn;
use locmult_core::rat::Rat;
use locmult_core::suite::{all_passed, run_suite, CheckRecord, SuiteConfig, SuiteName};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PASS: u8 = 0;
const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "locmult", version, about = "Exact ordered-monoid verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Run(RunArgs),
    /// Print the localization-class report for a base and sup function.
    Localize(LocalizeArgs),
    /// Monster constructions.
    Monster(MonsterArgs),
    /// Parse a function literal, print its canonical form.
    Parse(ParseArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Suite: lattice, group, monoid, riesz, intervals, localization,
    /// monster, or all.
    #[arg(long)]
    suite: String,
    /// Random seed; falls back to LOCMULT_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Instances per suite.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Depth for the generator, tower and fundamental sequences.
    #[arg(long, default_value_t = 3)]
    depth: u32,
    /// Write the flat JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Suppress the per-check summary lines.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct LocalizeArgs {
    /// Base element of the class context, e.g. "pwl[(0,0);(1,1)]".
    #[arg(long)]
    base: String,
    /// Sup function of the class.
    #[arg(long)]
    sup: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct MonsterArgs {
    #[command(subcommand)]
    command: MonsterCommand,
}

#[derive(Subcommand)]
enum MonsterCommand {
    /// Build the oscillating function and the stage tower.
    Build(MonsterBuildArgs),
}

#[derive(Args)]
struct MonsterBuildArgs {
    /// Accumulation point of the oscillation, e.g. 1/2.
    #[arg(long, default_value = "1/2")]
    rho: String,
    /// Prefix slope, e.g. 1/4.
    #[arg(long, default_value = "1/4")]
    mu: String,
    /// Envelope slope lambda'; the bound is h = 2 lambda' f0.
    #[arg(long, default_value = "1/2")]
    lambda_prime: String,
    /// Tower depth.
    #[arg(long, default_value_t = 3)]
    depth: u32,
    /// Output file for the stage data.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ParseArgs {
    /// Function literal, e.g. "pwl[(0,0);(1/2,1/2);(1,0)]".
    literal: String,
    /// Evaluate at this point after parsing.
    #[arg(long)]
    at: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run(args),
        Command::Localize(args) => localize(args),
        Command::Monster(args) => match args.command {
            MonsterCommand::Build(args) => monster_build(args),
        },
        Command::Parse(args) => parse_fn(args),
    }
}

fn seed_from(args_seed: Option<u64>) -> Result<u64, String> {
    if let Some(s) = args_seed {
        return Ok(s);
    }
    match std::env::var("LOCMULT_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("LOCMULT_SEED must be an integer, got `{v}`")),
        Err(_) => Ok(0),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let suite: SuiteName = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let seed = match seed_from(args.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cfg = SuiteConfig { seed, count: args.count, depth: args.depth };
    let records = match run_suite(suite, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if !args.quiet {
        print_summary(&records);
    }
    if let Some(path) = &args.json {
        let body = serde_json::to_string(&records).expect("records serialize");
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if all_passed(&records) {
        ExitCode::from(EXIT_PASS)
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn print_summary(records: &[CheckRecord]) {
    // order-stable aggregation per (suite, check)
    let mut order: Vec<(&'static str, &'static str)> = Vec::new();
    let mut tally: BTreeMap<(&'static str, &'static str), (usize, usize)> = BTreeMap::new();
    for r in records {
        let key = (r.suite, r.check);
        if !tally.contains_key(&key) {
            order.push(key);
        }
        let e = tally.entry(key).or_insert((0, 0));
        e.1 += 1;
        if r.passed {
            e.0 += 1;
        }
    }
    for key in order {
        let (ok, total) = tally[&key];
        let status = if ok == total { "pass" } else { "FAIL" };
        println!("{status} {}/{} {}::{}", ok, total, key.0, key.1);
    }
    for r in records.iter().filter(|r| !r.passed).take(10) {
        println!("  failure {}::{} #{}: {}", r.suite, r.check, r.instance_id, r.witness);
    }
}

fn localize(args: LocalizeArgs) -> ExitCode {
    let base: PwlFn = match args.base.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: base: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let sup: PwlFn = match args.sup.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: sup: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let base_elem = match in_m(&base) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: base is not in M: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let ctx = match IdealCtx::new_below_f0(base_elem) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let class = match LocalClass::from_parts(ctx, SupFn::Pwl(sup.clone())) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let report = match minimal_ideal_dominates(&class) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILURE);
        }
    };
    let body = serde_json::json!({
        "class": { "base": base.to_string(), "sup": sup.to_string() },
        "min_ideal_n": report.n,
    });
    let text = serde_json::to_string(&body).expect("report serializes");
    match &args.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => println!("{text}"),
    }
    if report.all_passed() {
        ExitCode::from(EXIT_PASS)
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn monster_build(args: MonsterBuildArgs) -> ExitCode {
    let parse_rat = |name: &str, s: &String| -> Result<Rat, String> {
        s.parse().map_err(|_| format!("{name} must be a rational, got `{s}`"))
    };
    let (rho, mu, lam) = match (
        parse_rat("--rho", &args.rho),
        parse_rat("--mu", &args.mu),
        parse_rat("--lambda-prime", &args.lambda_prime),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (a, b, c) => {
            for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                eprintln!("error: {e}");
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let f = locmult_core::monoid::MElem::f0();
    let h = match in_m(&PwlFn::identity().scale(&(&lam * &Rat::int(2)))) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: envelope: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let build = match build_monster(&f, &h, &rho, &mu, MuSeqRule::Dyadic) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let seq = locmult_core::localize::fundamental_sequence(args.depth + 1);
    let stages = match monster_tower(args.depth, &seq) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILURE);
        }
    };
    let osc = build.g.oscillation();
    let body = serde_json::json!({
        "build": {
            "f_prime": build.f_prime,
            "g": build.g,
            "rho": build.rho,
            "mu": build.mu,
            "oscillation": { "liminf": osc.0, "limsup": osc.1 },
        },
        "stages": stages,
    });
    let text = serde_json::to_string_pretty(&body).expect("stages serialize");
    if let Err(e) = std::fs::write(&args.out, text) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return ExitCode::from(EXIT_USAGE);
    }
    println!(
        "wrote {} ({} stages, oscillation gap {})",
        args.out.display(),
        stages.len(),
        &osc.1 - &osc.0
    );
    ExitCode::from(EXIT_PASS)
}

fn parse_fn(args: ParseArgs) -> ExitCode {
    let f: PwlFn = match args.literal.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    println!("{f}");
    if let Some(at) = args.at {
        let t: Rat = match at.parse() {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        };
        match f.try_eval(&t) {
            Ok(v) => println!("value at {t}: {v}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    ExitCode::from(EXIT_PASS)
}
