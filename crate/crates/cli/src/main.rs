//! Command-line front end: every computation the library offers, with both
//! the enumerated and the closed-form number in each comparison, a stable
//! JSON report schema behind `--json`, and a nonzero exit code whenever any
//! comparison fails.

use absgl::absorder::{is_reflection, reduced_word, reflection_length};
use absgl::checks::{self, CheckConfig, CheckOutcome};
use absgl::gf::Fq;
use absgl::matfq::Matrix;
use absgl::qseries::{flag_formula, mobius_formula, Composition};
use absgl::singer::{
    build_interval_with, interval_invariants, lattice_witness, singer_cycle, IntervalModel,
    IntervalOptions,
};
use absgl::symoracle::{cactus_formula, count_cactus, CycleType};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "absgl",
    version,
    about = "Absolute order on GL_n(F_q): exact enumeration cross-checked against closed formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit the machine-readable JSON report instead of tables
    #[arg(long, global = true)]
    json: bool,

    /// Seed for all sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for interval construction (default: single-threaded)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Refuse to enumerate groups larger than this
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_group_order: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Rank sizes of the absolute order on all of GL_n(F_q)
    Ranks {
        #[arg(long)]
        n: usize,
        /// Field, "p" or "p^e"
        #[arg(long)]
        q: String,
        /// Print only the closed-form values, skipping the census
        #[arg(long)]
        formula_only: bool,
    },
    /// Flag f-vector of the interval below a top element
    Flag {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        /// One composition of n such as "1,2,1"
        #[arg(long)]
        alpha: Option<String>,
        /// All 2^(n-1) compositions
        #[arg(long)]
        all: bool,
        /// "singer" or an explicit matrix string
        #[arg(long, default_value = "singer")]
        top: String,
    },
    /// Minimal reflection factorization of an invertible matrix
    Factor {
        #[arg(long)]
        q: String,
        /// Matrix in row;row;... format
        matrix: String,
    },
    /// Export an interval (elements by rank plus cover relations) as JSON
    IntervalExport {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value = "singer")]
        top: String,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Mobius value of an interval: poset recursion against the
    /// composition alternating sum
    Mobius {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value = "singer")]
        top: String,
    },
    /// Search an interval for two elements with no join
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value = "singer")]
        top: String,
    },
    /// Isomorphism invariants of an interval (rank sizes, cover degrees,
    /// incidence determinant)
    Invariants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, default_value = "singer")]
        top: String,
    },
    /// Count additive factorizations of an n-cycle by cycle types
    Cactus {
        #[arg(long)]
        n: usize,
        /// Cycle types separated by '|', e.g. "3,1|2,1,1"
        #[arg(long)]
        types: String,
    },
    /// Run a property suite; exits nonzero on any failure
    Verify {
        /// order-axioms, duality, bijection, qseries, cactus, mobius, all
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "2")]
        q: String,
        /// Sample count for sampled checks
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// The stable report shape: every comparison carries both numbers.
#[derive(Serialize)]
struct RunReport {
    command: String,
    version: String,
    parameters: BTreeMap<String, String>,
    results: Value,
    all_match: bool,
    elapsed_ms: u128,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_match) => std::process::exit(if all_match { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let start = Instant::now();
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    params.insert("seed".into(), cli.seed.to_string());
    params.insert("threads".into(), cli.threads.to_string());
    params.insert("max_group_order".into(), cli.max_group_order.to_string());

    let opts = IntervalOptions { max_group_order: cli.max_group_order, threads: cli.threads };

    let (name, results, all_match, human): (&str, Value, bool, String) = match &cli.command {
        Command::Ranks { n, q, formula_only } => {
            let fq = Fq::parse(q)?;
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("formula_only".into(), formula_only.to_string());
            cmd_ranks(&fq, *n, *formula_only, cli.max_group_order)?
        }
        Command::Flag { n, q, alpha, all, top } => {
            let fq = Fq::parse(q)?;
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("top".into(), top.clone());
            if let Some(a) = alpha {
                params.insert("alpha".into(), a.clone());
            }
            params.insert("all".into(), all.to_string());
            cmd_flag(&fq, *n, alpha.as_deref(), *all, top, opts)?
        }
        Command::Factor { q, matrix } => {
            let fq = Fq::parse(q)?;
            params.insert("q".into(), fq.name());
            params.insert("matrix".into(), matrix.clone());
            cmd_factor(&fq, matrix)?
        }
        Command::IntervalExport { n, q, top, out } => {
            let fq = Fq::parse(q)?;
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("top".into(), top.clone());
            cmd_interval_export(&fq, *n, top, out.as_deref(), opts)?
        }
        Command::Mobius { n, q, top } => {
            let fq = Fq::parse(q)?;
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("top".into(), top.clone());
            cmd_mobius(&fq, *n, top, opts)?
        }
        Command::Witness { n, q, top } => {
            let fq = Fq::parse(q)?;
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("top".into(), top.clone());
            cmd_witness(&fq, *n, top, opts)?
        }
        Command::Invariants { n, q, top } => {
            let fq = Fq::parse(q)?;
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("top".into(), top.clone());
            cmd_invariants(&fq, *n, top, opts)?
        }
        Command::Cactus { n, types } => {
            params.insert("n".into(), n.to_string());
            params.insert("types".into(), types.clone());
            cmd_cactus(*n, types)?
        }
        Command::Verify { suite, n, q, samples } => {
            let fq = Fq::parse(q)?;
            params.insert("suite".into(), suite.clone());
            params.insert("n".into(), n.to_string());
            params.insert("q".into(), fq.name());
            params.insert("samples".into(), samples.to_string());
            let cfg = CheckConfig {
                seed: cli.seed,
                samples: *samples,
                max_group_order: cli.max_group_order,
                threads: cli.threads,
                ..Default::default()
            };
            cmd_verify(&fq, *n, suite, &cfg)?
        }
    };

    let report = RunReport {
        command: name.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        parameters: params,
        results,
        all_match,
        elapsed_ms: start.elapsed().as_millis(),
    };

    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{human}");
        println!(
            "{} in {} ms",
            if all_match { "all comparisons match" } else { "MISMATCH detected" },
            report.elapsed_ms
        );
    }
    Ok(all_match)
}

fn resolve_top(fq: &Fq, n: usize, top: &str) -> Result<Matrix> {
    if top == "singer" {
        Ok(singer_cycle(n, fq)?)
    } else {
        let m = Matrix::checked_gl(fq, top)?;
        if m.n() != n {
            bail!("top element is {}x{} but --n is {n}", m.n(), m.n());
        }
        Ok(m)
    }
}

fn build_top_interval(fq: &Fq, n: usize, top: &str, opts: IntervalOptions) -> Result<(Matrix, IntervalModel)> {
    let c = resolve_top(fq, n, top)?;
    let model = build_interval_with(&c, fq, opts).context("building the interval")?;
    Ok((c, model))
}

fn cmd_ranks(
    fq: &Fq,
    n: usize,
    formula_only: bool,
    max_group_order: u64,
) -> Result<(&'static str, Value, bool, String)> {
    let mut rows = Vec::new();
    let mut human = format!("rank sizes of the absolute order on GL_{n}(F_{})\n", fq.name());
    let mut all_match = true;
    if formula_only {
        for k in 0..=n {
            let v = absgl::qseries::rank_size(n as u64, k as u64, fq.q());
            human.push_str(&format!("rank {k}; {v}; (census skipped)\n"));
            rows.push(json!({"rank": k, "formula": v.to_string(), "census": Value::Null, "match": Value::Null}));
        }
    } else {
        for row in checks::rank_census(fq, n, max_group_order)? {
            all_match &= row.matches;
            human.push_str(&format!(
                "{}; census {}; formula {}; {}\n",
                row.alpha,
                row.enumerated,
                row.formula,
                if row.matches { "match" } else { "MISMATCH" }
            ));
            rows.push(json!({
                "rank": row.alpha,
                "census": row.enumerated,
                "formula": row.formula,
                "match": row.matches,
            }));
        }
    }
    Ok(("ranks", Value::Array(rows), all_match, human))
}

fn cmd_flag(
    fq: &Fq,
    n: usize,
    alpha: Option<&str>,
    all: bool,
    top: &str,
    opts: IntervalOptions,
) -> Result<(&'static str, Value, bool, String)> {
    let (c, model) = build_top_interval(fq, n, top, opts)?;
    let regular = absgl::singer::is_regular_elliptic(&c, fq);
    let mut human = String::new();
    if !regular {
        human.push_str("warning: top is not regular elliptic; formula column suppressed\n");
    }
    let compositions: Vec<Composition> = match alpha {
        Some(a) if !all => vec![Composition::parse(a)?],
        _ => Composition::all(n),
    };
    let mut rows = Vec::new();
    let mut all_match = true;
    human.push_str("alpha; enumerated; formula; match\n");
    for a in &compositions {
        if a.n() != n {
            bail!("composition {a} does not sum to {n}");
        }
        let enumerated = model.flag_f(a)?;
        if regular {
            let formula = flag_formula(a, fq.q());
            let matches = BigInt::from(enumerated) == formula;
            all_match &= matches;
            human.push_str(&format!(
                "{a}; {enumerated}; {formula}; {}\n",
                if matches { "match" } else { "MISMATCH" }
            ));
            rows.push(json!({
                "alpha": a.to_string(),
                "enumerated": enumerated.to_string(),
                "formula": formula.to_string(),
                "match": matches,
            }));
        } else {
            human.push_str(&format!("{a}; {enumerated}; ; \n"));
            rows.push(json!({
                "alpha": a.to_string(),
                "enumerated": enumerated.to_string(),
                "formula": Value::Null,
                "match": Value::Null,
            }));
        }
    }
    Ok(("flag", Value::Array(rows), all_match, human))
}

fn cmd_factor(fq: &Fq, matrix: &str) -> Result<(&'static str, Value, bool, String)> {
    let g = Matrix::checked_gl(fq, matrix)?;
    let word = reduced_word(&g, fq);
    let length = reflection_length(&g, fq);
    let factors_ok = word.factors().iter().all(|t| is_reflection(t, fq));
    let product_ok = word.product() == &g;
    let length_ok = word.len() == length;
    let all_match = factors_ok && product_ok && length_ok;
    let mut human = format!("matrix {g}\nreflection length {length}\n");
    for (i, t) in word.factors().iter().enumerate() {
        human.push_str(&format!("t{}: {t}\n", i + 1));
    }
    human.push_str(&format!(
        "verified: factors are reflections = {factors_ok}, product = {product_ok}, minimal length = {length_ok}\n"
    ));
    let results = json!({
        "matrix": g.to_string(),
        "length": length,
        "factors": word.factors().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "product": word.product().to_string(),
        "factors_are_reflections": factors_ok,
        "product_matches": product_ok,
        "length_is_minimal": length_ok,
    });
    Ok(("factor", results, all_match, human))
}

fn cmd_interval_export(
    fq: &Fq,
    n: usize,
    top: &str,
    out: Option<&std::path::Path>,
    opts: IntervalOptions,
) -> Result<(&'static str, Value, bool, String)> {
    let (_, model) = build_top_interval(fq, n, top, opts)?;
    let export = model.export();
    let payload = serde_json::to_value(&export)?;
    let human = match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            writeln!(f, "{}", serde_json::to_string_pretty(&payload)?)?;
            format!(
                "wrote interval of size {} (ranks {:?}) to {}\n",
                model.size(),
                model.rank_sizes(),
                path.display()
            )
        }
        None => format!("{}\n", serde_json::to_string_pretty(&payload)?),
    };
    Ok(("interval-export", payload, true, human))
}

fn cmd_mobius(
    fq: &Fq,
    n: usize,
    top: &str,
    opts: IntervalOptions,
) -> Result<(&'static str, Value, bool, String)> {
    let (c, model) = build_top_interval(fq, n, top, opts)?;
    let recursion = model.mobius();
    let regular = absgl::singer::is_regular_elliptic(&c, fq);
    let (formula, matches) = if regular {
        let f = mobius_formula(n as u64, fq.q());
        let m = BigInt::from(recursion) == f;
        (Some(f), m)
    } else {
        (None, true)
    };
    let human = format!(
        "interval size {}, rank sizes {:?}\nmobius by recursion: {recursion} (|mu| = {})\nformula: {}\n",
        model.size(),
        model.rank_sizes(),
        recursion.unsigned_abs(),
        formula.as_ref().map_or("n/a (top not regular elliptic)".into(), |f| f.to_string()),
    );
    let results = json!({
        "recursion": recursion.to_string(),
        "magnitude": recursion.unsigned_abs().to_string(),
        "formula": formula.as_ref().map(|f| f.to_string()),
        "match": matches,
        "interval_size": model.size(),
        "rank_sizes": model.rank_sizes(),
    });
    Ok(("mobius", results, matches, human))
}

fn cmd_witness(
    fq: &Fq,
    n: usize,
    top: &str,
    opts: IntervalOptions,
) -> Result<(&'static str, Value, bool, String)> {
    let (_, model) = build_top_interval(fq, n, top, opts)?;
    let witness = lattice_witness(&model);
    let (results, human) = match witness {
        Some(w) => (
            json!({
                "found": true,
                "a": w.a.to_string(),
                "b": w.b.to_string(),
                "minimal_upper_bounds": w
                    .minimal_upper_bounds
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>(),
            }),
            format!(
                "no join: a = {} and b = {} have {} minimal upper bounds:\n{}\n",
                w.a,
                w.b,
                w.minimal_upper_bounds.len(),
                w.minimal_upper_bounds
                    .iter()
                    .map(|m| format!("  {m}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            ),
        ),
        None => (
            json!({"found": false}),
            "every pair has a join (no witness found)\n".to_string(),
        ),
    };
    Ok(("witness", results, true, human))
}

fn cmd_invariants(
    fq: &Fq,
    n: usize,
    top: &str,
    opts: IntervalOptions,
) -> Result<(&'static str, Value, bool, String)> {
    let (_, model) = build_top_interval(fq, n, top, opts)?;
    let inv = interval_invariants(&model);
    let human = format!(
        "rank sizes: {:?}\nincidence |det| between ranks 1 and {}: {}\nup-degree sequences: {:?}\ndown-degree sequences: {:?}\n",
        inv.rank_sizes,
        n - 1,
        inv.incidence_det_abs,
        inv.up_degrees,
        inv.down_degrees,
    );
    Ok(("invariants", serde_json::to_value(&inv)?, true, human))
}

fn cmd_cactus(n: usize, types: &str) -> Result<(&'static str, Value, bool, String)> {
    let list: Vec<CycleType> = types
        .split('|')
        .map(CycleType::parse)
        .collect::<absgl::Result<_>>()?;
    let count = count_cactus(n, &list)?;
    let formula = cactus_formula(n, &list);
    let matches = BigInt::from(count) == formula;
    let human = format!(
        "additive factorizations of an {n}-cycle with types {}:\ncount {count}, formula {formula}, {}\n",
        list.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" | "),
        if matches { "match" } else { "MISMATCH" }
    );
    let results = json!({
        "count": count.to_string(),
        "formula": formula.to_string(),
        "match": matches,
    });
    Ok(("cactus", results, matches, human))
}

fn cmd_verify(
    fq: &Fq,
    n: usize,
    suite: &str,
    cfg: &CheckConfig,
) -> Result<(&'static str, Value, bool, String)> {
    let outcomes: Vec<CheckOutcome> = match suite {
        "order-axioms" => checks::order_axioms(fq, n, cfg)?,
        "duality" => checks::duality(fq, n, cfg)?,
        "bijection" => checks::bijection(fq, n, cfg)?,
        "qseries" => checks::qseries_suite(cfg),
        "cactus" => checks::cactus_suite(n.clamp(2, 5)),
        "mobius" => checks::mobius_suite(fq, n, cfg)?,
        "all" => checks::all_suites(fq, n, cfg)?,
        other => bail!("unknown suite {other:?}; expected order-axioms, duality, bijection, qseries, cactus, mobius, or all"),
    };
    let all_match = outcomes.iter().all(|o| o.passed);
    let mut human = String::new();
    for o in &outcomes {
        human.push_str(&format!(
            "[{}] {}: {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        ));
    }
    let results = Value::Array(
        outcomes
            .iter()
            .map(|o| json!({"name": o.name, "passed": o.passed, "detail": o.detail}))
            .collect(),
    );
    Ok(("verify", results, all_match, human))
}
