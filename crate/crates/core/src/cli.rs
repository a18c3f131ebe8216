//! Command-line front end. Text output is human-oriented and unstable;
//! JSON output is the versioned contract and is byte-deterministic for a
//! fixed argv and seed.

use crate::algebra::build_algebra;
use crate::diagram::{self, surjectivity_status, Verdict};
use crate::solver::{self, AmbientMatrix, DescentConfig, SolverError};
use crate::structure;
use crate::suite::{self, SuiteScope};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;

fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    // Quiet exit when the reader hangs up, e.g. piping into head.
    if writeln!(std::io::stdout(), "{args}").is_err() {
        std::process::exit(EXIT_OK);
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

#[derive(Debug, Parser)]
#[command(
    name = "commutator",
    about = "Surjectivity classification and commutator witnesses for real simple Lie algebras",
    version
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for all randomized searches.
    #[arg(long, global = true, env = "COMMUTATOR_SEED", default_value_t = 17)]
    pub seed: u64,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// List catalog entries with their verdicts.
    Catalog {
        /// Case-insensitive substring filter on names.
        #[arg(long)]
        filter: Option<String>,
        /// Parameter bound for the enumerated slice.
        #[arg(long, default_value_t = 8)]
        max_size: u32,
    },
    /// Verdict for one algebra, e.g. `status "su(1,2)"` or `status su 1 2`.
    Status {
        /// Algebra name, optionally followed by separate parameter tokens.
        #[arg(required = true, num_args = 1..)]
        name: Vec<String>,
    },
    /// Structural data for one algebra: dimensions, flat, root multiplicities.
    Inspect {
        #[arg(required = true, num_args = 1..)]
        name: Vec<String>,
    },
    /// Write Z as a commutator (or a difference of two) with a certificate.
    Decompose(DecomposeArgs),
    /// Recheck a witness file from scratch.
    Verify {
        /// Path to a witness JSON file.
        file: PathBuf,
    },
    /// Run the invariant suites.
    Selftest {
        /// Trials per algebra for each randomized suite.
        #[arg(long)]
        trials: Option<usize>,
        /// Restrict randomized suites to matching algebra families.
        #[arg(long, num_args = 1..)]
        families: Vec<String>,
        /// Acceptance-grade trial counts (slow).
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Algebra name; may also come from the input file header.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Extra parameter tokens for the algebra name.
    #[arg(long, num_args = 1..)]
    pub params: Vec<String>,
    /// JSON file holding the input matrix.
    #[arg(long)]
    pub input: PathBuf,
    /// Restrict to inputs and factors in the symmetric part p.
    #[arg(long)]
    pub in_p: bool,
    /// Write Z = [Y1,A1] - [Y2,A2] instead of a single commutator.
    #[arg(long)]
    pub two_commutators: bool,
    /// Force a route: auto, p, split, general, inner, compact, complex.
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Write the witness here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Input element: either bare row-major nested lists, or a matrix object
/// with an optional algebra header.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ElementInput {
    Labeled {
        algebra: Option<String>,
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    },
    Rows(Vec<Vec<f64>>),
}

struct CliFailure {
    code: i32,
    message: String,
}

fn unsupported(message: impl Into<String>) -> CliFailure {
    CliFailure { code: EXIT_UNSUPPORTED, message: message.into() }
}

fn verify_failure(message: impl Into<String>) -> CliFailure {
    CliFailure { code: EXIT_VERIFY, message: message.into() }
}

fn solver_failure(e: SolverError) -> CliFailure {
    let code = match e {
        SolverError::ResidualTooLarge { .. }
        | SolverError::FlattenStalled { .. }
        | SolverError::BadWitness(_) => EXIT_VERIFY,
        SolverError::NotInDomain { .. }
        | SolverError::OpenCase { .. }
        | SolverError::NotRegularSemisimple { .. }
        | SolverError::Structure(_)
        | SolverError::Algebra(_) => EXIT_UNSUPPORTED,
    };
    CliFailure { code, message: e.to_string() }
}

pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.verb {
        Verb::Catalog { ref filter, max_size } => catalog(cli.json, filter.as_deref(), max_size),
        Verb::Status { ref name } => status(cli.json, name),
        Verb::Inspect { ref name } => inspect(cli.json, name, cli.seed),
        Verb::Decompose(ref args) => decompose(cli.json, args, cli.seed),
        Verb::Verify { ref file } => verify(cli.json, file),
        Verb::Selftest { trials, ref families, full } => {
            selftest(cli.json, trials, families, full, cli.seed)
        }
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn resolve_tokens(tokens: &[String]) -> Result<diagram::RealFormRecord, CliFailure> {
    let (head, params) = tokens.split_first().expect("clap enforces at least one token");
    diagram::resolve(head, params).map_err(|e| unsupported(e.to_string()))
}

fn catalog(json: bool, filter: Option<&str>, max_size: u32) -> Result<(), CliFailure> {
    let needle = filter.map(|f| f.to_ascii_lowercase());
    let records: Vec<_> = diagram::load_catalog()
        .sample_records(max_size)
        .into_iter()
        .filter(|r| {
            needle
                .as_deref()
                .is_none_or(|n| r.name.to_ascii_lowercase().contains(n))
        })
        .collect();
    if json {
        let rows: Vec<_> = records
            .iter()
            .map(|r| {
                let s = surjectivity_status(r);
                json!({
                    "name": r.name,
                    "dim": r.dim,
                    "rank": r.rank,
                    "restricted_rank": r.restricted_rank,
                    "realizable": r.realizable,
                    "verdict": s.verdict,
                    "justification": s.justification,
                })
            })
            .collect();
        out!("{}", serde_json::to_string_pretty(&rows).unwrap());
    } else {
        out!("{:<12} {:>5} {:>5} {:>6}  verdict", "name", "dim", "rank", "r-rank");
        for r in &records {
            let s = surjectivity_status(r);
            let verdict = match s.verdict {
                Verdict::Surjective => "surjective",
                Verdict::Open => "open",
            };
            out!(
                "{:<12} {:>5} {:>5} {:>6}  {}",
                r.name, r.dim, r.rank, r.restricted_rank, verdict
            );
        }
        out!("{} entries", records.len());
    }
    Ok(())
}

fn status(json: bool, tokens: &[String]) -> Result<(), CliFailure> {
    let record = resolve_tokens(tokens)?;
    let report = surjectivity_status(&record);
    if json {
        out!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        out!("{report}");
    }
    Ok(())
}

fn inspect(json: bool, tokens: &[String], seed: u64) -> Result<(), CliFailure> {
    let record = resolve_tokens(tokens)?;
    let report = surjectivity_status(&record);
    if !record.realizable {
        if json {
            out!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "name": record.name,
                    "dim": record.dim,
                    "rank": record.rank,
                    "restricted_rank": record.restricted_rank,
                    "arrow_count": report.arrow_count,
                    "verdict": report.verdict,
                    "realizable": false,
                }))
                .unwrap()
            );
        } else {
            out!("{report}");
            out!(
                "dim {} | rank {} | restricted rank {} | arrows {} | no matrix realization",
                record.dim, record.rank, record.restricted_rank, report.arrow_count
            );
        }
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (alg, st) = structure::build_with_structure(&record.name, &mut rng)
        .map_err(|e| unsupported(e.to_string()))?;
    let roots = structure::restricted_roots(&alg, &st, &mut rng)
        .map_err(|e| unsupported(e.to_string()))?;
    let mut mults = roots.multiplicities.clone();
    mults.sort_unstable();
    let p_dim = alg.dim() - alg.k_dim;
    if json {
        out!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "name": record.name,
                "dim": alg.dim(),
                "ambient": alg.ambient,
                "k_dim": alg.k_dim,
                "p_dim": p_dim,
                "a_dim": st.a.dim(),
                "m_dim": st.m.dim(),
                "t_dim": st.t.dim(),
                "arrow_count": report.arrow_count,
                "root_count": roots.roots.len(),
                "root_multiplicities": mults,
                "verdict": report.verdict,
                "justification": report.justification,
            }))
            .unwrap()
        );
    } else {
        out!("{report}");
        out!(
            "dim {} = k {} + p {} | flat a {} | m {} | torus t {} | arrows {}",
            alg.dim(),
            alg.k_dim,
            p_dim,
            st.a.dim(),
            st.m.dim(),
            st.t.dim(),
            report.arrow_count
        );
        let mult_list: Vec<String> = mults.iter().map(|m| m.to_string()).collect();
        out!(
            "restricted roots: {} with multiplicities [{}]",
            roots.roots.len(),
            mult_list.join(", ")
        );
    }
    Ok(())
}

fn read_element(path: &PathBuf) -> Result<(Option<String>, AmbientMatrix), CliFailure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| unsupported(format!("cannot read {}: {e}", path.display())))?;
    let parsed: ElementInput = serde_json::from_str(&text)
        .map_err(|e| unsupported(format!("bad input JSON: {e}")))?;
    match parsed {
        ElementInput::Labeled { algebra, rows, cols, data } => {
            if data.len() != rows * cols {
                return Err(unsupported(format!(
                    "matrix data has {} entries, expected {} x {}",
                    data.len(),
                    rows,
                    cols
                )));
            }
            Ok((algebra, AmbientMatrix { rows, cols, data }))
        }
        ElementInput::Rows(rows) => {
            let r = rows.len();
            let c = rows.first().map_or(0, |row| row.len());
            if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
                return Err(unsupported("matrix rows must be nonempty and equal-length"));
            }
            let data = rows.into_iter().flatten().collect();
            Ok((None, AmbientMatrix { rows: r, cols: c, data }))
        }
    }
}

fn decompose(json: bool, args: &DecomposeArgs, seed: u64) -> Result<(), CliFailure> {
    let (header, input) = read_element(&args.input)?;
    let name = args
        .algebra
        .clone()
        .or(header)
        .ok_or_else(|| unsupported("no algebra given: pass --algebra or put one in the input file"))?;
    let record =
        diagram::resolve(&name, &args.params).map_err(|e| unsupported(e.to_string()))?;
    if !record.realizable {
        return Err(unsupported(format!("{} has no matrix realization here", record.name)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = DescentConfig::default();

    let matrix = input.to_matrix().map_err(solver_failure)?;
    let method = if args.two_commutators {
        "two-commutators"
    } else if args.in_p {
        "p"
    } else {
        args.method.as_str()
    };
    let needs_structure = matches!(method, "auto" | "p" | "split" | "general");
    let (alg, st) = if needs_structure {
        let (alg, st) = structure::build_with_structure(&record.name, &mut rng)
            .map_err(|e| unsupported(e.to_string()))?;
        (alg, Some(st))
    } else {
        let alg = build_algebra(&record).map_err(|e| unsupported(e.to_string()))?;
        (alg, None)
    };
    let z = alg
        .coords(&matrix)
        .map_err(|e| unsupported(format!("input is not in {}: {e}", record.name)))?;

    let text = if args.two_commutators {
        let tc = solver::solve_two_commutators(&alg, &z, &mut rng).map_err(solver_failure)?;
        let w = solver::make_two_commutator_witness(&alg, &z, &tc).map_err(solver_failure)?;
        serde_json::to_string_pretty(&w).unwrap()
    } else {
        let st_ref = st.as_ref();
        let dec = match method {
            "auto" => solver::solve_auto(&alg, st_ref.unwrap(), &z, &cfg, &mut rng),
            "p" => solver::solve_in_p(&alg, st_ref.unwrap(), &z, &cfg, &mut rng),
            "split" => solver::solve_split(&alg, st_ref.unwrap(), &z, &cfg, &mut rng),
            "general" => solver::solve_general(&alg, st_ref.unwrap(), &z, &cfg, &mut rng),
            "inner" => solver::solve_inner(&alg, &z, &cfg, &mut rng),
            "compact" => solver::solve_compact(&alg, &z, &cfg, &mut rng),
            "complex" => solver::solve_complex(&alg, &z, &mut rng),
            other => return Err(unsupported(format!("unknown method {other:?}"))),
        }
        .map_err(solver_failure)?;
        let w = solver::make_witness(&alg, &z, &dec).map_err(solver_failure)?;
        serde_json::to_string_pretty(&w).unwrap()
    };

    match &args.output {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| unsupported(format!("cannot write {}: {e}", path.display())))?,
        None => out!("{text}"),
    }
    if !json && args.output.is_some() {
        out!("witness written to {}", args.output.as_ref().unwrap().display());
    }
    Ok(())
}

fn verify(json: bool, file: &PathBuf) -> Result<(), CliFailure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| unsupported(format!("cannot read {}: {e}", file.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| verify_failure(format!("bad witness JSON: {e}")))?;
    let two = value.get("method").and_then(|m| m.as_str()) == Some("two_commutators");
    let (algebra, method, residual) = if two {
        let w: solver::TwoCommutatorWitness = serde_json::from_value(value)
            .map_err(|e| verify_failure(format!("bad witness JSON: {e}")))?;
        let r = solver::verify_two_commutator_witness(&w).map_err(solver_failure)?;
        (w.algebra, w.method, r)
    } else {
        let w: solver::Witness = serde_json::from_value(value)
            .map_err(|e| verify_failure(format!("bad witness JSON: {e}")))?;
        let r = solver::verify_witness(&w).map_err(solver_failure)?;
        (w.algebra, w.method, r)
    };
    if json {
        out!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "algebra": algebra,
                "method": method,
                "residual": residual,
                "valid": true,
            }))
            .unwrap()
        );
    } else {
        out!("valid witness on {algebra} via {method}, residual {residual:.3e}");
    }
    Ok(())
}

fn selftest(
    json: bool,
    trials: Option<usize>,
    families: &[String],
    full: bool,
    seed: u64,
) -> Result<(), CliFailure> {
    let mut scope = if full { SuiteScope::full() } else { SuiteScope::quick() };
    if let Some(n) = trials {
        scope.witness_trials = n;
        scope.p_trials = n;
        scope.corollary_trials = n;
        scope.two_commutator_trials = n;
        scope.convexity_samples = 2 * n;
        scope.angle_total = 10 * n;
    }
    scope.families = families.to_vec();
    let report = suite::run_all(&scope, seed);
    if json {
        out!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        out!("{:<4} {:<28} {:>6} {:>9} {:>11}  detail", "", "criterion", "trials", "failures", "worst");
        for c in &report.criteria {
            out!(
                "{:<4} {:<28} {:>6} {:>9} {:>11.3e}  {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.trials,
                c.failures,
                c.worst,
                c.detail
            );
        }
        out!("seed {} | overall: {}", report.seed, if report.passed { "PASS" } else { "FAIL" });
    }
    if report.passed {
        Ok(())
    } else {
        Err(verify_failure("selftest failed"))
    }
}
