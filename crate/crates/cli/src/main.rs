//! Batch front end for the signed Latin-square census, the determinant-power
//! coefficient identity, and exact/Monte-Carlo SU(n) moments.
//!
//! Every subcommand writes one machine-readable report to stdout. Values
//! that can exceed 2⁵³ travel as decimal strings in JSON so nothing is
//! rounded. Exit codes: 0 for success (including checks that pass), 2 when
//! an internal cross-check fails, 1 for usage or resource errors.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use latin_parity::{
    bound_ledger, census, coefficient_by_finite_difference, corollary_constants, count_prefix,
    det_power_with_budget, exact_moment_with_budget, mc_moment, mc_trace_power, moment_bound,
    moment_vanishes, prefix_tasks, signed_difference_via_coefficient_with_budget,
    trace_power_moment_exact, verify_identity_with_budget, Error, LatinCensus, MomentEstimate,
    MomentSpec, MultiIndex, DEFAULT_TERM_BUDGET,
};

const TERM_BUDGET_ENV: &str = "LATIN_PARITY_TERM_BUDGET";

#[derive(Parser)]
#[command(
    name = "latin-parity",
    version,
    about = "Signed Latin-square census, determinant-power coefficients, and SU(n) moments"
)]
struct Cli {
    /// Worker threads for parallel enumeration and sampling (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Sparse-expansion term budget (overrides LATIN_PARITY_TERM_BUDGET; default 10000000)
    #[arg(long, global = true)]
    term_budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Expand det(X)^k and look the coefficient up.
    Expansion,
    /// 2^m signed evaluations; needs a 0/1 pattern with at most 30 cells.
    FiniteDifference,
    /// Expansion first, finite differences if the budget refuses.
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Exact signed census of Latin squares of order n (n ≤ 6)
    Census {
        n: usize,
        /// JSON-lines checkpoint file: per-prefix counts, resumable
        #[arg(long)]
        prefix_log: Option<std::path::PathBuf>,
    },
    /// Check Σ c_α² α! against the factorial ratio for det(X)^k
    Identity { n: usize, k: u32 },
    /// One coefficient of det(X)^k
    Coeff {
        n: usize,
        k: u32,
        /// Multi-index "a11,a12;a21,a22" inline or a path to a file holding one
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Signed difference of the order-n census, cross-checked against the
    /// determinant coefficient route when that route is feasible
    AtDiff { n: usize },
    /// Exact SU(n) moment of one monomial, optionally Monte-Carlo checked
    Moment {
        n: usize,
        /// Multi-index "a11,a12;a21,a22" inline or a path to a file holding one
        #[arg(long)]
        alpha: String,
        /// Monte-Carlo cross-check: SAMPLES SEED
        #[arg(long, num_args = 2, value_names = ["SAMPLES", "SEED"])]
        mc: Option<Vec<u64>>,
    },
    /// Exact E[tr(U)^{ln}] over SU(n), optionally Monte-Carlo checked
    TraceMoment {
        n: usize,
        l: u32,
        /// Monte-Carlo cross-check: SAMPLES SEED
        #[arg(long, num_args = 2, value_names = ["SAMPLES", "SEED"])]
        mc: Option<Vec<u64>>,
    },
    /// Growth ledger rows for n = 1..=n_max (n_max ≤ 1000)
    Ledger { n_max: u64 },
    /// Full expansion of det(X)^k, one "coefficient e11 e12 …" line per term
    Dump { n: usize, k: u32 },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err("--workers must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| format!("cannot size the worker pool: {e}"))?;
    }
    let budget = term_budget(cli.term_budget)?;
    let format = cli.format;
    match cli.command {
        Command::Census { n, prefix_log } => run_census(n, prefix_log.as_deref(), format),
        Command::Identity { n, k } => run_identity(n, k, budget, format),
        Command::Coeff {
            n,
            k,
            alpha,
            method,
        } => run_coeff(n, k, &alpha, method, budget, format),
        Command::AtDiff { n } => run_at_diff(n, budget, format),
        Command::Moment { n, alpha, mc } => run_moment(n, &alpha, mc.as_deref(), budget, format),
        Command::TraceMoment { n, l, mc } => run_trace_moment(n, l, mc.as_deref(), format),
        Command::Ledger { n_max } => run_ledger(n_max, format),
        Command::Dump { n, k } => run_dump(n, k, budget),
    }
}

fn term_budget(flag: Option<u64>) -> Result<u64, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(TERM_BUDGET_ENV) {
        Ok(raw) => raw
            .parse()
            .map_err(|_| format!("{TERM_BUDGET_ENV} must be an integer, not {raw:?}")),
        Err(_) => Ok(DEFAULT_TERM_BUDGET),
    }
}

/// Inline "a11,a12;a21,a22" or a path to a file containing one such line.
fn parse_alpha(n: usize, raw: &str) -> Result<MultiIndex, String> {
    let content;
    let source = if Path::new(raw).is_file() {
        content = std::fs::read_to_string(raw)
            .map_err(|e| format!("cannot read multi-index file {raw:?}: {e}"))?;
        content.trim()
    } else {
        raw
    };
    let alpha: MultiIndex = source.parse().map_err(|e: Error| e.to_string())?;
    if alpha.n() != n {
        return Err(format!(
            "--alpha is a {0}×{0} grid but n = {1} was requested",
            alpha.n(),
            n
        ));
    }
    Ok(alpha)
}

fn big(value: &BigInt) -> Value {
    Value::String(value.to_string())
}

fn emit(value: &Value, format: Format, text: impl FnOnce() -> String) -> Result<u8, String> {
    match format {
        Format::Json => println!("{value}"),
        Format::Text => println!("{}", text()),
        Format::Csv => return Err("csv output is only available for ledger reports".into()),
    }
    Ok(0)
}

fn census_value(c: &LatinCensus) -> Value {
    json!({
        "n": c.n,
        "total": big(&c.total),
        "even": big(&c.even),
        "odd": big(&c.odd),
        "signed_difference": big(&c.signed_difference),
    })
}

fn run_census(n: usize, prefix_log: Option<&Path>, format: Format) -> Result<u8, String> {
    let result = match prefix_log {
        None => census(n).map_err(|e| e.to_string())?,
        Some(path) => census_with_checkpoints(n, path)?,
    };
    emit(&census_value(&result), format, || {
        format!(
            "order {}: total {}, even {}, odd {}, signed difference {}",
            result.n, result.total, result.even, result.odd, result.signed_difference
        )
    })
}

/// Checkpointed census: one JSON line {"id","even","odd"} per prefix, in id
/// order, appended in chunks so an interrupted run resumes where it stopped.
fn census_with_checkpoints(n: usize, path: &Path) -> Result<LatinCensus, String> {
    use rayon::prelude::*;
    use std::io::Write;

    if !(2..=6).contains(&n) {
        return Err(format!(
            "prefix logging partitions the order-{n} search by its first two rows; supported for 2 ≤ n ≤ 6"
        ));
    }
    let tasks = prefix_tasks(n).map_err(|e| e.to_string())?;
    let mut counts: Vec<Option<(u64, u64)>> = vec![None; tasks.len()];

    if path.exists() {
        let existing = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read prefix log {path:?}: {e}"))?;
        for (line_no, line) in existing.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Value = serde_json::from_str(line)
                .map_err(|e| format!("prefix log line {}: {e}", line_no + 1))?;
            if row["n"].as_u64() != Some(n as u64) {
                return Err(format!(
                    "prefix log line {} belongs to a different order than {n}",
                    line_no + 1
                ));
            }
            let id = row["id"]
                .as_u64()
                .ok_or_else(|| format!("prefix log line {}: missing id", line_no + 1))?
                as usize;
            let even = row["even"].as_u64();
            let odd = row["odd"].as_u64();
            match (counts.get_mut(id), even, odd) {
                (Some(slot), Some(e), Some(o)) => *slot = Some((e, o)),
                _ => return Err(format!("prefix log line {}: malformed row", line_no + 1)),
            }
        }
    }

    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| format!("cannot open prefix log {path:?}: {e}"))?;

    const CHUNK: usize = 512;
    let pending: Vec<usize> = (0..tasks.len()).filter(|&i| counts[i].is_none()).collect();
    for chunk in pending.chunks(CHUNK) {
        let results: Vec<(usize, (u64, u64))> = chunk
            .par_iter()
            .map(|&i| (i, count_prefix(&tasks[i])))
            .collect();
        let mut lines = String::new();
        for &(i, (even, odd)) in &results {
            counts[i] = Some((even, odd));
            writeln!(lines, r#"{{"id":{i},"n":{n},"even":{even},"odd":{odd}}}"#).unwrap();
        }
        file.write_all(lines.as_bytes())
            .and_then(|()| file.flush())
            .map_err(|e| format!("cannot append to prefix log {path:?}: {e}"))?;
    }

    let mut even = 0u64;
    let mut odd = 0u64;
    for slot in counts {
        let (e, o) = slot.expect("every prefix counted");
        even += e;
        odd += o;
    }
    Ok(LatinCensus::from_counts(n, even, odd))
}

fn run_identity(n: usize, k: u32, budget: u64, format: Format) -> Result<u8, String> {
    if n == 0 {
        return Err("the identity needs order n >= 1".into());
    }
    let report = verify_identity_with_budget(n, k, budget).map_err(|e| e.to_string())?;
    let value = json!({
        "n": report.n,
        "k": report.k,
        "lhs": big(&report.lhs),
        "rhs": big(&report.rhs),
        "term_count": report.term_count,
        "equal": report.equal,
    });
    let code = emit(&value, format, || {
        format!(
            "n = {}, k = {}: lhs {} vs rhs {} over {} terms — {}",
            report.n,
            report.k,
            report.lhs,
            report.rhs,
            report.term_count,
            if report.equal { "PASS" } else { "FAIL" }
        )
    })?;
    Ok(if report.equal { code } else { 2 })
}

fn run_coeff(
    n: usize,
    k: u32,
    raw_alpha: &str,
    method: Method,
    budget: u64,
    format: Format,
) -> Result<u8, String> {
    if n == 0 {
        return Err("coefficients need order n >= 1".into());
    }
    let alpha = parse_alpha(n, raw_alpha)?;
    let (coefficient, method_used) = match method {
        Method::Expansion => {
            let p = det_power_with_budget(n, k, budget).map_err(|e| e.to_string())?;
            (p.coefficient(&alpha), "expansion")
        }
        Method::FiniteDifference => (
            coefficient_by_finite_difference(n, k, &alpha).map_err(|e| e.to_string())?,
            "finite-difference",
        ),
        Method::Auto => match det_power_with_budget(n, k, budget) {
            Ok(p) => (p.coefficient(&alpha), "expansion"),
            Err(refusal @ Error::TermBudget { .. }) => (
                coefficient_by_finite_difference(n, k, &alpha).map_err(|_| refusal.to_string())?,
                "finite-difference",
            ),
            Err(e) => return Err(e.to_string()),
        },
    };
    let value = json!({
        "n": n,
        "k": k,
        "alpha": alpha.rows(),
        "method": method_used,
        "coefficient": big(&coefficient),
    });
    emit(&value, format, || {
        format!("coefficient of X^({alpha}) in det^{k} at order {n}: {coefficient} ({method_used})")
    })
}

fn run_at_diff(n: usize, budget: u64, format: Format) -> Result<u8, String> {
    if n == 0 {
        return Err("the signed difference needs order n >= 1".into());
    }
    let counted = census(n).map_err(|e| e.to_string())?;
    let via_coefficient = match signed_difference_via_coefficient_with_budget(n, budget) {
        Ok(v) => Some(v),
        // the coefficient route gives out before enumeration does: the
        // expansion exceeds any sane term budget and the all-ones pattern
        // has n² > 30 support cells at n = 6
        Err(Error::TermBudget { .. }) | Err(Error::SupportTooLarge { .. }) => None,
        Err(e) => return Err(e.to_string()),
    };
    let equal = via_coefficient
        .as_ref()
        .map(|v| *v == counted.signed_difference);
    let note = if via_coefficient.is_none() {
        Some("coefficient route infeasible at this order; census only")
    } else {
        None
    };
    let value = json!({
        "n": n,
        "census": big(&counted.signed_difference),
        "coefficient": via_coefficient.as_ref().map(|v| v.to_string()),
        "equal": equal,
        "note": note,
    });
    let code = emit(&value, format, || match &via_coefficient {
        Some(v) => format!(
            "order {n}: census {} vs coefficient {} — {}",
            counted.signed_difference,
            v,
            if equal == Some(true) { "PASS" } else { "FAIL" }
        ),
        None => format!(
            "order {n}: census {} ({})",
            counted.signed_difference,
            note.unwrap_or_default()
        ),
    })?;
    Ok(if equal == Some(false) { 2 } else { code })
}

fn mc_value(estimate: &MomentEstimate, seed: u64) -> Value {
    json!({
        "mean_re": estimate.mean.re,
        "mean_im": estimate.mean.im,
        "stderr": estimate.std_error,
        "samples": estimate.samples,
        "seed": seed,
    })
}

fn parse_mc(mc: Option<&[u64]>) -> Result<Option<(u64, u64)>, String> {
    match mc {
        None => Ok(None),
        Some(&[samples, seed]) => {
            if samples == 0 {
                return Err("--mc needs at least one sample".into());
            }
            Ok(Some((samples, seed)))
        }
        Some(_) => Err("--mc takes exactly two values: SAMPLES SEED".into()),
    }
}

fn run_moment(
    n: usize,
    raw_alpha: &str,
    mc: Option<&[u64]>,
    budget: u64,
    format: Format,
) -> Result<u8, String> {
    if n == 0 {
        return Err("moments need order n >= 1".into());
    }
    let alpha = parse_alpha(n, raw_alpha)?;
    let spec = MomentSpec::new(alpha.clone());
    let vanishes = moment_vanishes(&spec);
    // |α| not divisible by n still integrates to an exact zero; there is
    // just no exponent k or closed bound to report alongside it
    let (exact, bound) = match spec.k() {
        Some(_) => (
            exact_moment_with_budget(&spec, budget).map_err(|e| e.to_string())?,
            Some(moment_bound(&spec).map_err(|e| e.to_string())?),
        ),
        None => (num_rational::BigRational::zero(), None),
    };
    let estimate = parse_mc(mc)?.map(|(samples, seed)| (mc_moment(&spec, samples, seed), seed));

    let exact_f64 = exact.to_f64().unwrap_or(f64::NAN);
    let within = estimate
        .as_ref()
        .map(|(est, _)| (est.mean - Complex64::new(exact_f64, 0.0)).norm() <= 4.0 * est.std_error);
    let value = json!({
        "n": n,
        "alpha": alpha.rows(),
        "k": spec.k(),
        "vanishes": vanishes,
        "exact": { "num": big(exact.numer()), "den": big(exact.denom()) },
        "bound": bound,
        "mc": estimate.as_ref().map(|(est, seed)| mc_value(est, *seed)),
        "within_4_sigma": within,
    });
    let code = emit(&value, format, || {
        let mut out = format!("moment of U^({alpha}) over SU({n}): exact {exact}");
        if let Some(b) = bound {
            write!(out, ", bound {b:.6e}").unwrap();
        }
        if let Some((est, _)) = &estimate {
            write!(
                out,
                ", mc {:.6} + {:.6}i (stderr {:.3e}, {} samples) — {}",
                est.mean.re,
                est.mean.im,
                est.std_error,
                est.samples,
                if within == Some(true) { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        out
    })?;
    Ok(if within == Some(false) { 2 } else { code })
}

fn run_trace_moment(n: usize, l: u32, mc: Option<&[u64]>, format: Format) -> Result<u8, String> {
    if n == 0 {
        return Err("trace moments need order n >= 1".into());
    }
    let exact = trace_power_moment_exact(n, l);
    let estimate = parse_mc(mc)?.map(|(samples, seed)| (mc_trace_power(n, l, samples, seed), seed));
    let within = match &estimate {
        None => None,
        Some((est, _)) => {
            let target = exact
                .to_f64()
                .filter(|v| v.is_finite())
                .ok_or("exact dimension exceeds double precision; drop --mc")?;
            Some((est.mean - Complex64::new(target, 0.0)).norm() <= 4.0 * est.std_error)
        }
    };
    let value = json!({
        "n": n,
        "l": l,
        "exact": big(&exact),
        "mc": estimate.as_ref().map(|(est, seed)| mc_value(est, *seed)),
        "within_4_sigma": within,
    });
    let code = emit(&value, format, || {
        let mut out = format!(
            "E[tr(U)^{}] over SU({n}): exact {exact}",
            l as u64 * n as u64
        );
        if let Some((est, _)) = &estimate {
            write!(
                out,
                ", mc {:.6} + {:.6}i (stderr {:.3e}, {} samples) — {}",
                est.mean.re,
                est.mean.im,
                est.std_error,
                est.samples,
                if within == Some(true) { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        out
    })?;
    Ok(if within == Some(false) { 2 } else { code })
}

/// Twelve significant digits, scientific notation; empty for a missing value.
fn ledger_cell(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.11e}")).unwrap_or_default()
}

fn run_ledger(n_max: u64, format: Format) -> Result<u8, String> {
    if !(1..=1000).contains(&n_max) {
        return Err("ledger supports 1 <= n_max <= 1000".into());
    }
    let rows = bound_ledger(n_max);
    match format {
        Format::Csv => {
            println!("n,log_factorial_ratio,main_term,correction,vlw_log_L,ratio_log");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    row.n,
                    ledger_cell(Some(row.log_factorial_ratio)),
                    ledger_cell(Some(row.main_term)),
                    ledger_cell(Some(row.correction)),
                    ledger_cell(Some(row.vlw_log_l)),
                    ledger_cell(row.ratio_log),
                );
            }
        }
        Format::Json => {
            let value: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n,
                        "log_factorial_ratio": row.log_factorial_ratio,
                        "main_term": row.main_term,
                        "correction": row.correction,
                        "vlw_log_L": row.vlw_log_l,
                        "ratio_log": row.ratio_log,
                    })
                })
                .collect();
            println!("{}", Value::Array(value));
        }
        Format::Text => {
            println!(
                "{:>5} {:>18} {:>18} {:>18} {:>18} {:>18}",
                "n", "log ratio", "main term", "correction", "count est.", "ratio log"
            );
            for row in &rows {
                println!(
                    "{:>5} {:>18.6} {:>18.6} {:>18.6} {:>18.6} {:>18}",
                    row.n,
                    row.log_factorial_ratio,
                    row.main_term,
                    row.correction,
                    row.vlw_log_l,
                    row.ratio_log
                        .map(|v| format!("{v:.6}"))
                        .unwrap_or_else(|| "—".into()),
                );
            }
            let c = corollary_constants();
            println!(
                "rms growth base 2e^(1/4) = {:.5}; ceiling base 4/sqrt(e) = {:.5}",
                c.rms_base, c.ceiling_base
            );
        }
    }
    Ok(0)
}

fn run_dump(n: usize, k: u32, budget: u64) -> Result<u8, String> {
    if n == 0 {
        return Err("the expansion needs order n >= 1".into());
    }
    let started = Instant::now();
    let p = det_power_with_budget(n, k, budget).map_err(|e| e.to_string())?;
    print!("{}", p.dump());
    eprintln!("{} terms in {:.2?}", p.term_count(), started.elapsed());
    Ok(0)
}
