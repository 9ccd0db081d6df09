//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::field::Rationals;
use crate::arith::roots::format_decimal;
use crate::charts::{self, ChartReport};
use crate::degree::{
    estimate_delta, probe_degrees, symbolic_degree_oracle, DegreeCache, DegreeRecord, FieldConfig, Method,
};
use crate::error::Error;
use crate::maps::matrix::parse_matrix_literal;
use crate::maps::pointwise::{ihat_matrix, jhat_matrix, khat_matrix};
use crate::maps::symbolic::common_factor_identity;
use crate::picard::{
    charpoly_factor_check, delta, invariant_subspace_check, predicted_degrees, pullback_matrix, SignConvention,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Probe,
    Picard,
    Symbolic,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Matrix,
    Charpoly,
    Factors,
    Subspaces,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheAction {
    Inspect,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapArg {
    Ihat,
    Jhat,
    Khat,
}

#[derive(Parser, Debug)]
#[command(name = "matinv-degree", version, about = "Degree growth of the matrix-inversion / Hadamard-inverse map")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; csv is only available for degree tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory of the degree cache.
    #[arg(long, global = true, env = "MATINV_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certified dynamical degree for q >= 3.
    Delta {
        #[arg(long)]
        q: usize,
        /// Decimal digits of the certified interval.
        #[arg(long, default_value_t = 15)]
        digits: usize,
    },
    /// Degree sequence deg(K^n), n = 0..=N.
    Degseq {
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Picard)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "MATINV_PRIME_BITS", default_value_t = 61, value_parser = clap::value_parser!(u32).range(61..=63))]
        prime_bits: u32,
        #[arg(long, value_enum, default_value_t = SignConvention::AllNegative)]
        convention: SignConvention,
    },
    /// Pullback matrix on the Picard group and its spectral data.
    Picard {
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = Emit::Factors)]
        emit: Emit,
        #[arg(long, value_enum, default_value_t = SignConvention::AllNegative)]
        convention: SignConvention,
    },
    /// Exact checks of the local chart computations.
    Verify {
        #[arg(long)]
        q: usize,
        /// Comma-separated check names or ids, or "all".
        #[arg(long, default_value = "all")]
        props: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inspect or clear the degree cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
    /// Evaluate a map at a matrix given as a JSON literal.
    Eval {
        #[arg(long, value_enum, default_value_t = MapArg::Khat)]
        map: MapArg,
        /// e.g. '[[1,2],["1/3",4]]'
        #[arg(long)]
        matrix: String,
    },
}

/// Check names with the numeric ids accepted as aliases.
pub const VERIFY_ALIASES: [(&str, &str); 7] = [
    ("1.1", "anchor"),
    ("2.1", "limit"),
    ("2.2", "rank-one"),
    ("3.1", "image"),
    ("4.4", "homogeneity"),
    ("5.1", "valuations"),
    ("6.1", "valuations"),
];

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Scope(_)
            | Error::InvalidSize(_)
            | Error::InvalidInput(_)
            | Error::InvalidIndex(_)
            | Error::Parse(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: msg.into(),
    }
}

/// Parses `args` (program name first), writes the report to `out` and
/// diagnostics to `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((body, code)) => {
            let _ = writeln!(out, "{body}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

type Outcome = Result<(String, i32), Failure>;

fn config(cli: &Cli) -> Value {
    let mut c = match &cli.command {
        Command::Delta { q, digits } => json!({"command": "delta", "q": q, "digits": digits}),
        Command::Degseq {
            q,
            n,
            method,
            seed,
            prime_bits,
            convention,
        } => json!({"command": "degseq", "q": q, "n": n, "method": method, "seed": seed,
                    "prime_bits": prime_bits, "convention": convention}),
        Command::Picard { q, emit, convention } => {
            json!({"command": "picard", "q": q, "emit": emit, "convention": convention})
        }
        Command::Verify { q, props, trials, seed } => {
            json!({"command": "verify", "q": q, "props": props, "trials": trials, "seed": seed})
        }
        Command::Cache { action } => json!({"command": "cache", "action": action}),
        Command::Eval { map, matrix } => json!({"command": "eval", "map": map, "matrix": matrix}),
    };
    c["format"] = json!(cli.format);
    c["cache_dir"] = json!(cli.cache_dir.as_ref().map(|p| p.display().to_string()));
    c
}

fn dispatch(cli: &Cli) -> Outcome {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Degseq { .. }) {
        return Err(usage("csv output is only available for degseq"));
    }
    let cfg = config(cli);
    match &cli.command {
        Command::Delta { q, digits } => cmd_delta(cli, cfg, *q, *digits),
        Command::Degseq {
            q,
            n,
            method,
            seed,
            prime_bits,
            convention,
        } => cmd_degseq(cli, cfg, *q, *n, *method, *seed, *prime_bits, *convention),
        Command::Picard { q, emit, convention } => cmd_picard(cli, cfg, *q, *emit, *convention),
        Command::Verify { q, props, trials, seed } => cmd_verify(cli, cfg, *q, props, *trials, *seed),
        Command::Cache { action } => cmd_cache(cli, cfg, *action),
        Command::Eval { map, matrix } => cmd_eval(cli, cfg, *map, matrix),
    }
}

fn render(cli: &Cli, value: &Value, text: impl FnOnce() -> String) -> String {
    match cli.format {
        Format::Text => text(),
        _ => serde_json::to_string_pretty(value).expect("serializable"),
    }
}

fn cmd_delta(cli: &Cli, cfg: Value, q: usize, digits: usize) -> Outcome {
    if q < 3 {
        return Err(usage(format!(
            "delta is only defined by the closed formula for q >= 3 (got q = {q})"
        )));
    }
    let prec = BigRational::new(BigInt::from(1), BigInt::from(10).pow(digits as u32 + 2));
    let rep = delta(q, &prec)?;
    let dec = format_decimal(&rep.delta.midpoint(), digits);
    let value = json!({
        "config": cfg,
        "method": "picard",
        "delta_decimal": dec,
        "report": rep,
    });
    let code = if rep.agree { EXIT_OK } else { EXIT_FAILURE };
    let body = render(cli, &value, || {
        format!(
            "q = {q}\nP(t) coefficients (constant first): {:?}\ndelta = {dec} in [{}, {}] (picard)\nfull-matrix radius overlaps: {}",
            rep.polynomial.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            format_decimal(&rep.delta.lo, digits),
            format_decimal(&rep.delta.hi, digits),
            rep.agree
        )
    });
    Ok((body, code))
}

fn probe_with_cache(
    cli: &Cli,
    q: usize,
    n: usize,
    seed: u64,
    prime_bits: u32,
) -> Result<(Vec<DegreeRecord>, bool), Failure> {
    let cache = cli.cache_dir.as_ref().map(DegreeCache::new);
    if let Some(c) = &cache {
        let hits = (0..=n)
            .map(|k| c.lookup(q, k, Method::Probe, Some(seed), Some(prime_bits)))
            .collect::<crate::Result<Vec<_>>>()?;
        if hits.iter().all(|h| h.is_some()) {
            let recs = hits
                .into_iter()
                .flatten()
                .map(|e| DegreeRecord {
                    q: e.q,
                    n: e.n,
                    degree: e.degree,
                    method: e.method,
                    seeds: vec![seed],
                    primes: e.prime.into_iter().collect(),
                    agreement: 2,
                })
                .collect();
            return Ok((recs, true));
        }
    }
    let recs = probe_degrees(q, n, seed, FieldConfig::Modular { prime_bits })?;
    if let Some(c) = &cache {
        for r in &recs {
            c.append(r, Some(seed))?;
        }
    }
    Ok((recs, false))
}

#[allow(clippy::too_many_arguments)]
fn cmd_degseq(
    cli: &Cli,
    cfg: Value,
    q: usize,
    n: usize,
    method: MethodArg,
    seed: u64,
    prime_bits: u32,
    conv: SignConvention,
) -> Outcome {
    let mut records = Vec::new();
    let mut from_cache = false;
    if matches!(method, MethodArg::Probe | MethodArg::Both) {
        let (r, c) = probe_with_cache(cli, q, n, seed, prime_bits)?;
        from_cache = c;
        records.extend(r);
    }
    if matches!(method, MethodArg::Picard | MethodArg::Both) {
        records.extend(predicted_degrees(q, n, conv)?);
    }
    if method == MethodArg::Symbolic {
        for k in 0..=n {
            records.push(symbolic_degree_oracle(q, k, seed)?);
        }
    }
    records.sort_by_key(|r| (r.q, r.n, r.method));

    let mut comparison = Vec::new();
    let mut agreement = None;
    if method == MethodArg::Both {
        for k in 0..=n {
            let get = |m| records.iter().find(|r| r.n == k && r.method == m).map(|r| r.degree);
            let (p, c) = (get(Method::Probe), get(Method::Picard));
            comparison.push(json!({"n": k, "probe": p, "picard": c, "agree": p.is_some() && p == c}));
        }
        agreement = Some(comparison.iter().all(|c| c["agree"] == json!(true)));
    }
    let primary = if method == MethodArg::Both { Method::Picard } else { records[0].method };
    let seq: Vec<DegreeRecord> = records.iter().filter(|r| r.method == primary).cloned().collect();
    let growth = estimate_delta(&seq).ok();
    let code = if agreement == Some(false) { EXIT_FAILURE } else { EXIT_OK };

    let body = match cli.format {
        Format::Csv => {
            let mut s = String::from("q,n,method,degree,agreement,agree_across_methods\n");
            for r in &records {
                let cross = comparison
                    .get(r.n)
                    .map(|c| c["agree"].to_string())
                    .unwrap_or_default();
                s.push_str(&format!("{},{},{},{},{},{}\n", r.q, r.n, r.method, r.degree, r.agreement, cross));
            }
            s.trim_end().to_string()
        }
        Format::Text => {
            let mut s = format!("q = {q}\n");
            for r in &records {
                s.push_str(&format!("n = {:>3}  {:<8} {}\n", r.n, r.method.to_string(), r.degree));
            }
            if let Some(a) = agreement {
                s.push_str(&format!("probe and picard agree: {a}\n"));
            }
            s.trim_end().to_string()
        }
        Format::Json => serde_json::to_string_pretty(&json!({
            "config": cfg,
            "records": records,
            "from_cache": from_cache,
            "comparison": comparison,
            "agreement": agreement,
            "growth": growth,
        }))
        .expect("serializable"),
    };
    Ok((body, code))
}

fn cmd_picard(cli: &Cli, cfg: Value, q: usize, emit: Emit, conv: SignConvention) -> Outcome {
    let (report, code, text): (Value, i32, String) = match emit {
        Emit::Matrix => {
            let m = pullback_matrix(q, conv)?;
            let t = m.rows().iter().map(|r| r.iter().map(|x| format!("{x:>3}")).collect::<String>()).collect::<Vec<_>>().join("\n");
            (json!({"dimension": m.dim(), "matrix": m}), EXIT_OK, t)
        }
        Emit::Charpoly => {
            let cp = pullback_matrix(q, conv)?.charpoly();
            let c: Vec<String> = cp.coeffs().iter().map(|x| x.to_string()).collect();
            let t = format!("charpoly (constant first): [{}]", c.join(", "));
            (json!({"degree": c.len() - 1, "charpoly": c}), EXIT_OK, t)
        }
        Emit::Factors => {
            let r = charpoly_factor_check(q, conv)?;
            let t = format!(
                "factorization under {conv}: {}{}",
                if r.success { "success" } else { "FAILED" },
                r.failed_stage.as_ref().map(|s| format!(" at {s}")).unwrap_or_default()
            );
            let code = if r.success { EXIT_OK } else { EXIT_FAILURE };
            (serde_json::to_value(&r).expect("serializable"), code, t)
        }
        Emit::Subspaces => {
            let r = invariant_subspace_check(q)?;
            let t = format!(
                "as-stated subspaces invariant: {}\ncorrected subspaces invariant: {}",
                r.as_stated_hold, r.corrected_hold
            );
            let code = if r.corrected_hold { EXIT_OK } else { EXIT_FAILURE };
            (serde_json::to_value(&r).expect("serializable"), code, t)
        }
    };
    let value = json!({"config": cfg, "method": "picard", "report": report});
    Ok((render(cli, &value, || text), code))
}

/// Resolves a `--props` list to check names, in canonical order.
pub fn resolve_props(props: &str) -> Result<Vec<&'static str>, String> {
    let mut names: Vec<&'static str> = Vec::new();
    let all: Vec<&'static str> = std::iter::once("anchor").chain(charts::CHECK_NAMES).collect();
    for p in props.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if p == "all" {
            names.extend(&all);
            continue;
        }
        let name = VERIFY_ALIASES
            .iter()
            .find(|(id, _)| *id == p)
            .map(|(_, n)| *n)
            .or_else(|| all.iter().copied().find(|n| *n == p))
            .ok_or_else(|| {
                let ids: Vec<&str> = VERIFY_ALIASES.iter().map(|(i, _)| *i).collect();
                format!(
                    "unknown check '{p}'; expected 'all', one of {} or one of {}",
                    all.join(", "),
                    ids.join(", ")
                )
            })?;
        names.push(name);
    }
    if names.is_empty() {
        return Err("no checks selected".into());
    }
    names.sort_by_key(|n| all.iter().position(|a| a == n));
    names.dedup();
    Ok(names)
}

/// Reduced degree `q^2 - q + 1` at `n = 1`: symbolic for `q <= 4`, probed otherwise.
fn anchor_check(q: usize, seed: u64) -> crate::Result<ChartReport> {
    let expected = (q * q - q + 1) as u128;
    let mut observed = Vec::new();
    if q <= crate::maps::symbolic::SYMBOLIC_MAX_Q {
        observed.push(("symbolic", common_factor_identity(q)?.khat.degree() as u128));
    }
    observed.push(("probe", probe_degrees(q, 1, seed, FieldConfig::default())?[1].degree));
    let failures: Vec<String> = observed
        .iter()
        .filter(|(_, d)| *d != expected)
        .map(|(m, d)| format!("{m}: degree {d}, expected {expected}"))
        .collect();
    Ok(ChartReport {
        proposition: "anchor".into(),
        q,
        trials: observed.len(),
        passes: observed.len() - failures.len(),
        failures: failures.len(),
        samples_of_failure: failures,
        observations: Vec::new(),
    })
}

fn cmd_verify(cli: &Cli, cfg: Value, q: usize, props: &str, trials: usize, seed: u64) -> Outcome {
    let names = resolve_props(props).map_err(usage)?;
    if q < 3 {
        return Err(usage(format!("chart checks need q >= 3 (got q = {q})")));
    }
    let mut reports = Vec::new();
    for name in names {
        reports.push(match name {
            "anchor" => anchor_check(q, seed)?,
            other => charts::run_named_check(other, q, trials, seed)?,
        });
    }
    let all_ok = reports.iter().all(|r| r.ok());
    let value = json!({"config": cfg, "reports": reports, "all_pass": all_ok});
    let body = render(cli, &value, || {
        reports
            .iter()
            .map(|r| {
                format!(
                    "{:<12} q = {}  {}/{} passed{}",
                    r.proposition,
                    r.q,
                    r.passes,
                    r.trials,
                    if r.ok() { "" } else { "  FAIL" }
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    Ok((body, if all_ok { EXIT_OK } else { EXIT_FAILURE }))
}

fn cmd_cache(cli: &Cli, cfg: Value, action: CacheAction) -> Outcome {
    let dir = cli
        .cache_dir
        .as_ref()
        .ok_or_else(|| usage("no cache directory: pass --cache-dir or set MATINV_CACHE_DIR"))?;
    let cache = DegreeCache::new(dir);
    let (value, text) = match action {
        CacheAction::Inspect => {
            let l = cache.inspect()?;
            let t = format!(
                "{}: {} entries, {} malformed lines",
                l.path,
                l.entries.len(),
                l.malformed_lines
            );
            (json!({"config": cfg, "listing": l}), t)
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            (json!({"config": cfg, "removed_entries": n}), format!("removed {n} entries"))
        }
    };
    Ok((render(cli, &value, || text), EXIT_OK))
}

fn cmd_eval(cli: &Cli, cfg: Value, map: MapArg, matrix: &str) -> Outcome {
    let x = parse_matrix_literal(matrix)?;
    let y = match map {
        MapArg::Ihat => ihat_matrix(&x)?,
        MapArg::Jhat => jhat_matrix(&x)?,
        MapArg::Khat => khat_matrix(&x)?,
    };
    let rows: Vec<Vec<String>> = y
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| crate::arith::field::format_rational(&<Rationals as crate::arith::field::Field>::to_rational(&Rationals, e)))
                .collect()
        })
        .collect();
    let indeterminate = y.is_zero();
    let value = json!({"config": cfg, "image": rows, "indeterminate": indeterminate});
    let text = if indeterminate {
        "indeterminate".to_string()
    } else {
        rows.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n")
    };
    Ok((render(cli, &value, || text), EXIT_OK))
}
