//! Command-line front end: construct and print cones, test membership,
//! and run the verification suites.
//!
//! Exit codes are a stable contract: 0 on success (including a clean
//! "false" membership answer), 1 when a verification case or an
//! internal cross-check fails, 2 on usage or configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;

use strata_cones::cyclic::{self, IndexSet};
use strata_cones::pcone::{self, PConeError, PExpression, StratumContext};
use strata_cones::polycone::PolyCone;
use strata_cones::verify::{self, report::VerificationReport, IsumCache};

/// Hard ceiling for the verification envelope; the suites are
/// exhaustive in the stratum sets, so each step doubles twice.
const MAX_N_CAP: usize = 8;

#[derive(Parser)]
#[command(
    name = "strata-cones",
    version,
    about = "Exact stratum cones over cyclic index sets, with exhaustive verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sign set attached to a stratum.
    Phi {
        /// Ambient circle size.
        #[arg(long)]
        n: usize,
        /// Compact indices, as a comma list ("" for the empty set).
        #[arg(long, default_value = "")]
        r: String,
        /// Stratum indices, as a comma list.
        #[arg(long)]
        s: String,
        /// Also evaluate the printed closed formula (R = {} only) and
        /// flag whether it agrees with the recursion.
        #[arg(long)]
        paper_variant: bool,
    },
    /// Construct a cone and print its inequalities or JSON form.
    Cone {
        kind: ConeKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        r: String,
        #[arg(long, default_value = "")]
        s: String,
        /// Characteristic: an integer >= 2, or "symbolic" for display
        /// with unevaluated powers (text format only).
        #[arg(long, default_value = "symbolic")]
        p: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide membership of a weight in a cone.
    Member {
        kind: ConeKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "")]
        r: String,
        #[arg(long, default_value = "")]
        s: String,
        #[arg(long, default_value = "symbolic")]
        p: String,
        /// Weight vector, as a comma list of integers.
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Run a verification suite and emit its canonical JSON report.
    Verify {
        suite: SuiteKind,
        /// Largest ambient circle size (default 6, hard cap 8).
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Characteristics to verify at, as a comma list.
        #[arg(long, default_value = "2,3,5")]
        primes: String,
        /// Worker count; falls back to STRATA_CONES_JOBS, then to the
        /// number of cores.  Never changes any output byte.
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write the JSON report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConeKind {
    /// Partial Hasse cone (both construction routes, cross-checked).
    Pha,
    /// Homogeneous stratum cone.
    Crs,
    /// Recursive intersection-sum cone.
    Isum,
    /// Lowest-weight cone.
    Lw,
    /// Closed Griffiths-Schmid region.
    Gs,
    /// Dominant region.
    Dominant,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteKind {
    Theorem,
    Identity,
    Hasse,
    Generators,
    Conjecture,
    Products,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Phi {
            n,
            r,
            s,
            paper_variant,
        } => cmd_phi(n, &r, &s, paper_variant),
        Command::Cone {
            kind,
            n,
            r,
            s,
            p,
            format,
        } => cmd_cone(kind, n, &r, &s, &p, format),
        Command::Member {
            kind,
            n,
            r,
            s,
            p,
            weight,
        } => cmd_member(kind, n, &r, &s, &p, &weight),
        Command::Verify {
            suite,
            max_n,
            primes,
            jobs,
            output,
            format,
        } => cmd_verify(suite, max_n, &primes, jobs, output.as_deref(), format),
    }
}

fn parse_set(n: usize, src: &str) -> Result<IndexSet> {
    let mut members = Vec::new();
    for token in src.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        members.push(
            token
                .parse::<usize>()
                .with_context(|| format!("bad index {token:?}"))?,
        );
    }
    IndexSet::from_members(n, members).map_err(Into::into)
}

/// `None` means symbolic display.
fn parse_p(src: &str) -> Result<Option<BigInt>> {
    if src == "symbolic" {
        return Ok(None);
    }
    let p = BigInt::from_str(src).with_context(|| format!("bad characteristic {src:?}"))?;
    if p < BigInt::from(2) {
        bail!("the characteristic must be at least 2");
    }
    Ok(Some(p))
}

fn need_p(p: &Option<BigInt>) -> Result<&BigInt> {
    p.as_ref()
        .ok_or_else(|| anyhow!("this operation requires a numeric characteristic"))
}

fn parse_weight(src: &str) -> Result<Vec<BigInt>> {
    src.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| BigInt::from_str(t).with_context(|| format!("bad weight entry {t:?}")))
        .collect()
}

fn comma(set: &IndexSet) -> String {
    set.members()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_phi(n: usize, r_src: &str, s_src: &str, paper_variant: bool) -> Result<ExitCode> {
    let r = parse_set(n, r_src)?;
    let s = parse_set(n, s_src)?;
    if s.is_empty() {
        bail!("S must be nonempty");
    }
    let t = cyclic::phi(n, &r, &s)?;
    if !paper_variant {
        println!("{}", comma(&t));
        return Ok(ExitCode::SUCCESS);
    }
    if !r.is_empty() {
        bail!("--paper-variant is defined only for R = {{}}");
    }
    let formula = cyclic::phi_paper_variant(n, &s)?;
    let flag = if formula == t { "[agrees]" } else { "[discrepant]" };
    println!("recursion: {}", comma(&t));
    println!("formula:   {} {flag}", comma(&formula));
    Ok(ExitCode::SUCCESS)
}

/// Maps an internal cross-check failure to exit code 1 and anything
/// else to a configuration error.
fn cone_or_exit<T>(result: Result<T, PConeError>) -> Result<Result<T, ExitCode>> {
    match result {
        Ok(v) => Ok(Ok(v)),
        Err(e @ PConeError::RouteMismatch { .. }) => {
            eprintln!("error: {e}");
            Ok(Err(ExitCode::from(1)))
        }
        Err(e) => Err(e.into()),
    }
}

fn print_cone(cone: &PolyCone, format: Format) -> Result<ExitCode> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&cone.to_json())?),
        Format::Text => {
            let h = cone.canonical_h();
            for f in &h.facets {
                println!("{f} <= 0");
            }
            for e in &h.equations {
                println!("{e} = 0");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_expressions(exprs: &[PExpression], p: Option<&BigInt>) {
    for e in exprs {
        match p {
            Some(p) => println!("{} <= 0", e.form(p)),
            None => println!("{e} <= 0"),
        }
    }
}

fn cmd_cone(
    kind: ConeKind,
    n: usize,
    r_src: &str,
    s_src: &str,
    p_src: &str,
    format: Format,
) -> Result<ExitCode> {
    let r = parse_set(n, r_src)?;
    let p = parse_p(p_src)?;
    if p.is_none() && format == Format::Json {
        bail!("json output requires a numeric characteristic");
    }
    match kind {
        ConeKind::Gs => print_cone(&pcone::cone_gs(&r), format),
        ConeKind::Dominant => print_cone(&pcone::cone_dominant(&r), format),
        ConeKind::Lw => match &p {
            Some(p) => print_cone(&pcone::cone_lw(&r, p)?, format),
            None => {
                if r.is_full() {
                    for i in 1..=n {
                        println!("-x_{i} <= 0");
                    }
                } else {
                    let exprs = (1..=n)
                        .map(|d| PExpression::new(n, d, r))
                        .collect::<Result<Vec<_>, _>>()?;
                    print_expressions(&exprs, None);
                    for i in r.members() {
                        println!("-x_{i} <= 0");
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        ConeKind::Pha | ConeKind::Crs => {
            let s = parse_set(n, s_src)?;
            match &p {
                Some(p) => {
                    let ctx = StratumContext::new(n, r, s, p.clone())?;
                    let built = if kind == ConeKind::Pha {
                        pcone::cone_pha(&ctx)
                    } else {
                        pcone::cone_crs(&ctx)
                    };
                    let pc = match cone_or_exit(built)? {
                        Ok(pc) => pc,
                        Err(code) => return Ok(code),
                    };
                    match format {
                        Format::Text => {
                            print_expressions(&pc.expressions, Some(p));
                            Ok(ExitCode::SUCCESS)
                        }
                        Format::Json => print_cone(&pc.cone, format),
                    }
                }
                None => {
                    // Symbolic display needs no cone arithmetic: the
                    // inequality systems are families of p-expressions.
                    if s.is_empty() {
                        bail!("S must be nonempty");
                    }
                    let exprs = if kind == ConeKind::Pha {
                        s.members()
                            .into_iter()
                            .map(|i| {
                                pcone::rho_pha(&r, &s, i)
                                    .and_then(|t| PExpression::new(n, i, t))
                            })
                            .collect::<Result<Vec<_>, _>>()?
                    } else {
                        let t = cyclic::phi(n, &r, &s)?;
                        s.members()
                            .into_iter()
                            .map(|i| PExpression::new(n, i, t))
                            .collect::<Result<Vec<_>, _>>()?
                    };
                    print_expressions(&exprs, None);
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        ConeKind::Isum => {
            let s = parse_set(n, s_src)?;
            let p = need_p(&p)
                .map_err(|_| anyhow!("the recursive cone requires a numeric characteristic"))?;
            let ctx = StratumContext::new(n, r, s, p.clone())?;
            let cache = IsumCache::new();
            let cone = match cone_or_exit(verify::intersection_sum_cone(&ctx, &cache))? {
                Ok(c) => c,
                Err(code) => return Ok(code),
            };
            print_cone(&cone, format)
        }
    }
}

fn cmd_member(
    kind: ConeKind,
    n: usize,
    r_src: &str,
    s_src: &str,
    p_src: &str,
    weight_src: &str,
) -> Result<ExitCode> {
    let r = parse_set(n, r_src)?;
    let p = parse_p(p_src)?;
    let w = parse_weight(weight_src)?;
    if w.len() != n {
        bail!("the weight has {} entries, expected {n}", w.len());
    }
    let cone = match kind {
        ConeKind::Gs => pcone::cone_gs(&r),
        ConeKind::Dominant => pcone::cone_dominant(&r),
        ConeKind::Lw => pcone::cone_lw(&r, need_p(&p)?)?,
        ConeKind::Pha | ConeKind::Crs => {
            let s = parse_set(n, s_src)?;
            let ctx = StratumContext::new(n, r, s, need_p(&p)?.clone())?;
            let built = if kind == ConeKind::Pha {
                pcone::cone_pha(&ctx)
            } else {
                pcone::cone_crs(&ctx)
            };
            match cone_or_exit(built)? {
                Ok(pc) => pc.cone,
                Err(code) => return Ok(code),
            }
        }
        ConeKind::Isum => {
            let s = parse_set(n, s_src)?;
            let ctx = StratumContext::new(n, r, s, need_p(&p)?.clone())?;
            let cache = IsumCache::new();
            match cone_or_exit(verify::intersection_sum_cone(&ctx, &cache))? {
                Ok(c) => c,
                Err(code) => return Ok(code),
            }
        }
    };
    match cone.contains(&w) {
        Ok(()) => println!("true"),
        Err(f) => {
            println!("false");
            println!("violated: {f} <= 0");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_primes(src: &str) -> Result<Vec<BigInt>> {
    let primes: Vec<BigInt> = src
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let p = BigInt::from_str(t).with_context(|| format!("bad characteristic {t:?}"))?;
            if p < BigInt::from(2) {
                bail!("characteristics must be at least 2");
            }
            Ok(p)
        })
        .collect::<Result<_>>()?;
    if primes.is_empty() {
        bail!("--primes must name at least one characteristic");
    }
    Ok(primes)
}

fn run_suites(suite: SuiteKind, max_n: usize, primes: &[BigInt]) -> Vec<VerificationReport> {
    match suite {
        SuiteKind::Theorem => vec![verify::verify_main_theorem(max_n, primes)],
        SuiteKind::Identity => vec![verify::verify_identity(max_n, primes)],
        SuiteKind::Hasse => vec![verify::verify_hasse_regularity(max_n, primes)],
        SuiteKind::Generators => vec![verify::verify_generators(max_n, primes)],
        SuiteKind::Conjecture => vec![verify::verify_cone_conjecture_a1(max_n, primes)],
        SuiteKind::Products => vec![verify::verify_products(max_n, primes)],
        SuiteKind::All => verify::verify_all(max_n, primes),
    }
}

fn cmd_verify(
    suite: SuiteKind,
    max_n: usize,
    primes_src: &str,
    jobs: Option<usize>,
    output: Option<&std::path::Path>,
    format: Format,
) -> Result<ExitCode> {
    if max_n == 0 || max_n > MAX_N_CAP {
        bail!("--max-n must be between 1 and {MAX_N_CAP}");
    }
    let primes = parse_primes(primes_src)?;
    let jobs = match jobs {
        Some(j) => Some(j),
        None => match std::env::var("STRATA_CONES_JOBS") {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| anyhow!("STRATA_CONES_JOBS must be a positive integer"))?,
            ),
            Err(_) => None,
        },
    };
    let reports = match jobs {
        Some(0) => bail!("--jobs must be positive"),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .context("building the worker pool")?;
            pool.install(|| run_suites(suite, max_n, &primes))
        }
        None => run_suites(suite, max_n, &primes),
    };

    let json = if suite == SuiteKind::All {
        verify::report::aggregate_to_json(max_n, &primes, &reports)
    } else {
        reports[0].to_json()
    };
    let pretty = serde_json::to_string_pretty(&json)?;
    if let Some(path) = output {
        fs::write(path, format!("{pretty}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    match format {
        Format::Json => println!("{pretty}"),
        Format::Text => {
            for rep in &reports {
                println!(
                    "suite {}: cases={} pass={} fail={} skipped={} ledger={}",
                    rep.suite,
                    rep.cases.len(),
                    rep.pass_count(),
                    rep.fail_count(),
                    rep.skip_count(),
                    rep.discrepancies.len()
                );
            }
            let ok = reports.iter().all(VerificationReport::passed);
            println!("overall: {}", if ok { "PASS" } else { "FAIL" });
        }
    }
    if reports.iter().all(VerificationReport::passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
