//! `clrank`: command-line front end for clrank-core.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use clrank_core::ff::FieldCtx;
use clrank_core::motive::{analytic_rank, l_function, TwistedPower};
use clrank_core::poly::Poly;
use clrank_core::scan::{
    coset_audit, dim_report, run_scans, DimMode, RankTable, ScanMode, ScanSpec, DEFAULT_CAP,
};
use clrank_core::symmetry::{check_l_identity, mu_orbit, standard_generators};
use clrank_core::verify::{run_suite, GenKind, Suite, SuiteOptions, DEFAULT_SEED};
use clrank_core::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "clrank", version, about = "L-functions and analytic ranks of twisted Carlitz tensor powers")]
struct Cli {
    /// Field size (a prime power).
    #[arg(long, global = true, default_value_t = 3)]
    q: u64,
    /// Tensor power n >= 1.
    #[arg(long, global = true, default_value_t = 1)]
    n: u32,
    /// Worker threads for scans.
    #[arg(long, global = true, env = "CLRANK_WORKERS")]
    workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print L(U) as JSON.
    Lfun(LfunArgs),
    /// Print the analytic rank (order of L at U = 1, or at U = γ).
    Rank(RankArgs),
    /// Ranks over the θ ↦ θ + d orbit and the L-identity of each generator.
    Orbit(PolyArg),
    /// Run the seeded identity, conjugacy and Euler-product suites.
    Verify(VerifyArgs),
    /// Exhaustive rank tally over squarefree P of given degree and leading coefficient.
    Scan(ScanArgs),
    /// Check that every P in the distinguished coset has rank >= 1.
    Coset(CosetArgs),
    /// Naive parameter and equation counts for rank loci.
    Dims(DimsArgs),
}

#[derive(Args)]
struct PolyArg {
    /// Little-endian coefficient list, e.g. 0,2,0,2 for 2θ³+2θ.
    #[arg(long)]
    poly: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum LfunFormat {
    /// {"j": [T-coefficients of U^j]}, zero terms omitted
    Map,
    /// [{"u_deg": j, "coeffs_T": [...]}]
    Terms,
}

#[derive(Args)]
struct LfunArgs {
    #[command(flatten)]
    poly: PolyArg,
    #[arg(long, value_enum, default_value = "map")]
    format: LfunFormat,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    poly: PolyArg,
    /// Evaluate the order of vanishing at U = γ (a nonzero element of F_q).
    #[arg(long)]
    at: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated generators: mu, nu, iota, tau, sigma, twist.
    #[arg(long, value_delimiter = ',')]
    gen: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Degrees: a list (3,5,7) or an inclusive range (3..11).
    #[arg(long)]
    m: String,
    /// Leading coefficient; all nonzero values when omitted.
    #[arg(long)]
    lead: Option<u32>,
    #[arg(long)]
    shift_stable: bool,
    /// Rank thresholds tallied in the CSV.
    #[arg(long, default_value = "1..5")]
    thresholds: String,
    #[arg(long, default_value_t = 4096)]
    chunk_size: u64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Run even when the enumeration exceeds the cap.
    #[arg(long)]
    force: bool,
    /// JSON-lines file of finished chunks.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Reuse finished chunks from the checkpoint file.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CosetArgs {
    #[arg(long, default_value_t = 7)]
    m_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimsMode {
    Single,
    InfiniteFamily,
    ShiftStable,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long)]
    r: u32,
    #[arg(long, value_enum, default_value = "single")]
    mode: DimsMode,
    /// Degrees for the per-(m, a) expected dimensions.
    #[arg(long)]
    m: Option<String>,
}

/// Verification failures exit with 1; everything else that goes wrong is 2.
struct VerificationFailed(String);

enum Outcome {
    Ok,
    Failed(VerificationFailed),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(VerificationFailed(msg))) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let verification = matches!(e.downcast_ref::<Error>(), Some(Error::AuditMismatch { .. }));
            ExitCode::from(if verification { 1 } else { 2 })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn field(cli: &Cli) -> anyhow::Result<FieldCtx> {
    Ok(FieldCtx::of_order(cli.q)?)
}

fn twisted(cli: &Cli, p: &PolyArg) -> anyhow::Result<TwistedPower> {
    let f = field(cli)?;
    let poly = Poly::parse(&f, &p.poly)?;
    Ok(TwistedPower::new(f, poly, cli.n)?)
}

/// "3,5,7" or "3..11" (inclusive).
fn parse_list(s: &str) -> anyhow::Result<Vec<usize>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().with_context(|| format!("bad range start in {s:?}"))?;
        let b: usize = b.trim_start_matches('=').trim().parse().with_context(|| format!("bad range end in {s:?}"))?;
        if a > b {
            bail!("empty range {s:?}");
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().with_context(|| format!("bad integer {t:?}"))).collect()
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.cmd {
        Cmd::Lfun(a) => {
            let l = l_function(&twisted(cli, &a.poly)?);
            let text = match a.format {
                LfunFormat::Map => serde_json::to_string(&l.to_degree_map())?,
                LfunFormat::Terms => l.to_terms_json(),
            };
            emit(cli, &text)?;
        }
        Cmd::Rank(a) => {
            let tp = twisted(cli, &a.poly)?;
            let (point, r) = match a.at {
                None => (1, analytic_rank(&tp)),
                Some(g) => {
                    if g >= tp.field().q() {
                        bail!("--at {g} is not an element of F_{}", tp.field().q());
                    }
                    (g, l_function(&tp).order_at(g)?)
                }
            };
            let text = if a.json { json!({"poly": tp.poly().to_text(), "at": point, "order": r}).to_string() } else { r.to_string() };
            emit(cli, &text)?;
        }
        Cmd::Orbit(a) => {
            let tp = twisted(cli, a)?;
            let f = tp.field().clone();
            let orbit: Vec<_> = mu_orbit(&tp)
                .into_iter()
                .map(|p| {
                    let t = TwistedPower::new(f.clone(), p, tp.n())?;
                    Ok(json!({"poly": t.poly().to_text(), "rank": analytic_rank(&t)}))
                })
                .collect::<anyhow::Result<_>>()?;
            let mut ids = Vec::new();
            let mut bad = Vec::new();
            for g in standard_generators(&f) {
                let c = check_l_identity(&g, &tp)?;
                if !c.holds {
                    bad.push(g.name());
                }
                ids.push(json!({"generator": g.name(), "holds": c.holds}));
            }
            let doc = json!({"q": f.q(), "n": tp.n(), "poly": tp.poly().to_text(), "rank": analytic_rank(&tp), "mu_orbit": orbit, "identities": ids});
            emit(cli, &serde_json::to_string_pretty(&doc)?)?;
            if !bad.is_empty() {
                return Ok(Outcome::Failed(VerificationFailed(format!("identities failed: {}", bad.join(", ")))));
            }
        }
        Cmd::Verify(a) => {
            let suite: Suite = a.suite.parse()?;
            let gens = a.gen.iter().map(|g| g.parse::<GenKind>()).collect::<Result<Vec<_>, _>>()?;
            let opts = SuiteOptions { cases: a.cases, seed: a.seed, gens };
            let reports = run_suite(suite, &opts);
            let text = if a.json {
                serde_json::to_string_pretty(&reports)?
            } else {
                let mut s = String::new();
                for r in &reports {
                    s.push_str(&format!("{:<16} {}/{} {}\n", r.name, r.passed, r.cases, if r.ok() { "pass" } else { "FAIL" }));
                    for f in r.failures.iter().take(5) {
                        s.push_str(&format!("    {f}\n"));
                    }
                }
                s
            };
            emit(cli, &text)?;
            let failed: Vec<_> = reports.iter().filter(|r| !r.ok()).map(|r| r.name.clone()).collect();
            if !failed.is_empty() {
                return Ok(Outcome::Failed(VerificationFailed(failed.join(", "))));
            }
        }
        Cmd::Scan(a) => {
            let f = field(cli)?;
            let degrees = parse_list(&a.m)?;
            let leads: Vec<u32> = match a.lead {
                Some(l) => vec![l],
                None => (1..f.q()).collect(),
            };
            let mode = if a.shift_stable { ScanMode::ShiftStable } else { ScanMode::AllSquarefree };
            let mut spec = ScanSpec::new(f, cli.n, degrees[0], leads[0], mode);
            spec.thresholds = parse_list(&a.thresholds)?.into_iter().map(|t| t as u32).collect();
            if let Some(w) = cli.workers {
                spec.workers = w.max(1);
            }
            spec.chunk_size = a.chunk_size.max(1);
            spec.cap = if a.force { u64::MAX } else { a.cap };
            spec.seed = a.seed;
            if let Some(path) = &a.checkpoint {
                if !a.resume && path.exists() {
                    fs::remove_file(path).with_context(|| format!("clearing {}", path.display()))?;
                }
                spec.checkpoint = Some(path.clone());
            }
            let table: RankTable = run_scans(&spec, &degrees, &leads).map_err(|e| match e {
                Error::ScanCap { .. } => anyhow!("{e} (pass --force to run anyway)"),
                other => other.into(),
            })?;
            emit(cli, &if a.json { table.to_json() } else { table.to_csv() })?;
        }
        Cmd::Coset(a) => {
            let f = field(cli)?;
            let rep = coset_audit(&f, cli.n, a.m_max)?;
            let doc = json!({
                "q": rep.q,
                "n": rep.n,
                "m_max": rep.m_max,
                "coset_members": rep.coset_members(),
                "violations": rep.violations,
                "off_coset_rank_frequency": rep.off_coset_frequency(),
                "classes": rep.classes,
                "rows": rep.rows,
            });
            emit(cli, &serde_json::to_string_pretty(&doc)?)?;
            if !rep.violations.is_empty() {
                return Ok(Outcome::Failed(VerificationFailed(format!("{} coset members of rank 0", rep.violations.len()))));
            }
        }
        Cmd::Dims(a) => {
            let f = field(cli)?;
            let mode = match a.mode {
                DimsMode::Single => DimMode::Single,
                DimsMode::InfiniteFamily => DimMode::InfiniteFamily,
                DimsMode::ShiftStable => DimMode::ShiftStable,
            };
            let degrees = match &a.m {
                Some(s) => parse_list(s)?,
                None => Vec::new(),
            };
            let rep = dim_report(f.q(), cli.n, a.r, mode, &degrees);
            emit(cli, &serde_json::to_string_pretty(&rep)?)?;
        }
    }
    Ok(Outcome::Ok)
}
