//! `bvic` — checks that invertibility conditions match their literals over
//! fixed-width bit-vectors: exhaustively at small widths, by seeded random
//! probing at large ones.
//!
//! Exit codes: 0 success, 1 a verification failure or solver disagreement,
//! 2 usage or configuration errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use bvic_cli::checks::{run_all, CheckConfig};
use bvic_cli::crosscheck::{disagreements, run_crosscheck, SolverConfig};
use bvic_cli::report::{Report, ReportFormat};
use bvic_cli::smt;
use bvic_core::verify::{verify_campaign, Status, VerifyConfig};
use bvic_core::{syntax, Catalog, ICEntry};

#[derive(Parser)]
#[command(name = "bvic", version, about = "Invertibility-condition verifier for fixed-width bit-vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification campaign over the catalog and print a report.
    Verify(VerifyArgs),
    /// Run the bit-vector kernel self-check suites.
    CheckCore(CheckCoreArgs),
    /// Write SMT-LIB benchmark files for the catalog.
    EmitSmt(EmitSmtArgs),
    /// Compare an external solver's answers against exhaustive verdicts.
    Crosscheck(CrosscheckArgs),
    /// Print the catalog in its file format.
    ListCatalog(CatalogArgs),
}

#[derive(Args)]
struct CatalogArgs {
    /// Additional catalog file(s) to merge in; repeatable.
    #[arg(long = "catalog", value_name = "FILE")]
    catalog: Vec<PathBuf>,
    /// Start from an empty catalog instead of the built-in entries.
    #[arg(long)]
    no_seed: bool,
}

impl CatalogArgs {
    fn load(&self) -> anyhow::Result<Catalog> {
        let mut catalog = if self.no_seed {
            Catalog::new()
        } else {
            Catalog::seed()
        };
        for path in &self.catalog {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading catalog {}", path.display()))?;
            let entries = syntax::parse_catalog(&text)
                .map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))?;
            catalog
                .load(entries)
                .with_context(|| format!("merging catalog {}", path.display()))?;
        }
        Ok(catalog)
    }
}

/// Parses width sets like "1-8", "16,32,65", "1-4,12" or "none".
fn parse_width_set(text: &str) -> Result<BTreeSet<u32>, String> {
    let mut widths = BTreeSet::new();
    if text == "none" {
        return Ok(widths);
    }
    for part in text.split(',') {
        let part = part.trim();
        let bad = || format!("invalid width set entry {part:?}");
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(format!("empty width range {part:?}"));
            }
            widths.extend(lo..=hi);
        } else {
            widths.insert(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(widths)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Widths to check exhaustively ("1-8", "1,2,12", or "none").
    #[arg(long, value_name = "SET", default_value = "1-8", value_parser = parse_width_set)]
    widths: BTreeSet<u32>,
    /// Widths to check by sampling; overlap with --widths is checked
    /// exhaustively instead.
    #[arg(long, value_name = "SET", default_value = "16,32,65", value_parser = parse_width_set)]
    sampled_widths: BTreeSet<u32>,
    /// Samples per sampled width, in each direction.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Random witness candidates per backward pair.
    #[arg(long, default_value_t = 4096)]
    witness_budget: u64,
    /// Seed for all random streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Never changes results.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Report format.
    #[arg(long, value_enum, default_value = "md")]
    format: ReportFormat,
    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Entry names whose counterexamples are expected and do not fail the
    /// run; repeatable.
    #[arg(long = "expect-counterexample", value_name = "NAME")]
    expect_counterexample: Vec<String>,
}

#[derive(Args)]
struct CheckCoreArgs {
    /// Largest width for the exhaustive tier.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=16))]
    max_width: u32,
    /// Widths for the random tier.
    #[arg(long, value_name = "SET", default_value = "64,65,128", value_parser = parse_width_set)]
    rand_widths: BTreeSet<u32>,
    /// Random cases per width per suite.
    #[arg(long, default_value_t = 100_000)]
    rand_cases: u64,
    /// Seed for the random tier.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EmitSmtArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Only these entries; repeatable (default: all).
    #[arg(long = "entry", value_name = "NAME")]
    entries: Vec<String>,
    /// Widths to emit.
    #[arg(long, value_name = "SET", default_value = "1-4", value_parser = parse_width_set)]
    widths: BTreeSet<u32>,
    /// Directory for the benchmark files.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Solver executable.
    #[arg(long, value_name = "PATH")]
    solver: PathBuf,
    /// Extra solver argument, placed before the file; repeatable.
    #[arg(long = "solver-arg", value_name = "ARG")]
    solver_args: Vec<String>,
    /// Seconds before a solver run is killed.
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    timeout_secs: u64,
    /// Widths to crosscheck.
    #[arg(long, value_name = "SET", default_value = "1-4", value_parser = parse_width_set)]
    widths: BTreeSet<u32>,
    /// Keep benchmarks here (default: a temporary directory).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let catalog = args.catalog.load()?;
    for name in &args.expect_counterexample {
        if catalog.get(name).is_none() {
            bail!("--expect-counterexample {name:?} does not name a catalog entry");
        }
    }
    let config = VerifyConfig {
        exhaustive_widths: args.widths,
        sampled_widths: args.sampled_widths,
        samples_per_width: args.samples,
        witness_budget: args.witness_budget,
        rng_seed: args.seed,
        workers: args.workers.unwrap_or_else(default_workers),
    };
    let verdicts = verify_campaign(&catalog, &config)?;
    let report = Report::from_verdicts(&config, &verdicts);
    let rendered = report.render(args.format);
    match &args.out {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => print!("{rendered}"),
    }
    let unexpected = verdicts.iter().any(|v| {
        v.status == Status::CounterexampleFound && !args.expect_counterexample.contains(&v.entry)
    });
    Ok(if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_check_core(args: CheckCoreArgs) -> anyhow::Result<ExitCode> {
    let config = CheckConfig {
        max_exhaustive_width: args.max_width,
        random_widths: args.rand_widths.iter().copied().collect(),
        random_cases: args.rand_cases,
        seed: args.seed,
    };
    let outcomes = run_all(&config);
    let mut failed = false;
    for outcome in &outcomes {
        match &outcome.failure {
            None => println!("[PASS] {:<22} cases={}", outcome.name, outcome.cases),
            Some(msg) => {
                failed = true;
                println!("[FAIL] {:<22} {msg}", outcome.name);
            }
        }
    }
    if failed {
        println!("core checks FAILED");
        Ok(ExitCode::FAILURE)
    } else {
        println!("all {} core check suites passed", outcomes.len());
        Ok(ExitCode::SUCCESS)
    }
}

/// Resolves `--entry` filters against the catalog, in catalog order.
fn select_entries<'c>(catalog: &'c Catalog, names: &[String]) -> anyhow::Result<Vec<&'c ICEntry>> {
    if names.is_empty() {
        return Ok(catalog.entries().iter().collect());
    }
    for name in names {
        if catalog.get(name).is_none() {
            bail!("--entry {name:?} does not name a catalog entry");
        }
    }
    Ok(catalog
        .entries()
        .iter()
        .filter(|e| names.iter().any(|n| n == e.name()))
        .collect())
}

fn cmd_emit_smt(args: EmitSmtArgs) -> anyhow::Result<ExitCode> {
    let catalog = args.catalog.load()?;
    let entries = select_entries(&catalog, &args.entries)?;
    if entries.is_empty() || args.widths.is_empty() {
        bail!("nothing to emit: no entries or no widths selected");
    }
    let widths: Vec<u32> = args.widths.iter().copied().collect();
    let paths = smt::write_benchmarks(&entries, &widths, &args.out)?;
    for path in &paths {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_crosscheck(args: CrosscheckArgs) -> anyhow::Result<ExitCode> {
    let catalog = args.catalog.load()?;
    let solver = SolverConfig {
        program: args.solver,
        args: args.solver_args,
        timeout: Duration::from_secs(args.timeout_secs),
    };
    let widths: Vec<u32> = args.widths.iter().copied().collect();
    // Hold the temporary directory so it outlives the runs.
    let scratch;
    let dir = match &args.out {
        Some(dir) => dir.clone(),
        None => {
            scratch = tempfile::tempdir().context("creating a scratch directory")?;
            scratch.path().to_owned()
        }
    };
    let rows = run_crosscheck(&catalog, &widths, &solver, &dir)?;
    println!("entry            width  solver    expected  agreement");
    for row in &rows {
        let expected = row
            .expected
            .as_ref()
            .map_or("-".to_owned(), ToString::to_string);
        let agreement = match row.agrees {
            Some(true) => "ok",
            Some(false) => "DISAGREES",
            None => "-",
        };
        println!(
            "{:<16} {:>5}  {:<9} {:<9} {agreement}",
            row.entry, row.width, row.answer.to_string(), expected
        );
    }
    let bad = disagreements(&rows);
    if bad.is_empty() {
        println!("crosscheck ok: {} runs, no disagreements", rows.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("crosscheck FAILED: {} disagreement(s)", bad.len());
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_list_catalog(args: CatalogArgs) -> anyhow::Result<ExitCode> {
    let catalog = args.load()?;
    for entry in catalog.entries() {
        println!("{}", syntax::print_entry(entry));
    }
    Ok(ExitCode::SUCCESS)
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Verify(args) => cmd_verify(args),
        Command::CheckCore(args) => cmd_check_core(args),
        Command::EmitSmt(args) => cmd_emit_smt(args),
        Command::Crosscheck(args) => cmd_crosscheck(args),
        Command::ListCatalog(args) => cmd_list_catalog(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
