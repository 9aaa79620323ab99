//! Command-line front end: invariant evaluation on clasper presentations,
//! diagram normal forms, the degree-2 bracket, rank tables and the
//! verification suites.
//!
//! Exit codes: 0 success, 1 identity failure, 2 input error, 3 unsupported
//! feature. `CYL_ALG_THREADS` caps the parallelism of the suites.

use clap::{Parser, Subcommand};
use homcyl_cli::{json, verify};
use homcyl_core::invariants::{report, InvError};
use homcyl_core::presentation::bracket;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "homcyl", version, about = "Exact invariants of homology cylinders in degree <= 2")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate all invariants of a clasper presentation
    Eval {
        /// Presentation JSON file
        #[arg(long)]
        input: PathBuf,
        /// Output file (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalize a list of diagram terms into canonical coordinates
    Normalize {
        /// `{genus, terms: [...]}` JSON file
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat the terms as ordered-space diagrams
        #[arg(long)]
        ordered: bool,
    },
    /// Degree-2 commutator bracket of two degree-1 elements
    Bracket {
        /// `{genus, x: [...], y: [...]}` JSON file
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank table of the diagram spaces
    Ranks {
        /// Surface genus (at most 4)
        #[arg(long)]
        genus: usize,
    },
    /// Run a verification suite
    Verify {
        /// One of: presentation, kappa, chi, cocycle, morita-s1,
        /// core-values, beta-bridges, torsion, appendix-c, ranks, all
        #[arg(long)]
        suite: String,
        /// Maximum genus (suite-specific default)
        #[arg(long)]
        genus: Option<usize>,
        /// Random seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cases per check family
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

fn read_input(path: &PathBuf) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn emit(out: Option<&PathBuf>, value: &serde_json::Value) -> Result<(), u8> {
    let text = format!("{value:#}\n");
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            EXIT_INPUT
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_eval(input: &PathBuf, out: Option<&PathBuf>) -> Result<(), u8> {
    let text = read_input(input)?;
    let pres = json::parse_presentation(&text).map_err(|e| {
        eprintln!("error: {e:#}");
        EXIT_INPUT
    })?;
    let rep = report(&pres).map_err(|e| match e {
        InvError::Internal(m) => {
            eprintln!("internal error: {m}");
            EXIT_FAIL
        }
        other => {
            eprintln!("unsupported presentation: {other:?}");
            EXIT_UNSUPPORTED
        }
    })?;
    emit(out, &json::report_json(&rep))
}

fn cmd_normalize(input: &PathBuf, out: Option<&PathBuf>, ordered: bool) -> Result<(), u8> {
    let text = read_input(input)?;
    let (g, terms) = json::parse_diag_input(&text).map_err(|e| {
        eprintln!("error: {e:#}");
        EXIT_INPUT
    })?;
    let elem = if ordered {
        homcyl_core::diagrams::normalize_ordered(&terms, g)
    } else {
        homcyl_core::diagrams::normalize_unordered(&terms, g)
    }
    .map_err(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })?;
    emit(out, &json::diag_json(&elem))
}

fn cmd_bracket(input: &PathBuf, out: Option<&PathBuf>) -> Result<(), u8> {
    let text = read_input(input)?;
    let (g, x, y) = json::parse_bracket_input(&text).map_err(|e| {
        eprintln!("error: {e:#}");
        EXIT_INPUT
    })?;
    emit(out, &json::diag_json(&bracket(&x, &y, g)))
}

fn cmd_ranks(genus: usize) -> Result<(), u8> {
    if genus > 4 {
        eprintln!("error: rank table supported up to genus 4");
        return Err(EXIT_INPUT);
    }
    let table = verify::rank_table(genus);
    let width = table.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    println!("genus {genus}");
    for (name, rank) in table {
        println!("  {name:width$}  {rank}");
    }
    Ok(())
}

fn cmd_verify(suite: &str, genus: Option<usize>, seed: u64, cases: usize) -> Result<(), u8> {
    if !verify::SUITES.contains(&suite) {
        eprintln!("error: unknown suite {suite:?}; expected one of {:?}", verify::SUITES);
        return Err(EXIT_INPUT);
    }
    let ctx = verify::Ctx { genus, seed, cases };
    let mut log = Vec::new();
    let result = verify::run(suite, &ctx, &mut log);
    for line in &log {
        println!("ok   {line}");
    }
    match result {
        Ok(()) => {
            println!("pass {suite}");
            Ok(())
        }
        Err(msg) => {
            println!("FAIL {msg}");
            Err(EXIT_FAIL)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("CYL_ALG_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        } else {
            eprintln!("error: CYL_ALG_THREADS must be an integer, got {v:?}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Eval { input, out } => cmd_eval(input, out.as_ref()),
        Cmd::Normalize { input, out, ordered } => cmd_normalize(input, out.as_ref(), *ordered),
        Cmd::Bracket { input, out } => cmd_bracket(input, out.as_ref()),
        Cmd::Ranks { genus } => cmd_ranks(*genus),
        Cmd::Verify { suite, genus, seed, cases } => cmd_verify(suite, *genus, *seed, *cases),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
