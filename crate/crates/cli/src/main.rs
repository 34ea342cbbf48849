//! `bcheck` — batch front end for the behavioural type checker.
//!
//! Exit codes: 0 when the requested property holds, 1 when it does not
//! (type error, not congruent, self-test failure), 2 on usage, syntax,
//! or I/O errors.  Reports go to standard output, diagnostics to
//! standard error; `BCHECK_COLOR=1` colors the diagnostics.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bcheck_core::congruence::{congruent, normalize};
use bcheck_core::oracle::{run_selftest, FaultKind, SelftestConfig};
use bcheck_core::parser::{ParseError, Session, SpanTree, VarMode};
use bcheck_core::typing::{check_behaviour_mode, CheckMode, TypeError};
use bcheck_core::Behaviour;

const HOLDS: u8 = 0;
const FAILS: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "bcheck",
    version,
    about = "Static type checker for behavioural programs",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check a program under a context and print the resulting
    /// context.
    Check(CheckArgs),
    /// Like `check --derive`: print the full typing derivation too.
    Derive(DeriveArgs),
    /// Decide whether two programs are structurally congruent; print
    /// the step trace when they are.
    Congruent {
        /// File containing the first behaviour.
        program_a: PathBuf,
        /// File containing the second behaviour.
        program_b: PathBuf,
        /// Accept dotted variable paths, numbered by first occurrence
        /// (both programs share one numbering).
        #[arg(long)]
        paths: bool,
    },
    /// Print the congruence normal form of a program.
    Normalize {
        /// File containing the behaviour.
        program: PathBuf,
        /// Accept dotted variable paths, numbered by first occurrence.
        #[arg(long)]
        paths: bool,
    },
    /// Sweep the bundled oracle suites over an exhaustive corpus and
    /// report a tally per property.
    Selftest {
        /// Largest behaviour size in the swept corpus.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(0..=8))]
        max_size: u64,
        /// Simulate this checker bug across the sweep; the run is
        /// expected to fail with counterexamples, proving the suite
        /// catches the bug.
        #[arg(long, hide = true, value_parser = parse_fault)]
        inject_fault: Option<FaultKind>,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// File containing the typing context.
    ctx: PathBuf,
    /// File containing the behaviour.
    program: PathBuf,
    /// Also print the full typing derivation.
    #[arg(long)]
    derive: bool,
    /// Restrict checking to the core rules (nil, if, while, `;`, `|`).
    #[arg(long)]
    paper_core: bool,
    /// Accept dotted variable paths, numbered by first occurrence
    /// (context and program share one numbering).
    #[arg(long)]
    paths: bool,
}

#[derive(Args)]
struct DeriveArgs {
    /// File containing the typing context.
    ctx: PathBuf,
    /// File containing the behaviour.
    program: PathBuf,
    /// Restrict checking to the core rules (nil, if, while, `;`, `|`).
    #[arg(long)]
    paper_core: bool,
    /// Accept dotted variable paths, numbered by first occurrence.
    #[arg(long)]
    paths: bool,
}

fn parse_fault(s: &str) -> Result<FaultKind, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Check(args) => cmd_check(&args),
        Cmd::Derive(args) => cmd_check(&CheckArgs {
            ctx: args.ctx,
            program: args.program,
            derive: true,
            paper_core: args.paper_core,
            paths: args.paths,
        }),
        Cmd::Congruent {
            program_a,
            program_b,
            paths,
        } => cmd_congruent(&program_a, &program_b, paths),
        Cmd::Normalize { program, paths } => cmd_normalize(&program, paths),
        Cmd::Selftest {
            max_size,
            inject_fault,
        } => cmd_selftest(max_size as usize, inject_fault),
    };
    ExitCode::from(code)
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

fn color_enabled() -> bool {
    std::env::var("BCHECK_COLOR").is_ok_and(|v| v == "1")
}

/// Prints `error: ...` to stderr, coloring the prefix when asked to.
fn diagnose(message: &str) {
    if color_enabled() {
        eprintln!("\x1b[1;31merror\x1b[0m: {message}");
    } else {
        eprintln!("error: {message}");
    }
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let prefix = &src[..offset.min(src.len())];
    let line = prefix.matches('\n').count() + 1;
    let col = prefix.chars().rev().take_while(|c| *c != '\n').count() + 1;
    (line, col)
}

fn read_source(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        diagnose(&format!("cannot read {}: {e}", path.display()));
        USAGE
    })
}

fn syntax_error(path: &Path, src: &str, err: &ParseError) -> u8 {
    let (line, col) = line_col(src, err.span().start);
    diagnose(&format!("{}:{line}:{col}: {err}", path.display()));
    USAGE
}

fn type_error(path: &Path, src: &str, spans: &SpanTree, err: &TypeError) -> u8 {
    let place = err
        .at
        .as_ref()
        .and_then(|pos| spans.at(pos))
        .map(|span| {
            let (line, col) = line_col(src, span.start);
            format!("{}:{line}:{col}: ", path.display())
        })
        .unwrap_or_default();
    diagnose(&format!("{place}{err}"));
    if let Some(span) = err.at.as_ref().and_then(|pos| spans.at(pos)) {
        eprintln!("  in: {}", &src[span.start..span.end]);
    }
    FAILS
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn var_mode(paths: bool) -> VarMode {
    if paths {
        VarMode::Paths
    } else {
        VarMode::Indexed
    }
}

fn cmd_check(args: &CheckArgs) -> u8 {
    let ctx_src = match read_source(&args.ctx) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let program_src = match read_source(&args.program) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mut session = Session::new(var_mode(args.paths));
    let g = match session.parse_context(&ctx_src) {
        Ok(g) => g,
        Err(e) => return syntax_error(&args.ctx, &ctx_src, &e),
    };
    let parsed = match session.parse_behaviour(&program_src) {
        Ok(p) => p,
        Err(e) => return syntax_error(&args.program, &program_src, &e),
    };
    let mode = if args.paper_core {
        CheckMode::CoreOnly
    } else {
        CheckMode::Full
    };
    match check_behaviour_mode(&g, &parsed.behaviour, mode) {
        Ok(d) => {
            println!("{}", d.output);
            if args.derive {
                println!("{d}");
            }
            HOLDS
        }
        Err(e) => type_error(&args.program, &program_src, &parsed.spans, &e),
    }
}

fn parse_program(session: &mut Session, path: &Path) -> Result<Behaviour, u8> {
    let src = read_source(path)?;
    session
        .parse_behaviour(&src)
        .map(|p| p.behaviour)
        .map_err(|e| syntax_error(path, &src, &e))
}

fn cmd_congruent(path_a: &Path, path_b: &Path, paths: bool) -> u8 {
    let mut session = Session::new(var_mode(paths));
    let a = match parse_program(&mut session, path_a) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let b = match parse_program(&mut session, path_b) {
        Ok(b) => b,
        Err(code) => return code,
    };
    match congruent(&a, &b) {
        Some(trace) => {
            if !trace.is_empty() {
                println!("{trace}");
            }
            HOLDS
        }
        None => {
            println!("not congruent");
            FAILS
        }
    }
}

fn cmd_normalize(path: &Path, paths: bool) -> u8 {
    let mut session = Session::new(var_mode(paths));
    match parse_program(&mut session, path) {
        Ok(b) => {
            println!("{}", normalize(&b));
            HOLDS
        }
        Err(code) => code,
    }
}

fn cmd_selftest(max_size: usize, fault: Option<FaultKind>) -> u8 {
    let report = run_selftest(&SelftestConfig { max_size, fault });
    println!("{report}");
    let checks: usize = report.sections.iter().map(|s| s.checks).sum();
    if report.passed() {
        println!("selftest: {checks} checks passed");
        HOLDS
    } else {
        let failures: usize = report.sections.iter().map(|s| s.failures).sum();
        println!("selftest: {failures} of {checks} checks FAILED");
        FAILS
    }
}
