use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wreathlab_cli::{run_command, CommandKind, Workspace};

/// Exact equation workbench for wreath products of a finite semigroup with
/// zero by the infinite cyclic semigroup.
#[derive(Parser)]
#[command(name = "wreathlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Semigroup table file.
    #[arg(long)]
    semigroup: Option<PathBuf>,
    /// Equation system file.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Single-equation file (same format as a system file).
    #[arg(long)]
    equation: Option<PathBuf>,
    /// Point file.
    #[arg(long)]
    point: Option<PathBuf>,
    /// Box bounds as W,M: vector window [1..W], shifts [1..M].
    #[arg(long, value_parser = parse_bounds)]
    bounds: Option<(u64, u64)>,
    /// Write the JSON report to this file as well as stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Enumeration budget; defaults to WREATHLAB_BUDGET or 10^7.
    #[arg(long)]
    budget: Option<u64>,
    /// Witness index for noether-witness.
    #[arg(long = "n")]
    witness_index: Option<u64>,
    /// Probe length for nilpotency witnesses.
    #[arg(long = "length")]
    probe_length: Option<usize>,
    /// Solve additive systems over the nonnegative integers instead of the
    /// positive integers.
    #[arg(long)]
    nonneg: bool,
    /// Comma-separated additive terms for discriminate, e.g. "0, x1, 2x1+x2".
    #[arg(long)]
    terms: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a semigroup table: associativity, zero laws, unit laws.
    CheckSemigroup(Common),
    /// Decide nilpotency and report the index or a nonzero product witness.
    Nilpotency(Common),
    /// Solve the additive parts of a system; emits the solution basis.
    SolveB(Common),
    /// Split each equation into its wreath and additive parts.
    Decompose(Common),
    /// Build and verify the witness point for the first --n schema instances.
    NoetherWitness(Common),
    /// Compute the finite star subsystem for a system and a target equation.
    Star(Common),
    /// Find a solution tuple separating a set of additive terms.
    Discriminate(Common),
    /// Transport a counterexample from the star subsystem to the full system.
    Transport(Common),
    /// Brute-force consequence check over a bounded box of points.
    Verify(Common),
}

fn parse_bounds(s: &str) -> Result<(u64, u64), String> {
    let (w, m) = s
        .split_once(',')
        .ok_or_else(|| "expected W,M".to_string())?;
    let w = w.trim().parse().map_err(|_| format!("bad window `{w}`"))?;
    let m = m.trim().parse().map_err(|_| format!("bad max_b `{m}`"))?;
    Ok((w, m))
}

fn env_budget() -> Option<u64> {
    std::env::var("WREATHLAB_BUDGET").ok()?.parse().ok()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::CheckSemigroup(c) => (CommandKind::CheckSemigroup, c),
        Command::Nilpotency(c) => (CommandKind::Nilpotency, c),
        Command::SolveB(c) => (CommandKind::SolveB, c),
        Command::Decompose(c) => (CommandKind::Decompose, c),
        Command::NoetherWitness(c) => (CommandKind::NoetherWitness, c),
        Command::Star(c) => (CommandKind::Star, c),
        Command::Discriminate(c) => (CommandKind::Discriminate, c),
        Command::Transport(c) => (CommandKind::Transport, c),
        Command::Verify(c) => (CommandKind::Verify, c),
    };
    let ws = Workspace {
        semigroup: common.semigroup,
        system: common.system,
        equation: common.equation,
        point: common.point,
        bounds: common.bounds,
        output: common.output.clone(),
        budget: common.budget.or_else(env_budget),
        witness_index: common.witness_index,
        probe_length: common.probe_length,
        nonneg: common.nonneg,
        terms: common.terms,
    };
    let (code, report) = run_command(&ws, kind);
    let rendered = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{rendered}");
    if let Some(path) = &common.output {
        if let Err(e) = std::fs::write(path, format!("{rendered}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code as u8)
}
