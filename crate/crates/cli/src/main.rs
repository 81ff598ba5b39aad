use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use blowup_core::{
    emit_report, parse_problem, run_command, run_corpus, Command, Format, RunOptions,
};
use clap::{Parser, Subcommand};

/// Exact invariants of blow-up algebras of m-primary ideals.
#[derive(Parser)]
#[command(name = "blowup", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bigraded table: Λ_p, Δ_p, e_0(Σ_p), δ_p and the Hilbert coefficients.
    Invariants(PairArgs),
    /// Depth of the associated graded ring with its certified regular sequence.
    Depth(PairArgs),
    /// Invariants, depth, and every applicable depth bound.
    Verify(PairArgs),
    /// Raw Hilbert, Sally and diagonal tables.
    Hilbert(PairArgs),
    /// Cross-check of lengths against lattice-point counts (monomial input).
    Oracle(PairArgs),
    /// Runs `verify` on the built-in pairs and compares with stored values.
    Corpus {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        trials: Option<u32>,
    },
}

#[derive(clap::Args)]
struct PairArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pmax: Option<u32>,
    #[arg(long)]
    rmax: Option<u32>,
    #[arg(long)]
    trials: Option<u32>,
}

fn format(json: bool) -> Format {
    if json {
        Format::Json
    } else {
        Format::Text
    }
}

fn run_pair(cmd: Command, args: &PairArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let spec = parse_problem(&text).with_context(|| args.file.display().to_string())?;
    let opts = RunOptions {
        seed: args.seed,
        p_max: args.pmax,
        r_max: args.rmax,
        trials: args.trials,
    };
    let report = run_command(cmd, &spec, &opts)?;
    print!("{}", emit_report(&report, format(args.json)));
    Ok(())
}

fn run_builtin(json: bool, trials: Option<u32>) -> anyhow::Result<bool> {
    let outcomes = run_corpus(trials)?;
    let ok = outcomes.iter().all(|o| o.mismatches.is_empty());
    if json {
        println!("{}", serde_json::to_string_pretty(&outcomes)?);
    } else {
        for o in &outcomes {
            if o.mismatches.is_empty() {
                println!("{:<14} ok", o.name);
            } else {
                println!("{:<14} MISMATCH {}", o.name, o.mismatches.join("; "));
            }
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Invariants(a) => run_pair(Command::Invariants, a).map(|_| true),
        Cmd::Depth(a) => run_pair(Command::Depth, a).map(|_| true),
        Cmd::Verify(a) => run_pair(Command::Verify, a).map(|_| true),
        Cmd::Hilbert(a) => run_pair(Command::Hilbert, a).map(|_| true),
        Cmd::Oracle(a) => run_pair(Command::Oracle, a).map(|_| true),
        Cmd::Corpus { json, trials } => run_builtin(*json, *trials),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
