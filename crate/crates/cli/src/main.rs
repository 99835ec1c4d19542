use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cproj_cli::{run, Command, Filter, InputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "cproj", version, about = "Mine formal concepts under constraints")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// List the concepts that satisfy a constraint.
    Mine(Shared),
    /// List every concept.
    Concepts(Shared),
    /// Print the constraint rewritten over object sets.
    Project(Shared),
    /// Like mine, by exhaustive enumeration.
    Oracle(Shared),
    /// Write the transposed matrix as dense CSV.
    Transpose(Shared),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dense,
    Sparse,
}

#[derive(Args)]
struct Shared {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "dense")]
    format: Format,
    /// CSV with header `attribute,value`.
    #[arg(long)]
    values: Option<PathBuf>,
    #[arg(long)]
    constraint: Option<String>,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    drop_empty_extent: bool,
    #[arg(long)]
    drop_empty_intent: bool,
    /// Disable anti-monotone pruning.
    #[arg(long)]
    no_prune: bool,
    /// Search the top-level subtrees in parallel.
    #[arg(long)]
    parallel: bool,
    /// Largest universe the oracle enumerates, in bits.
    #[arg(long, default_value_t = cproj_core::oracle::DEFAULT_MAX_BITS)]
    max_bits: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, shared) = match cli.command {
        Sub::Mine(s) => (Command::Mine, s),
        Sub::Concepts(s) => (Command::Concepts, s),
        Sub::Project(s) => (Command::Project, s),
        Sub::Oracle(s) => (Command::Oracle, s),
        Sub::Transpose(s) => (Command::Transpose, s),
    };
    let cfg = RunConfig {
        command,
        input: shared.input,
        format: match shared.format {
            Format::Dense => InputFormat::Dense,
            Format::Sparse => InputFormat::Sparse,
        },
        values: shared.values,
        constraint: shared.constraint,
        output: shared.output,
        filter: Filter { drop_empty_extent: shared.drop_empty_extent, drop_empty_intent: shared.drop_empty_intent },
        no_prune: shared.no_prune,
        parallel: shared.parallel,
        oracle_bits: shared.max_bits,
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cproj: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
