use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use omegakit_core::Execution;

mod commands;

use commands::Outcome;

/// Membership checks, enumeration and dissection for balanced extended
/// non-associative words.
///
/// Exit status: 0 for success or a positive verdict, 1 for a negative
/// verdict, 2 for usage or input errors.
#[derive(Parser, Debug)]
#[command(name = "omegakit", version)]
struct Cli {
    /// Run every batch loop on the current thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a word for membership.
    Check {
        #[arg(value_enum)]
        lang: CheckLang,
        word: String,
    },
    /// Print a word of Ω(n), or all of Ω(n) in canonical order.
    Gen {
        n: usize,
        #[arg(long)]
        all: bool,
    },
    /// Count words and compare with the closed form.
    Count {
        #[arg(value_enum)]
        kind: CountKind,
        n: usize,
    },
    /// Split a geometrically growing unary language with a residue window.
    Dissect {
        #[arg(long, value_enum, conflicts_with = "lengths_file", required_unless_present = "lengths_file")]
        builtin: Option<Builtin>,
        /// One decimal length per line, strictly increasing; `#` starts a comment.
        #[arg(long)]
        lengths_file: Option<PathBuf>,
        /// Growth constant: integer, `p/q` or decimal.
        #[arg(long)]
        c: String,
        /// Largest length considered: decimal or `a^b`.
        #[arg(long)]
        cap: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare the direct recognizers with the chart parser.
    OracleDiff { max_exhaustive: usize, random_samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckLang {
    Enw,
    Balanced,
    Omega,
    GrammarEnw,
    GrammarBalanced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    EnwLeaves,
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Pow2,
    Pow3,
    Fib,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let outcome = match cli.command {
        Command::Check { lang, word } => commands::check(lang, &word),
        Command::Gen { n, all } => commands::gen(n, all),
        Command::Count { kind, n } => commands::count(kind, n, exec),
        Command::Dissect { builtin, lengths_file, c, cap, json } => {
            commands::dissect(builtin, lengths_file.as_deref(), &c, &cap, json, exec)
        }
        Command::OracleDiff { max_exhaustive, random_samples, seed } => {
            commands::oracle_diff(max_exhaustive, random_samples, seed, exec)
        }
    };
    emit(outcome)
}

fn emit(outcome: Outcome) -> ExitCode {
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code)
}
