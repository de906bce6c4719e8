use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vcsp_cli::commands::{self, Options, EXIT_INPUT};

/// Exact tools for finite-valued constraint languages.
#[derive(Parser)]
#[command(name = "vcsp", version)]
struct Cli {
    /// Upper bound on states enumerated by exhaustive checks.
    #[arg(long, global = true)]
    cap_states: Option<u64>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the language has a symmetric fractional polymorphism.
    CheckLanguage {
        language: PathBuf,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Where to write the fractional polymorphism when one exists.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a symmetric fractional polymorphism to another arity.
    Lift {
        language: PathBuf,
        fpoly: PathBuf,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the basic LP relaxation of an instance.
    Solve {
        instance: PathBuf,
        language: PathBuf,
        /// Also minimize exhaustively and report the gap.
        #[arg(long)]
        compare_brute_force: bool,
    },
    /// Turn an admitted STP pair into a submodularity pair.
    StpToSubmodular {
        language: PathBuf,
        pair: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a fractional polymorphism against a language.
    Verify { language: PathBuf, fpoly: PathBuf },
    /// Print a seeded random instance over a language.
    RandomInstance {
        language: PathBuf,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        terms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = Options {
        seed: cli.seed,
        ..Options::default()
    };
    if let Some(cap) = cli.cap_states {
        opts = opts.with_state_cap(cap.into());
    }
    let result = match &cli.command {
        Command::CheckLanguage { language, arity, out } => {
            commands::check_language(language, *arity, out.as_deref(), &opts)
        }
        Command::Lift { language, fpoly, to, out } => {
            commands::lift(language, fpoly, *to, out.as_deref(), &opts)
        }
        Command::Solve {
            instance,
            language,
            compare_brute_force,
        } => commands::solve(instance, language, *compare_brute_force, &opts),
        Command::StpToSubmodular { language, pair, out } => {
            commands::stp(language, pair, out.as_deref(), &opts)
        }
        Command::Verify { language, fpoly } => commands::verify(language, fpoly, &opts),
        Command::RandomInstance { language, nodes, terms } => {
            commands::random_instance(language, *nodes, *terms, &opts)
        }
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
