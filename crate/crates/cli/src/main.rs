//! `nilscope` — exact-arithmetic command line for Lie algebras given by
//! rational structure-constant tables.
//!
//! Exit codes: 0 = success / the checked property holds; 1 = the check ran
//! to completion and the property is false; 2 = usage, parse, or input
//! errors. Every command prints a run report — human-readable by default,
//! a JSON document with hashed inputs under `--json`.

mod report;
mod run;

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};

use report::RunReport;

#[derive(Parser)]
#[command(
    name = "nilscope",
    version,
    about = "Exact certificates for nilpotent Lie algebra structure tables",
    propagate_version = true
)]
struct Cli {
    /// Emit the run report as JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every Jacobi identity of a structure-constant table.
    CheckJacobi {
        /// Algebra file.
        file: PathBuf,
    },
    /// Print the dimensions of a central series.
    #[command(group(ArgGroup::new("which").required(true).args(["lower", "upper"])))]
    Series {
        /// Algebra file.
        file: PathBuf,
        /// Descending series of iterated brackets with the whole algebra.
        #[arg(long)]
        lower: bool,
        /// Ascending series of iterated centers.
        #[arg(long)]
        upper: bool,
    },
    /// Compute the dimension of the derivation algebra.
    Derivations {
        /// Algebra file.
        file: PathBuf,
    },
    /// Decide whether every derivation is nilpotent, with a verifiable
    /// certificate or an explicit witness.
    CharNilpotent {
        /// Algebra file.
        file: PathBuf,
        /// Evaluate a parameter first, e.g. --specialize b=0 (repeatable).
        #[arg(long = "specialize", value_name = "PARAM=VALUE")]
        specialize: Vec<String>,
    },
    /// Evaluate the parameters of a parametric table at rational values and
    /// print the resulting table.
    Specialize {
        /// Algebra file with parameters.
        file: PathBuf,
        /// Assignments, e.g. b=0 c=-3/7 (one per parameter).
        #[arg(value_name = "PARAM=VALUE", required = true)]
        assignments: Vec<String>,
    },
    /// Build the one-parameter linear deformation of a table along a
    /// derivation of a codimension-2 ideal, and print the family.
    Deform {
        /// Base algebra file (no parameters).
        file: PathBuf,
        /// Basis label spanning the first complement line.
        #[arg(long)]
        x0: String,
        /// Basis label spanning the second complement line.
        #[arg(long)]
        x1: String,
        /// Basis labels spanning the ideal.
        #[arg(long, num_args = 1.., required = true)]
        ideal: Vec<String>,
        /// Map file with lines like `e2 -> e9` (unlisted labels map to 0).
        #[arg(long)]
        derivation: PathBuf,
        /// Name of the deformation parameter.
        #[arg(long, default_value = "t")]
        param: String,
    },
    /// Replay a scripted elimination showing when the family matches the
    /// target, verifying every step by exact recomputation.
    Replay {
        /// One-parameter family file.
        family: PathBuf,
        /// Target algebra file (no parameters).
        target: PathBuf,
        /// Elimination script.
        script: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckJacobi { .. } => "check-jacobi",
            Command::Series { .. } => "series",
            Command::Derivations { .. } => "derivations",
            Command::CharNilpotent { .. } => "char-nilpotent",
            Command::Specialize { .. } => "specialize",
            Command::Deform { .. } => "deform",
            Command::Replay { .. } => "replay",
        }
    }
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("NILSCOPE_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // Ignore a second initialization (tests may share a process).
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: NILSCOPE_THREADS must be a positive integer, got `{raw}`");
                std::process::exit(2);
            }
        }
    }
}

fn main() {
    init_thread_pool();
    let cli = Cli::parse();
    let started = Instant::now();
    let mut hashes = Vec::new();
    let outcome = match &cli.command {
        Command::CheckJacobi { file } => run::cmd_check_jacobi(file, &mut hashes),
        Command::Series { file, lower, upper: _ } => {
            run::cmd_series(file, *lower, &mut hashes)
        }
        Command::Derivations { file } => run::cmd_derivations(file, &mut hashes),
        Command::CharNilpotent { file, specialize } => {
            run::cmd_char_nilpotent(file, specialize, &mut hashes)
        }
        Command::Specialize { file, assignments } => {
            run::cmd_specialize(file, assignments, &mut hashes)
        }
        Command::Deform { file, x0, x1, ideal, derivation, param } => {
            run::cmd_deform(file, x0, x1, ideal, derivation, param, &mut hashes)
        }
        Command::Replay { family, target, script } => {
            run::cmd_replay(family, target, script, &mut hashes)
        }
    };
    let outcome = match outcome {
        Ok(outcome) => outcome,
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    };
    let report = RunReport::new(
        cli.command.name(),
        hashes,
        started.elapsed(),
        outcome.payload,
    );
    let mut text = if cli.json {
        match serde_json::to_string_pretty(&report) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: cannot encode the run report: {err}");
                std::process::exit(2);
            }
        }
    } else {
        let mut text = outcome.human.clone();
        if !outcome.bare {
            for input in &report.inputs {
                let _ = write!(text, "\n  input: {} sha256={}", input.path, input.sha256);
            }
            let _ = write!(
                text,
                "\n  exact arithmetic: true; elapsed: {} ms",
                report.elapsed_ms
            );
        }
        text
    };
    text.push('\n');
    // A closed pipe downstream (e.g. `| head`) is not an error of ours.
    if let Err(err) = io::stdout().lock().write_all(text.as_bytes()) {
        if err.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write the run report: {err}");
            std::process::exit(2);
        }
    }
    std::process::exit(outcome.exit);
}
