//! Command line front end: parse a JSON instance, run the equivariant
//! pipelines and emit deterministic reports as JSON, text or CSV.

mod commands;
mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Parser)]
#[command(name = "eqehrhart", version, about = "Exact equivariant Ehrhart computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group, dimension and per-class fixed polytope data with criteria
    /// verdicts.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Group closure cap.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// The equivariant series phi[t]: verdict, coefficients, multiplicities
    /// and phi[1].
    Hstar {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        /// JSON file with character table rows overriding the computed one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Tables of closed and interior counting characters plus the orbit
    /// quasi-polynomials.
    Series {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        terms: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Run the full property suite; exit code 0 iff every property passes.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Write the instance document of a gallery constructor.
    Example {
        /// Instance name, e.g. hexagon-z6, bad-square-z2, bad-reflexive-z2,
        /// hypercube-sym-3, hypercube-b-2, cross-2-3, simplex-2,
        /// simplex-orbit-3, pip-2.
        name: String,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("EQEHRHART_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { file, format, cap } => commands::analyze(&file, format, cap),
        Command::Hstar {
            file,
            format,
            cap,
            table,
        } => commands::hstar(&file, format, cap, table.as_deref()),
        Command::Series {
            file,
            terms,
            format,
            cap,
        } => commands::series(&file, terms, format, cap),
        Command::Check { file, format, cap } => {
            return match commands::check(&file, format, cap) {
                Ok(all_passed) => {
                    if all_passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Example { name, output } => commands::example(&name, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
