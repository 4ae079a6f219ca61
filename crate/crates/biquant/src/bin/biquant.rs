//! Command-line driver: load structure constants, run verification
//! suites and quantization, emit deterministic text reports.
//!
//! Exit status is 0 exactly when every asserted identity in the run holds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use biquant::liebialg::{self, LieBialgebra};
use biquant::report;

#[derive(Parser)]
#[command(
    name = "biquant",
    version,
    about = "Exact biquantization of Lie bialgebras at truncation order"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the Lie bialgebra axioms of a structure-constants file.
    Check { file: PathBuf },
    /// Build the Drinfeld double and emit it in the same JSON schema.
    Double { file: PathBuf },
    /// Print the Campbell-Hausdorff coefficient table.
    Bch {
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Gram matrix and triangularity report of the dual pairing.
    Pair {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Twist, R-matrix, deformed coproducts, and quasitriangularity
    /// residuals.
    Quantize {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Full biquantization-square report.
    Biquant {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// Cross-check the pipeline against the trivial-bialgebra closed
    /// forms.
    Oracle {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}

fn load(file: &PathBuf) -> Result<LieBialgebra, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {}", file.display(), e))?;
    liebialg::from_json(&text).map_err(|e| e.to_string())
}

fn run(cmd: Command) -> Result<bool, String> {
    let (text, ok) = match cmd {
        Command::Check { file } => report::check_report(&load(&file)?),
        Command::Double { file } => report::double_report(&load(&file)?).map_err(|e| e.to_string())?,
        Command::Bch { order } => {
            if order == 0 {
                return Err("order must be at least 1".into());
            }
            (report::bch_table(order), true)
        }
        Command::Pair {
            file,
            max_degree,
            order,
        } => {
            let l = load(&file)?;
            if !liebialg::check_axioms(&l).all_pass() {
                return Err("input fails the bialgebra axioms".into());
            }
            report::pair_report(&l, max_degree, order).map_err(|e| e.to_string())?
        }
        Command::Quantize { file, order } => {
            report::quantize_report(&load(&file)?, order).map_err(|e| e.to_string())?
        }
        Command::Biquant { file, order } => {
            report::biquant_report(&load(&file)?, order).map_err(|e| e.to_string())?
        }
        Command::Oracle { dim, order } => {
            report::oracle_report(dim, order).map_err(|e| e.to_string())?
        }
    };
    print!("{}", text);
    Ok(ok)
}
