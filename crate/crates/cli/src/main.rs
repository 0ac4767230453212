mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::ReduceOptions;
use crate::error::CliResult;
use crate::input::{parse_partition, parse_point, parse_precision};

/// Exact computations with strata and formal types of formal connections.
///
/// Exit codes: 2 bad input, 3 insufficient precision, 4 not regular,
/// 5 resonant, 6 torus or depth mismatch.
#[derive(Parser)]
#[command(name = "loopstrata", version)]
struct Cli {
    /// Emit TOML in the canonical serialization instead of prose.
    #[arg(long, global = true)]
    structured: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Slope of a connection with the point and stratum that attain it.
    Slope {
        input: PathBuf,
        /// Use only terms below this exponent.
        #[arg(long)]
        precision: Option<String>,
    },
    /// Leading stratum of a connection at a point.
    Stratum {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        precision: Option<String>,
    },
    /// Reduce a connection with a regular stratum to its formal type.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        partition: String,
        /// Defaults to the torus base point.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Grade below which the gauge is certified (default 2).
        #[arg(long)]
        precision: Option<String>,
        /// Write the formal type and the gauge matrix here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two formal types lie in one orbit.
    Orbit { a1: PathBuf, a2: PathBuf },
    /// Regular conjugacy classes of the symmetric group with their depths.
    Classes { n: usize },
    /// Whether a point is compatible with a torus of the given type.
    CompatiblePoints {
        n: usize,
        #[arg(long)]
        partition: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Check a formal-type file.
    ValidateType {
        input: PathBuf,
        /// Report depth-zero hyperplanes through this point.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    let structured = cli.structured;
    match cli.command {
        Command::Slope { input, precision } => {
            let p = precision.as_deref().map(parse_precision).transpose()?;
            commands::slope(&input, p.as_ref(), structured)
        }
        Command::Stratum { input, point, precision } => {
            let p = precision.as_deref().map(parse_precision).transpose()?;
            commands::stratum(&input, &parse_point(&point)?, p.as_ref(), structured)
        }
        Command::Reduce { input, partition, point, precision, out } => {
            let torus = parse_partition(&partition)?;
            let point = point.as_deref().map(parse_point).transpose()?;
            let precision = precision.as_deref().map(parse_precision).transpose()?;
            let opts = ReduceOptions {
                torus: &torus,
                point: point.as_ref(),
                precision: precision.as_ref(),
                out: out.as_deref(),
                structured,
            };
            commands::reduce(&input, &opts)
        }
        Command::Orbit { a1, a2 } => commands::orbit(&a1, &a2, structured),
        Command::Classes { n } => commands::classes(n, structured),
        Command::CompatiblePoints { n, partition, point } => {
            commands::compatible_points(n, &parse_partition(&partition)?, &parse_point(&point)?, structured)
        }
        Command::ValidateType { input, point } => {
            let point = point.as_deref().map(parse_point).transpose()?;
            commands::validate_type(&input, point.as_ref(), structured)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
