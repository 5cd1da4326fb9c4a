//! The `htype` command line: verification suites, the dimension table, and
//! data dumps for densities, geodesics, heat flow and curvature.
//!
//! Exit status is 0 when every check passes, 1 on a verification failure or
//! numerical error, and 2 on a usage or configuration error.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use commands::{check_algebra, check_group, check_haar, check_harmonicity, check_models};
pub use config::{parse_multiplicity, CommonArgs, Format, Grid, SpaceConfig, Tolerances};
pub use report::{Check, DataTable, Relation, Report};

use crate::catalog::render_table;
use crate::error::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "htype",
    version,
    about = "Solvable extensions of H-type groups: harmonic, often nonsymmetric"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full invariant suite for one space.
    Verify(CommonArgs),
    /// Dimensions of nonsymmetric spaces per center dimension (`--n` rows).
    Table(CommonArgs),
    /// Closed-form and metric-derived volume densities (`--rho-max`, `--samples`).
    Density(CommonArgs),
    /// Geodesics from the origin of the ball (`--directions`, `--length`, `--step`).
    Geodesic(CommonArgs),
    /// Radial heat flow (`--t-end`, `--n-grid`, `--n-steps`, `--rho-max`).
    Heat(CommonArgs),
    /// Curvature norms, symmetry verdict and sectional curvatures.
    Curvature(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Verify(a)
            | Command::Table(a)
            | Command::Density(a)
            | Command::Geodesic(a)
            | Command::Heat(a)
            | Command::Curvature(a) => a,
        }
    }
}

/// Rendered output and whether all checks passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

/// Runs a parsed command without touching stdout or the exit status.
pub fn execute(command: &Command) -> crate::Result<Outcome> {
    let config = SpaceConfig::from_args(command.args())?;
    let report = match command {
        Command::Table(_) => {
            return Ok(Outcome {
                output: table_output(&config),
                passed: true,
            })
        }
        Command::Verify(_) => commands::verify(&config)?,
        Command::Density(_) => commands::density(&config)?,
        Command::Geodesic(_) => commands::geodesic(&config)?,
        Command::Heat(_) => commands::heat(&config)?,
        Command::Curvature(_) => commands::curvature(&config)?,
    };
    Ok(Outcome {
        output: report.render(config.format),
        passed: report.passed,
    })
}

fn table_output(config: &SpaceConfig) -> String {
    let table = render_table(config.grid.n);
    let version = env!("CARGO_PKG_VERSION");
    let header = format!("htype {version} table n={}", config.grid.n);
    match config.format {
        Format::Text => format!("# {header}\n{}", table.to_text()),
        Format::Csv => {
            let mut s = table.to_csv();
            writeln!(s, "# {header}").unwrap();
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                program: &'a str,
                version: &'a str,
                command: &'a str,
                n_max: usize,
                table: &'a crate::catalog::DimensionTable,
            }
            let doc = Doc {
                program: "htype",
                version,
                command: "table",
                n_max: config.grid.n,
                table: &table,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializes");
            s.push('\n');
            s
        }
    }
}

/// Parses `args` (including the program name), runs the command, writes the
/// output to stdout or `--out`, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("htype: {e}");
            return match e {
                Error::Config(_) | Error::InvalidSpec(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            };
        }
    };
    match &cli.command.args().out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("htype: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", outcome.output),
    }
    if outcome.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}
