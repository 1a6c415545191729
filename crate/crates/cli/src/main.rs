use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use maxsurf::commands;

/// Maximal surfaces in Lorentz-Minkowski space from Weierstrass data.
#[derive(Parser)]
#[command(name = "maxsurf", version)]
struct Cli {
    /// Absolute quadrature tolerance, overriding the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every diagnostic and print a JSON report. Exit 1 if any fails.
    Check { config: PathBuf },
    /// Print X, the Gauss map and the conformal factor at one point.
    Eval {
        config: PathBuf,
        #[arg(long, value_name = "U,V", allow_hyphen_values = true)]
        at: String,
    },
    /// Extend across a plane; write the extended config and print the report.
    Extend {
        config: PathBuf,
        #[arg(long, value_name = "NX,NY,NZ,D", allow_hyphen_values = true)]
        plane: Option<String>,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Write an OBJ mesh and a JSON sidecar with the Gauss map.
    Mesh {
        config: PathBuf,
        #[arg(long, value_name = "NxM")]
        grid: String,
        #[arg(short = 'o', value_name = "PATH")]
        output: PathBuf,
        /// Cells with a conformal factor below this are left out.
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
    },
    /// Print the built-in catenoid config.
    Catenoid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check { config } => commands::check(config, cli.tol),
        Command::Eval { config, at } => commands::eval(config, at, cli.tol),
        Command::Extend { config, plane, output } => {
            commands::extend_cmd(config, plane.as_deref(), output.as_deref(), cli.tol)
        }
        Command::Mesh { config, grid, output, eps } => commands::mesh(config, grid, output, *eps, cli.tol),
        Command::Catenoid => commands::catenoid(),
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
