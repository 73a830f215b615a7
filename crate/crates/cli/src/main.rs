mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{run, CliError};

#[derive(Parser, Debug)]
#[command(name = "catsolve", version, about = "Kernel-method solver for discrete differential equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the eliminant and a certified annihilating polynomial.
    Solve(RunArgs),
    /// Print the truncated series solution.
    Series(RunArgs),
    /// Print Det, P, Puiseux roots, genericity and deformation data.
    Analyze(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Deform {
    Off,
    On,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// DSL file.
    input: PathBuf,
    /// Truncation order of the series.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(4..))]
    order: u32,
    /// Target variable `zJ`.
    #[arg(long, default_value = "z0")]
    target: String,
    #[arg(long, value_enum, default_value_t = Deform::Auto)]
    deform: Deform,
    /// Value of the deformation parameter, as `p` or `p/q`.
    #[arg(long, default_value = "1")]
    epsilon: String,
    /// Parameter values `name=p/q`; may be repeated.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Format of the report on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_pairs: u64,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..))]
    budget_degree: u32,
    /// Wall-clock limit per Gröbner computation.
    #[arg(long, default_value_t = 600.0)]
    budget_seconds: f64,
    /// Seed for evaluation points and primes in modular computations.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Include wall-clock timings (makes the report non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Skip the elimination and only guess from the series.
    #[arg(long)]
    no_eliminate: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Solve(a) => ("solve", a),
        Command::Series(a) => ("series", a),
        Command::Analyze(a) => ("analyze", a),
    };
    match run(name, args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::NonGeneric(_) => 3,
            CliError::Budget(_) => 2,
            _ => 1,
        }
    }
}
