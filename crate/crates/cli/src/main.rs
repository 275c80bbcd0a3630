use clap::{Args, Parser, Subcommand, ValueEnum};
use lenshull_core::{DEFAULT_EPSILON, DEFAULT_POINT_CAP, DEFAULT_SAMPLES};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;

/// Delaunay triangulations of lens spaces from convex hulls of torus orbits.
#[derive(Parser, Debug)]
#[command(name = "lenshull", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predict the facets of the orbit hull and print the triangulation as JSON.
    Predict(SpecArgs),
    /// Run every supporting-hyperplane certificate.
    Certify(SpecArgs),
    /// Compare the prediction with the brute-force hull.
    Verify(VerifyArgs),
    /// Canonicalize a subgroup given by generators.
    Group(GroupArgs),
    /// Write the triangulation as JSON, 4OFF or CSV.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
struct SpecArgs {
    #[arg(long)]
    p: i64,
    #[arg(long)]
    q: i64,
    #[arg(long, default_value_t = 1)]
    mu: i64,
    #[arg(long, default_value_t = 1)]
    nu: i64,
    /// Tolerance of the hull oracle.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Samples for the level-curve convexity check.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Scale points and levels to the unit sphere.
    #[arg(long)]
    unit_sphere: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Slope numerator; ignored with --grid.
    #[arg(long, required_unless_present = "grid")]
    p: Option<i64>,
    /// Slope denominator; ignored with --grid.
    #[arg(long, required_unless_present = "grid")]
    q: Option<i64>,
    #[arg(long, default_value_t = 1)]
    mu: i64,
    #[arg(long, default_value_t = 1)]
    nu: i64,
    /// Verify every reduced p/q with 2 <= p <= q-2 and 5 <= q <= qmax.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 30)]
    qmax: i64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Largest orbit handed to the hull oracle.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Generators as `s,t` pairs separated by `;`, e.g. "1/2,0;0,1/3".
    #[arg(long)]
    gens: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Off4,
    Csv,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Predict(args) => commands::predict(&args),
        Command::Certify(args) => commands::certify(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Group(args) => commands::group(&args),
        Command::Export(args) => commands::export(&args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => failure.report(),
    }
}
