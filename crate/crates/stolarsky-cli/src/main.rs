//! Command-line front end: exact constants, invariance-principle
//! verification, discrepancy reports, configuration optimization, series
//! tables, and reproducible point sampling.
//!
//! Exit codes: 0 all gates pass, 1 a verification gate failed (or a runtime
//! error), 2 usage error.

mod commands;
mod json;

use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "stolarsky",
    version,
    about = "Invariance-principle numerics on spheres and projective spaces",
    after_help = "Spaces are named S<d>, RP<n>, CP<n>, HP<n>, OP2.\n\
                  Tolerance overrides use --tolerance.<name> <value> with names\n\
                  residual_rel, series_abs, sigma."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Write the report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Tolerance override, NAME=VALUE (also spelled --tolerance.NAME VALUE).
    #[arg(long, value_name = "NAME=VALUE")]
    tolerance: Vec<String>,
}

/// Same as [`OutputArgs`] but defaulting to CSV (point-set output).
#[derive(clap::Args)]
struct CsvOutputArgs {
    /// Write the output to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Accepted for uniformity; sampling has no tolerance knobs.
    #[arg(long, value_name = "NAME=VALUE")]
    tolerance: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact constants of a space and their cross-checks.
    Gamma {
        /// Space name (S<d>, RP<n>, CP<n>, HP<n>, OP2).
        #[arg(long)]
        space: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the invariance principle on a random point set (closed-form,
    /// Monte Carlo, and Jacobi-series legs); exit 1 if any gate fails.
    Verify {
        #[arg(long)]
        space: String,
        /// Number of points.
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo samples for the discrepancy estimate.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Series truncation degree.
        #[arg(long = "trunc-l", default_value_t = 2000)]
        trunc_l: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report distance sums, discrepancy, and deficit for a point set
    /// (random, or loaded from CSV with --in).
    Discrepancy {
        #[arg(long, conflicts_with = "input")]
        space: Option<String>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo samples (0 skips the MC estimate).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Read the point set from this CSV file instead of sampling.
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximize the pairwise distance sum; with three or more point counts,
    /// fit the deficit scaling exponent.
    Optimize {
        #[arg(long)]
        space: String,
        /// Point counts: a single value, a comma list (8,16,32), or a
        /// doubling range (8..128).
        #[arg(long, default_value = "8..128")]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hill-climbing iterations per restart.
        #[arg(long, default_value_t = 50_000)]
        iterations: usize,
        /// Independent restarts.
        #[arg(long, default_value_t = 2)]
        restarts: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate the zonal series against the closed forms on a theta grid.
    Expand {
        #[arg(long)]
        space: String,
        /// Number of grid points on [0, pi].
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long = "trunc-l", default_value_t = 2000)]
        trunc_l: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Draw a reproducible point set and print it as CSV.
    Sample {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: CsvOutputArgs,
    },
}

/// Errors mapped onto the documented exit codes.
pub enum CliError {
    /// Exit 2: bad invocation (unknown space token, bad tolerance key, ...).
    Usage(String),
    /// Exit 1: a verification gate failed.
    Gate(String),
    /// Exit 1: runtime failure (I/O, numerics).
    Run(String),
}

impl From<stolarsky::Error> for CliError {
    fn from(e: stolarsky::Error) -> Self {
        match e {
            stolarsky::Error::SpaceParse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Run(e.to_string()),
        }
    }
}

pub struct CommandOutput {
    pub text: String,
    pub passed: bool,
}

/// Rewrite `--tolerance.NAME[=V] [V]` into clap-friendly `--tolerance NAME=V`.
fn preprocess_args(raw: impl Iterator<Item = String>) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    let mut iter = raw.peekable();
    while let Some(arg) = iter.next() {
        if let Some(rest) = arg.strip_prefix("--tolerance.") {
            let entry = if rest.contains('=') {
                rest.to_string()
            } else {
                let value = iter.next().ok_or_else(|| {
                    CliError::Usage(format!("missing value for --tolerance.{rest}"))
                })?;
                format!("{rest}={value}")
            };
            out.push("--tolerance".to_string());
            out.push(entry);
        } else {
            out.push(arg);
        }
    }
    Ok(out)
}

const KNOWN_TOLERANCES: [&str; 3] = ["residual_rel", "series_abs", "sigma"];

fn parse_tolerances(entries: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut map = BTreeMap::new();
    for entry in entries {
        let (name, value) = entry.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("tolerance override `{entry}` is not NAME=VALUE"))
        })?;
        if !KNOWN_TOLERANCES.contains(&name) {
            return Err(CliError::Usage(format!(
                "unknown tolerance name `{name}` (expected one of {KNOWN_TOLERANCES:?})"
            )));
        }
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance `{name}` has bad value `{value}`")))?;
        map.insert(name.to_string(), value);
    }
    Ok(map)
}

fn parse_space(token: &str) -> Result<stolarsky::SpaceId, CliError> {
    token
        .parse()
        .map_err(|e: stolarsky::Error| CliError::Usage(e.to_string()))
}

/// Point counts: "32", "8,16,32", or "8..128" (doubling).
fn parse_counts(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |t: &str| CliError::Usage(format!("bad point count `{t}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad(lo))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad(hi))?;
        if lo < 2 || hi < lo {
            return Err(CliError::Usage(format!("empty point-count range `{text}`")));
        }
        let mut out = Vec::new();
        let mut n = lo;
        while n <= hi {
            out.push(n);
            n *= 2;
        }
        return Ok(out);
    }
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad(t)))
        .collect()
}

fn run(cli: Cli) -> Result<CommandOutput, CliError> {
    match cli.command {
        Command::Gamma { space, output } => {
            let tolerances = parse_tolerances(&output.tolerance)?;
            commands::gamma(parse_space(&space)?, &tolerances)
        }
        Command::Verify {
            space,
            n,
            seed,
            samples,
            trunc_l,
            output,
        } => {
            let tolerances = parse_tolerances(&output.tolerance)?;
            commands::verify(parse_space(&space)?, n, seed, samples, trunc_l, &tolerances)
        }
        Command::Discrepancy {
            space,
            n,
            seed,
            samples,
            input,
            output,
        } => {
            let tolerances = parse_tolerances(&output.tolerance)?;
            let set = match (&input, &space) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Run(format!("cannot read {path:?}: {e}")))?;
                    stolarsky::csv::read_point_set(&text)?
                }
                (None, Some(space)) => {
                    let space = parse_space(space)?;
                    if space.supports_uniform_sampling() {
                        stolarsky::PointSet::random_uniform(space, n, seed)?
                    } else {
                        stolarsky::PointSet::random_octonionic(n, seed)?
                    }
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "discrepancy needs --space or --in".into(),
                    ))
                }
            };
            commands::discrepancy(&set, samples, seed, &tolerances)
        }
        Command::Optimize {
            space,
            n,
            seed,
            iterations,
            restarts,
            output,
        } => {
            let tolerances = parse_tolerances(&output.tolerance)?;
            let counts = parse_counts(&n)?;
            commands::optimize(
                parse_space(&space)?,
                &counts,
                seed,
                iterations,
                restarts,
                output.format == Format::Csv,
                &tolerances,
            )
        }
        Command::Expand {
            space,
            n,
            trunc_l,
            output,
        } => {
            let tolerances = parse_tolerances(&output.tolerance)?;
            commands::expand(
                parse_space(&space)?,
                n,
                trunc_l,
                output.format == Format::Csv,
                &tolerances,
            )
        }
        Command::Sample {
            space,
            n,
            seed,
            output,
        } => commands::sample(
            parse_space(&space)?,
            n,
            seed,
            output.format == Format::Csv,
        ),
    }
}

fn output_target(cli: &Cli) -> Option<PathBuf> {
    match &cli.command {
        Command::Gamma { output, .. }
        | Command::Verify { output, .. }
        | Command::Discrepancy { output, .. }
        | Command::Optimize { output, .. }
        | Command::Expand { output, .. } => output.out.clone(),
        Command::Sample { output, .. } => output.out.clone(),
    }
}

fn main() -> ExitCode {
    let args = match preprocess_args(std::env::args()) {
        Ok(args) => args,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(_) => unreachable!("preprocessing only raises usage errors"),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        // Clap exits with 2 on usage errors, 0 for --help/--version.
        Err(e) => e.exit(),
    };
    let out_path = output_target(&cli);
    match run(cli) {
        Ok(output) => {
            if let Some(path) = out_path {
                if let Err(e) = std::fs::write(&path, &output.text) {
                    eprintln!("error: cannot write {path:?}: {e}");
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", output.text);
            }
            if output.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Gate(msg)) | Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
