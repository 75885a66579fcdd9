//! `holecap` command-line front end.

use std::io::Write;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod output;
pub mod parse;
mod sweep;

/// Exit status for malformed invocations.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for numeric validity failures.
pub const EXIT_NUMERIC: i32 = 3;
/// Exit status for geometry failures.
pub const EXIT_GEOMETRY: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(holecap::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn usage(msg: String) -> Self {
        CliError::Usage(msg)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_geometry() => EXIT_GEOMETRY,
            CliError::Core(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }

    /// `error code=<code> message="<text>"`.
    pub fn line(&self) -> String {
        let (code, msg) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Core(e) => (e.code(), e.to_string()),
            CliError::Io(e) => ("io", e.to_string()),
        };
        format!("error code={code} message={}", serde_json::to_string(&msg).expect("string serializes"))
    }
}

impl From<holecap::Error> for CliError {
    fn from(e: holecap::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "holecap", about = "Capacities of small holes and the eigenvalue shifts they cause")]
pub struct Cli {
    /// key = value file supplying flags not given on the command line
    #[arg(long, global = true)]
    pub config: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Direct u-capacity (or condenser capacity without --u) at one ε
    CapDirect(CapDirectArgs),
    /// Coefficients c_(n,l) of the capacity series
    CapSeries(CapSeriesArgs),
    /// Leading-order energy of the hole for the leading part of u
    LeadingEnergy(LeadingEnergyArgs),
    /// Closed-form energy for an elliptic hole
    EllipticEnergy(EllipticEnergyArgs),
    /// Predicted eigenvalue shift
    Predict(PredictArgs),
    /// Annulus eigenvalues against the predicted shifts
    AnnulusCheck(AnnulusCheckArgs),
    /// Grid sweep over (ε, θ, p) written as CSV
    Sweep(SweepArgs),
    /// Placement heuristics for the hole center
    OptimalHole(OptimalHoleArgs),
}

#[derive(Args, Debug)]
pub struct CapDirectArgs {
    #[arg(long)]
    pub outer: String,
    #[arg(long)]
    pub hole: String,
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct CapSeriesArgs {
    #[arg(long)]
    pub outer: String,
    #[arg(long)]
    pub hole: String,
    #[arg(long)]
    pub u: String,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// ε values at which to evaluate the series
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Args, Debug)]
pub struct LeadingEnergyArgs {
    #[arg(long)]
    pub hole: String,
    #[arg(long)]
    pub u: String,
    #[arg(long, default_value = "0,0")]
    pub p: String,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct EllipticEnergyArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// hole rotation, added to φ
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub u: String,
    /// base eigenvalue; taken from the disk mode when omitted
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value = "circle:1")]
    pub hole: String,
    #[arg(long, default_value = "0,0")]
    pub p: String,
    #[arg(long, default_value = "1e-2,1e-3")]
    pub eps: String,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct AnnulusCheckArgs {
    #[arg(long, default_value = "m=0,n=1")]
    pub mode: String,
    #[arg(long, default_value = "1e-3")]
    pub eps: String,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value = "circle:1")]
    pub outer: String,
    #[arg(long, default_value = "ellipse:0.75,0.5")]
    pub hole: String,
    /// u source; overrides --mode
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long, default_value = "m=1,n=1")]
    pub mode: String,
    /// hole centers `x,y;x,y`
    #[arg(long, default_value = "0,0")]
    pub p: String,
    #[arg(long, default_value_t = 11)]
    pub theta_grid: usize,
    #[arg(long, default_value = "1.5^-k,k=4..14")]
    pub eps_grid: String,
    /// series order; no series column without it
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<String>,
    /// log-log plot of the direct values
    #[arg(long)]
    pub svg: Option<String>,
    /// θ plot of direct/ε^(2k̄) at the smallest ε
    #[arg(long)]
    pub svg_theta: Option<String>,
}

#[derive(Args, Debug)]
pub struct OptimalHoleArgs {
    #[arg(long, default_value = "m=1,n=1")]
    pub mode: String,
    /// Ω; defaults to the disk of the mode
    #[arg(long)]
    pub outer: Option<String>,
    #[arg(long, default_value = "circle:1")]
    pub hole: String,
    #[arg(long, default_value_t = 41)]
    pub res: usize,
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("HOLECAP_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("HOLECAP_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

fn expand_config(argv: &[String]) -> Result<Vec<String>, CliError> {
    let pos = argv.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(i) = pos else { return Ok(argv.to_vec()) };
    let path = match argv[i].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv.get(i + 1).cloned().ok_or_else(|| CliError::usage("--config needs a path".into()))?,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::usage(format!("config {path}: {e}")))?;
    Ok(parse::merge_config(argv, &parse::parse_config(&text)?))
}

/// Runs the command, writing results to `out`.
pub fn execute(argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let argv = expand_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}")?;
                return Ok(());
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return Err(CliError::usage(first.to_string()));
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    let mut buf: Vec<u8> = Vec::new();
    let res = pool.install(|| commands::dispatch(&cli.command, &mut buf));
    out.write_all(&buf)?;
    res
}

/// Full entry point: returns the process exit status.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(argv, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.line());
            e.exit_code()
        }
    }
}
