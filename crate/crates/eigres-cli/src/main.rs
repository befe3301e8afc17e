//! `eigres`: spectral analysis, gap splitting, blow-up schedules, chart
//! lifts, and monodromy tracking for Hermitian matrix families.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 validation error,
//! 4 numerical failure, 5 I/O or internal error.

mod csv;
mod ops;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "eigres",
    version,
    about = "Smooth spectral data for Hermitian matrix families",
    after_help = "Defaults: --tol 1e-10, --nodes 64, --steps 256. \
                  EIGRES_SEED serves as the fallback for --seed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, isotropy index, and gap clusters of a matrix
    Analyze(AnalyzeArgs),
    /// Split a matrix into commuting blocks at one or more gap cuts
    Split(SplitArgs),
    /// Emit the blow-up schedule of a resolution
    Schedule(ScheduleArgs),
    /// Chart coordinates: Pauli/radial/projective lifts or a local 2-cluster resolution
    Lift(LiftArgs),
    /// Track cluster subspaces or eigenlines along a matrix path file
    Track(TrackArgs),
    /// Run a builtin demonstration path and emit its trajectory
    Demo(DemoArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Matrix JSON file
    #[arg(long)]
    input: String,
    /// Hermitian validation tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Relative tolerance of the gap/isotropy clustering rule
    #[arg(long, default_value_t = 1e-6)]
    rel_tol: f64,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SplitArgs {
    /// Matrix JSON file
    #[arg(long)]
    input: String,
    /// Gap cut; repeat for a multi-way split
    #[arg(long = "cut", required = true, allow_negative_numbers = true)]
    cuts: Vec<f64>,
    /// Quadrature nodes on the contour
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    nodes: u32,
    /// Hermitian validation tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the JSON blocks here
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Matrix dimension (2..=12)
    #[arg(long)]
    n: usize,
    /// Which resolution
    #[arg(long, value_enum)]
    flavor: Flavor,
    /// Write the schedule JSON here
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Flavor {
    Radial,
    Projective,
    Small,
}

#[derive(Args)]
struct LiftArgs {
    /// Matrix JSON file
    #[arg(long)]
    input: String,
    /// Bracket "lo,hi" isolating exactly two eigenvalues (n x n local lift)
    #[arg(long, value_parser = parse_bracket, allow_hyphen_values = true)]
    bracket: Option<(f64, f64)>,
    /// Hermitian validation tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TrackArgs {
    /// Path JSON file: {"samples": [{"t": ..., "matrix": {...}}, ...]}
    #[arg(long)]
    input: String,
    /// Track the cluster below this cut
    #[arg(long, conflicts_with = "lines", allow_negative_numbers = true)]
    cut: Option<f64>,
    /// Track all eigenlines instead of a cluster
    #[arg(long)]
    lines: bool,
    /// Quadrature nodes on the contour
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    nodes: u32,
    /// Hermitian validation tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the trajectory CSV here
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DemoArgs {
    /// Builtin path
    #[arg(long, value_enum)]
    name: DemoName,
    /// Number of steps (samples minus one)
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(16..))]
    steps: u32,
    /// Traversals of loop2x2 (2 closes the loop on the double cover)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    laps: u32,
    /// Seed of the ray3 conjugating unitary (falls back to EIGRES_SEED)
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature nodes for cluster tracking
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..))]
    nodes: u32,
    /// Write the trajectory CSV here
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    #[value(name = "loop2x2")]
    Loop2x2,
    #[value(name = "curve4x4")]
    Curve4x4,
    #[value(name = "ray3")]
    Ray3,
}

fn parse_bracket(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"lo,hi\"".into());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("hi: {e}"))?;
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err("bracket needs lo < hi".into());
    }
    Ok((lo, hi))
}

/// Failure modes of a CLI run, each with its exit code.
pub enum CliError {
    /// Unreadable or unparsable input (exit 2).
    Parse(String),
    /// Library error (exit 3 or 4 depending on the class).
    Core(eigres_core::Error),
    /// Output could not be written (exit 5).
    Io(String),
}

impl From<eigres_core::Error> for CliError {
    fn from(e: eigres_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        use eigres_core::Error::*;
        match self {
            CliError::Parse(_) => 2,
            CliError::Io(_) => 5,
            CliError::Core(err) => match err {
                NotHermitian { .. }
                | NonFinite
                | NotSquare { .. }
                | WrongDimension { .. }
                | DimensionMismatch { .. }
                | EmptyInput
                | TooFewNodes { .. }
                | TooFewSteps { .. }
                | GapViolation { .. }
                | UnsupportedN { .. }
                | OriginWithoutDirection
                | InvalidDirection { .. }
                | PatchDivisionByZero { .. }
                | BracketInvalid { .. }
                | UnknownName { .. } => 3,
                ConvergenceFailure { .. }
                | EigenvalueOnCut { .. }
                | SingularResolvent { .. }
                | NonIntegralRank { .. }
                | TransversalityLost { .. }
                | GapLost { .. }
                | StepTooCoarse { .. }
                | MatchAmbiguous { .. }
                | DegenerateInterior { .. } => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Core(e) => format!("error: {e}"),
            CliError::Io(m) => format!("io error: {m}"),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => ops::analyze(&args.input, args.tol, args.rel_tol, args.out.as_deref()),
        Command::Split(args) => ops::split(
            &args.input,
            &args.cuts,
            args.nodes as usize,
            args.tol,
            args.out.as_deref(),
        ),
        Command::Schedule(args) => {
            let kind = match args.flavor {
                Flavor::Radial => eigres_core::isotropy::ResolutionKind::Radial,
                Flavor::Projective => eigres_core::isotropy::ResolutionKind::Projective,
                Flavor::Small => eigres_core::isotropy::ResolutionKind::Small,
            };
            ops::schedule(args.n, kind, args.out.as_deref())
        }
        Command::Lift(args) => ops::lift(&args.input, args.bracket, args.tol, args.out.as_deref()),
        Command::Track(args) => {
            let mode = if args.lines {
                ops::TrackMode::Lines
            } else if let Some(cut) = args.cut {
                ops::TrackMode::Cluster(cut)
            } else {
                eprintln!("parse error: track needs either --cut <c> or --lines");
                std::process::exit(2);
            };
            ops::track(
                &args.input,
                mode,
                args.nodes as usize,
                args.tol,
                args.out.as_deref(),
            )
        }
        Command::Demo(args) => {
            let name = match args.name {
                DemoName::Loop2x2 => eigres_core::path_track::PathName::Loop2x2,
                DemoName::Curve4x4 => eigres_core::path_track::PathName::Curve4x4,
                DemoName::Ray3 => eigres_core::path_track::PathName::Ray3,
            };
            let seed = args.seed.or_else(env_seed).unwrap_or(0);
            ops::demo(
                name,
                args.steps as usize,
                args.laps,
                seed,
                args.nodes as usize,
                args.out.as_deref(),
            )
        }
    };
    if let Err(err) = result {
        eprintln!("{}", err.message());
        std::process::exit(err.exit_code());
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("EIGRES_SEED").ok()?.parse().ok()
}
