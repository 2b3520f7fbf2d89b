//! `oneperc`: command-line access to the exact connectivity tools.
//!
//! Exit codes: 0 on success, 2 when a validation or certificate check fails,
//! 1 on usage errors.

mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oneperc::lp::Direction;
use oneperc::Rational;
use parse::{exact, exact_or_decimal, Grid};

#[derive(Debug, Parser)]
#[command(name = "oneperc", version, about = "Exact tools for 1-independent bond percolation")]
pub struct Cli {
    /// Seed for simulations; other commands record it in the manifest.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for CSV/JSON artifacts and manifest.json.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Sample points as lo:hi:steps, endpoints included (rationals allowed).
    #[arg(long, global = true)]
    pub grid: Option<Grid>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a closed-form connectivity curve, optionally against the LP.
    Curve(CurveArgs),
    /// Solve the connectivity linear programme.
    #[command(subcommand)]
    Lp(LpCommand),
    /// Emit a named construction as JSON after validating it.
    Construct(ConstructArgs),
    /// Check that a measure attains the programme optimum.
    Certify(CertifyArgs),
    /// Root of f(p)^2 = 4(1-p)^|V| for a fiber, or a table of them.
    Pstar(PstarArgs),
    /// Bound evaluators.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Finite-window lattice samplers with per-sample certificates.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Plot-ready CSVs of f, F and the product measure for K3, K4, C4, C5.
    Extremes,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// `f` (least connectivity) or `F` (greatest).
    #[arg(long)]
    pub family: String,
    /// Builtin graph name such as P4, K3, C5.
    #[arg(long)]
    pub graph: String,
    /// Independence order; k >= 2 is available for f on complete graphs.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Also solve the LP at every grid point and compare exactly.
    #[arg(long)]
    pub lp: bool,
}

#[derive(Debug, Subcommand)]
pub enum LpCommand {
    /// One exact solve with a duality certificate.
    Solve(LpSolveArgs),
    /// Freeze the support at a probe value and sweep the grid.
    Support(LpSupportArgs),
}

#[derive(Debug, Args)]
pub struct LpSolveArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_parser = exact)]
    pub p: Rational,
    #[arg(long, value_parser = parse_direction)]
    pub dir: Direction,
}

#[derive(Debug, Args)]
pub struct LpSupportArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_parser = exact)]
    pub probe: Rational,
    #[arg(long, value_parser = parse_direction)]
    pub dir: Direction,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Generator name, e.g. c4_min, path:5, ladder, line_tiling:20.
    #[arg(long)]
    pub name: String,
    #[arg(long, value_parser = exact)]
    pub p: Rational,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_parser = exact)]
    pub p: Rational,
    #[arg(long, value_parser = parse_direction)]
    pub dir: Direction,
    /// `builtin:<name>` or a path to a measure JSON file.
    #[arg(long)]
    pub measure: String,
}

#[derive(Debug, Args)]
pub struct PstarArgs {
    /// Builtin fiber such as K1, P2, K3, C4, C5.
    #[arg(long, conflicts_with = "table")]
    pub fiber: Option<String>,
    /// K3, C4, C5 and K2..K<n>, with the monotonicity checks.
    #[arg(long)]
    pub table: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum BoundCommand {
    /// Connectivity lower bound for P_ell x G from f_G(p).
    Line(LineBoundArgs),
    /// Square-lattice lower bounds from site-percolation thresholds.
    Lattice(LatticeBoundArgs),
    /// Long-paths threshold 1 - k^k/(k+1)^(k+1) for k-independent measures on Z.
    KLine(KLineArgs),
    /// Zero-connectivity thresholds p_n for the path or complete family.
    Thresholds(ThresholdArgs),
}

#[derive(Debug, Args)]
pub struct LineBoundArgs {
    #[arg(long)]
    pub fiber: String,
    #[arg(long, value_parser = exact)]
    pub p: Rational,
    #[arg(long, value_parser = exact, default_value = "1/2")]
    pub alpha: Rational,
    #[arg(long, default_value_t = 10)]
    pub ell: usize,
}

#[derive(Debug, Args)]
pub struct LatticeBoundArgs {
    /// Site thresholds; defaults to 0.556 and 0.592746.
    #[arg(long, num_args = 1..)]
    pub theta: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct KLineArgs {
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// `path` or `complete`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 12)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = 12)]
    pub radius: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Shell colouring on the l-infinity ball.
    Shell(WindowArgs),
    /// On/L/D measure.
    Onld {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, value_parser = exact_or_decimal, default_value = "0.556")]
        q: Rational,
    },
    /// Left-down measure via its coupling, plus the exact 2x2 equivalence.
    Leftdown {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, value_parser = exact_or_decimal, default_value = "3/8")]
        t: Rational,
    },
    /// Two ladder blocks glued along a rung, checked exactly.
    Ladder {
        #[arg(long, value_parser = exact, default_value = "3/5")]
        p: Rational,
    },
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse().map_err(|e: oneperc::Error| e.to_string())
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        Verdict::from_bool(self == Verdict::Pass && other == Verdict::Pass)
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli, &argv) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
