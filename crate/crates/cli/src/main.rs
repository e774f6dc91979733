//! `pcount`: parse, evaluate and count Presburger formulas, and eliminate the
//! counting quantifier over disjoint simple semilinear sets.
//!
//! Exit codes: 0 success, 1 syntax error, 2 contract or precondition
//! violation, 3 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pcount", version, about = "Counting-quantifier elimination for Presburger arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write standard output to this file instead.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    #[value(name = "Z")]
    Z,
    #[value(name = "N")]
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeltaArg {
    Residue,
    Quotient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GuardArg {
    Enumerated,
    Lattice,
}

/// A formula given inline or read from a file (`-` for stdin).
#[derive(Debug, Args)]
pub struct FormulaInput {
    /// Formula text.
    #[arg(required_unless_present = "file", conflicts_with = "file", allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Read the input from this file; `-` reads stdin.
    #[arg(long, short)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ElimArgs {
    /// Coordinate to count; the last one by default.
    #[arg(long)]
    pub counted: Option<String>,
    /// Name of the count variable in the output.
    #[arg(long, default_value = "y")]
    pub count_var: String,
    /// Comma-separated coordinate names; `x1,…,xn` by default.
    #[arg(long, value_delimiter = ',')]
    pub coords: Option<Vec<String>>,
    /// Encoding of the interval counts.
    #[arg(long, value_enum, default_value_t = DeltaArg::Residue)]
    pub delta: DeltaArg,
    /// Encoding of the residue-class guards.
    #[arg(long, value_enum, default_value_t = GuardArg::Enumerated)]
    pub guards: GuardArg,
    /// Refuse to build formulas estimated to exceed this many nodes.
    #[arg(long, default_value_t = 1_000_000)]
    pub node_budget: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and pretty-print a formula or presentation.
    Parse {
        #[command(flatten)]
        input: FormulaInput,
        /// The input is a presentation rather than a formula.
        #[arg(long)]
        presentation: bool,
        /// Also check that parsing the printed form gives back the same tree.
        #[arg(long)]
        roundtrip: bool,
        /// Print with mathematical symbols (not parseable).
        #[arg(long)]
        unicode: bool,
    },
    /// Evaluate a formula under bounded quantifier semantics.
    Eval {
        #[command(flatten)]
        input: FormulaInput,
        /// Values of the free variables, e.g. `x1=0,x3=2`.
        #[arg(long, default_value = "")]
        assign: String,
        #[arg(long, value_enum, default_value_t = Domain::Z)]
        domain: Domain,
        /// Quantifiers range over `[-B, B]` (or `[0, B]` over N).
        #[arg(long, default_value_t = 64)]
        quant_bound: u64,
    },
    /// Count the values of one variable satisfying a formula.
    Count {
        #[command(flatten)]
        input: FormulaInput,
        /// The counted variable.
        #[arg(long)]
        var: String,
        #[arg(long, default_value = "")]
        assign: String,
        #[arg(long, value_enum, default_value_t = Domain::Z)]
        domain: Domain,
        #[arg(long, default_value_t = 64)]
        quant_bound: u64,
        /// Values are counted in `[-R, R]` (or `[0, R]` over N).
        #[arg(long, default_value_t = 100)]
        radius: u64,
        /// Stability margin; `2·(largest coefficient + 1)` by default.
        #[arg(long)]
        margin: Option<u64>,
    },
    /// Eliminate the counting quantifier over a presentation file.
    Eliminate {
        /// Presentation file; `-` reads stdin.
        presentation: PathBuf,
        #[command(flatten)]
        elim: ElimArgs,
        /// Print the elimination trace after the formula.
        #[arg(long)]
        report: bool,
    },
    /// Eliminate, then compare against the brute-force oracle at random points.
    Check {
        /// Presentation file; `-` reads stdin.
        presentation: PathBuf,
        #[command(flatten)]
        elim: ElimArgs,
        /// Use this formula file instead of eliminating.
        #[arg(long)]
        formula: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Free coordinates are drawn from `[-R, R]` (or `[0, R]` over N).
        #[arg(long, default_value_t = 100)]
        radius: u64,
        /// Witnesses are counted in `[-W, W]`; `4·R` by default.
        #[arg(long)]
        window: Option<u64>,
        /// Stability margin; a quarter of the window by default.
        #[arg(long)]
        margin: Option<u64>,
        #[arg(long, default_value_t = 64)]
        quant_bound: u64,
        /// First check that no point of the box lies in two components.
        #[arg(long)]
        verify_disjoint: bool,
        /// Box radius for `--verify-disjoint`.
        #[arg(long, default_value_t = 10)]
        disjoint_radius: u64,
        /// Fail on unstable points where the formula holds for some count.
        #[arg(long)]
        strict: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => match commands::emit(&cli, &out.stdout) {
            Ok(()) => ExitCode::from(out.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            if !e.stdout.is_empty() {
                let _ = commands::emit(&cli, &e.stdout);
            }
            eprintln!("{}", e.message);
            ExitCode::from(e.code)
        }
    }
}
