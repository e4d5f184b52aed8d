//! `hopfw`: analysis, presentation, rewriting and verification from the
//! command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Failure, Status};

#[derive(Parser)]
#[command(
    name = "hopfw",
    version,
    about = "Exact computations with universal Hopf algebras of multilinear forms"
)]
struct Cli {
    /// Only print warnings and errors on standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nondegeneracy, twisting element, preregularity and polar space of a form.
    Analyze(AnalyzeArgs),
    /// Write the presentation of one of the algebras attached to a form.
    Present(PresentArgs),
    /// Complete a presentation into a degree-truncated rewrite system.
    Gb(GbArgs),
    /// Normal form of a polynomial, in the free algebra or modulo a system.
    Nf(NfArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Write one of the built-in forms.
    Example(ExampleArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Form file.
    pub form: PathBuf,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct PresentArgs {
    #[arg(long, value_enum)]
    pub algebra: Algebra,
    /// Form file; not used by `ahmn`.
    pub form: Option<PathBuf>,
    /// Polar element file for `hww`.
    #[arg(long)]
    pub polar: Option<PathBuf>,
    /// Arity for `ahmn`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Dimension for `ahmn`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct GbArgs {
    /// Presentation file.
    pub presentation: PathBuf,
    /// Degree bound D; defaults to HOPFW_DEFAULT_DEGREE, then to the arity default.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = TruncationArg::Sugar)]
    pub truncation: TruncationArg,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct NfArgs {
    /// Rewrite system dump; without it the free algebra is used.
    pub system: Option<PathBuf>,
    /// Polynomial in canonical syntax, e.g. `u[1,2]*s[2,1] - 1`.
    #[arg(long)]
    pub poly: String,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Form file; not used by `theta-iso`.
    pub form: Option<PathBuf>,
    /// Degree bound D; defaults to HOPFW_DEFAULT_DEGREE, then to the arity default.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Dimension for `theta-iso` and `axioms --algebra ahmn`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Arity for `theta-iso` and `axioms --algebra ahmn`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Polar element file.
    #[arg(long)]
    pub polar: Option<PathBuf>,
    /// Algebra checked by `axioms`.
    #[arg(long, value_enum, default_value_t = Algebra::Hw)]
    pub algebra: Algebra,
    #[arg(long, value_enum, default_value_t = StrategyArg::Escalate)]
    pub strategy: StrategyArg,
}

#[derive(Args)]
pub struct ExampleArgs {
    /// `signature-M`, `orthogonal-N-M`, `symplectic2` or `cyclic2`.
    pub name: String,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    Bw,
    Hb,
    Hw,
    Hww,
    Ahmn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Prop51,
    Lemma71,
    Manin,
    ThetaIso,
    M2Iso,
    Noninjectivity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruncationArg {
    Sugar,
    Word,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Sugar,
    Word,
    Escalate,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Failure::EXIT_CODE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(&a),
        Command::Present(a) => commands::present(&a),
        Command::Gb(a) => commands::gb(&a),
        Command::Nf(a) => commands::nf(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Example(a) => commands::example(&a),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Failure::EXIT_CODE)
        }
    }
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Refuted => 1,
            Status::Uncertified => 2,
        }
    }
}
