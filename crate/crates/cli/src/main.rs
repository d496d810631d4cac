//! `primrep`: representation numbers, primitive counts and the Möbius-weighted
//! twisted sums from the command line.
//!
//! Exit status: 0 on success, 1 when a verification or fit fails, 2 on
//! usage or input errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;
use primrep::{DiagonalForm, DirichletCharacter};

#[derive(Debug, Parser)]
#[command(name = "primrep", version, about = "Primitive representation numbers of diagonal quadratic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Representation counts r(n) or primitive counts r^p(n).
    Rep(RepArgs),
    /// Check catalog entries against the enumeration and series oracles.
    Verify(VerifyArgs),
    /// The Möbius-weighted twisted divisor sum, by brute force or in closed form.
    Thm2(Thm2Args),
    /// Fit a theta series with Eisenstein basis coefficients.
    Fit(FitArgs),
    /// Value table of a Dirichlet character.
    Char(CharArgs),
}

/// An inclusive range `lo..hi` with `1 <= lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub fn iter(self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

fn parse_span(s: &str) -> Result<Span, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad bound {t:?} in {s:?}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo == 0 {
        return Err("ranges start at 1".into());
    }
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(Span { lo, hi })
}

fn parse_positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("n must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Either a single `--n` or an inclusive `--range`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Points {
    #[arg(long, value_parser = parse_positive)]
    n: Option<u64>,
    #[arg(long, value_parser = parse_span)]
    range: Option<Span>,
}

impl Points {
    fn span(&self) -> Span {
        match (self.n, self.range) {
            (Some(n), _) => Span { lo: n, hi: n },
            (None, Some(r)) => r,
            (None, None) => unreachable!("clap requires one of --n, --range"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    /// Direct lattice-point enumeration.
    Loop,
    /// Theta-series convolution.
    Series,
    /// The catalog formula for the form.
    Formula,
}

#[derive(Debug, Args)]
struct RepArgs {
    /// Coefficients `a1,a2,...` of Σ aᵢxᵢ².
    #[arg(long)]
    form: DiagonalForm,
    #[command(flatten)]
    points: Points,
    /// Count only representations with gcd(x) = 1.
    #[arg(long)]
    primitive: bool,
    #[arg(long, value_enum, default_value = "series")]
    oracle: Oracle,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Catalog label, a form such as `1,1,2,6`, or `all`.
    entry: String,
    #[arg(long, value_parser = parse_span)]
    range: Span,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Closed,
    /// The form for real ψ.
    Real,
    /// Brute force and closed form side by side, with an equality column.
    Both,
}

#[derive(Debug, Args)]
struct Thm2Args {
    /// `1`, `kron:D` or `mod:N:e1,e2,...`.
    #[arg(long)]
    psi: DirichletCharacter,
    #[arg(long)]
    phi: DirichletCharacter,
    #[arg(long)]
    h: u32,
    #[command(flatten)]
    points: Points,
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    form: DiagonalForm,
    /// Level of the basis; defaults to 4·lcm of the coefficients.
    #[arg(long)]
    level: Option<u64>,
    #[arg(long, value_parser = parse_span, default_value = "1..10")]
    train: Span,
    #[arg(long, value_parser = parse_span, default_value = "11..200")]
    validate: Span,
    /// Where to write the fitted formula as JSON; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CharArgs {
    /// `1`, `kron:D` or `mod:N:e1,e2,...`.
    character: DirichletCharacter,
    /// Table length; defaults to the modulus.
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// How a command ended, mapped onto the exit status.
pub enum Outcome {
    Ok,
    Failed,
}

fn threads_from_env() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("PRIMREP_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("PRIMREP_THREADS must be a non-negative integer, got {v:?}"))?;
    if k > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    threads_from_env()?;
    match cli.command {
        Command::Rep(a) => commands::rep(&a.form, a.points.span(), a.primitive, a.oracle, a.format),
        Command::Verify(a) => commands::verify(&a.entry, a.range, a.report.as_deref()),
        Command::Thm2(a) => commands::thm2(&a.psi, &a.phi, a.h, a.points.span(), a.method, a.format),
        Command::Fit(a) => commands::fit(&a.form, a.level, a.train, a.validate, a.out.as_deref()),
        Command::Char(a) => commands::character(&a.character, a.modulus, a.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
