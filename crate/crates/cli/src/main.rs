//! `malmquist-lab`: verify, classify, invert and synthesize delay differential
//! equations, and measure Nevanlinna characteristics of their solutions.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use malmquist::frontend::{run, Command, Options, Outcome, Script};
use malmquist::nevanlinna::geometric_grid;
use malmquist::Error;

#[derive(Parser)]
#[command(
    name = "malmquist-lab",
    version,
    about = "Exact and numerical experiments with delay differential equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Radius grid `rmin:rmax:points`, geometrically spaced.
    #[arg(long, global = true, default_value = "10:1000:24", value_parser = parse_grid)]
    grid: Grid,
    /// Maximum working precision of exact zero tests, in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Seed for generated inputs (`invert` and `synthesize` without data).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the characteristic profile table here (`nevan` only).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err("expected rmin:rmax:points".into());
    };
    let lo: f64 = lo.parse().map_err(|e| format!("rmin: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("rmax: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("points: {e}"))?;
    geometric_grid(lo, hi, n)
        .map(Grid)
        .map_err(|e| e.to_string())
}

/// Definitions from a file (`-` for stdin) or inline.
#[derive(Args)]
struct Input {
    /// Script file with definitions such as `a := z; rhs := 2*pi*i*a`.
    file: Option<PathBuf>,
    /// Inline script, used instead of a file.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check exactly that `w` solves the equation given by `a` and `rhs`.
    Verify(Input),
    /// Reduce the right-hand side and test for the rational-root obstruction.
    Classify(Input),
    /// Build the equation solved by `w = H e^{dz} + r` (random data if `H` is absent).
    Invert(Input),
    /// Find the solution family of `rhs = a1 w + a0` (random data if `a1`, `a0` are absent).
    Synthesize(Input),
    /// Characteristic, counting functions and zeros of `f - b` along the grid.
    Nevan(Input),
    /// Logarithmic-difference and Valiron-Mohon'ko ratios for `w` (and `rhs`).
    CheckLemma(Input),
}

impl Cmd {
    fn split(&self) -> (Command, &Input) {
        match self {
            Cmd::Verify(i) => (Command::Verify, i),
            Cmd::Classify(i) => (Command::Classify, i),
            Cmd::Invert(i) => (Command::Invert, i),
            Cmd::Synthesize(i) => (Command::Synthesize, i),
            Cmd::Nevan(i) => (Command::Nevan, i),
            Cmd::CheckLemma(i) => (Command::CheckLemma, i),
        }
    }
}

fn read_script(input: &Input) -> Result<String, Error> {
    let io_err = |e: io::Error| Error::Precondition(format!("cannot read script: {e}"));
    match (&input.expr, &input.file) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(p)) if p.as_os_str() == "-" => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
        (None, Some(p)) => fs::read_to_string(p).map_err(io_err),
        (None, None) => Ok(String::new()),
    }
}

fn emit(outcome: &Outcome, flags: &Flags) -> io::Result<()> {
    let json = outcome.report.to_json();
    match &flags.out {
        Some(p) => fs::write(p, json + "\n")?,
        None => println!("{json}"),
    }
    if let (Some(p), Some(csv)) = (&flags.csv, &outcome.csv) {
        fs::write(p, csv)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, input) = cli.command.split();
    let opts = Options {
        grid: cli.flags.grid.0.clone(),
        precision: cli.flags.precision,
        seed: cli.flags.seed,
    };
    let outcome = match read_script(input).and_then(|src| Script::parse(&src)) {
        Ok(script) => run(command, &script, &opts),
        Err(e) => Outcome::failed(command, &opts, &e),
    };
    if let Some(err) = &outcome.report.error {
        eprintln!("malmquist-lab {command}: {err}");
    }
    if let Err(e) = emit(&outcome, &cli.flags) {
        eprintln!("malmquist-lab: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
