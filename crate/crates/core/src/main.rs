use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use omv::gadgets::{run_gadget, GadgetConfig, GadgetKind, UndoMode};
use omv::harness::{self, Campaign};
use omv::{BoolMatrix, Error, Rational};

#[derive(Parser)]
#[command(name = "omv", version, about = "OMv engines, reduction gadgets and verification campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded instances (matrix, u stream, v stream) into --out.
    Gen(CampaignArgs),
    /// Run every target over the grid; exits 1 on any failure.
    Verify(CampaignArgs),
    /// Time every target over the grid and emit CSV.
    Bench(CampaignArgs),
    /// Summarise a bench CSV.
    Report(ReportArgs),
    /// Run one gadget on instance files and print its run record.
    Run(RunArgs),
    /// Replay an op script against a dynamic oracle.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// n1xn2xn3[,…]
    #[arg(long, default_value = "8x8x8")]
    sizes: String,
    #[arg(long, default_value = "1/2")]
    density: String,
    /// Gadget names, engine specs, or `gadgets` for all gadgets.
    #[arg(long, default_value = "gadgets")]
    targets: String,
    #[arg(long, default_value = "undo")]
    undo_mode: String,
    #[arg(long, default_value = "1")]
    epsilon: String,
    #[arg(long)]
    delta: Option<String>,
    /// Flip one oracle answer per gadget trial.
    #[arg(long)]
    inject_faults: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CampaignArgs {
    fn campaign(&self) -> omv::Result<Campaign> {
        Ok(Campaign {
            seed: self.seed,
            trials: self.trials,
            sizes: harness::parse_sizes(&self.sizes)?,
            density: parse_density(&self.density)?,
            targets: harness::parse_targets(&self.targets)?,
            undo_mode: self.undo_mode.parse()?,
            epsilon: harness::parse_fraction(&self.epsilon)?,
            delta: self.delta.as_deref().map(harness::parse_fraction).transpose()?,
            inject_faults: self.inject_faults,
        })
    }
}

fn parse_density(text: &str) -> omv::Result<Rational> {
    let d = harness::parse_fraction(text)?;
    if d < Rational::from_integer(0) || d > Rational::from_integer(1) {
        return Err(Error::InvalidParameter(format!("density {d} outside [0, 1]")));
    }
    Ok(d)
}

#[derive(Args)]
struct ReportArgs {
    /// Bench CSV to summarise.
    csv: PathBuf,
    /// Also write the long-format CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    gadget: GadgetKind,
    #[arg(long)]
    matrix: PathBuf,
    /// One u vector per line.
    #[arg(long)]
    u: PathBuf,
    /// One v vector per line.
    #[arg(long)]
    v: PathBuf,
    #[arg(long, default_value = "undo")]
    undo_mode: UndoMode,
    #[arg(long, default_value = "1")]
    epsilon: String,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// subconn | distance | reach | triangle | es | diameter | densest
    #[arg(long)]
    oracle: String,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    script: PathBuf,
    /// Source vertex for `es`.
    #[arg(long, default_value_t = 0)]
    source: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> omv::Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> omv::Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> omv::Result<bool> {
    match cli.command {
        Command::Gen(a) => {
            let dir = a.out.clone().unwrap_or_else(|| PathBuf::from("instances"));
            for path in harness::cmd_gen(&a.campaign()?, &dir)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Verify(a) => {
            let report = harness::cmd_verify(&a.campaign()?)?;
            emit(a.out.as_deref(), &report.to_text())?;
            Ok(report.passed())
        }
        Command::Bench(a) => {
            let rows = harness::cmd_bench(&a.campaign()?)?;
            emit(a.out.as_deref(), &harness::bench_csv(&rows)?)?;
            Ok(true)
        }
        Command::Report(a) => {
            let text = read(&a.csv)?;
            print!("{}", harness::cmd_report(&text)?);
            if let Some(out) = &a.out {
                fs::write(out, harness::long_csv(&text)?)?;
            }
            Ok(true)
        }
        Command::Run(a) => {
            let m = BoolMatrix::parse(&read(&a.matrix)?)?;
            let us = harness::parse_vectors(&read(&a.u)?)?;
            let vs = harness::parse_vectors(&read(&a.v)?)?;
            if us.len() != vs.len() {
                return Err(Error::dim("vector stream length", us.len(), vs.len()));
            }
            let cfg = GadgetConfig {
                epsilon: harness::parse_fraction(&a.epsilon)?,
                delta: a.delta.as_deref().map(harness::parse_fraction).transpose()?,
                undo_mode: a.undo_mode,
                ..Default::default()
            };
            let pairs: Vec<_> = us.into_iter().zip(vs).collect();
            let run = run_gadget(a.gadget, &m, &pairs, &cfg)?;
            let problems = harness::check_run(&run, &m, &pairs)?;
            emit(a.out.as_deref(), &harness::run_record(&run))?;
            for p in &problems {
                eprintln!("FAIL {p}");
            }
            Ok(problems.is_empty())
        }
        Command::Replay(a) => {
            let out = harness::replay(&a.oracle, &read(&a.graph)?, &read(&a.script)?, a.source)?;
            emit(a.out.as_deref(), &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::InvalidParameter(_) | Error::Parse { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

