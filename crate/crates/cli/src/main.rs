mod config;
mod grid;
mod output;
mod sample;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Command, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "jastrow-lab",
    version,
    about = "Near-neighbor Jastrow models: verify, tabulate, sample"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_path` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Residual, symmetry and normalizability checks.
    Verify(Common),
    /// Tabulate the potential and ground state.
    Grid(Common),
    /// Metropolis sampling and spacing statistics.
    Sample(Common),
}

/// How a run ended, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or configuration (exit 2).
    Usage(String),
    /// A check or gate failed (exit 1).
    Check(String),
    /// I/O and other runtime errors (exit 2).
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) | Failure::Other(_) => 2,
        }
    }
}

pub struct Context {
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
}

const THREADS_VAR: &str = "JASTROW_LAB_THREADS";

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Other(e.into()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let (cmd, args) = match cli.command {
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Grid(a) => (Command::Grid, a),
        Cmd::Sample(a) => (Command::Sample, a),
    };
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("reading {}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    cfg.check_command(cmd)?;
    let spec = cfg.model()?;
    let ctx = Context {
        out: args
            .out
            .or_else(|| cfg.output_path.clone())
            .unwrap_or_else(|| PathBuf::from(".")),
        format: args.format.or(cfg.format).unwrap_or(Format::Json),
        seed: args.seed.or(cfg.seed).unwrap_or(0),
    };
    match cmd {
        Command::Verify => verify::run(&ctx, &spec, cfg.verify.as_ref().expect("checked")),
        Command::Grid => grid::run(&ctx, &spec, cfg.grid.as_ref().expect("checked")),
        Command::Sample => sample::run(&ctx, &spec, cfg.sample.as_ref().expect("checked")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Check(m) => eprintln!("check failed: {m}"),
                Failure::Other(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
