use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tricolour_cli::{cmd_analyze, cmd_knot, cmd_sample, default_workers, selftest, CliError, RunConfig};
use tricolour_knots::alexander::EvalMode;
use tricolour_knots::percolation::CubeSize;
use tricolour_knots::simplify::DEFAULT_SHAKE_ROUNDS;

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

#[derive(Parser)]
#[command(name = "tricolour", version, about = "Knots from three-colour percolation interfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Float,
    Exact,
    Both,
}

impl From<Mode> for EvalMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Float => EvalMode::Float,
            Mode::Exact => EvalMode::Exact,
            Mode::Both => EvalMode::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample M knots in a cube of size N and write them as JSON lines.
    Sample {
        #[arg(short = 'N', long = "size")]
        size: u32,
        #[arg(short = 'M', long = "samples")]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short = 'o')]
        out: PathBuf,
        /// Defaults to $TRICOLOUR_WORKERS or the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "float")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_SHAKE_ROUNDS)]
        shake_rounds: u32,
        /// Record wall time per sample (output is no longer reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        allow_large_exact: bool,
    },
    /// Build the tables and summary from one or more run files.
    Analyze {
        #[arg(long = "out-dir", short = 'o')]
        out_dir: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Report on a single knot.
    Knot {
        #[arg(short = 'N', long = "size")]
        size: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "both")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_SHAKE_ROUNDS)]
        shake_rounds: u32,
    },
    /// Run the built-in consistency checks.
    Selftest,
}

fn size(n: u32) -> Result<CubeSize, CliError> {
    CubeSize::new(n).map_err(|e| CliError::Config(e.to_string()))
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Sample { size: n, samples, seed, out, workers, mode, shake_rounds, timing, allow_large_exact } => {
            let config = RunConfig {
                size: size(n)?,
                samples,
                base_seed: seed,
                workers: workers.unwrap_or_else(default_workers),
                mode: mode.into(),
                shake_rounds,
                timing,
                allow_large_exact,
            };
            cmd_sample(&config, &out)?;
        }
        Command::Analyze { out_dir, inputs } => {
            for p in cmd_analyze(&out_dir, &inputs)? {
                println!("{}", p.display());
            }
        }
        Command::Knot { size: n, seed, mode, shake_rounds } => {
            print!("{}", cmd_knot(size(n)?, seed, mode.into(), shake_rounds)?);
        }
        Command::Selftest => {
            let checks = selftest::run();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().any(|c| !c.passed) {
                return Ok(ExitCode::from(EXIT_SELFTEST));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Config(_) => ExitCode::from(EXIT_USAGE),
                _ => ExitCode::from(EXIT_RUNTIME),
            }
        }
    }
}
