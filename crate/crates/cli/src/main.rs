use clap::{Parser, Subcommand};
use excalc::Mode;
use holocheck::commands::{self, Format, Output, UsageError};
use holocheck::{parse_suites, run_suites, CSetting, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "holocheck", version, about = "Exact verification of binary-form structure equations")]
struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, env = "HOLOCHECK_SEED", default_value_t = 7)]
    seed: u64,
    /// Value of the constant c: a rational such as -3/2, or `symbolic`.
    #[arg(long, global = true, env = "HOLOCHECK_C", allow_hyphen_values = true)]
    c: Option<CSetting>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, env = "HOLOCHECK_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "HOLOCHECK_FORMAT", value_enum, default_value = "json")]
    format: Format,
    /// Threads used to run suites concurrently.
    #[arg(long, global = true, env = "HOLOCHECK_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify {
        /// Comma-separated suites, or `all`.
        #[arg(long, env = "HOLOCHECK_SUITES", default_value = "all")]
        suites: String,
        /// Restrict the closure suite to one structure mode.
        #[arg(long, env = "HOLOCHECK_MODE", value_parser = parse_mode)]
        mode: Option<Mode>,
    },
    /// Decompose `V(n,m)*V(p,q)*...` or evaluate `T(u, v; p1, p2)`.
    Decompose { expr: String },
    /// Pairing of two bihomogeneous polynomial literals.
    Transvect { u: String, v: String, p1: u32, p2: u32 },
    /// The 12x12 matrix of the curvature map against the coframe.
    Jmatrix {
        #[arg(long, value_enum)]
        emit: Option<Format>,
    },
    /// Certificate for the generic rank of the curvature map matrix.
    Rank,
    /// The two first integrals.
    Integrals {
        /// Verify that both are conserved.
        #[arg(long)]
        check: bool,
    },
    /// Structure constants at a point read from a JSON point file.
    Constants {
        #[arg(long, env = "HOLOCHECK_POINT")]
        point: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Output, UsageError> {
    let c = cli.c.clone().unwrap_or(CSetting::Default);
    let mut cfg = SuiteConfig::new(Vec::new(), cli.seed);
    cfg.c = c.clone();
    match cli.command {
        Command::Verify { suites, mode } => {
            cfg.suites = parse_suites(&suites).map_err(UsageError)?;
            cfg.modes = mode.into_iter().collect();
            let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let report = run_suites(&cfg, workers);
            let text = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            Ok(Output { text, passed: report.passed() })
        }
        Command::Decompose { expr } => commands::decompose(&expr, cli.format),
        Command::Transvect { u, v, p1, p2 } => commands::transvect(&u, &v, p1, p2, cli.format),
        Command::Jmatrix { emit } => Ok(commands::jmatrix(&c, emit.unwrap_or(cli.format))),
        Command::Rank => commands::rank(cli.seed, &cfg.point_c(), cli.format),
        Command::Integrals { check } => Ok(commands::integrals_cmd(&c, check, cli.format)),
        Command::Constants { point } => {
            let text = std::fs::read_to_string(&point).map_err(|e| UsageError(format!("{}: {e}", point.display())))?;
            commands::constants(&text, cli.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.clone();
    let result = run(cli).and_then(|o| emit(&out, &o.text).map(|_| o.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
