use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mre_core::bounds::SurrogateMode;
use mre_core::error::MreError;
use mre_core::io::{InputError, LoadedState, StateFile};
use mre_core::mixed_opt::OptimizerConfig;
use mre_core::rdm_multi::Convention;
use mre_core::report::{report_mixed, report_pure, Measure, ReportOptions};
use mre_core::sweep::{gap_spread, sweep_family, to_csv, SweepSpec};
use mre_core::verify::{render, run_verify};

const EXIT_VERIFY: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "mre", version, about = "Multipartite relative entropy of entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Eq15,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a state stored as JSON.
    Compute {
        file: PathBuf,
        #[arg(long, default_value = "pairing")]
        convention: Convention,
        #[arg(long, default_value = "theorem1")]
        surrogate: SurrogateMode,
        #[arg(long, default_value = "all")]
        measure: Measure,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
        /// Decomposition terms for mixed states.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Tabulate MRE and assistant along a one-parameter family.
    Sweep {
        #[arg(long, value_enum, default_value = "eq15")]
        family: Family,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value = "pairing")]
        convention: Convention,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in catalog checks.
    Verify,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

/// Prints to stdout, treating a closed pipe as success.
fn emit(text: &str) -> ExitCode {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => fail(EXIT_MALFORMED, e),
        _ => ExitCode::SUCCESS,
    }
}

fn numeric_exit(e: &MreError) -> u8 {
    match e {
        MreError::UnsupportedSize(..) => EXIT_UNSUPPORTED,
        _ => EXIT_MALFORMED,
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Compute { file, convention, surrogate, measure, format, seed, restarts, max_iters, terms } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_MALFORMED, format!("{}: {e}", file.display())),
            };
            let loaded = match StateFile::parse(&text) {
                Ok(l) => l,
                Err(e @ InputError::Malformed(_)) => return fail(EXIT_MALFORMED, e),
                Err(e @ InputError::Unsupported(_)) => return fail(EXIT_UNSUPPORTED, e),
            };
            let defaults = OptimizerConfig::default();
            let opts = ReportOptions {
                measure,
                convention,
                surrogate,
                optimizer: OptimizerConfig {
                    term_count: terms,
                    restarts: restarts.unwrap_or(defaults.restarts),
                    max_iters: max_iters.unwrap_or(defaults.max_iters),
                    seed,
                    ..defaults
                },
            };
            let result = match &loaded.state {
                LoadedState::Pure(psi) => report_pure(psi, &opts),
                LoadedState::Mixed(rho) => report_mixed(rho, &opts),
            };
            let mut report = match result {
                Ok(r) => r,
                Err(e) => return fail(numeric_exit(&e), e),
            };
            for w in &loaded.warnings {
                eprintln!("warning: {w}");
            }
            report.warnings.splice(0..0, loaded.warnings);
            match format {
                Format::Text => emit(&report.to_text()),
                Format::Json => emit(&(report.to_json() + "\n")),
            }
        }
        Command::Sweep { family: Family::Eq15, from, to, steps, convention, out } => {
            let spec = SweepSpec { from, to, steps };
            if let Err(e) = spec.validate() {
                return fail(EXIT_UNSUPPORTED, e);
            }
            let rows = match sweep_family(&spec, convention) {
                Ok(r) => r,
                Err(e) => return fail(EXIT_MALFORMED, e),
            };
            let csv = to_csv(&rows);
            let (lo, hi) = gap_spread(&rows);
            eprintln!("e_air - mre: min {lo:.9}, max {hi:.9}");
            match out {
                Some(path) => match fs::write(&path, csv) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(EXIT_MALFORMED, format!("{}: {e}", path.display())),
                },
                None => emit(&csv),
            }
        }
        Command::Verify => match run_verify() {
            Ok(rows) => {
                let code = emit(&render(&rows));
                if rows.iter().all(|r| r.pass) {
                    code
                } else {
                    ExitCode::from(EXIT_VERIFY)
                }
            }
            Err(e) => fail(EXIT_VERIFY, e),
        },
    }
}
