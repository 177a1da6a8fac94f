//! `svq` command-line interface.
//!
//! Exit codes: 0 on success, 1 when `run` finds past-alteration violations,
//! 2 on any error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use svq::scenario::{emit_report, parse_scenario, run_scenario, Format, Report, RunOptions};

#[derive(Parser)]
#[command(name = "svq", version, about = "Supervaluational truth values for quantum propositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario files (`.svq`); several files run concurrently and report in order.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Probability that a reconstructed past value is true.
    #[arg(long = "p-one")]
    p_one: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and print their reports.
    Run(RunArgs),
    /// Run scenarios and print only the query valuations.
    Eval(RunArgs),
    /// Parse and check scenarios without running them.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn load(path: &Path, opts: &RunOptions) -> Result<Report, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let scenario = parse_scenario(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    run_scenario(&scenario, opts).map_err(|e| format!("{}:{e}", path.display()))
}

fn run_all(args: &RunArgs) -> Vec<Result<Report, String>> {
    let opts = RunOptions {
        seed: args.seed,
        tol: args.tol,
        p_one: args.p_one,
    };
    std::thread::scope(|scope| {
        let handles: Vec<_> = args.files.iter().map(|f| scope.spawn(move || load(f, &opts))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("scenario run panicked".to_string())))
            .collect()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut code = 0u8;
    match cli.command {
        Command::Run(args) => {
            for result in run_all(&args) {
                match result {
                    Ok(report) => {
                        if !report.violations.is_empty() {
                            code = code.max(1);
                        }
                        let _ = out.write_all(&emit_report(&report, args.format.into()));
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        code = 2;
                    }
                }
            }
        }
        Command::Eval(args) => {
            for result in run_all(&args) {
                match result {
                    Ok(report) => match args.format {
                        OutputFormat::Json => {
                            let mut bytes = serde_json::to_vec_pretty(&report.valuations).expect("valuations serialize");
                            bytes.push(b'\n');
                            let _ = out.write_all(&bytes);
                        }
                        OutputFormat::Text => {
                            for v in &report.valuations {
                                let _ = writeln!(out, "{} => {} = {}", v.query, v.key, v.truth);
                            }
                        }
                    },
                    Err(e) => {
                        eprintln!("error: {e}");
                        code = 2;
                    }
                }
            }
        }
        Command::Check { files } => {
            for path in files {
                let parsed = std::fs::read_to_string(&path)
                    .map_err(|e| format!("{}: {e}", path.display()))
                    .and_then(|t| parse_scenario(&t).map_err(|e| format!("{}:{e}", path.display())));
                match parsed {
                    Ok(s) => {
                        let _ = writeln!(out, "{}: ok ({} items)", path.display(), s.items.len());
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        code = 2;
                    }
                }
            }
        }
    }
    ExitCode::from(code)
}
