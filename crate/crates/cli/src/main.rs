use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use photon_kspace::scenario::{run_audit, run_scenario, validate_config, ScenarioConfig};
use photon_kspace::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "photon-kspace", version, about = "Spectral photon wave-function scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its artifacts plus manifest.json.
    Run {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for per-mode parallelism (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Validate a scenario file and print the parsed configuration as JSON.
    Validate { config: PathBuf },
    /// Run the built-in invariant suites; exits 0 only if every check passes.
    Audit {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn error_json(err: &Error) -> serde_json::Value {
    match err {
        Error::Validation(v) => json!({ "error": "validation", "message": err.to_string(), "violations": v }),
        Error::Structural(_) => json!({ "error": "structural", "message": err.to_string() }),
        Error::Constraint { what, magnitude, tolerance } => json!({
            "error": "constraint", "message": err.to_string(),
            "what": what, "magnitude": magnitude, "tolerance": tolerance
        }),
        Error::Format(_) => json!({ "error": "format", "message": err.to_string() }),
        Error::Io(_) => json!({ "error": "io", "message": err.to_string() }),
        Error::Json(_) => json!({ "error": "json", "message": err.to_string() }),
    }
}

fn fail(value: serde_json::Value) -> ExitCode {
    eprintln!("{value}");
    ExitCode::FAILURE
}

fn load(path: &PathBuf) -> Result<ScenarioConfig, Error> {
    let raw = std::fs::read_to_string(path)?;
    validate_config(&raw)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, output_dir, seed, threads } => {
            if let Some(n) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    return fail(json!({ "error": "threads", "message": e.to_string() }));
                }
            }
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => return fail(error_json(&e)),
            };
            if let Some(d) = output_dir {
                cfg.output_dir = d;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            match run_scenario(&cfg) {
                Ok(summary) => {
                    println!(
                        "{}: {} files in {}, {} warnings",
                        summary.manifest.scenario,
                        summary.manifest.files.len(),
                        summary.output_dir.display(),
                        summary.manifest.warnings.len()
                    );
                    if summary.failed_checks.is_empty() {
                        ExitCode::SUCCESS
                    } else {
                        fail(json!({ "error": "checks", "message": "checks failed", "failed": summary.failed_checks }))
                    }
                }
                Err(e) => fail(error_json(&e)),
            }
        }
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => match serde_json::to_string_pretty(&cfg) {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(error_json(&e.into())),
            },
            Err(e) => fail(error_json(&e)),
        },
        Command::Audit { seed } => match run_audit(seed) {
            Ok(report) => {
                for c in &report.checks {
                    println!(
                        "{} {:<40} {:.3e} (tolerance {:.1e})",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.value,
                        c.tolerance
                    );
                }
                if report.passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => fail(error_json(&e)),
        },
    }
}
