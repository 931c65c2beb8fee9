//! `telebench`: run the teleportation benchmark from a JSON config.
//!
//! Exit codes: 0 success, 1 pipeline failure, 2 usage or config error.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use telebench_core::teleport::{
    format_summary, run_benchmark, run_state, to_csv, to_json_string, InputState, RunMetadata,
    StateReference, StateReport, EXPERIMENT_REFERENCE,
};

use config::{Format, Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Pipeline(#[from] telebench_core::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Pipeline(_) | CliError::Io { .. } => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "telebench",
    version,
    about = "Three-qubit teleportation benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline for all four input states and print the summary table.
    Bench(CommonArgs),
    /// Reconstruct and analyse the circuit output for a single input state.
    State {
        #[arg(value_parser = PossibleValuesParser::new(["0", "1", "minus", "plus"])
            .map(|s| s.parse::<InputState>().expect("restricted to known labels")))]
        input: InputState,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; every field is optional.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Shots per Pauli setting (0 = exact expectation values).
    #[arg(long, value_name = "N")]
    shots: Option<u64>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Apply T1/T2* decoherence during the circuit.
    #[arg(long, value_enum)]
    noise: Option<Switch>,
    /// Write reports into this directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Restarts of the convex-roof search (0 skips the three-tangle bound).
    #[arg(long, value_name = "N")]
    restarts: Option<usize>,
    /// Leave out the generated_at timestamp.
    #[arg(long)]
    no_timestamp: bool,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(Overrides {
            shots: self.shots,
            seed: self.seed,
            noise: self.noise.map(|s| matches!(s, Switch::On)),
            out: self.out.clone(),
            format: self.format,
            restarts: self.restarts,
        });
        cfg.validate()?;
        Ok(cfg)
    }

    fn timestamp(&self) -> Option<String> {
        (!self.no_timestamp).then(|| Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
    }
}

#[derive(Serialize)]
struct StateOutput<'a> {
    schema: u32,
    metadata: RunMetadata,
    state: &'a StateReport,
    reference: StateReference,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        context: format!("cannot write {}", path.display()),
        source,
    })?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn bench(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let mut report = run_benchmark(&cfg.benchmark())?;
    report.metadata.generated_at = args.timestamp();
    print!("{}", format_summary(&report));
    if let Some(dir) = &cfg.out {
        if cfg.format.json() {
            write_file(&dir.join("report.json"), &to_json_string(&report)?)?;
        }
        if cfg.format.csv() {
            write_file(&dir.join("report.csv"), &to_csv(&report)?)?;
        }
    }
    Ok(())
}

fn state_summary(s: &StateReport, reference: &StateReference) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "input |{}>  fidelity {:.4} (reference {:.2})  purity {:.4}",
        s.input, s.state_fidelity, reference.state_fidelity, s.purity
    );
    if let Some(w) = &s.witness {
        let _ = writeln!(
            out,
            "witness {:.4}  robustness bound {:.4}",
            w.expectation, w.robustness_lower_bound
        );
    }
    if let Some(t) = s.tangle_upper_bound {
        let _ = writeln!(out, "tau3 upper bound {t:.4}");
    }
    for o in &s.outcomes {
        let fid = o.fidelity.map_or("-".to_string(), |f| format!("{f:.4}"));
        let _ = writeln!(
            out,
            "outcome {}  probability {:.4}  conditional fidelity {fid}",
            o.outcome, o.probability
        );
    }
    out
}

fn state(input: InputState, args: &CommonArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let bench_cfg = cfg.benchmark();
    let report = run_state(&bench_cfg, input)?;
    let mut metadata = RunMetadata::from_config(&bench_cfg);
    metadata.generated_at = args.timestamp();
    let reference = *EXPERIMENT_REFERENCE.state(input);
    let json = to_json_string(&StateOutput {
        schema: telebench_core::teleport::SCHEMA_VERSION,
        metadata,
        state: &report,
        reference,
    })?;
    eprint!("{}", state_summary(&report, &reference));
    match &cfg.out {
        Some(dir) => write_file(&dir.join(format!("state_{}.json", input.label())), &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bench(args) => bench(args),
        Command::State { input, common } => state(*input, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
