//! `line-scatter <task> --config <file> [--out <path>] [--format csv|json]`

mod config;
mod output;
mod tasks;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use line_scatter::ScatterError;
use serde_json::{json, Value};

use config::{Format, RunConfig};
use tasks::Task;

#[derive(Debug, Parser)]
#[command(name = "line-scatter", version, about = "Exact 2D scattering by delta potentials on a line")]
struct Args {
    #[arg(value_enum)]
    task: Task,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Error reported as `{error_kind, message, parameters}`.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub parameters: Value,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: "ConfigError".into(),
            message: message.into(),
            parameters: json!({}),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: "IoError".into(),
            message: message.into(),
            parameters: json!({}),
        }
    }

    pub fn unsupported(task: Task, kind: &str) -> Self {
        Self {
            kind: "UnsupportedTask".into(),
            message: format!("task {} does not apply to {kind} potentials", task.name()),
            parameters: json!({ "task": task.name(), "potential": kind }),
        }
    }

    fn report(&self) -> String {
        json!({
            "error_kind": self.kind,
            "message": self.message,
            "parameters": self.parameters,
        })
        .to_string()
    }
}

fn degrees(theta: f64) -> Value {
    output::json_real(theta.to_degrees())
}

impl From<ScatterError> for CliError {
    fn from(e: ScatterError) -> Self {
        let parameters = match &e {
            ScatterError::InvalidPotential(problems) => json!({ "violations": problems }),
            ScatterError::NonFinite(x) => json!({ "value": output::json_real(*x) }),
            ScatterError::SingularMatrix { column, pivot } => {
                json!({ "column": column, "pivot": output::json_real(*pivot) })
            }
            ScatterError::SpectralSingularity { k, theta0 } => {
                json!({ "k": output::json_real(*k), "theta0_deg": theta0.map(degrees) })
            }
            ScatterError::GrazingAfterRotation { theta0 } => json!({ "theta0_deg": degrees(*theta0) }),
            ScatterError::DegenerateSeparation { ak } => json!({ "ak": output::json_real(*ak) }),
            ScatterError::GrazingMode { shift, k, theta0 } => json!({
                "shift": shift,
                "k": output::json_real(*k),
                "theta0_deg": degrees(*theta0),
            }),
            ScatterError::OutOfCell { j, q, p0 } => json!({ "j": j, "q": q, "p0": output::json_real(*p0) }),
            ScatterError::NotConverged { terms, ratio } => {
                json!({ "terms": terms, "estimated_ratio": output::json_real(*ratio) })
            }
            _ => json!({}),
        };
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
            parameters,
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.candidates.json"))
}

fn run(args: &Args) -> Result<(), CliError> {
    let config = RunConfig::load(&args.config)?;
    let format = args.format.or(config.output.format).unwrap_or(Format::Csv);
    let out = args.out.clone().or_else(|| config.output.path.clone());
    let artifact = tasks::run(args.task, &config)?;
    let text = artifact.table.render(format);
    match out {
        Some(path) => {
            write(&path, &text)?;
            if let (Format::Csv, Some(sidecar)) = (format, &artifact.sidecar) {
                write(&sidecar_path(&path), sidecar)?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::FAILURE
        }
    }
}
