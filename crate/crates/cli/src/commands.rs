//! Command-line arguments and subcommand execution.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ctmc_limit::{
    adaptive_horizon, classify_states, final_limit_with, resolvent, resolvent_limit, simulate,
    stationary_distribution, transition_matrix, validate, Error, IntensityMatrix64,
    InvariantBounds, InvariantViolation, Matrix64, Tolerances64,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::document::{parse_matrix, DocumentError, InputFormat};
use crate::report::{
    labels_json, matrix_json, matrix_text, number, probability, set_text, table_text, vector_json,
    OutputFormat, Report, Style,
};

#[derive(Debug, Parser)]
#[command(
    name = "ctmc-limit",
    version,
    about = "Final limit of a continuous-time Markov chain"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: OutputFormat,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum, global = true)]
    pub input_format: Option<InputFormat>,
    /// Validation tolerance for rates and row sums.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Largest discrepancy accepted by `check`.
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub check_tol: f64,
    /// Read the file as a column-convention matrix (columns sum to zero).
    #[arg(long, global = true)]
    pub transpose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the matrix and print the normalized intensity matrix.
    Validate { file: PathBuf },
    /// List recurrence classes and transient states.
    Classes { file: PathBuf },
    /// Stationary vector of one recurrence class.
    Stationary {
        file: PathBuf,
        #[arg(long)]
        class: usize,
    },
    /// Final limit P with stationary vectors and absorption probabilities.
    Limit { file: PathBuf },
    /// Transition matrix exp(tB).
    Expm {
        file: PathBuf,
        #[arg(long)]
        time: f64,
    },
    /// Scaled resolvent z(zI - B)^-1.
    Resolvent {
        file: PathBuf,
        #[arg(long)]
        z: f64,
    },
    /// Monte Carlo estimate of exp(hB).
    Simulate {
        file: PathBuf,
        #[arg(long)]
        horizon: f64,
        #[arg(long, default_value_t = 10_000)]
        trajectories: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare P against exp(t*B) and the extrapolated resolvent.
    Check {
        file: PathBuf,
        /// Base point of the resolvent extrapolation.
        #[arg(long, default_value_t = 1e-4)]
        z: f64,
    },
}

impl Command {
    fn file(&self) -> &Path {
        match self {
            Command::Validate { file }
            | Command::Classes { file }
            | Command::Stationary { file, .. }
            | Command::Limit { file }
            | Command::Expm { file, .. }
            | Command::Resolvent { file, .. }
            | Command::Simulate { file, .. }
            | Command::Check { file, .. } => file,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Classes { .. } => "classes",
            Command::Stationary { .. } => "stationary",
            Command::Limit { .. } => "limit",
            Command::Expm { .. } => "expm",
            Command::Resolvent { .. } => "resolvent",
            Command::Simulate { .. } => "simulate",
            Command::Check { .. } => "check",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("tolerance {name} must be positive and finite, got {value}")]
    Tolerance { name: &'static str, value: f64 },
    #[error("final limit failed its checks: {0}")]
    Invariant(#[from] InvariantViolation),
    #[error("largest oracle discrepancy {max:e} exceeds {tol:e}")]
    CheckFailed {
        max: f64,
        tol: f64,
        report: Box<Report>,
    },
}

impl CliError {
    /// 1 for rejected input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Document(_) | CliError::Tolerance { .. } => 1,
            CliError::Core(e) if e.is_input_error() => 1,
            CliError::Core(_) | CliError::Invariant(_) | CliError::CheckFailed { .. } => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Document(DocumentError::Io { .. }) => "io",
            CliError::Document(DocumentError::Parse { .. }) => "parse",
            CliError::Document(DocumentError::Shape(_)) => "shape",
            CliError::Document(DocumentError::Labels(_)) => "labels",
            CliError::Core(Error::Linalg(_)) => "linalg",
            CliError::Core(Error::Chain(_)) => "validation",
            CliError::Core(Error::Limit(_)) => "limit",
            CliError::Core(Error::Oracle(_)) => "oracle",
            CliError::Tolerance { .. } => "usage",
            CliError::Invariant(_) => "invariant",
            CliError::CheckFailed { .. } => "check",
        }
    }

    /// Machine-readable error object for standard error.
    pub fn to_json(&self) -> Value {
        let mut error = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Document(DocumentError::Parse { line, column, .. }) = self {
            error["line"] = json!(line);
            error["column"] = json!(column);
        }
        json!({ "error": error })
    }
}

fn core<T, E: Into<Error>>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Core(e.into()))
}

fn positive(name: &'static str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Tolerance { name, value })
    }
}

/// Reads, optionally transposes, and validates the input matrix.
pub fn load(cli: &Cli, path: &Path) -> Result<IntensityMatrix64, CliError> {
    let format = cli
        .input_format
        .unwrap_or_else(|| InputFormat::from_path(path));
    let doc = parse_matrix(path, format)?;
    let mut raw = core(Matrix64::from_rows(&doc.rates))?;
    if cli.transpose {
        raw = raw.transpose();
    }
    let b = core(validate(&raw, positive("--tol", cli.tol)?))?;
    let labels = doc
        .states
        .unwrap_or_else(|| (0..b.n()).map(|i| i.to_string()).collect());
    core(b.with_labels(labels))
}

fn labels_of(b: &IntensityMatrix64) -> Vec<String> {
    (0..b.n()).map(|i| b.label(i)).collect()
}

fn tolerances(cli: &Cli) -> Tolerances64 {
    Tolerances64 {
        validation: cli.tol,
        ..Tolerances64::default()
    }
}

/// Runs one subcommand and returns its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let b = load(cli, cli.command.file())?;
    let labels = labels_of(&b);
    let mut json = Map::new();
    json.insert("command".into(), json!(cli.command.name()));
    json.insert("states".into(), json!(labels));
    let mut text = String::new();

    match &cli.command {
        Command::Validate { .. } => {
            json.insert("rates".into(), matrix_json(b.matrix()));
            let _ = writeln!(text, "valid intensity matrix, {} states\n", b.n());
            text.push_str(&matrix_text(&labels, b.matrix(), Style::Rate));
        }
        Command::Classes { .. } => {
            let s = classify_states(&b);
            let classes: Vec<Value> = s
                .classes()
                .iter()
                .enumerate()
                .map(|(id, c)| json!({ "id": id, "states": labels_json(&labels, c) }))
                .collect();
            json.insert("classes".into(), Value::Array(classes));
            json.insert("transient".into(), labels_json(&labels, s.transient()));
            for (id, c) in s.classes().iter().enumerate() {
                let _ = writeln!(text, "class {id}: {}", set_text(&labels, c));
            }
            let _ = writeln!(text, "transient: {}", set_text(&labels, s.transient()));
        }
        Command::Stationary { class, .. } => {
            let s = classify_states(&b);
            let pj = core(stationary_distribution(&b, &s, *class, &tolerances(cli)))?;
            let members = s.classes()[*class].as_slice();
            json.insert("class".into(), json!(class));
            json.insert("members".into(), labels_json(&labels, members));
            json.insert("p".into(), vector_json(&pj.p));
            let _ = writeln!(
                text,
                "stationary vector of class {class} {}\n",
                set_text(&labels, members)
            );
            let rows: Vec<(String, Vec<String>)> = (0..b.n())
                .map(|i| (labels[i].clone(), vec![probability(pj.p[i])]))
                .collect();
            text.push_str(&table_text(&["p".to_owned()], &rows));
        }
        Command::Limit { .. } => limit_report(cli, &b, &labels, &mut json, &mut text)?,
        Command::Expm { time, .. } => {
            let e = core(transition_matrix(&b, *time))?;
            json.insert("time".into(), number(*time));
            json.insert("matrix".into(), matrix_json(&e));
            let _ = writeln!(text, "exp(tB) at t = {time}\n");
            text.push_str(&matrix_text(&labels, &e, Style::Probability));
        }
        Command::Resolvent { z, .. } => {
            let r = core(resolvent(&b, *z))?;
            json.insert("z".into(), number(*z));
            json.insert("matrix".into(), matrix_json(&r));
            let _ = writeln!(text, "z(zI - B)^-1 at z = {z}\n");
            text.push_str(&matrix_text(&labels, &r, Style::Probability));
        }
        Command::Simulate {
            horizon,
            trajectories,
            seed,
            ..
        } => {
            let sim = core(simulate(&b, *horizon, *trajectories, *seed))?;
            let counts: Vec<Vec<u64>> = (0..b.n())
                .map(|i| (0..b.n()).map(|j| sim.count(i, j)).collect())
                .collect();
            json.insert("horizon".into(), number(*horizon));
            json.insert("trajectories".into(), json!(trajectories));
            json.insert("seed".into(), json!(seed));
            json.insert("empirical".into(), matrix_json(&sim.empirical));
            json.insert("counts".into(), json!(counts));
            let _ = writeln!(
                text,
                "empirical exp(hB) at h = {horizon}, {trajectories} trajectories per state, seed {seed}\n"
            );
            text.push_str(&matrix_text(&labels, &sim.empirical, Style::Probability));
        }
        Command::Check { z, .. } => return check_report(cli, &b, *z, json, text),
    }
    Ok(Report {
        json: Value::Object(json),
        text,
    })
}

fn limit_report(
    cli: &Cli,
    b: &IntensityMatrix64,
    labels: &[String],
    json: &mut Map<String, Value>,
    text: &mut String,
) -> Result<(), CliError> {
    let lim = core(final_limit_with(b, &tolerances(cli)))?;
    lim.check_invariants(b, &InvariantBounds::default())?;
    let s = &lim.structure;

    let classes: Vec<Value> = s
        .classes()
        .iter()
        .zip(&lim.stationary)
        .enumerate()
        .map(|(id, (c, pj))| {
            let p: Map<String, Value> = c
                .iter()
                .map(|&i| (labels[i].clone(), number(pj.p[i])))
                .collect();
            json!({ "id": id, "states": labels_json(labels, c), "p": p })
        })
        .collect();
    let absorption: Map<String, Value> = s
        .transient()
        .iter()
        .map(|&t| {
            let row: Map<String, Value> = (0..s.num_classes())
                .map(|id| {
                    (
                        id.to_string(),
                        number(lim.absorption.get(t, id).unwrap_or(0.0)),
                    )
                })
                .collect();
            (labels[t].clone(), Value::Object(row))
        })
        .collect();
    json.insert("classes".into(), Value::Array(classes));
    json.insert("transient".into(), labels_json(labels, s.transient()));
    json.insert("absorption".into(), Value::Object(absorption));
    json.insert("limit".into(), matrix_json(&lim.p));

    for (id, (c, pj)) in s.classes().iter().zip(&lim.stationary).enumerate() {
        let values: Vec<String> = c
            .iter()
            .map(|&i| format!("{}={}", labels[i], probability(pj.p[i])))
            .collect();
        let _ = writeln!(
            text,
            "class {id}: {}  p: {}",
            set_text(labels, c),
            values.join(" ")
        );
    }
    let _ = writeln!(text, "transient: {}", set_text(labels, s.transient()));
    if !s.transient().is_empty() {
        text.push_str("\nabsorption probabilities\n");
        let header: Vec<String> = (0..s.num_classes())
            .map(|id| format!("class {id}"))
            .collect();
        let rows: Vec<(String, Vec<String>)> = s
            .transient()
            .iter()
            .map(|&t| {
                let cells = (0..s.num_classes())
                    .map(|id| probability(lim.absorption.get(t, id).unwrap_or(0.0)))
                    .collect();
                (labels[t].clone(), cells)
            })
            .collect();
        text.push_str(&table_text(&header, &rows));
    }
    text.push_str("\nfinal limit P\n");
    text.push_str(&matrix_text(labels, &lim.p, Style::Probability));
    Ok(())
}

fn check_report(
    cli: &Cli,
    b: &IntensityMatrix64,
    z: f64,
    mut json: Map<String, Value>,
    mut text: String,
) -> Result<Report, CliError> {
    let check_tol = positive("--check-tol", cli.check_tol)?;
    let lim = core(final_limit_with(b, &tolerances(cli)))?;
    let horizon = core(adaptive_horizon(b, check_tol * 1e-2))?;
    let e = core(transition_matrix(b, horizon))?;
    let r = core(resolvent_limit(b, z))?;

    let pairs = [
        ("limit_vs_expm", lim.p.max_abs_diff(&e)),
        ("limit_vs_resolvent", lim.p.max_abs_diff(&r)),
        ("expm_vs_resolvent", e.max_abs_diff(&r)),
    ];
    let max = pairs.iter().map(|&(_, d)| d).fold(0.0, f64::max);
    let passed = max <= check_tol;

    let discrepancies: Map<String, Value> = pairs
        .iter()
        .map(|&(k, d)| (k.to_owned(), number(d)))
        .collect();
    json.insert("horizon".into(), number(horizon));
    json.insert("z".into(), number(z));
    json.insert("check_tol".into(), number(check_tol));
    json.insert("discrepancies".into(), Value::Object(discrepancies));
    json.insert("passed".into(), json!(passed));

    let _ = writeln!(
        text,
        "horizon t* = {horizon}, resolvent base z = {z}, tolerance {check_tol:e}\n"
    );
    let rows: Vec<(String, Vec<String>)> = pairs
        .iter()
        .map(|&(k, d)| (k.replace('_', " "), vec![format!("{d:.3e}")]))
        .collect();
    text.push_str(&table_text(&["max |diff|".to_owned()], &rows));
    let _ = writeln!(text, "\n{}", if passed { "passed" } else { "FAILED" });

    let report = Report {
        json: Value::Object(json),
        text,
    };
    if passed {
        Ok(report)
    } else {
        Err(CliError::CheckFailed {
            max,
            tol: check_tol,
            report: Box::new(report),
        })
    }
}
