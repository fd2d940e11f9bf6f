//! The `braidkit` workbench: JSON problem specs, a built-in corpus, and one
//! subcommand per computation of `braidkit-core`.

pub mod corpus;
pub mod expect;
mod render;
pub mod run;
pub mod spec;

use std::path::PathBuf;

use braidkit_core::braided::BraidError;
use braidkit_core::enveloping::EnvError;
use braidkit_core::linalg::{Field, LinalgError};
use braidkit_core::tower::TowerError;
use clap::Parser;
use thiserror::Error;

pub use run::{run, Command, Report};
pub use spec::{Problem, ProblemSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("invalid problem document: {0}")]
    Schema(String),
    #[error("braiding violates the quantum Yang–Baxter equation c1 c2 c1 = c2 c1 c2 on V⊗V⊗V; witness triple: {0}")]
    Qybe(String),
    #[error("{message}{}", hint.as_ref().map(|h| format!(" (hint: {h})")).unwrap_or_default())]
    Compute { message: String, hint: Option<String> },
    #[error("{0}")]
    Core(String),
    #[error("{0}")]
    Io(String),
}

fn braid_hint(e: &BraidError) -> Option<&'static str> {
    match e {
        BraidError::Budget { .. } => Some("raise budgets.factorial or lower the truncation"),
        _ => None,
    }
}

fn tower_hint(e: &TowerError) -> Option<&'static str> {
    match e {
        TowerError::NotStabilized(_) => Some("raise budgets.max_stages"),
        TowerError::Braid(b) => braid_hint(b),
        _ => None,
    }
}

fn env_hint(e: &EnvError) -> Option<&'static str> {
    match e {
        EnvError::Unstable { .. } | EnvError::NotStable(_) => {
            Some("raise budgets.max_headroom or --headroom, or lower the truncation")
        }
        EnvError::Validity { .. } => Some("raise the truncation or lower budgets.validity_margin"),
        EnvError::Tower(t) => tower_hint(t),
        EnvError::Braid(b) => braid_hint(b),
        _ => None,
    }
}

impl CliError {
    fn compute(message: String, hint: Option<&'static str>) -> Self {
        CliError::Compute {
            message,
            hint: hint.map(str::to_string),
        }
    }
}

impl From<EnvError> for CliError {
    fn from(e: EnvError) -> Self {
        CliError::compute(e.to_string(), env_hint(&e))
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        CliError::compute(e.to_string(), tower_hint(&e))
    }
}

impl From<BraidError> for CliError {
    fn from(e: BraidError) -> Self {
        CliError::compute(e.to_string(), braid_hint(&e))
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Core(e.to_string())
    }
}

const COMMANDS: [&str; 11] = [
    "qybe",
    "nichols",
    "rank",
    "primitives",
    "envelope",
    "pbw",
    "pbw-basis",
    "corad",
    "cosym",
    "crosscheck",
    "corpus",
];

/// Exact computations with braided vector spaces, Nichols algebras and
/// braided enveloping algebras.
#[derive(Debug, Parser)]
#[command(name = "braidkit", version)]
pub struct Args {
    /// What to compute.
    #[arg(value_parser = COMMANDS)]
    pub command: String,
    /// Problem document (JSON).
    #[arg(long, conflicts_with = "builtin")]
    pub spec: Option<PathBuf>,
    /// Name of a built-in corpus entry instead of --spec.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Overrides the truncation degree N.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Overrides the headroom H.
    #[arg(long)]
    pub headroom: Option<usize>,
    /// Overrides the field: Q or GF:p.
    #[arg(long)]
    pub field: Option<String>,
    /// Expectation document; a violated expectation exits with status 1.
    #[arg(long)]
    pub expect: Option<PathBuf>,
    /// Emit the JSON report (default).
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Emit a human-readable table.
    #[arg(long)]
    pub table: bool,
}

/// What a process invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_spec(args: &Args) -> Result<ProblemSpec, CliError> {
    let mut spec = match (&args.spec, &args.builtin) {
        (Some(path), _) => ProblemSpec::from_json(&read(path)?)?,
        (None, Some(name)) => corpus::entry(name)
            .ok_or_else(|| {
                CliError::Schema(format!(
                    "no built-in named `{name}`; known: {}",
                    corpus::names().join(", ")
                ))
            })?
            .spec()?,
        (None, None) => return Err(CliError::Schema("pass --spec <file> or --builtin <name>".into())),
    };
    if let Some(n) = args.degree {
        spec.truncation = n;
    }
    if let Some(h) = args.headroom {
        spec.headroom = h;
    }
    if let Some(f) = &args.field {
        let field: Field = f.parse().map_err(|e| CliError::Schema(format!("--field {f}: {e}")))?;
        spec.field = field.to_string();
    }
    Ok(spec)
}

/// Runs the command line `args` (without the program name) and returns the
/// exit status and output instead of touching the process.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("braidkit")).chain(args.into_iter().map(Into::into));
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    if args.command == "corpus" {
        let report = corpus::run_all();
        let stdout = if args.table {
            render::corpus_table(&report)
        } else {
            render::json(&report)
        };
        return Outcome {
            code: report.exit_code(),
            stdout,
            stderr: String::new(),
        };
    }
    match execute_one(&args) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::error(&e),
    }
}

fn execute_one(args: &Args) -> Result<Outcome, CliError> {
    let command = Command::from_name(&args.command).expect("validated by the parser");
    let spec = load_spec(args)?;
    let expectations = args
        .expect
        .as_ref()
        .map(|p| read(p).and_then(|t| expect::parse(&t)))
        .transpose()?;
    let report = run(command, &spec)?;
    let stdout = if args.table {
        render::table(&report)
    } else {
        render::json(&report)
    };
    let mut stderr = String::new();
    let mut code = 0;
    if let Some(doc) = expectations {
        let section = doc
            .get(command.name())
            .ok_or_else(|| CliError::Schema(format!("the expectation file has no `{}` section", command.name())))?;
        let failed = expect::violations(&report.result, section);
        for v in &failed {
            stderr.push_str(&format!("expectation violated: {v}\n"));
        }
        if !failed.is_empty() {
            code = 1;
        }
    }
    Ok(Outcome { code, stdout, stderr })
}
