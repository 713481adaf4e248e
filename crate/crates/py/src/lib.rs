//! Python bindings. The module is `spinlift`; every function takes the same
//! JSON inputs as the command-line tool and returns the same reports.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;

use spinlift::cli::{render, run_job, CliError, Command, Format, Input, JobConfig, VERSION};

const COMMANDS: [Command; 8] = [
    Command::Pi1,
    Command::Spin,
    Command::Involution,
    Command::H2,
    Command::Extension,
    Command::Keylemma,
    Command::Sw,
    Command::Selftest,
];

create_exception!(
    spinlift,
    ValidationError,
    PyValueError,
    "Input rejected: malformed JSON, schema mismatch, invalid data or a size bound."
);

/// Arguments of one call, shared with the Rust tests.
#[derive(Clone, Debug, Default)]
pub struct Request {
    pub command: String,
    pub input: Option<String>,
    pub seed: u64,
    pub bound: Option<usize>,
    pub trials: Option<usize>,
}

pub fn command_by_name(name: &str) -> Option<Command> {
    COMMANDS.into_iter().find(|c| c.name() == name)
}

/// Runs a request; the report and whether it counts as success.
pub fn execute(req: &Request) -> Result<(serde_json::Value, bool), CliError> {
    let command = command_by_name(&req.command).ok_or_else(|| {
        let names: Vec<&str> = COMMANDS.iter().map(|c| c.name()).collect();
        CliError::Usage(format!(
            "unknown command `{}`; expected one of {}",
            req.command,
            names.join(", ")
        ))
    })?;
    let cfg = JobConfig {
        command,
        input: req.input.clone().map(|text| Input {
            name: "<input>".to_string(),
            text,
        }),
        seed: req.seed,
        bound: req.bound,
        trials: req.trials,
    };
    let out = run_job(&cfg)?;
    Ok((out.report, out.success))
}

fn to_py(e: CliError) -> PyErr {
    match e {
        CliError::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => ValidationError::new_err(e.to_string()),
    }
}

/// A `str` is taken as JSON text; anything else goes through `json.dumps`.
fn input_text(py: Python<'_>, input: Option<&Bound<'_, PyAny>>) -> PyResult<Option<String>> {
    let Some(obj) = input else {
        return Ok(None);
    };
    if obj.is_none() {
        return Ok(None);
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return Ok(Some(s.to_str()?.to_string()));
    }
    let dumped = py.import("json")?.call_method1("dumps", (obj,))?;
    Ok(Some(dumped.extract()?))
}

fn call(
    py: Python<'_>,
    command: &str,
    input: Option<&Bound<'_, PyAny>>,
    seed: u64,
    bound: Option<usize>,
    trials: Option<usize>,
) -> PyResult<(serde_json::Value, bool)> {
    let req = Request {
        command: command.to_string(),
        input: input_text(py, input)?,
        seed,
        bound,
        trials,
    };
    py.detach(|| execute(&req)).map_err(to_py)
}

/// Runs `command` and returns the rendered report (`format` is `json` or `text`).
#[pyfunction]
#[pyo3(signature = (command, input=None, *, seed=0, bound=None, trials=None, format="json"))]
fn run(
    py: Python<'_>,
    command: &str,
    input: Option<&Bound<'_, PyAny>>,
    seed: u64,
    bound: Option<usize>,
    trials: Option<usize>,
    format: &str,
) -> PyResult<String> {
    let format = match format {
        "json" => Format::Json,
        "text" => Format::Text,
        other => {
            return Err(ValidationError::new_err(format!(
                "format must be `json` or `text`, not `{other}`"
            )))
        }
    };
    let (report, _) = call(py, command, input, seed, bound, trials)?;
    Ok(render(&report, format))
}

/// Runs `command` and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (command, input=None, *, seed=0, bound=None, trials=None))]
fn report<'py>(
    py: Python<'py>,
    command: &str,
    input: Option<&Bound<'py, PyAny>>,
    seed: u64,
    bound: Option<usize>,
    trials: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (report, _) = call(py, command, input, seed, bound, trials)?;
    py.import("json")?
        .call_method1("loads", (render(&report, Format::Json),))
}

/// Runs the acceptance suite; true when every criterion passes.
#[pyfunction]
#[pyo3(signature = (seed=0, bound=None))]
fn selftest(py: Python<'_>, seed: u64, bound: Option<usize>) -> PyResult<bool> {
    let (_, ok) = call(py, "selftest", None, seed, bound, None)?;
    Ok(ok)
}

#[pyfunction]
fn version() -> &'static str {
    VERSION
}

#[pymodule]
#[pyo3(name = "spinlift")]
fn spinlift_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    m.add(
        "COMMANDS",
        COMMANDS.iter().map(|c| c.name()).collect::<Vec<_>>(),
    )?;
    Ok(())
}
