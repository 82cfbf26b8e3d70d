//! Python bindings. Every entry point runs a report command and hands back plain
//! Python objects built from its JSON body.

use bvh_core::report::{emit_report, execute_command, Command, Format, Report, RunConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

create_exception!(bvh, BvhError, PyException);

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for x in a {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(o) => {
            let dict = PyDict::new(py);
            for (k, x) in o {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn execute(
    command: &str,
    group: &str,
    p: Option<u32>,
    element: Option<String>,
    max_degree: Option<usize>,
    heavy: bool,
    seed: u64,
) -> PyResult<Report> {
    let command: Command = command.parse().map_err(|e: bvh_core::BvhError| BvhError::new_err(e.to_string()))?;
    let cfg = RunConfig { p, element, max_degree, heavy, seed, ..RunConfig::new(command, group) };
    execute_command(&cfg).map_err(|e| BvhError::new_err(e.to_string()))
}

fn report_to_py<'py>(py: Python<'py>, report: &Report) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(report).map_err(|e| BvhError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// Run a command and return the whole report as a dict.
#[pyfunction]
#[pyo3(signature = (command, group, p=None, element=None, max_degree=None, heavy=false, seed=0))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    command: &str,
    group: &str,
    p: Option<u32>,
    element: Option<String>,
    max_degree: Option<usize>,
    heavy: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| execute(command, group, p, element, max_degree, heavy, seed))?;
    report_to_py(py, &report)
}

/// Run a command and return the report as JSON text.
#[pyfunction]
#[pyo3(signature = (command, group, p=None, element=None, max_degree=None, heavy=false, seed=0))]
#[allow(clippy::too_many_arguments)]
fn run_json(
    py: Python<'_>,
    command: &str,
    group: &str,
    p: Option<u32>,
    element: Option<String>,
    max_degree: Option<usize>,
    heavy: bool,
    seed: u64,
) -> PyResult<String> {
    let report = py.detach(|| execute(command, group, p, element, max_degree, heavy, seed))?;
    Ok(emit_report(&report, Format::Json))
}

#[pyfunction]
fn group_info<'py>(py: Python<'py>, group: &str) -> PyResult<Bound<'py, PyAny>> {
    let report = execute("info", group, None, None, None, false, 0)?;
    to_py(py, &report.body)
}

/// Dimensions of H^n(G, F_p) for n up to `max_degree`.
#[pyfunction]
#[pyo3(signature = (group, p=None, max_degree=None))]
fn cohomology_dims(py: Python<'_>, group: &str, p: Option<u32>, max_degree: Option<usize>) -> PyResult<Vec<usize>> {
    let report = py.detach(|| execute("cohomology", group, p, None, max_degree, false, 0))?;
    serde_json::from_value(report.body["dims"].clone()).map_err(|e| BvhError::new_err(e.to_string()))
}

/// Matrices of Δ_g, one per degree from 1 to `max_degree`, rows indexed by the target basis.
#[pyfunction]
#[pyo3(signature = (group, element, p=None, max_degree=None))]
fn delta_matrices<'py>(
    py: Python<'py>,
    group: &str,
    element: &str,
    p: Option<u32>,
    max_degree: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| execute("delta", group, p, Some(element.to_string()), max_degree, false, 0))?;
    to_py(py, &report.body["deltas"][0]["matrices"])
}

/// Structure and solubility analysis of the Lie algebra HH^1(kG).
#[pyfunction]
#[pyo3(signature = (group, p=None))]
fn hh1_lie<'py>(py: Python<'py>, group: &str, p: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| execute("hh1-lie", group, p, None, None, false, 0))?;
    report_to_py(py, &report)
}

#[pymodule]
fn bvh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BvhError", m.py().get_type::<BvhError>())?;
    m.add("SCHEMA", bvh_core::report::SCHEMA)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_json, m)?)?;
    m.add_function(wrap_pyfunction!(group_info, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology_dims, m)?)?;
    m.add_function(wrap_pyfunction!(delta_matrices, m)?)?;
    m.add_function(wrap_pyfunction!(hh1_lie, m)?)?;
    Ok(())
}
