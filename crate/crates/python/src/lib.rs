//! Python bindings. Results cross the boundary as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use nker::catalog::{self, Analyzed};
use nker::verify::{self, Suite};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Canonical form of a group expression.
#[pyfunction]
fn canonical(spec: &str) -> PyResult<String> {
    let e = nker::dsl::parse_group_expr(spec).map_err(value_err)?;
    Ok(e.to_string())
}

/// Catalog record (JSON) for one group expression.
#[pyfunction]
fn analyze(py: Python<'_>, spec: &str) -> PyResult<String> {
    let spec = spec.to_string();
    let a = py.detach(|| Analyzed::new(&spec)).map_err(value_err)?;
    Ok(catalog::record(&a).json.to_string())
}

/// Curated catalog expressions up to `max_order`.
#[pyfunction]
#[pyo3(signature = (max_order = catalog::DEFAULT_MAX_ORDER))]
fn curated(max_order: usize) -> Vec<String> {
    catalog::curated_up_to(max_order)
}

/// Runs a suite and returns `(passed, tap_text)`.
#[pyfunction]
#[pyo3(signature = (suite, jobs = 1))]
fn run_suite(py: Python<'_>, suite: &str, jobs: usize) -> PyResult<(bool, String)> {
    use clap::ValueEnum;
    let suite = Suite::from_str(suite, true).map_err(value_err)?;
    let mut buf = Vec::new();
    let ok = py.detach(|| verify::run(suite, jobs.max(1), &mut buf)).map_err(value_err)?;
    Ok((ok, String::from_utf8_lossy(&buf).into_owned()))
}

#[pymodule]
fn nker_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", catalog::SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(curated, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
