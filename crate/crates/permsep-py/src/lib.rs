//! Python bindings for the permsep crate. Density matrices cross the
//! boundary as a dimension list plus a flat, row-major list of complex
//! entries; everything else is plain strings, numbers, and dicts.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use permsep::classifier::{census_summary, enumerate_classes};
use permsep::criteria::{evaluate_all_classes, realign as realign_matrix, DEFAULT_DETECTION_TOL};
use permsep::states::{generate as generate_state, spec_from_parts, validate};
use permsep::tensor::{DensityMatrix, Subsystems};

fn py_err(err: permsep::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn density(dims: Vec<usize>, entries: Vec<Complex64>) -> PyResult<DensityMatrix> {
    let subsystems = Subsystems::new(dims).map_err(py_err)?;
    let rho = DensityMatrix::from_parts(subsystems, entries).map_err(py_err)?;
    validate(&rho).map_err(py_err)?;
    Ok(rho)
}

/// Equivalence classes of index permutations for the given party count, in
/// canonical order.
#[pyfunction]
fn classes(py: Python<'_>, parties: usize) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let census = enumerate_classes(parties).map_err(py_err)?;
    census
        .iter()
        .map(|c| {
            let row = PyDict::new(py);
            row.set_item("label", c.class.label().to_string())?;
            row.set_item("id", c.class.id())?;
            row.set_item("population", c.population)?;
            row.set_item("representative", c.class.representative().map().to_vec())?;
            Ok(row)
        })
        .collect()
}

/// One-line census summary, e.g. counting candidate and non-equivalent
/// criteria.
#[pyfunction]
fn summary(parties: usize) -> PyResult<String> {
    let census = enumerate_classes(parties).map_err(py_err)?;
    Ok(census_summary(parties, &census))
}

/// Evaluate every non-trivial criterion on the given state. Returns one dict
/// per class with its label, id, trace-norm value, and detection flag.
#[pyfunction]
#[pyo3(signature = (dims, entries, tol = DEFAULT_DETECTION_TOL))]
fn evaluate(
    py: Python<'_>,
    dims: Vec<usize>,
    entries: Vec<Complex64>,
    tol: f64,
) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let rho = density(dims, entries)?;
    let verdicts = evaluate_all_classes(&rho, tol).map_err(py_err)?;
    verdicts
        .iter()
        .map(|v| {
            let row = PyDict::new(py);
            row.set_item("label", v.class.label().to_string())?;
            row.set_item("id", v.class.id())?;
            row.set_item("value", v.value)?;
            row.set_item("detected", v.detected)?;
            Ok(row)
        })
        .collect()
}

/// Labels of the criteria that detect the state as entangled; empty when
/// none does (the state may still be entangled).
#[pyfunction]
#[pyo3(signature = (dims, entries, tol = DEFAULT_DETECTION_TOL))]
fn witness(dims: Vec<usize>, entries: Vec<Complex64>, tol: f64) -> PyResult<Vec<String>> {
    let rho = density(dims, entries)?;
    let verdicts = evaluate_all_classes(&rho, tol).map_err(py_err)?;
    Ok(verdicts
        .iter()
        .filter(|v| v.detected)
        .map(|v| v.class.label().to_string())
        .collect())
}

/// Generate a named state; see the CLI's gen-state for the naming scheme
/// (bell, ghz, w, werner:p, isotropic:f, mixed, random, random-separable).
/// Returns the flat row-major entries.
#[pyfunction]
#[pyo3(signature = (name, dims, seed = 0, rank = None, terms = None))]
fn generate(
    name: &str,
    dims: Vec<usize>,
    seed: u64,
    rank: Option<usize>,
    terms: Option<usize>,
) -> PyResult<Vec<Complex64>> {
    let spec = spec_from_parts(name, &dims, seed, rank, terms).map_err(py_err)?;
    let rho = generate_state(&spec).map_err(py_err)?;
    Ok(rho.entries().to_vec())
}

/// Realign a bipartite state: returns (rows, cols, flat entries) of the
/// (d1²)×(d2²) matrix whose trace norm exceeds 1 only on entangled states.
#[pyfunction]
fn realign(dims: Vec<usize>, entries: Vec<Complex64>) -> PyResult<(usize, usize, Vec<Complex64>)> {
    let rho = density(dims, entries)?;
    let m = realign_matrix(&rho).map_err(py_err)?;
    Ok((m.nrows(), m.ncols(), m.entries().to_vec()))
}

#[pymodule]
fn permsep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classes, m)?)?;
    m.add_function(wrap_pyfunction!(summary, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(realign, m)?)?;
    Ok(())
}
