//! Python bindings. Structures and relations travel as text format v1.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gqplab::bridge::{construct_preferences, derive_relation, round_trip as bridge_round_trip, verify_theorem2_all};
use gqplab::format::{emit_relation, emit_structure, parse};
use gqplab::gqp::{check_gqp as gqp_check, classify as gqp_classify, EventRelation};
use gqplab::preference::postulates::check_postulates as run_postulates;
use gqplab::search::{
    check_intersection_conjecture, enumerate_gqps as run_enumerate, sample_gqps as run_sample,
    search_q7_independence, ConjectureVerdict, Q7SearchConfig,
};
use gqplab::{CheckConfig, CheckResult, Error, Postulate, PreferenceStructure, Q5Variant};

const DEFAULT_CAP: usize = 4096;

/// (check, verdict, rendered witness, note)
type ResultRow = (String, String, Option<String>, String);

/// (status, nodes explored, counters)
type VerdictRow = (String, u64, Vec<(String, u64)>);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn row(r: &CheckResult, n: usize) -> ResultRow {
    (
        r.check.clone(),
        r.verdict.to_string(),
        r.witness.as_ref().map(|w| w.render(n)),
        r.note.clone(),
    )
}

fn structure(text: &str) -> PyResult<PreferenceStructure> {
    parse(text).and_then(|d| d.preference_structure(DEFAULT_CAP)).map_err(py_err)
}

fn relation(text: &str) -> PyResult<EventRelation> {
    parse(text).and_then(|d| d.event_relation()).map_err(py_err)
}

fn config(q5: &str) -> PyResult<CheckConfig> {
    let variant = match q5 {
        "nonempty" => Q5Variant::NonEmpty,
        "notnull" => Q5Variant::NotNull,
        other => return Err(PyValueError::new_err(format!("unknown Q5 variant {other:?}"))),
    };
    Ok(CheckConfig::default().with_q5(variant))
}

fn verdict_tuple(v: &ConjectureVerdict) -> VerdictRow {
    (v.status.name().to_owned(), v.nodes_explored, v.stats.clone())
}

/// Checks every postulate on a structure document.
#[pyfunction]
#[pyo3(signature = (text, q5 = "nonempty"))]
fn check_postulates(text: &str, q5: &str) -> PyResult<Vec<ResultRow>> {
    let ps = structure(text)?;
    let results = run_postulates(&ps, &Postulate::ALL, &config(q5)?).map_err(py_err)?;
    Ok(results.iter().map(|r| row(r, ps.n_states())).collect())
}

#[pyfunction]
fn check_gqp(text: &str) -> PyResult<ResultRow> {
    let rel = relation(text)?;
    Ok(row(&gqp_check(&rel), rel.n_states()))
}

/// Derived event relation of a structure document, as relation text.
#[pyfunction]
fn derive(text: &str) -> PyResult<String> {
    let ps = structure(text)?;
    Ok(emit_relation(&derive_relation(&ps).map_err(py_err)?))
}

#[pyfunction]
fn construct(text: &str) -> PyResult<String> {
    let rel = relation(text)?;
    Ok(emit_structure(&construct_preferences(&rel).map_err(py_err)?))
}

/// Whether construction followed by derivation reproduces the relation.
#[pyfunction]
fn round_trip(text: &str) -> PyResult<bool> {
    let rel = relation(text)?;
    let report = bridge_round_trip(&rel, &CheckConfig::default()).map_err(py_err)?;
    Ok(report.is_faithful())
}

/// `(total, standard, purely_nonstandard)`, or `None` for a non-g.q.p.
#[pyfunction]
fn classify(text: &str) -> PyResult<Option<(bool, bool, bool)>> {
    let rel = relation(text)?;
    Ok(gqp_classify(&rel).map(|f| (f.total, f.standard, f.purely_nonstandard)))
}

#[pyfunction]
#[pyo3(signature = (n_states, budget = 1_000_000))]
fn enumerate_gqps(n_states: usize, budget: u64) -> PyResult<(Vec<String>, bool)> {
    let e = run_enumerate(n_states, budget).map_err(py_err)?;
    Ok((e.relations.iter().map(emit_relation).collect(), e.stats.complete))
}

#[pyfunction]
#[pyo3(signature = (n_states, count, seed = 0, budget = 1_000_000))]
fn sample_gqps(n_states: usize, count: usize, seed: u64, budget: u64) -> PyResult<Vec<String>> {
    let e = run_sample(n_states, count, seed, budget).map_err(py_err)?;
    Ok(e.relations.iter().map(emit_relation).collect())
}

#[pyfunction]
#[pyo3(signature = (text, budget = 1_000_000))]
fn intersection_conjecture(text: &str, budget: u64) -> PyResult<VerdictRow> {
    let rel = relation(text)?;
    let v = check_intersection_conjecture(&rel, budget).map_err(py_err)?;
    Ok(verdict_tuple(&v))
}

#[pyfunction]
#[pyo3(signature = (states = 2, consequences = 2, budget = 1_000_000, seed = 0))]
fn q7_search(states: usize, consequences: usize, budget: u64, seed: u64) -> PyResult<VerdictRow> {
    let mut cfg = Q7SearchConfig::new(states, consequences, budget);
    cfg.seed = seed;
    let v = search_q7_independence(&cfg).map_err(py_err)?;
    Ok(verdict_tuple(&v))
}

#[pyfunction]
fn verify_theorem2(text: &str) -> PyResult<ResultRow> {
    let ps = structure(text)?;
    let r = verify_theorem2_all(&ps, &CheckConfig::default()).map_err(py_err)?;
    Ok(row(&r, ps.n_states()))
}

#[pymodule]
fn pygqplab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check_postulates, m)?)?;
    m.add_function(wrap_pyfunction!(check_gqp, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(round_trip, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_gqps, m)?)?;
    m.add_function(wrap_pyfunction!(sample_gqps, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_conjecture, m)?)?;
    m.add_function(wrap_pyfunction!(q7_search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem2, m)?)?;
    Ok(())
}
