//! Python bindings. Structured results (decompositions, reports, closures)
//! are returned as plain dicts decoded from the library's JSON output.

use std::collections::{BTreeMap, BTreeSet};

use ::bowtie_lab as core;
use core::amalgam::AmalgamCheck;
use core::{Embedding, Error, Vertex};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(
    bowtie_lab,
    BowtieLabError,
    PyValueError,
    "A domain error such as a bowtie or a non-special graph."
);

fn to_py_err(e: Error) -> PyErr {
    if e.is_domain_error() {
        BowtieLabError::new_err((e.to_string(), e.kind(), e.witness()))
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn json_value<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

type Map = BTreeMap<Vertex, Vertex>;

fn embedding(map: Map) -> Embedding {
    Embedding(map)
}

/// An undirected simple graph on integer vertex ids.
#[pyclass(name = "Graph", module = "bowtie_lab", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGraph {
    inner: core::Graph,
}

impl From<core::Graph> for PyGraph {
    fn from(inner: core::Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (vertices, edges))]
    fn new(vertices: Vec<Vertex>, edges: Vec<(Vertex, Vertex)>) -> PyResult<Self> {
        core::Graph::new(vertices, edges)
            .map(Into::into)
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn complete(n: u32) -> Self {
        core::Graph::complete(n).into()
    }

    #[staticmethod]
    fn chimney(height: u32) -> Self {
        core::Graph::chimney(height).into()
    }

    #[staticmethod]
    fn bowtie() -> Self {
        core::Graph::bowtie().into()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::Graph::from_json(text)
            .map(Into::into)
            .map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dot(&self) -> String {
        match core::decompose(&self.inner) {
            Ok(d) => d.to_dot(),
            Err(_) => core::dot::to_dot(&self.inner, &BTreeSet::new()),
        }
    }

    #[getter]
    fn vertices(&self) -> Vec<Vertex> {
        self.inner.vertices().collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.edges().collect()
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.inner.has_edge(u, v)
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

#[pyfunction]
fn contains_bowtie(g: &PyGraph) -> bool {
    core::contains_bowtie(&g.inner)
}

/// `[centre, a, b, u, v]` for the first bowtie found, or None.
#[pyfunction]
fn find_bowtie(g: &PyGraph) -> Option<Vec<Vertex>> {
    core::graph::find_bowtie(&g.inner).map(|w| w.vertices().to_vec())
}

#[pyfunction]
fn is_special(g: &PyGraph) -> bool {
    core::is_special(&g.inner)
}

#[pyfunction]
fn decompose(py: Python<'_>, g: &PyGraph) -> PyResult<Py<PyAny>> {
    json_value(py, &core::decompose(&g.inner).map_err(to_py_err)?)
}

#[pyfunction]
fn specialize(g: &PyGraph) -> PyResult<PyGraph> {
    core::specialize(&g.inner)
        .map(|(s, _)| s.into())
        .map_err(to_py_err)
}

#[pyfunction]
fn enumerate_special(n: u32) -> Vec<PyGraph> {
    core::enumerate_special(n)
        .into_iter()
        .map(Into::into)
        .collect()
}

#[pyfunction]
fn are_isomorphic(g: &PyGraph, h: &PyGraph) -> Option<Map> {
    core::are_isomorphic(&g.inner, &h.inner).map(|e| e.0)
}

#[pyfunction]
fn find_embeddings(source: &PyGraph, target: &PyGraph) -> Vec<Map> {
    core::find_embeddings(&source.inner, &target.inner, None)
        .into_iter()
        .map(|e| e.0)
        .collect()
}

/// Free amalgam over `base`; returns `(graph, left_inclusion, right_inclusion)`.
#[pyfunction]
fn free_amalgam(
    base: &PyGraph,
    left: &PyGraph,
    right: &PyGraph,
    embed_left: Map,
    embed_right: Map,
) -> PyResult<(PyGraph, Map, Map)> {
    let spec = spec(base, left, right, embed_left, embed_right)?;
    let a = core::free_amalgam(&spec);
    Ok((a.graph.into(), a.left.0, a.right.0))
}

fn spec(
    base: &PyGraph,
    left: &PyGraph,
    right: &PyGraph,
    embed_left: Map,
    embed_right: Map,
) -> PyResult<core::AmalgamSpec> {
    core::AmalgamSpec::new(
        base.inner.clone(),
        left.inner.clone(),
        right.inner.clone(),
        embedding(embed_left),
        embedding(embed_right),
    )
    .map_err(to_py_err)
}

/// `{"verified": bool, "amalgam": {...}, "violations": [...]}`.
#[pyfunction]
fn check_special_amalgam(
    py: Python<'_>,
    base: &PyGraph,
    left: &PyGraph,
    right: &PyGraph,
    embed_left: Map,
    embed_right: Map,
) -> PyResult<Py<PyAny>> {
    let check = core::check_special_amalgam(&spec(base, left, right, embed_left, embed_right)?);
    let report = serde_json::json!({
        "verified": matches!(check, AmalgamCheck::Verified(_)),
        "amalgam": check.amalgam(),
        "violations": check.violations(),
    });
    json_value(py, &report)
}

#[pyfunction]
fn disjoint_union(g: &PyGraph, h: &PyGraph) -> PyGraph {
    core::disjoint_union(&g.inner, &h.inner).graph.into()
}

#[pyfunction]
fn special_edges(g: &PyGraph) -> PyResult<Vec<(Vertex, Vertex)>> {
    core::special_edges(&g.inner).map_err(to_py_err)
}

#[pyfunction]
fn acl(py: Python<'_>, g: &PyGraph, vertices: BTreeSet<Vertex>) -> PyResult<Py<PyAny>> {
    json_value(py, &core::acl(&g.inner, &vertices).map_err(to_py_err)?)
}

/// `(graph, automorphism, inclusion, n)`.
#[pyfunction]
fn necklace(g: &PyGraph, map: Map) -> PyResult<(PyGraph, Map, Map, usize)> {
    let p = core::PartialAutomorphism::new(g.inner.clone(), embedding(map)).map_err(to_py_err)?;
    let r = core::necklace(&p).map_err(to_py_err)?;
    Ok((
        r.extended.into(),
        r.automorphism.0,
        r.inclusion.0,
        r.order_n,
    ))
}

/// `(graph, map)` with special domain and range.
#[pyfunction]
fn close_system(g: &PyGraph, map: Map) -> PyResult<(PyGraph, Map)> {
    let p = core::PartialAutomorphism::new(g.inner.clone(), embedding(map)).map_err(to_py_err)?;
    let closed = core::close_system(&p).map_err(to_py_err)?;
    Ok((closed.host().clone().into(), closed.map().0.clone()))
}

/// Returns the approximant as JSON text.
#[pyfunction]
#[pyo3(signature = (cap = 4, budget = 200, seed = 0))]
fn build_approximant(py: Python<'_>, cap: u32, budget: usize, seed: u64) -> PyResult<String> {
    py.detach(|| core::build_approximant(cap, budget, seed))
        .map(|a| a.to_json())
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (approximant, snapshot = 0, cap = 4))]
fn check_extension_property(
    py: Python<'_>,
    approximant: &str,
    snapshot: usize,
    cap: u32,
) -> PyResult<Py<PyAny>> {
    let approx = core::Approximant::from_json(approximant).map_err(to_py_err)?;
    let report = py
        .detach(|| core::check_extension_property(&approx, snapshot, cap))
        .map_err(to_py_err)?;
    json_value(py, &report)
}

/// Returns the witness as JSON text.
#[pyfunction]
#[pyo3(signature = (k = 3))]
fn homogenisability_witness(k: usize) -> PyResult<String> {
    core::homogenisability_witness(core::WitnessConfig { k })
        .map(|w| w.to_json())
        .map_err(to_py_err)
}

#[pyfunction]
fn verify_witness(py: Python<'_>, witness: &str) -> PyResult<Py<PyAny>> {
    let w = core::Witness::from_json(witness).map_err(to_py_err)?;
    json_value(py, &core::verify_witness(&w))
}

#[pymodule]
#[pyo3(name = "bowtie_lab")]
fn bowtie_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BowtieLabError", m.py().get_type::<BowtieLabError>())?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(contains_bowtie, m)?)?;
    m.add_function(wrap_pyfunction!(find_bowtie, m)?)?;
    m.add_function(wrap_pyfunction!(is_special, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(specialize, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_special, m)?)?;
    m.add_function(wrap_pyfunction!(are_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(find_embeddings, m)?)?;
    m.add_function(wrap_pyfunction!(free_amalgam, m)?)?;
    m.add_function(wrap_pyfunction!(check_special_amalgam, m)?)?;
    m.add_function(wrap_pyfunction!(disjoint_union, m)?)?;
    m.add_function(wrap_pyfunction!(special_edges, m)?)?;
    m.add_function(wrap_pyfunction!(acl, m)?)?;
    m.add_function(wrap_pyfunction!(necklace, m)?)?;
    m.add_function(wrap_pyfunction!(close_system, m)?)?;
    m.add_function(wrap_pyfunction!(build_approximant, m)?)?;
    m.add_function(wrap_pyfunction!(check_extension_property, m)?)?;
    m.add_function(wrap_pyfunction!(homogenisability_witness, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    Ok(())
}
