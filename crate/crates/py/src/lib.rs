//! Python bindings: `ψ` and path enumeration, graphs, the painting-game
//! solver, list colouring and the verification sweeps.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dyckpaint::choose::{self, Kappa, ListAssignment};
use dyckpaint::graphcore::{self, SimpleGraph, TokenMap};
use dyckpaint::paintgame;
use dyckpaint::pathcount::{self, Method, DEFAULT_PATH_CAP};
use dyckpaint::verify;

create_exception!(dyckpaint_py, CapExceeded, PyRuntimeError);

fn err(e: dyckpaint::Error) -> PyErr {
    if e.is_cap() {
        CapExceeded::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(err)
}

fn tokens(f: Vec<u32>) -> PyResult<TokenMap> {
    TokenMap::new(f).map_err(err)
}

/// Integer vector `x` for path counting.
#[pyclass(name = "XVector", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyXVector(pathcount::XVector);

#[pymethods]
impl PyXVector {
    #[new]
    fn new(entries: Vec<i64>) -> Self {
        PyXVector(pathcount::XVector::new(entries))
    }

    /// `x(f)` for a weakly increasing token vector.
    #[staticmethod]
    fn from_tokens(f: Vec<i64>) -> PyResult<Self> {
        pathcount::x_of_f(&f).map(PyXVector).map_err(err)
    }

    #[getter]
    fn entries(&self) -> Vec<i64> {
        self.0.entries().to_vec()
    }

    fn reduce(&self) -> Self {
        PyXVector(self.0.reduce())
    }

    fn is_reduced(&self) -> bool {
        self.0.is_reduced()
    }

    /// `(x→i, x↑i)` for 1-based `i`.
    fn branch(&self, i: usize) -> PyResult<(Self, Self)> {
        let (a, b) = self.0.branch(i).map_err(err)?;
        Ok((PyXVector(a), PyXVector(b)))
    }

    #[pyo3(signature = (method = "auto"))]
    fn psi(&self, method: &str) -> PyResult<BigUint> {
        Ok(pathcount::psi(&self.0, self::method(method)?).0)
    }

    #[pyo3(signature = (cap = DEFAULT_PATH_CAP))]
    fn paths(&self, cap: u64) -> PyResult<Vec<String>> {
        let paths = pathcount::enumerate_paths(&self.0, cap).map_err(err)?;
        Ok(paths.iter().map(|p| p.to_string()).collect())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("XVector([{}])", self.0)
    }
}

/// Simple undirected graph.
#[pyclass(name = "Graph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(SimpleGraph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        SimpleGraph::from_edges(n, &edges).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph(SimpleGraph::complete(n))
    }

    #[staticmethod]
    fn edgeless(n: usize) -> Self {
        PyGraph(SimpleGraph::edgeless(n))
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph(SimpleGraph::path(n))
    }

    #[getter]
    fn n_vertices(&self) -> usize {
        self.0.n_vertices()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.0.n_vertices() {
            return Err(err(dyckpaint::Error::IndexOutOfRange { index: v, len: self.0.n_vertices() }));
        }
        Ok(self.0.degree(v))
    }

    fn join(&self, other: &PyGraph) -> Self {
        PyGraph(self.0.join(&other.0))
    }

    fn disjoint_union(&self, other: &PyGraph) -> Self {
        PyGraph(self.0.disjoint_union(&other.0))
    }

    /// `G ⊕ K̄_m` with the extended token list.
    fn join_instance(&self, f: Vec<u32>, m: usize) -> PyResult<(Self, Vec<u32>)> {
        let (g, t) = graphcore::join_instance(&self.0, &tokens(f)?, m).map_err(err)?;
        Ok((PyGraph(g), t.values().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("Graph({}, {:?})", self.0.n_vertices(), self.0.edges())
    }
}

#[pyfunction]
#[pyo3(signature = (x, method = "auto"))]
fn psi(x: Vec<i64>, method: &str) -> PyResult<BigUint> {
    Ok(pathcount::psi(&pathcount::XVector::new(x), self::method(method)?).0)
}

#[pyfunction]
fn reduce(x: Vec<i64>) -> Vec<i64> {
    pathcount::XVector::new(x).reduce().entries().to_vec()
}

#[pyfunction]
fn x_of_f(f: Vec<i64>) -> PyResult<Vec<i64>> {
    pathcount::x_of_f(&f).map(|x| x.entries().to_vec()).map_err(err)
}

#[pyfunction]
fn catalan(n: u64) -> BigUint {
    pathcount::catalan(n).0
}

/// Dominated paths as `R`/`U` strings, or as lists of 1-based up-step
/// positions with `encode=True`.
#[pyfunction(name = "enumerate_paths")]
#[pyo3(signature = (x, encode = false, cap = DEFAULT_PATH_CAP))]
fn py_enumerate_paths(py: Python<'_>, x: Vec<i64>, encode: bool, cap: u64) -> PyResult<Vec<Py<PyAny>>> {
    let paths = pathcount::enumerate_paths(&pathcount::XVector::new(x), cap).map_err(err)?;
    paths
        .iter()
        .map(|p| {
            if encode {
                Ok(p.encode().into_iter().collect::<Vec<usize>>().into_pyobject(py)?.into_any().unbind())
            } else {
                Ok(p.to_string().into_pyobject(py)?.into_any().unbind())
            }
        })
        .collect()
}

#[pyfunction]
fn is_paintable(g: &PyGraph, f: Vec<u32>) -> PyResult<bool> {
    paintgame::is_paintable(&g.0, &tokens(f)?).map_err(err)
}

#[pyfunction]
fn m_p(py: Python<'_>, g: &PyGraph, f: Vec<u32>) -> PyResult<u64> {
    let f = tokens(f)?;
    py.detach(|| paintgame::m_p(&g.0, &f)).map_err(err)
}

/// `(cond1, cond2)` of the join criterion at `m`.
#[pyfunction]
fn lemma3_conditions(g: &PyGraph, f: Vec<u32>, m: i64) -> PyResult<(bool, bool)> {
    paintgame::lemma3_conditions(&g.0, &tokens(f)?, m).map_err(err)
}

#[pyfunction]
fn prune(g: &PyGraph, f: Vec<u32>) -> PyResult<(PyGraph, Vec<u32>)> {
    let (pg, pf) = paintgame::prune(&g.0, &tokens(f)?).map_err(err)?;
    Ok((PyGraph(pg), pf.values().to_vec()))
}

fn lists(l: Vec<Vec<u32>>) -> ListAssignment {
    ListAssignment::new(l.into_iter().map(|v| v.into_iter().collect()).collect())
}

fn kappa_to_py(py: Python<'_>, k: Kappa) -> PyResult<Py<PyAny>> {
    Ok(match k {
        Kappa::Finite(v) => v.into_pyobject(py)?.into_any().unbind(),
        Kappa::Infinite => f64::INFINITY.into_pyobject(py)?.into_any().unbind(),
    })
}

#[pyfunction]
fn is_colorable(g: &PyGraph, l: Vec<Vec<u32>>) -> PyResult<bool> {
    choose::is_colorable(&g.0, &lists(l)).map_err(err)
}

/// `(Φ, κ)`; `κ` is `float("inf")` when some colouring repeats a colour.
#[pyfunction]
fn phi_kappa(py: Python<'_>, g: &PyGraph, l: Vec<Vec<u32>>) -> PyResult<(Vec<BTreeSet<u32>>, Py<PyAny>)> {
    let (phi, k) = choose::phi_kappa(&g.0, &lists(l)).map_err(err)?;
    Ok((phi.into_iter().collect(), kappa_to_py(py, k)?))
}

#[pyfunction]
fn is_m_extendable(g: &PyGraph, l: Vec<Vec<u32>>, m: u64) -> PyResult<bool> {
    choose::is_m_extendable(&g.0, &lists(l), m).map_err(err)
}

#[pyfunction]
fn m_c_small(py: Python<'_>, g: &PyGraph, f: Vec<u32>) -> PyResult<Py<PyAny>> {
    let k = choose::m_c_small(&g.0, &tokens(f)?).map_err(err)?;
    kappa_to_py(py, k)
}

/// `(graph, lists)` for the uncolourable join built from `f`.
#[pyfunction]
fn lemma2_assignment(f: Vec<u32>) -> PyResult<(PyGraph, Vec<Vec<u32>>)> {
    let bad = choose::lemma2_assignment(&tokens(f)?).map_err(err)?;
    Ok((PyGraph(bad.graph), bad.lists.lists.into_iter().map(|l| l.into_iter().collect()).collect()))
}

/// Runs a sweep by name (`thm1`, `thm2`, `mult`, `p3`, `duel`, `badlists`)
/// and returns the report as JSON text.
#[pyfunction]
#[pyo3(signature = (which, n_max = 3, f_max = 3, arity = 2, psi_max = 200))]
fn verify_report(py: Python<'_>, which: &str, n_max: usize, f_max: u32, arity: usize, psi_max: u64) -> PyResult<String> {
    let which = which.to_string();
    let report = py.detach(move || match which.as_str() {
        "thm1" => Ok(verify::verify_theorem1(n_max, f_max)),
        "thm2" => Ok(verify::verify_theorem2(n_max, f_max)),
        "mult" => Ok(verify::verify_multiplicativity(&verify::default_catalog(f_max), arity)),
        "p3" => Ok(verify::explore_p3(f_max)),
        "duel" => Ok(verify::verify_duels(n_max, f_max)),
        "badlists" => Ok(verify::verify_bad_lists(n_max, f_max, psi_max)),
        other => Err(PyValueError::new_err(format!("unknown sweep {other:?}"))),
    })?;
    Ok(report.to_json())
}

#[pymodule]
fn dyckpaint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add_class::<PyXVector>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(x_of_f, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(py_enumerate_paths, m)?)?;
    m.add_function(wrap_pyfunction!(is_paintable, m)?)?;
    m.add_function(wrap_pyfunction!(m_p, m)?)?;
    m.add_function(wrap_pyfunction!(lemma3_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(prune, m)?)?;
    m.add_function(wrap_pyfunction!(is_colorable, m)?)?;
    m.add_function(wrap_pyfunction!(phi_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(is_m_extendable, m)?)?;
    m.add_function(wrap_pyfunction!(m_c_small, m)?)?;
    m.add_function(wrap_pyfunction!(lemma2_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report, m)?)?;
    Ok(())
}
