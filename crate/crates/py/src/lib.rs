//! Python bindings. Graphs are `derange.Graph` objects; permutations travel
//! as successor lists, partitions as strings like `"6+6+4"` or int lists,
//! and reports as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::Value;

use derange::cycletypes::{self, Budget, ExclusionFamily, Family, Mode, Row, DEFAULT_NODE_BUDGET};
use derange::existence::{self, Caps, HallMethod};
use derange::permutation::GraphPermutation;
use derange::spec::GraphSpec;
use derange::{Error, Partition, PartitionFilter};

create_exception!(derange, CapExceeded, PyRuntimeError, "A node budget or vertex cap was exhausted.");

fn err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } | Error::BudgetExhausted { .. } => CapExceeded::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let items = items.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

#[derive(FromPyObject)]
enum PartitionArg {
    Text(String),
    Parts(Vec<usize>),
}

impl PartitionArg {
    fn parse(self) -> PyResult<Partition> {
        match self {
            PartitionArg::Text(s) => s.parse().map_err(err),
            PartitionArg::Parts(p) => Partition::new(p).map_err(err),
        }
    }
}

fn budget(nodes: u64) -> PyResult<Budget> {
    if nodes == 0 {
        return Err(PyValueError::new_err("budget must be positive"));
    }
    Ok(Budget::nodes(nodes))
}

/// An undirected simple graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "derange", frozen)]
pub struct PyGraph {
    inner: derange::Graph,
    spec: Option<GraphSpec>,
}

impl PyGraph {
    fn wrap(inner: derange::Graph) -> Self {
        PyGraph { inner, spec: None }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        derange::Graph::new(n, &edges).map(PyGraph::wrap).map_err(err)
    }

    /// Builds a graph from a spec such as `rect:4x6`, `torus:3x3` or `file:g.txt`.
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        let parsed: GraphSpec = spec.parse().map_err(err)?;
        let inner = parsed.build().map_err(err)?;
        Ok(PyGraph {
            inner,
            spec: Some(parsed),
        })
    }

    #[staticmethod]
    fn rect(dims: Vec<usize>) -> PyResult<Self> {
        Self::from_spec_value(GraphSpec::Rect(dims))
    }

    #[staticmethod]
    fn mobius(m: usize, n: usize) -> PyResult<Self> {
        Self::from_spec_value(GraphSpec::Mobius(m, n))
    }

    #[staticmethod]
    fn torus(m: usize, n: usize) -> PyResult<Self> {
        Self::from_spec_value(GraphSpec::Torus(m, n))
    }

    #[staticmethod]
    fn cycle(m: usize) -> PyResult<Self> {
        Self::from_spec_value(GraphSpec::Cycle(m))
    }

    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        Self::from_spec_value(GraphSpec::Complete(n))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.inner.label().map(str::to_string)
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.inner.n() && v < self.inner.n() && self.inner.has_edge(u, v)
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    /// Color classes (0/1 per vertex), or `None` if the graph has an odd cycle.
    fn two_color(&self) -> Option<Vec<u8>> {
        self.inner.two_color().map(|b| b.colors().to_vec())
    }

    fn is_bipartite(&self) -> bool {
        self.inner.two_color().is_some()
    }

    fn connected_components(&self) -> Vec<Vec<usize>> {
        self.inner.connected_components()
    }

    /// Isolated vertices and pendant pairs that rule out a derangement.
    fn obstructions<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &self.inner.obstructions())
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        match self.inner.label() {
            Some(l) => format!("Graph({l}, n={}, m={})", self.inner.n(), self.inner.edge_count()),
            None => format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count()),
        }
    }
}

impl PyGraph {
    fn from_spec_value(spec: GraphSpec) -> PyResult<Self> {
        let inner = spec.build().map_err(err)?;
        Ok(PyGraph {
            inner,
            spec: Some(spec),
        })
    }
}

/// A derangement of `graph` as a successor list, or `None`.
#[pyfunction]
fn find_derangement(graph: &PyGraph) -> Option<Vec<usize>> {
    existence::find_derangement(&graph.inner).map(|p| p.succ().to_vec())
}

#[pyfunction]
fn derangement_exists(graph: &PyGraph) -> bool {
    existence::find_derangement(&graph.inner).is_some()
}

/// Hall's condition; `method` is `"matching-deficiency"` or `"brute-independent"`.
#[pyfunction]
#[pyo3(signature = (graph, method = "matching-deficiency", subset_cap = 24))]
fn hall_check<'py>(py: Python<'py>, graph: &PyGraph, method: &str, subset_cap: usize) -> PyResult<Bound<'py, PyAny>> {
    let method: HallMethod = method.parse().map_err(err)?;
    let caps = Caps {
        hall_subsets: subset_cap,
        ..Caps::default()
    };
    report(py, &existence::hall_check(&graph.inner, method, &caps).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (graph, exhaustive_cap = 20))]
fn tutte_check<'py>(py: Python<'py>, graph: &PyGraph, exhaustive_cap: usize) -> PyResult<Bound<'py, PyAny>> {
    let caps = Caps {
        exhaustive: exhaustive_cap,
        ..Caps::default()
    };
    report(py, &existence::tutte_check(&graph.inner, &caps).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (graph, exhaustive_cap = 20))]
fn berge_number(graph: &PyGraph, exhaustive_cap: usize) -> PyResult<usize> {
    let caps = Caps {
        exhaustive: exhaustive_cap,
        ..Caps::default()
    };
    existence::berge_number(&graph.inner, &caps).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (graph, exhaustive_cap = 20))]
fn max_matching(graph: &PyGraph, exhaustive_cap: usize) -> PyResult<Vec<(usize, usize)>> {
    let caps = Caps {
        exhaustive: exhaustive_cap,
        ..Caps::default()
    };
    Ok(existence::max_general_matching(&graph.inner, &caps).map_err(err)?.edges().to_vec())
}

/// Cycle type of a successor list, checked against `graph`.
#[pyfunction]
fn cycle_type(graph: &PyGraph, succ: Vec<usize>) -> PyResult<String> {
    let p = GraphPermutation::new(&graph.inner, succ).map_err(err)?;
    Ok(p.cycle_type().to_string())
}

/// Searches for a derangement with the given cycle type. Returns a dict with
/// `status` (`realized`, `unrealizable` or `cap`), `nodes`, and `succ` when
/// realized.
#[pyfunction]
#[pyo3(signature = (graph, partition, matchless = false, budget = DEFAULT_NODE_BUDGET))]
fn realize<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    partition: PartitionArg,
    matchless: bool,
    budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = partition.parse()?;
    let mode = if matchless { Mode::Matchless } else { Mode::Derangement };
    let b = self::budget(budget)?;
    let g = &graph.inner;
    let result = py.detach(|| cycletypes::realize(g, &p, mode, b)).map_err(err)?;
    report(py, &Row::from_result(p, &result))
}

/// Classification table over all partitions with parts >= 2 (or all-even ones).
#[pyfunction]
#[pyo3(signature = (graph, even = false, budget = DEFAULT_NODE_BUDGET, workers = None))]
fn classify<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    even: bool,
    budget: u64,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let family = if even { Family::Even } else { Family::AllGe2 };
    let b = self::budget(budget)?;
    let g = &graph.inner;
    let table = py.detach(|| cycletypes::classify_all(g, family, b, workers)).map_err(err)?;
    report(py, &table)
}

/// `{"verdict": "universal" | "excluded" | "undetermined", ...}`.
#[pyfunction]
#[pyo3(signature = (graph, even = false, budget = DEFAULT_NODE_BUDGET, workers = None))]
fn universality<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    even: bool,
    budget: u64,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let b = self::budget(budget)?;
    let g = &graph.inner;
    let verdict = py
        .detach(|| {
            if even {
                cycletypes::is_even_universal(g, b, workers)
            } else {
                cycletypes::is_universal(g, b, workers)
            }
        })
        .map_err(err)?;
    report(py, &verdict)
}

/// Partitions of `n` in reverse-lexicographic order, as part lists.
#[pyfunction]
#[pyo3(signature = (n, even = false, min_part = None))]
fn partitions(n: usize, even: bool, min_part: Option<usize>) -> PyResult<Vec<Vec<usize>>> {
    let filter = match (even, min_part) {
        (false, None) => PartitionFilter::All,
        (true, None) => PartitionFilter::Even,
        (false, Some(k)) => PartitionFilter::MinPart(k),
        (true, Some(_)) => return Err(PyValueError::new_err("even and min_part are exclusive")),
    };
    Ok(derange::enumerate_partitions(n, filter)
        .into_iter()
        .map(|p| p.parts().to_vec())
        .collect())
}

/// Largest k with a graph permutation of type (k, 1, ..., 1).
#[pyfunction]
#[pyo3(signature = (graph, budget = DEFAULT_NODE_BUDGET))]
fn longest_cycle(py: Python<'_>, graph: &PyGraph, budget: u64) -> PyResult<usize> {
    let g = &graph.inner;
    py.detach(|| cycletypes::longest_realizable_cycle(g, budget)).map_err(err)
}

/// Checks one instance of a known exclusion family, e.g. `("all-fours", "3,4")`.
#[pyfunction]
#[pyo3(signature = (family, params, budget = DEFAULT_NODE_BUDGET))]
fn verify_family<'py>(py: Python<'py>, family: &str, params: &str, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let fam = ExclusionFamily::parse(family, params).map_err(err)?;
    let b = self::budget(budget)?;
    let r = py.detach(|| cycletypes::verify_exclusion_family(fam, b, None)).map_err(err)?;
    report(py, &r)
}

/// Text drawing of a witness on a graph built from a two-dimensional spec.
#[pyfunction]
fn render(graph: &PyGraph, succ: Vec<usize>) -> PyResult<String> {
    let spec = graph
        .spec
        .as_ref()
        .ok_or_else(|| PyValueError::new_err("render needs a graph built from a board spec"))?;
    let p = GraphPermutation::new(&graph.inner, succ).map_err(err)?;
    derange::render::render_board(spec, &p).map_err(err)
}

#[pymodule]
#[pyo3(name = "derange")]
fn derange_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add("DEFAULT_NODE_BUDGET", DEFAULT_NODE_BUDGET)?;
    m.add_function(wrap_pyfunction!(find_derangement, m)?)?;
    m.add_function(wrap_pyfunction!(derangement_exists, m)?)?;
    m.add_function(wrap_pyfunction!(hall_check, m)?)?;
    m.add_function(wrap_pyfunction!(tutte_check, m)?)?;
    m.add_function(wrap_pyfunction!(berge_number, m)?)?;
    m.add_function(wrap_pyfunction!(max_matching, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_type, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(universality, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(longest_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(verify_family, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    Ok(())
}
