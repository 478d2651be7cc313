use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cleangraph::export::{export, Format};
use cleangraph::graph::DEFAULT_VERTEX_CAP;
use cleangraph::matching::DEFAULT_BLOSSOM_CAP;
use cleangraph::metrics::{self, Distance};
use cleangraph::report::{self, AnalyzeOptions};
use cleangraph::ring;
use cleangraph::{BuildOptions, CleanGraph, Error, Vertex};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fact(n: u64) -> PyResult<cleangraph::Factorization> {
    ring::factorize(n).map_err(py_err)
}

fn dist(d: Distance) -> Option<u32> {
    d.finite()
}

/// Prime factorization as a list of `(p, a)` pairs.
#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u64, u32)>> {
    Ok(fact(n)?.factors().to_vec())
}

#[pyfunction]
fn idempotents(n: u64) -> PyResult<Vec<u64>> {
    Ok(ring::enumerate_idempotents(&fact(n)?))
}

#[pyfunction]
fn self_inverse_units(n: u64) -> PyResult<Vec<u64>> {
    ring::enumerate_self_inverse_units(&fact(n)?).map_err(py_err)
}

#[pyfunction]
fn count_self_inverse(n: u64) -> PyResult<u64> {
    ring::count_self_inverse_closed(&fact(n)?).map_err(py_err)
}

/// Published closed form; `None` when the graph is disconnected.
#[pyfunction]
fn wiener_closed(n: u64) -> PyResult<Option<u128>> {
    Ok(metrics::wiener_closed(&fact(n)?).map_err(py_err)?.finite())
}

#[pyfunction]
fn wiener_closed_corrected(n: u64) -> PyResult<Option<u128>> {
    Ok(metrics::wiener_closed_corrected(&fact(n)?)
        .map_err(py_err)?
        .finite())
}

#[pyfunction]
fn diameter_closed(n: u64) -> PyResult<Option<u32>> {
    Ok(dist(metrics::diameter_closed(&fact(n)?).map_err(py_err)?))
}

#[pyfunction]
fn matching_number_closed(n: u64) -> PyResult<u64> {
    cleangraph::matching_number_closed(&fact(n)?).map_err(py_err)
}

/// Full report as a dict, via its JSON form.
#[pyfunction]
#[pyo3(signature = (n, oracle=true, vertex_cap=DEFAULT_VERTEX_CAP, blossom_cap=DEFAULT_BLOSSOM_CAP))]
fn analyze(
    py: Python<'_>,
    n: u64,
    oracle: bool,
    vertex_cap: usize,
    blossom_cap: usize,
) -> PyResult<Py<PyAny>> {
    let opts = AnalyzeOptions {
        oracle,
        vertex_cap,
        blossom_cap,
    };
    let (report, _) = py.detach(|| report::analyze(n, &opts)).map_err(py_err)?;
    let text = report.to_json().map_err(py_err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// The clean graph Cl2(Z_n), or Cl(Z_n) with `zero_block=True`.
#[pyclass(name = "CleanGraph", frozen)]
struct PyCleanGraph {
    inner: CleanGraph,
}

#[pymethods]
impl PyCleanGraph {
    #[new]
    #[pyo3(signature = (n, zero_block=false, vertex_cap=DEFAULT_VERTEX_CAP))]
    fn new(n: u64, zero_block: bool, vertex_cap: usize) -> PyResult<Self> {
        let opts = BuildOptions {
            include_zero_block: zero_block,
            vertex_cap,
        };
        Ok(Self {
            inner: cleangraph::build_cl2(n, opts).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn vertices(&self) -> Vec<(u64, u64)> {
        self.inner.vertices().iter().map(|v| (v.e, v.u)).collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn index(&self, e: u64, u: u64) -> Option<usize> {
        self.inner.vertex_index(Vertex { e, u })
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<u32>> {
        if i >= self.inner.vertex_count() {
            return Err(py_err(Error::IndexOutOfRange {
                index: i,
                len: self.inner.vertex_count(),
            }));
        }
        Ok(self.inner.neighbors(i).to_vec())
    }

    fn adjacent(&self, i: usize, j: usize) -> PyResult<bool> {
        self.inner.adjacent(i, j).map_err(py_err)
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    fn distances_from(&self, source: usize) -> PyResult<Vec<Option<u32>>> {
        Ok(metrics::bfs_distances(&self.inner, source)
            .map_err(py_err)?
            .into_iter()
            .map(dist)
            .collect())
    }

    fn wiener(&self, py: Python<'_>) -> Option<u128> {
        py.detach(|| metrics::wiener_bruteforce(&self.inner))
            .finite()
    }

    fn diameter(&self, py: Python<'_>) -> Option<u32> {
        dist(py.detach(|| metrics::diameter(&self.inner)))
    }

    /// Class sums `{S1, S2, S3, S4, T1, T2, T3}` from BFS.
    fn wiener_decomposition(&self, py: Python<'_>) -> PyResult<Vec<(&'static str, u128)>> {
        let d = py
            .detach(|| metrics::wiener_decomposition_oracle(&self.inner))
            .map_err(py_err)?;
        Ok(d.components().to_vec())
    }

    #[pyo3(signature = (cap=DEFAULT_BLOSSOM_CAP))]
    fn maximum_matching(&self, py: Python<'_>, cap: usize) -> PyResult<Vec<(usize, usize)>> {
        let m = py
            .detach(|| cleangraph::maximum_matching(&self.inner, cap))
            .map_err(py_err)?;
        Ok(m.pairs().to_vec())
    }

    fn perfect_matching(&self) -> PyResult<Vec<(usize, usize)>> {
        let m = cleangraph::construct_perfect_matching(&self.inner).map_err(py_err)?;
        Ok(m.pairs().to_vec())
    }

    /// `(valid, perfect)` for a list of index pairs.
    fn verify_matching(&self, pairs: Vec<(usize, usize)>) -> (bool, bool) {
        let check =
            cleangraph::verify_matching(&self.inner, &cleangraph::Matching::from_pairs(pairs));
        (check.valid, check.perfect)
    }

    /// Serialize as `"dot"`, `"csv"` or `"json"`.
    fn export(&self, format: &str) -> PyResult<String> {
        let format: Format = format.parse().map_err(PyValueError::new_err)?;
        let mut buf = Vec::new();
        export(&self.inner, format, &mut buf).map_err(py_err)?;
        String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "CleanGraph(n={}, vertices={}, edges={})",
            self.inner.n(),
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

#[pymodule]
fn cleangraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCleanGraph>()?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(idempotents, m)?)?;
    m.add_function(wrap_pyfunction!(self_inverse_units, m)?)?;
    m.add_function(wrap_pyfunction!(count_self_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(wiener_closed, m)?)?;
    m.add_function(wrap_pyfunction!(wiener_closed_corrected, m)?)?;
    m.add_function(wrap_pyfunction!(diameter_closed, m)?)?;
    m.add_function(wrap_pyfunction!(matching_number_closed, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    Ok(())
}
