//! Python module `paradox_lens`.

use std::collections::BTreeMap;

use paradox_lens_core as core;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let list = PyList::empty(py);
            for item in a {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(o) => {
            let dict = PyDict::new(py);
            for (k, item) in o {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialized<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn definition(name: &str) -> PyResult<core::ParadoxDefinition> {
    name.parse().map_err(err)
}

/// Undirected simple graph in CSR form.
#[pyclass(name = "Graph", module = "paradox_lens", frozen)]
struct PyGraph {
    inner: core::Graph,
}

#[pymethods]
impl PyGraph {
    /// Builds a graph on `node_count` nodes; self-loops and duplicate edges are dropped.
    #[new]
    fn new(node_count: usize, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u.max(v) as usize >= node_count) {
            return Err(PyValueError::new_err(format!(
                "edge ({u}, {v}) out of range for {node_count} nodes"
            )));
        }
        Ok(PyGraph {
            inner: core::Graph::from_edges(node_count, edges).0,
        })
    }

    /// Reads a whitespace-separated edge list. Returns `(graph, ingestion_report)`.
    #[staticmethod]
    #[pyo3(signature = (path, symmetrize = true))]
    fn load<'py>(py: Python<'py>, path: std::path::PathBuf, symmetrize: bool) -> PyResult<(Self, Bound<'py, PyAny>)> {
        let (inner, report) = core::load_edge_list_path(path, core::LoadOptions { symmetrize }).map_err(err)?;
        Ok((PyGraph { inner }, serialized(py, &report)?))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.inner.degree_of(v).map_err(err)
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<u32>> {
        self.inner.degree_of(v).map_err(err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges().collect()
    }

    fn write_edge_list(&self, path: std::path::PathBuf) -> PyResult<()> {
        let file = std::fs::File::create(path)?;
        self.inner
            .write_edge_list(std::io::BufWriter::new(file), &[])
            .map_err(err)
    }

    /// `p`, `q`, mean degree, assortativity and `k_c`.
    fn degree_stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let stats = core::degree_stats(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("p", &stats.p)?;
        d.set_item("q", &stats.q)?;
        d.set_item("mean_degree", stats.mean_degree)?;
        d.set_item("assortativity", stats.assortativity)?;
        d.set_item("q_exceed", core::q_exceed_prob(&stats))?;
        d.set_item("k_c", core::critical_degree(&stats))?;
        Ok(d)
    }

    /// Per degree class: `nodes`, `pairs`, `mu`, `cov`, `rho` (None when undefined).
    fn exceedance_profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let profile = core::exceedance_profile(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        for (k, c) in &profile.classes {
            d.set_item(k, serialized(py, c)?)?;
        }
        Ok(d.into_any())
    }

    /// Node counts by `x̄ = j/k` for the degree-`k` class.
    fn xbar_distribution(&self, k: usize) -> PyResult<Vec<u64>> {
        Ok(core::xbar_distribution(&self.inner, k).map_err(err)?.counts)
    }

    #[pyo3(signature = (definition = "median-strict"))]
    fn observed_paradox(&self, definition: &str) -> PyResult<ParadoxProfile> {
        let d = self::definition(definition)?;
        Ok(ParadoxProfile {
            inner: core::observed_paradox(&self.inner, d).map_err(err)?,
        })
    }

    /// Model prediction from statistics measured on this graph: `"2k"`, `"2k-gauss"` or `"3k"`.
    #[pyo3(signature = (model = "3k"))]
    fn predict(&self, model: &str) -> PyResult<ParadoxProfile> {
        let model: core::Model = model.parse().map_err(err)?;
        let inputs = core::ModelInputs::from_graph(&self.inner).map_err(err)?;
        Ok(ParadoxProfile {
            inner: inputs.predict(model).map_err(err)?,
        })
    }

    /// Degree-preserving rewiring toward assortativity `target_r`.
    /// Returns `(graph, achieved_r, reached)`.
    #[pyo3(signature = (target_r, seed, tolerance = 0.01, max_steps = 1_000_000))]
    fn rewire(&self, py: Python<'_>, target_r: f64, seed: u64, tolerance: f64, max_steps: usize) -> PyResult<(PyGraph, f64, bool)> {
        let out = py
            .detach(|| core::rewire_to_assortativity(&self.inner, target_r, tolerance, max_steps, seed))
            .map_err(err)?;
        Ok((PyGraph { inner: out.graph }, out.achieved_r, out.reached))
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

#[pyclass(module = "paradox_lens", frozen)]
struct ParadoxProfile {
    inner: core::ParadoxProfile,
}

#[pymethods]
impl ParadoxProfile {
    #[getter]
    fn global_p(&self) -> f64 {
        self.inner.global_p
    }

    #[getter]
    fn k_c(&self) -> usize {
        self.inner.k_c
    }

    #[getter]
    fn source(&self) -> &'static str {
        self.inner.source.as_str()
    }

    #[getter]
    fn definition(&self) -> &'static str {
        self.inner.definition.as_str()
    }

    /// `{k: f(k)}`.
    #[getter]
    fn f(&self) -> BTreeMap<usize, f64> {
        self.inner.f()
    }

    /// `{k: p(k)}` used as global weights.
    #[getter]
    fn p(&self) -> BTreeMap<usize, f64> {
        self.inner.p()
    }

    #[getter]
    fn clamped_classes(&self) -> Vec<usize> {
        self.inner.clamped_classes()
    }

    /// `(nodes in paradox, non-isolated nodes)` for observed profiles.
    fn observed_ratio(&self) -> Option<(u64, u64)> {
        self.inner.observed_ratio()
    }

    fn __repr__(&self) -> String {
        format!(
            "ParadoxProfile(source={}, global_p={}, classes={})",
            self.inner.source.as_str(),
            self.inner.global_p,
            self.inner.classes.len()
        )
    }
}

/// Bivariate log-normal joint degree model.
#[pyclass(module = "paradox_lens", frozen)]
struct LogNormal {
    inner: core::LogNormalParams,
}

#[pymethods]
impl LogNormal {
    #[new]
    fn new(m: f64, s: f64, c: f64) -> PyResult<Self> {
        Ok(LogNormal {
            inner: core::LogNormalParams::new(m, s, c).map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    fn assortativity(&self) -> f64 {
        self.inner.assortativity()
    }

    fn mu_x(&self, k: f64) -> f64 {
        self.inner.mu_x(k)
    }

    fn f(&self, k: usize) -> f64 {
        self.inner.f(k)
    }

    #[pyo3(signature = (k_max = 10_000))]
    fn global_paradox(&self, py: Python<'_>, k_max: usize) -> PyResult<f64> {
        py.detach(|| core::global_paradox(&self.inner, k_max)).map_err(err)
    }

    /// `(upper, lower)` degrees bracketing the fall of f from `hi` to `lo`.
    #[pyo3(signature = (k_max = 10_000, hi = 0.9, lo = 0.1))]
    fn transition(&self, k_max: usize, hi: f64, lo: f64) -> PyResult<(usize, usize)> {
        let t = core::transition_width(&self.inner, k_max, hi, lo).map_err(err)?;
        Ok((t.upper, t.lower))
    }

    /// Stub-matched graph realizing the discretized model. Returns `(graph, report)`.
    #[pyo3(signature = (nodes, seed, k_max = 10_000))]
    fn generate<'py>(&self, py: Python<'py>, nodes: usize, seed: u64, k_max: usize) -> PyResult<(PyGraph, Bound<'py, PyAny>)> {
        let spec = core::GenerationSpec::new(
            core::Target::LogNormal {
                params: self.inner,
                k_max,
            },
            nodes,
            seed,
        );
        let (g, report) = py.detach(|| core::generate_2k(&spec)).map_err(err)?;
        Ok((PyGraph { inner: g }, serialized(py, &report)?))
    }

    fn __repr__(&self) -> String {
        format!("LogNormal(m={}, s={}, c={})", self.inner.m, self.inner.s, self.inner.c)
    }
}

/// Analytic `(c, r, P_paradox)` triples for each `c`.
#[pyfunction]
#[pyo3(signature = (m, s, c_list, k_max = 10_000))]
fn sweep(py: Python<'_>, m: f64, s: f64, c_list: Vec<f64>, k_max: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    let points = py
        .detach(|| core::sweep_global_paradox(m, s, &c_list, k_max))
        .map_err(err)?;
    Ok(points.into_iter().map(|p| (p.c, p.r, p.p_paradox)).collect())
}

/// Graph with a degree-2K structure given as `{(k, k2): weight}`.
#[pyfunction]
fn generate_2k<'py>(
    py: Python<'py>,
    joint: BTreeMap<(usize, usize), f64>,
    nodes: usize,
    seed: u64,
) -> PyResult<(PyGraph, Bound<'py, PyAny>)> {
    let e = core::JointDegreeDistribution::from_weights(joint).map_err(err)?;
    let spec = core::GenerationSpec::new(core::Target::Joint(e), nodes, seed);
    let (g, report) = py.detach(|| core::generate_2k(&spec)).map_err(err)?;
    Ok((PyGraph { inner: g }, serialized(py, &report)?))
}

#[pyfunction]
#[pyo3(signature = (n_core, n_mid, n_leaf, seed, mid_degree_min = 6, mid_degree_max = 20, beta_low = 0.8, beta_high = 0.2, purity = 0.9))]
#[allow(clippy::too_many_arguments)]
fn generate_core_periphery(
    n_core: usize,
    n_mid: usize,
    n_leaf: usize,
    seed: u64,
    mid_degree_min: usize,
    mid_degree_max: usize,
    beta_low: f64,
    beta_high: f64,
    purity: f64,
) -> PyResult<PyGraph> {
    let wiring = core::CorePeripheryWiring {
        mid_degree_min,
        mid_degree_max,
        beta_low,
        beta_high,
        purity,
    };
    let g = core::generate_core_periphery(n_core, n_mid, n_leaf, &wiring, seed).map_err(err)?;
    Ok(PyGraph { inner: g })
}

#[pymodule]
fn paradox_lens(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGraph>()?;
    m.add_class::<ParadoxProfile>()?;
    m.add_class::<LogNormal>()?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(generate_2k, m)?)?;
    m.add_function(wrap_pyfunction!(generate_core_periphery, m)?)?;
    Ok(())
}
