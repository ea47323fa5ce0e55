//! Python bindings: matrices, engines, gadgets, oracles and the campaign
//! commands. Bits cross the boundary as lists of 0/1 ints, rationals as
//! `fractions.Fraction`.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use omv::dynoracles::{densest_subgraph_exact, DynGraph};
use omv::engines::{EngineSpec, OmvEngine};
use omv::gadgets::{self, GadgetConfig, GadgetKind, UndoMode};
use omv::harness::{self, Campaign};
use omv::oumv::{list_witnesses, DirectOuMv, OuMvOracle};
use omv::{BoolMatrix, BoolVector, Error, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::Gap { .. } | Error::Resource(_) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn fraction(py: Python<'_>, r: Rational) -> PyResult<Py<PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    Ok(cls.call1((*r.numer(), *r.denom()))?.unbind())
}

fn rational(text: &str) -> PyResult<Rational> {
    harness::parse_fraction(text).map_err(py_err)
}

fn vector(bits: &[u8]) -> PyResult<BoolVector> {
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(PyValueError::new_err(format!("bit value {b} is not 0 or 1")));
    }
    Ok(BoolVector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()))
}

fn bits(v: &BoolVector) -> Vec<u32> {
    v.iter().map(u32::from).collect()
}

fn pairs(us: Vec<Vec<u8>>, vs: Vec<Vec<u8>>) -> PyResult<Vec<(BoolVector, BoolVector)>> {
    if us.len() != vs.len() {
        return Err(PyValueError::new_err(format!("{} u vectors but {} v vectors", us.len(), vs.len())));
    }
    us.iter().zip(&vs).map(|(u, v)| Ok((vector(u)?, vector(v)?))).collect()
}

/// Bit-packed Boolean matrix.
#[pyclass(name = "Matrix", module = "omv_py", from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: BoolMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<u8>>) -> PyResult<Self> {
        let rows = rows.iter().map(|r| vector(r)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyMatrix { inner: BoolMatrix::from_rows(rows).map_err(py_err)? })
    }

    /// "n1 n2" header followed by rows of 0/1.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyMatrix { inner: BoolMatrix::parse(text).map_err(py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n1, n2, density = "1/2", seed = 0))]
    fn random(n1: usize, n2: usize, density: &str, seed: u64) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(PyMatrix { inner: BoolMatrix::random(&mut rng, n1, n2, rational(density)?) })
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.n1(), self.inner.n2())
    }

    fn get(&self, i: usize, j: usize) -> PyResult<bool> {
        if i >= self.inner.n1() || j >= self.inner.n2() {
            return Err(PyValueError::new_err(format!("index ({i}, {j}) outside {:?}", self.shape())));
        }
        Ok(self.inner.get(i, j))
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.inner.rows().iter().map(bits).collect()
    }

    fn count_ones(&self) -> usize {
        self.inner.count_ones()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn mat_vec(&self, v: Vec<u8>) -> PyResult<Vec<u32>> {
        Ok(bits(&omv::mat_vec(&self.inner, &vector(&v)?).map_err(py_err)?))
    }

    fn vec_mat_vec(&self, u: Vec<u8>, v: Vec<u8>) -> PyResult<bool> {
        omv::vec_mat_vec(&vector(&u)?, &self.inner, &vector(&v)?).map_err(py_err)
    }

    /// Indices `i` with `u_i = 1` and `(Mv)_i = 1`, found by binary search
    /// through an OuMv oracle; returns `(witnesses, queries)`.
    fn witnesses(&self, u: Vec<u8>, v: Vec<u8>) -> PyResult<(Vec<usize>, usize)> {
        let mut o = DirectOuMv::new();
        o.preprocess(&self.inner).map_err(py_err)?;
        let w = list_witnesses(&mut o, &vector(&u)?, &vector(&v)?).map_err(py_err)?;
        Ok((w.indices.into_iter().collect(), o.queries_used()))
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{}, ones={})", self.inner.n1(), self.inner.n2(), self.inner.count_ones())
    }
}

/// An OMv engine built from a spec string such as `lookup:8` or
/// `tiled:16,16:naive`.
#[pyclass(name = "Engine", module = "omv_py", unsendable)]
struct PyEngine {
    spec: String,
    inner: Box<dyn OmvEngine>,
}

#[pymethods]
impl PyEngine {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let parsed: EngineSpec = spec.parse().map_err(py_err)?;
        Ok(PyEngine { spec: parsed.to_string(), inner: parsed.build().map_err(py_err)? })
    }

    fn preprocess(&mut self, m: &PyMatrix) -> PyResult<()> {
        self.inner.preprocess(&m.inner).map_err(py_err)
    }

    fn next(&mut self, v: Vec<u8>) -> PyResult<Vec<u32>> {
        Ok(bits(&self.inner.next(&vector(&v)?).map_err(py_err)?))
    }

    fn reset(&mut self) {
        self.inner.reset_to_preprocessed();
    }

    #[getter]
    fn table_bytes(&self) -> usize {
        self.inner.stats().table_bytes
    }

    #[getter]
    fn spec(&self) -> &str {
        &self.spec
    }
}

fn gadget_kind(name: &str) -> PyResult<GadgetKind> {
    name.parse().map_err(py_err)
}

/// Names of every reduction gadget.
#[pyfunction]
fn gadget_names() -> Vec<&'static str> {
    GadgetKind::ALL.iter().map(|k| k.name()).collect()
}

/// Runs a gadget over the pair stream and returns its record as a dict.
#[pyfunction]
#[pyo3(signature = (kind, m, us, vs, undo_mode = "undo", epsilon = "1", delta = None, engine = "naive", fault = None))]
#[allow(clippy::too_many_arguments)]
fn run_gadget<'py>(
    py: Python<'py>,
    kind: &str,
    m: &PyMatrix,
    us: Vec<Vec<u8>>,
    vs: Vec<Vec<u8>>,
    undo_mode: &str,
    epsilon: &str,
    delta: Option<&str>,
    engine: &str,
    fault: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = GadgetConfig {
        epsilon: rational(epsilon)?,
        delta: delta.map(rational).transpose()?,
        undo_mode: undo_mode.parse::<UndoMode>().map_err(py_err)?,
        engine: engine.parse().map_err(py_err)?,
        fault,
        ..Default::default()
    };
    let run = gadgets::run_gadget(gadget_kind(kind)?, &m.inner, &pairs(us, vs)?, &cfg).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("kind", run.kind.name())?;
    d.set_item("recovered", &run.recovered)?;
    d.set_item("updates_used", run.updates_used)?;
    d.set_item("queries_used", run.queries_used)?;
    d.set_item("budget_updates", run.budget_updates)?;
    d.set_item("budget_queries", run.budget_queries)?;
    d.set_item("within_budget", run.within_budget())?;
    d.set_item("audit_mismatches", run.audit_mismatches().count())?;
    let per_round: Vec<(usize, usize)> = run.per_round.iter().map(|c| (c.updates, c.queries)).collect();
    d.set_item("per_round", per_round)?;
    let measured = run
        .audit
        .iter()
        .map(|a| a.measured.map(|r| fraction(py, r)).transpose())
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("measured", measured)?;
    let derived = PyDict::new(py);
    for (k, v) in &run.derived {
        derived.set_item(*k, *v)?;
    }
    d.set_item("derived", derived)?;
    d.set_item("record", run.to_record())?;
    Ok(d)
}

/// Exact maximum density `|E(S)|/|S|` and a witness set.
#[pyfunction]
fn densest_subgraph(py: Python<'_>, n: usize, edges: Vec<(usize, usize)>) -> PyResult<(Py<PyAny>, Vec<usize>)> {
    let g = DynGraph::from_edges(n, false, &edges).map_err(py_err)?;
    let (rho, set) = densest_subgraph_exact(&g).map_err(py_err)?;
    Ok((fraction(py, rho)?, set))
}

/// Replays an op script against a named oracle; same output as `omv replay`.
#[pyfunction]
#[pyo3(signature = (oracle, graph, script, source = 0))]
fn replay(oracle: &str, graph: &str, script: &str, source: usize) -> PyResult<String> {
    harness::replay(oracle, graph, script, source).map_err(py_err)
}

#[allow(clippy::too_many_arguments)]
fn campaign(
    seed: u64,
    trials: usize,
    sizes: &str,
    density: &str,
    targets: &str,
    undo_mode: &str,
    epsilon: &str,
    delta: Option<&str>,
    inject_faults: bool,
) -> PyResult<Campaign> {
    Ok(Campaign {
        seed,
        trials,
        sizes: harness::parse_sizes(sizes).map_err(py_err)?,
        density: rational(density)?,
        targets: harness::parse_targets(targets).map_err(py_err)?,
        undo_mode: undo_mode.parse().map_err(py_err)?,
        epsilon: rational(epsilon)?,
        delta: delta.map(rational).transpose()?,
        inject_faults,
    })
}

/// Verification campaign; returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (seed = 0, trials = 1, sizes = "8x8x8", density = "1/2", targets = "gadgets", undo_mode = "undo", epsilon = "1", delta = None, inject_faults = false))]
#[allow(clippy::too_many_arguments)]
fn verify(
    seed: u64,
    trials: usize,
    sizes: &str,
    density: &str,
    targets: &str,
    undo_mode: &str,
    epsilon: &str,
    delta: Option<&str>,
    inject_faults: bool,
) -> PyResult<(bool, String)> {
    let c = campaign(seed, trials, sizes, density, targets, undo_mode, epsilon, delta, inject_faults)?;
    let report = harness::cmd_verify(&c).map_err(py_err)?;
    Ok((report.passed(), report.to_text()))
}

/// Benchmark sweep; returns the CSV text.
#[pyfunction(name = "bench")]
#[pyo3(signature = (seed = 0, trials = 1, sizes = "8x8x8", density = "1/2", targets = "naive,lookup"))]
fn bench_sweep(seed: u64, trials: usize, sizes: &str, density: &str, targets: &str) -> PyResult<String> {
    let c = campaign(seed, trials, sizes, density, targets, "undo", "1", None, false)?;
    let rows = harness::cmd_bench(&c).map_err(py_err)?;
    harness::bench_csv(&rows).map_err(py_err)
}

/// Summary of a bench CSV.
#[pyfunction]
fn report(csv: &str) -> PyResult<String> {
    harness::cmd_report(csv).map_err(py_err)
}

#[pymodule]
fn omv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(gadget_names, m)?)?;
    m.add_function(wrap_pyfunction!(run_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(densest_subgraph, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(bench_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
