//! Python bindings. Records (solutions, reports, assignments) cross the
//! boundary as plain dicts with the same field names as the JSON reports.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::de::DeserializeOwned;
use serde::Serialize;

use shm_core::costs::{self, Assignment, CostOrientation, ObjectiveMode};
use shm_core::model::FunctionKind;
use shm_core::sim::compare::{compare_runs, RunSummary};
use shm_core::sim::frame::{Frame, FrameKind};
use shm_core::sim::functions::{eval_function as eval, FnContext};
use shm_core::sim::trace::{generate_trace, StreamConfig, Trace};
use shm_core::solver::SolverConfig;
use shm_core::{baselines, feasibility, io, model, reference, sim, solver};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(value_err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(value_err)
}

fn orientation(s: &str) -> PyResult<CostOrientation> {
    match s {
        "corrected" => Ok(CostOrientation::Corrected),
        "literal" => Ok(CostOrientation::Literal),
        other => Err(value_err(format!("unknown cost orientation '{other}'"))),
    }
}

fn mode(s: &str) -> PyResult<ObjectiveMode> {
    match s {
        "paper" => Ok(ObjectiveMode::Paper),
        "dedup" => Ok(ObjectiveMode::Dedup),
        other => Err(value_err(format!("unknown objective mode '{other}'"))),
    }
}

fn assignment(w: &model::Workload, obj: &Bound<'_, PyAny>) -> PyResult<Assignment> {
    let a: Assignment = from_py(obj)?;
    costs::derive_sensor_gamma(&a, w).map_err(value_err)
}

#[pyclass(module = "shm_offload", from_py_object)]
#[derive(Clone)]
struct Workload {
    inner: model::Workload,
}

#[pymethods]
impl Workload {
    /// The 63-operator reference workload (latency bounds unset).
    #[staticmethod]
    fn reference() -> Self {
        Workload {
            inner: reference::reference_workload(),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_workload(text)
            .map(|inner| Workload { inner })
            .map_err(|(line, msg)| value_err(format!("line {line}: {msg}")))
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        io::read_workload(path.as_ref()).map(|inner| Workload { inner }).map_err(value_err)
    }

    fn to_text(&self) -> String {
        io::write_workload(&self.inner)
    }

    fn operator_ids(&self) -> Vec<u32> {
        self.inner.operators.iter().map(|o| o.id.0).collect()
    }

    fn sensor_ids(&self) -> Vec<u32> {
        self.inner.sensors.iter().map(|s| s.0).collect()
    }

    fn operator(&self, py: Python<'_>, id: u32) -> PyResult<Py<PyAny>> {
        let op = self
            .inner
            .operator(model::OperatorId(id))
            .ok_or_else(|| value_err(format!("no operator {id}")))?;
        to_py(py, op)
    }

    /// Structural problems as strings; empty when valid.
    fn validate(&self) -> Vec<String> {
        model::validate_workload(&self.inner)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    fn topological_order(&self) -> PyResult<Vec<u32>> {
        model::topological_order(&self.inner)
            .map(|o| o.iter().map(|i| i.0).collect())
            .map_err(|_| value_err("workload has a dependency cycle"))
    }

    /// Copy with unbounded latency requirements set from `profile`.
    #[pyo3(signature = (profile, slack = 0.10, cost_orientation = "corrected"))]
    fn with_treq(&self, profile: &Profile, slack: f64, cost_orientation: &str) -> PyResult<Self> {
        let mut w = self.inner.clone();
        reference::apply_treq_rule(&mut w, &profile.inner, slack, orientation(cost_orientation)?).map_err(value_err)?;
        Ok(Workload { inner: w })
    }

    fn __len__(&self) -> usize {
        self.inner.operators.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Workload({} operators, {} sensors, {} nodes)",
            self.inner.operators.len(),
            self.inner.sensors.len(),
            self.inner.topology.nodes.len()
        )
    }
}

#[pyclass(module = "shm_offload", from_py_object)]
#[derive(Clone)]
struct Profile {
    inner: costs::Profile,
}

#[pymethods]
impl Profile {
    /// Synthetic profile; `bandwidth` in bytes/s overrides the default.
    #[staticmethod]
    #[pyo3(signature = (workload, bandwidth = None))]
    fn generate(workload: &Workload, bandwidth: Option<f64>) -> Self {
        let mut k = reference::ProfileKnobs::default();
        if let Some(b) = bandwidth {
            k.bandwidth = b;
        }
        Profile {
            inner: reference::generate_profile(&workload.inner, &k),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::profile_from_json(text).map(|inner| Profile { inner }).map_err(value_err)
    }

    fn to_json(&self) -> String {
        io::profile_to_json(&self.inner)
    }

    /// Missing or invalid coefficients for `workload`.
    fn check(&self, workload: &Workload) -> Vec<String> {
        self.inner.check_complete(&workload.inner)
    }
}

/// Reference workload with its profile and bounds at `slack`.
#[pyfunction]
#[pyo3(signature = (slack = 0.10))]
fn reference_instance(slack: f64) -> (Workload, Profile) {
    let (w, p) = reference::reference_instance(&Default::default(), slack);
    (Workload { inner: w }, Profile { inner: p })
}

fn solver_config(delta: f64, objective_mode: &str, cost_orientation: &str) -> PyResult<SolverConfig> {
    Ok(SolverConfig {
        delta,
        objective_mode: mode(objective_mode)?,
        cost_orientation: orientation(cost_orientation)?,
        ..SolverConfig::default()
    })
}

#[pyfunction]
#[pyo3(signature = (workload, profile, delta = 0.05, objective_mode = "paper", cost_orientation = "corrected"))]
fn solve(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    delta: f64,
    objective_mode: &str,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let cfg = solver_config(delta, objective_mode, cost_orientation)?;
    let s = py
        .detach(|| solver::solve(&workload.inner, &profile.inner, &cfg))
        .map_err(value_err)?;
    to_py(py, &s)
}

#[pyfunction]
#[pyo3(signature = (workload, profile, delta = 0.25, objective_mode = "paper", cost_orientation = "corrected"))]
fn brute_force(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    delta: f64,
    objective_mode: &str,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let cfg = solver_config(delta, objective_mode, cost_orientation)?;
    let s = solver::brute_force(&workload.inner, &profile.inner, &cfg).map_err(value_err)?;
    to_py(py, &s)
}

#[pyfunction]
#[pyo3(signature = (workload, profile, objective_mode = "paper", cost_orientation = "corrected"))]
fn cloud_only(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    objective_mode: &str,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let cfg = solver_config(0.05, objective_mode, cost_orientation)?;
    to_py(py, &baselines::cloud_only(&workload.inner, &profile.inner, &cfg).map_err(value_err)?)
}

#[pyfunction]
#[pyo3(signature = (workload, profile, objective_mode = "paper", cost_orientation = "corrected"))]
fn edge_only(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    objective_mode: &str,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let cfg = solver_config(0.05, objective_mode, cost_orientation)?;
    to_py(py, &baselines::edge_only(&workload.inner, &profile.inner, &cfg).map_err(value_err)?)
}

/// Every operator at ratio `gamma`, as an assignment dict.
#[pyfunction]
fn uniform_assignment(py: Python<'_>, workload: &Workload, gamma: f64) -> PyResult<Py<PyAny>> {
    to_py(py, &Assignment::uniform(&workload.inner, gamma))
}

#[pyfunction]
fn propagate_composite_gamma(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    assignment: &Bound<'_, PyAny>,
) -> PyResult<Py<PyAny>> {
    let a: Assignment = from_py(assignment)?;
    let out = feasibility::propagate_composite_gamma(&workload.inner, &profile.inner, &a).map_err(value_err)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (workload, profile, assignment, cost_orientation = "corrected"))]
fn check_assignment(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    assignment: &Bound<'_, PyAny>,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let a = self::assignment(&workload.inner, assignment)?;
    let v = feasibility::check_assignment(&workload.inner, &profile.inner, &a, orientation(cost_orientation)?)
        .map_err(value_err)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (workload, profile, assignment, objective_mode = "paper", cost_orientation = "corrected"))]
fn evaluate(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    assignment: &Bound<'_, PyAny>,
    objective_mode: &str,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let a = self::assignment(&workload.inner, assignment)?;
    let r = costs::evaluate(
        &workload.inner,
        &profile.inner,
        &a,
        orientation(cost_orientation)?,
        mode(objective_mode)?,
    )
    .map_err(value_err)?;
    to_py(py, &r)
}

/// Replays a synthetic trace (or the trace file at `trace_path`).
#[pyfunction]
#[pyo3(signature = (workload, profile, assignment, duration_s = 3600.0, seed = 0, trace_path = None, cost_orientation = "corrected"))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    workload: &Workload,
    profile: &Profile,
    assignment: &Bound<'_, PyAny>,
    duration_s: f64,
    seed: u64,
    trace_path: Option<&str>,
    cost_orientation: &str,
) -> PyResult<Py<PyAny>> {
    let a = self::assignment(&workload.inner, assignment)?;
    let trace = match trace_path {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(value_err)?;
            Trace::from_bytes(&bytes).map_err(value_err)?
        }
        None => generate_trace(
            &StreamConfig {
                duration_s,
                seed,
                ..StreamConfig::default()
            },
            workload.inner.sensors.iter().copied(),
        ),
    };
    let cfg = sim::SimConfig {
        cost_orientation: orientation(cost_orientation)?,
        ..sim::SimConfig::default()
    };
    let r = py
        .detach(|| sim::run_sim(&workload.inner, &profile.inner, &a, &trace, &cfg))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &r)
}

/// Comparison table of solve/baseline/simulate records against the first.
/// Simulation dicts from `simulate` may be passed directly.
#[pyfunction]
#[pyo3(signature = (reports, labels = None))]
fn compare(py: Python<'_>, reports: Vec<Bound<'_, PyAny>>, labels: Option<Vec<String>>) -> PyResult<Py<PyAny>> {
    let mut runs = Vec::new();
    for (n, r) in reports.iter().enumerate() {
        let mut v: serde_json::Value = from_py(r)?;
        if v.get("totals").is_some() && v.get("sim").is_none() {
            v = serde_json::json!({ "sim": v });
        }
        let label = labels.as_ref().and_then(|l| l.get(n).cloned()).unwrap_or_else(|| format!("run{n}"));
        runs.push(RunSummary::from_report(&label, &v).map_err(value_err)?);
    }
    to_py(py, &compare_runs(&runs))
}

/// Direct evaluation of a registry function over per-channel windows.
#[pyfunction]
#[pyo3(signature = (name, channels, rate_hz = 10.0, step_s = 1.0))]
fn eval_function(name: &str, channels: Vec<Vec<f64>>, rate_hz: f64, step_s: f64) -> PyResult<Vec<f64>> {
    let f: FunctionKind = name.parse().map_err(value_err)?;
    let c: Vec<&[f64]> = channels.iter().map(Vec::as_slice).collect();
    let ctx = FnContext {
        rate_hz,
        step_s,
        ..FnContext::default()
    };
    Ok(eval(f, &ctx, &c, &[]))
}

#[pyfunction]
fn encode_frame<'py>(
    py: Python<'py>,
    kind: u8,
    op: u32,
    sensor: u32,
    window: u32,
    payload: Vec<f64>,
) -> PyResult<Bound<'py, PyBytes>> {
    let kind = match kind {
        0 => FrameKind::Raw,
        1 => FrameKind::Intermediate,
        2 => FrameKind::Result,
        k => return Err(value_err(format!("unknown frame kind {k}"))),
    };
    let f = Frame {
        kind,
        op,
        sensor,
        window,
        payload,
    };
    Ok(PyBytes::new(py, &f.encode()))
}

/// Decodes one frame; returns `(kind, op, sensor, window, payload, used)`.
#[pyfunction]
fn decode_frame(data: &[u8]) -> PyResult<(u8, u32, u32, u32, Vec<f64>, usize)> {
    let (f, used) = Frame::decode(data).map_err(value_err)?;
    Ok((f.kind as u8, f.op, f.sensor, f.window, f.payload, used))
}

#[pymodule]
fn shm_offload(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Workload>()?;
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(reference_instance, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(cloud_only, m)?)?;
    m.add_function(wrap_pyfunction!(edge_only, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(propagate_composite_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(check_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(eval_function, m)?)?;
    m.add_function(wrap_pyfunction!(encode_frame, m)?)?;
    m.add_function(wrap_pyfunction!(decode_frame, m)?)?;
    m.add("__version__", shm_core::report::TOOL_VERSION)?;
    Ok(())
}
