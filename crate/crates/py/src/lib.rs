//! Python bindings. Errors surface as `qpart.QpartError` (a `ValueError`
//! subclass) whose message starts with the stable error kind.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qpart_core::experiment::TopologyKind;
use qpart_core::{self as core, CostBreakdown, InitMode, PenaltyMode, RunRecord};

create_exception!(qpart, QpartError, PyValueError);

fn err(e: core::Error) -> PyErr {
    QpartError::new_err(format!("{}: {e}", e.kind()))
}

fn penalty_mode(name: &str) -> PyResult<PenaltyMode> {
    match name {
        "per_pair" => Ok(PenaltyMode::PerPair),
        "per_time_step" => Ok(PenaltyMode::PerTimeStep),
        other => Err(QpartError::new_err(format!(
            "invalid_parameter: unknown penalty mode {other:?}"
        ))),
    }
}

fn init_mode(name: &str) -> PyResult<InitMode> {
    match name {
        "feasible_column" => Ok(InitMode::FeasibleColumn),
        "uniform" => Ok(InitMode::Uniform),
        "best_baseline" => Ok(InitMode::BestBaseline),
        other => Err(QpartError::new_err(format!(
            "invalid_parameter: unknown init mode {other:?}"
        ))),
    }
}

fn breakdown<'py>(py: Python<'py>, c: &CostBreakdown) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("remote_cx_cost", c.remote_cx_cost)?;
    d.set_item("teleport_cost", c.teleport_cost)?;
    d.set_item("penalty_count", c.penalty_count)?;
    d.set_item("total", c.total)?;
    Ok(d)
}

fn record<'py>(py: Python<'py>, r: RunRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("solver", &r.solver)?;
    d.set_item("seed", r.seed)?;
    d.set_item("final_cost", breakdown(py, &r.final_cost)?)?;
    let trace: Vec<(usize, u64, u64, Option<f64>)> = r
        .trace
        .iter()
        .map(|p| (p.iter, p.current_cost, p.best_cost, p.temperature))
        .collect();
    d.set_item("trace", trace)?;
    d.set_item("wall_clock_secs", r.wall_clock_secs)?;
    d.set_item("schedule", Schedule { inner: r.schedule })?;
    Ok(d)
}

/// A gate-list circuit together with its ASAP layering.
#[pyclass(frozen)]
struct Circuit {
    raw: core::Circuit,
    layered: core::LayeredCircuit,
}

impl Circuit {
    fn wrap(raw: core::Circuit) -> Self {
        let layered = core::layerize(&raw);
        Circuit { raw, layered }
    }
}

#[pymethods]
impl Circuit {
    #[staticmethod]
    #[pyo3(signature = (qubits, depth, cx_fraction = core::circuit::DEFAULT_CX_FRACTION, seed = 0))]
    fn generate(qubits: usize, depth: usize, cx_fraction: f64, seed: u64) -> PyResult<Self> {
        core::generate_random(qubits, depth, cx_fraction, seed)
            .map(Circuit::wrap)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::Circuit::from_json(text).map(Circuit::wrap).map_err(err)
    }

    fn to_json(&self) -> String {
        self.raw.to_json()
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.raw.num_qubits()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.layered.depth()
    }

    #[getter]
    fn cx_count(&self) -> usize {
        self.layered.cx_count()
    }

    /// CX pairs of layer `t`.
    fn cx_pairs(&self, t: usize) -> PyResult<Vec<(usize, usize)>> {
        if t >= self.layered.depth() {
            return Err(QpartError::new_err(format!(
                "invalid_parameter: layer {t} out of range"
            )));
        }
        Ok(self.layered.cx_pairs(t).to_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(qubits={}, depth={}, cx={})",
            self.raw.num_qubits(),
            self.layered.depth(),
            self.layered.cx_count()
        )
    }
}

#[pyclass(frozen)]
struct Network {
    inner: core::Network,
}

fn topology(
    name: &str,
    nodes: usize,
    rows: Option<usize>,
    cols: Option<usize>,
    edges: Option<Vec<(usize, usize)>>,
) -> PyResult<core::Topology> {
    let kind = match name {
        "ring" => TopologyKind::Ring,
        "grid" => TopologyKind::Grid,
        "star" => TopologyKind::Star,
        "custom" => {
            return Ok(core::Topology::Custom {
                edges: edges.unwrap_or_default(),
            })
        }
        other => {
            return Err(QpartError::new_err(format!(
                "invalid_parameter: unknown topology {other:?}"
            )))
        }
    };
    kind.resolve(nodes, rows, cols).map_err(err)
}

#[pymethods]
impl Network {
    #[new]
    #[pyo3(signature = (topology_name, capacities, rows = None, cols = None, edges = None))]
    fn new(
        topology_name: &str,
        capacities: Vec<usize>,
        rows: Option<usize>,
        cols: Option<usize>,
        edges: Option<Vec<(usize, usize)>>,
    ) -> PyResult<Self> {
        let topo = topology(topology_name, capacities.len(), rows, cols, edges)?;
        core::Network::new(topo, capacities)
            .map(|inner| Network { inner })
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (topology_name, nodes, cap_min, cap_max, min_total = None, seed = 0))]
    fn generate(
        topology_name: &str,
        nodes: usize,
        cap_min: usize,
        cap_max: usize,
        min_total: Option<usize>,
        seed: u64,
    ) -> PyResult<Self> {
        let topo = topology(topology_name, nodes, None, None, None)?;
        let min_total = min_total.unwrap_or(nodes.saturating_mul(cap_min));
        let caps = core::generate_capacities(nodes, cap_min, cap_max, min_total, seed).map_err(err)?;
        core::Network::new(topo, caps)
            .map(|inner| Network { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::Network::from_json(text)
            .map(|inner| Network { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }

    #[getter]
    fn capacities(&self) -> Vec<usize> {
        self.inner.capacities().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn diameter(&self) -> u32 {
        self.inner.diameter()
    }

    fn dist(&self, a: usize, b: usize) -> PyResult<u32> {
        let n = self.inner.num_nodes();
        if a >= n || b >= n {
            return Err(QpartError::new_err(format!(
                "invalid_parameter: node out of range for {n} nodes"
            )));
        }
        Ok(self.inner.dist(a, b))
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(topology={:?}, nodes={}, total_capacity={})",
            self.inner.topology().name(),
            self.inner.num_nodes(),
            self.inner.total_capacity()
        )
    }
}

/// Qubit-by-time-step assignment matrix.
#[pyclass(frozen)]
struct Schedule {
    inner: core::AssignmentSchedule,
}

#[pymethods]
impl Schedule {
    #[new]
    fn new(rows: Vec<Vec<usize>>) -> PyResult<Self> {
        core::AssignmentSchedule::from_rows(&rows)
            .map(|inner| Schedule { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::AssignmentSchedule::from_json(text)
            .map(|inner| Schedule { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        self.inner.rows()
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    #[getter]
    fn num_steps(&self) -> usize {
        self.inner.num_steps()
    }

    fn __eq__(&self, other: &Schedule) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Schedule({:?})", self.inner.rows())
    }
}

#[pyfunction]
#[pyo3(signature = (schedule, circuit, network, lam = core::DEFAULT_LAMBDA, penalty = "per_pair"))]
fn cost<'py>(
    py: Python<'py>,
    schedule: &Schedule,
    circuit: &Circuit,
    network: &Network,
    lam: u64,
    penalty: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let model = core::CostModel::new(&circuit.layered, &network.inner, lam).with_penalty_mode(penalty_mode(penalty)?);
    breakdown(py, &model.cost(&schedule.inner).map_err(err)?)
}

#[pyfunction]
fn successive_assignment(circuit: &Circuit, network: &Network) -> PyResult<Schedule> {
    core::successive_assignment(circuit.layered.num_qubits(), circuit.layered.depth(), &network.inner)
        .map(|inner| Schedule { inner })
        .map_err(err)
}

#[pyfunction]
fn capacity_based_assignment(circuit: &Circuit, network: &Network) -> PyResult<Schedule> {
    core::capacity_based_assignment(circuit.layered.num_qubits(), circuit.layered.depth(), &network.inner)
        .map(|inner| Schedule { inner })
        .map_err(err)
}

#[pyfunction]
fn acceptance_probability(neighbor: f64, current: f64, temp: f64) -> f64 {
    core::acceptance_probability(neighbor, current, temp)
}

#[pyfunction]
#[pyo3(signature = (circuit, network, *, seed = 0, max_iterations = None, initial_temp = None, cooling_rate = None, lam = core::DEFAULT_LAMBDA, init = None))]
#[allow(clippy::too_many_arguments)]
fn run_sa<'py>(
    py: Python<'py>,
    circuit: &Circuit,
    network: &Network,
    seed: u64,
    max_iterations: Option<usize>,
    initial_temp: Option<f64>,
    cooling_rate: Option<f64>,
    lam: u64,
    init: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = core::SaConfig::default();
    let cfg = core::SaConfig {
        seed,
        lambda: lam,
        max_iterations: max_iterations.unwrap_or(d.max_iterations),
        initial_temp: initial_temp.unwrap_or(d.initial_temp),
        cooling_rate: cooling_rate.unwrap_or(d.cooling_rate),
        init_mode: init.map(init_mode).transpose()?.unwrap_or(d.init_mode),
        ..d
    };
    let rec = py
        .detach(|| core::run_sa(&circuit.layered, &network.inner, &cfg))
        .map_err(err)?;
    record(py, rec)
}

#[pyfunction]
#[pyo3(signature = (circuit, network, *, seed = 0, population_size = None, mutation_rate = None, offspring = None, generations = None, lam = core::DEFAULT_LAMBDA, init = None))]
#[allow(clippy::too_many_arguments)]
fn run_ea<'py>(
    py: Python<'py>,
    circuit: &Circuit,
    network: &Network,
    seed: u64,
    population_size: Option<usize>,
    mutation_rate: Option<f64>,
    offspring: Option<usize>,
    generations: Option<usize>,
    lam: u64,
    init: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = core::EaConfig::default();
    let cfg = core::EaConfig {
        seed,
        lambda: lam,
        population_size: population_size.unwrap_or(d.population_size),
        mutation_rate: mutation_rate.unwrap_or(d.mutation_rate),
        offspring_per_generation: offspring.unwrap_or(d.offspring_per_generation),
        generations: generations.unwrap_or(d.generations),
        init_mode: init.map(init_mode).transpose()?.unwrap_or(d.init_mode),
        ..d
    };
    let rec = py
        .detach(|| core::run_ea(&circuit.layered, &network.inner, &cfg))
        .map_err(err)?;
    record(py, rec)
}

#[pyfunction]
#[pyo3(signature = (circuit, network, lam = core::DEFAULT_LAMBDA))]
fn brute_force_optimum<'py>(
    py: Python<'py>,
    circuit: &Circuit,
    network: &Network,
    lam: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let res = py
        .detach(|| core::brute_force_optimum(&circuit.layered, &network.inner, lam))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("cost", breakdown(py, &res.cost)?)?;
    d.set_item("states", res.states)?;
    d.set_item("schedule", Schedule { inner: res.schedule })?;
    Ok(d)
}

#[pymodule]
pub fn qpart(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QpartError", m.py().get_type::<QpartError>())?;
    m.add("DEFAULT_LAMBDA", core::DEFAULT_LAMBDA)?;
    m.add_class::<Circuit>()?;
    m.add_class::<Network>()?;
    m.add_class::<Schedule>()?;
    m.add_function(wrap_pyfunction!(cost, m)?)?;
    m.add_function(wrap_pyfunction!(successive_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_based_assignment, m)?)?;
    m.add_function(wrap_pyfunction!(acceptance_probability, m)?)?;
    m.add_function(wrap_pyfunction!(run_sa, m)?)?;
    m.add_function(wrap_pyfunction!(run_ea, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_optimum, m)?)?;
    Ok(())
}
