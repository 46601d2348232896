//! The Q×T assignment matrix and the communication cost it induces.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::LayeredCircuit;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::rng::{index, seeded};

pub const DEFAULT_LAMBDA: u64 = 10_000;

/// `assign[q][t]`: the QPU holding qubit `q` during time step `t`.
///
/// Cells are stored column-major (one contiguous column per time step) since
/// every cost term walks columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AssignmentSchedule {
    qubits: usize,
    steps: usize,
    cells: Vec<u32>,
}

impl AssignmentSchedule {
    pub fn filled(qubits: usize, steps: usize, node: usize) -> Self {
        AssignmentSchedule {
            qubits,
            steps,
            cells: vec![node as u32; qubits * steps],
        }
    }

    /// Repeats one placement column across all time steps.
    pub fn from_column(column: &[usize], steps: usize) -> Self {
        let col: Vec<u32> = column.iter().map(|&n| n as u32).collect();
        AssignmentSchedule {
            qubits: column.len(),
            steps,
            cells: col.repeat(steps),
        }
    }

    /// Builds from qubit rows (the file orientation).
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let qubits = rows.len();
        let steps = rows.first().map_or(0, Vec::len);
        if let Some(q) = rows.iter().position(|r| r.len() != steps) {
            return Err(Error::DimensionMismatch(format!(
                "row {q} has {} entries, expected {steps}",
                rows[q].len()
            )));
        }
        let mut s = AssignmentSchedule::filled(qubits, steps, 0);
        for (q, row) in rows.iter().enumerate() {
            for (t, &node) in row.iter().enumerate() {
                if node > u32::MAX as usize {
                    return Err(Error::InvalidParameter(format!("node index {node} too large")));
                }
                s.set(q, t, node);
            }
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn num_steps(&self) -> usize {
        self.steps
    }

    #[inline]
    pub fn get(&self, qubit: usize, step: usize) -> usize {
        self.cells[step * self.qubits + qubit] as usize
    }

    #[inline]
    pub fn set(&mut self, qubit: usize, step: usize, node: usize) {
        self.cells[step * self.qubits + qubit] = node as u32;
    }

    pub fn column(&self, step: usize) -> &[u32] {
        &self.cells[step * self.qubits..(step + 1) * self.qubits]
    }

    pub(crate) fn column_mut(&mut self, step: usize) -> &mut [u32] {
        &mut self.cells[step * self.qubits..(step + 1) * self.qubits]
    }

    pub fn row(&self, qubit: usize) -> Vec<usize> {
        (0..self.steps).map(|t| self.get(qubit, t)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.qubits).map(|q| self.row(q)).collect()
    }

    /// All columns equal.
    pub fn is_static(&self) -> bool {
        (1..self.steps).all(|t| self.column(t) == self.column(0))
    }

    /// Checks dimensions against `circuit` and node indices against `network`.
    pub fn validate(&self, circuit: &LayeredCircuit, network: &Network) -> Result<()> {
        if self.qubits != circuit.num_qubits() || self.steps != circuit.depth() {
            return Err(Error::DimensionMismatch(format!(
                "schedule is {}x{} but circuit has {} qubits and {} time steps",
                self.qubits,
                self.steps,
                circuit.num_qubits(),
                circuit.depth()
            )));
        }
        let n = network.num_nodes();
        if let Some(pos) = self.cells.iter().position(|&c| c as usize >= n) {
            return Err(Error::InvalidParameter(format!(
                "qubit {} at step {} is assigned to node {}, network has {n} nodes",
                pos % self.qubits,
                pos / self.qubits,
                self.cells[pos]
            )));
        }
        Ok(())
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.cells
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u32] {
        &mut self.cells
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule serialization") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    assign: Vec<Vec<usize>>,
}

impl Serialize for AssignmentSchedule {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ScheduleFile { assign: self.rows() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AssignmentSchedule {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = ScheduleFile::deserialize(deserializer)?;
        AssignmentSchedule::from_rows(&file.assign).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub remote_cx_cost: u64,
    pub teleport_cost: u64,
    pub penalty_count: u64,
    pub total: u64,
}

/// How capacity violations are counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyMode {
    /// One penalty per (time step, over-full QPU) pair.
    #[default]
    PerPair,
    /// One penalty per time step with at least one over-full QPU.
    PerTimeStep,
}

/// Cost function bound to one circuit and network.
#[derive(Clone, Copy, Debug)]
pub struct CostModel<'a> {
    circuit: &'a LayeredCircuit,
    network: &'a Network,
    lambda: u64,
    mode: PenaltyMode,
}

impl<'a> CostModel<'a> {
    pub fn new(circuit: &'a LayeredCircuit, network: &'a Network, lambda: u64) -> Self {
        CostModel {
            circuit,
            network,
            lambda,
            mode: PenaltyMode::default(),
        }
    }

    pub fn with_penalty_mode(mut self, mode: PenaltyMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn circuit(&self) -> &'a LayeredCircuit {
        self.circuit
    }

    pub fn network(&self) -> &'a Network {
        self.network
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn penalty_mode(&self) -> PenaltyMode {
        self.mode
    }

    /// Validating entry point.
    pub fn cost(&self, schedule: &AssignmentSchedule) -> Result<CostBreakdown> {
        schedule.validate(self.circuit, self.network)?;
        Ok(self.evaluate(schedule))
    }

    /// Cost of a schedule already known to match the circuit and network.
    pub fn evaluate(&self, schedule: &AssignmentSchedule) -> CostBreakdown {
        debug_assert_eq!(schedule.num_qubits(), self.circuit.num_qubits());
        debug_assert_eq!(schedule.num_steps(), self.circuit.depth());

        let n = self.network.num_nodes();
        let dist = self.network.dist_matrix();
        let caps = self.network.capacities();
        let steps = schedule.num_steps();

        let mut remote = 0u64;
        let mut teleport = 0u64;
        let mut penalties = 0u64;
        let mut load = vec![0usize; n];

        for t in 0..steps {
            let col = schedule.column(t);
            for &(a, b) in self.circuit.cx_pairs(t) {
                remote += dist[col[a] as usize * n + col[b] as usize] as u64;
            }
            if t + 1 < steps {
                let next = schedule.column(t + 1);
                teleport += col
                    .iter()
                    .zip(next)
                    .map(|(&x, &y)| dist[x as usize * n + y as usize] as u64)
                    .sum::<u64>();
            }

            load.iter_mut().for_each(|l| *l = 0);
            for &node in col {
                load[node as usize] += 1;
            }
            let over = load.iter().zip(caps).filter(|(l, c)| l > c).count() as u64;
            penalties += match self.mode {
                PenaltyMode::PerPair => over,
                PenaltyMode::PerTimeStep => u64::from(over > 0),
            };
        }

        CostBreakdown {
            remote_cx_cost: remote,
            teleport_cost: teleport,
            penalty_count: penalties,
            total: remote + teleport + penalties * self.lambda,
        }
    }

    pub fn total(&self, schedule: &AssignmentSchedule) -> u64 {
        self.evaluate(schedule).total
    }
}

/// Starting schedule for a solver run under `mode`.
pub fn initial_schedule<R: Rng + ?Sized>(
    rng: &mut R,
    model: &CostModel<'_>,
    mode: InitMode,
) -> Result<AssignmentSchedule> {
    let circuit = model.circuit();
    let network = model.network();
    let (q, t) = (circuit.num_qubits(), circuit.depth());
    match mode {
        InitMode::FeasibleColumn => random_schedule_with(rng, q, t, network, RandomInit::FeasibleColumn),
        InitMode::Uniform => random_schedule_with(rng, q, t, network, RandomInit::Uniform),
        InitMode::BestBaseline => {
            let successive = crate::baselines::successive_assignment(q, t, network)?;
            let by_capacity = crate::baselines::capacity_based_assignment(q, t, network)?;
            Ok(if model.total(&by_capacity) < model.total(&successive) {
                by_capacity
            } else {
                successive
            })
        }
    }
}

/// Cost of `schedule` with per-pair penalty charging.
pub fn cost(
    schedule: &AssignmentSchedule,
    circuit: &LayeredCircuit,
    network: &Network,
    lambda: u64,
) -> Result<CostBreakdown> {
    CostModel::new(circuit, network, lambda).cost(schedule)
}

/// Random starting schedules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomInit {
    /// One capacity-respecting placement replicated across every time step.
    #[default]
    FeasibleColumn,
    /// Every cell independently uniform over the nodes.
    Uniform,
}

/// How a solver obtains its starting schedule(s).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    #[default]
    FeasibleColumn,
    Uniform,
    /// The cheaper of the two static baselines; no randomness involved.
    BestBaseline,
}

pub fn random_schedule(
    qubits: usize,
    steps: usize,
    network: &Network,
    seed: u64,
    mode: RandomInit,
) -> Result<AssignmentSchedule> {
    random_schedule_with(&mut seeded(seed), qubits, steps, network, mode)
}

pub fn random_schedule_with<R: Rng + ?Sized>(
    rng: &mut R,
    qubits: usize,
    steps: usize,
    network: &Network,
    mode: RandomInit,
) -> Result<AssignmentSchedule> {
    let n = network.num_nodes();
    match mode {
        RandomInit::FeasibleColumn => {
            let total = network.total_capacity();
            if total < qubits {
                return Err(Error::InsufficientCapacity {
                    total,
                    required: qubits,
                });
            }
            let mut order: Vec<usize> = (0..qubits).collect();
            order.shuffle(rng);
            let mut nodes: Vec<usize> = (0..n).collect();
            nodes.shuffle(rng);

            let mut column = vec![0usize; qubits];
            let mut pending = order.into_iter();
            'fill: for node in nodes {
                for _ in 0..network.capacities()[node] {
                    match pending.next() {
                        Some(q) => column[q] = node,
                        None => break 'fill,
                    }
                }
            }
            Ok(AssignmentSchedule::from_column(&column, steps))
        }
        RandomInit::Uniform => {
            let mut s = AssignmentSchedule::filled(qubits, steps, 0);
            for cell in s.raw_mut() {
                *cell = index(rng, n) as u32;
            }
            Ok(s)
        }
    }
}
