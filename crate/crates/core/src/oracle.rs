//! Exhaustive search over every assignment matrix of a tiny instance.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::LayeredCircuit;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::schedule::{AssignmentSchedule, CostBreakdown, CostModel};

pub const MAX_STATES: u64 = 10_000_000;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub cost: CostBreakdown,
    /// Lexicographically smallest (row-major) optimal schedule.
    pub schedule: AssignmentSchedule,
    pub states: u64,
}

pub fn brute_force_optimum(circuit: &LayeredCircuit, network: &Network, lambda: u64) -> Result<OracleResult> {
    brute_force_with(&CostModel::new(circuit, network, lambda))
}

/// Enumerates `N^(Q*T)` matrices. State `k` assigns row-major cell `c` the
/// base-N digit `c` of `k` (least significant digit first).
pub fn brute_force_with(model: &CostModel<'_>) -> Result<OracleResult> {
    let circuit = model.circuit();
    let (qubits, steps) = (circuit.num_qubits(), circuit.depth());
    let cells = qubits * steps;
    let n = model.network().num_nodes() as u64;
    let states = state_count(n, cells)?;

    let chunks = states.div_ceil(CHUNK);
    let (total, digits) = (0..chunks)
        .into_par_iter()
        .map(|chunk| scan(model, n, cells, chunk * CHUNK, ((chunk + 1) * CHUNK).min(states)))
        .reduce_with(|a, b| if b < a { b } else { a })
        .expect("at least one state");

    let schedule = to_schedule(&digits, qubits, steps);
    let cost = model.evaluate(&schedule);
    debug_assert_eq!(cost.total, total);
    Ok(OracleResult { cost, schedule, states })
}

fn state_count(n: u64, cells: usize) -> Result<u64> {
    let exp = u32::try_from(cells).unwrap_or(u32::MAX);
    match n.checked_pow(exp) {
        Some(states) if states <= MAX_STATES => Ok(states),
        Some(states) => Err(Error::InstanceTooLarge {
            states: states.to_string(),
            limit: MAX_STATES,
        }),
        None => Err(Error::InstanceTooLarge {
            states: format!("{n}^{cells}"),
            limit: MAX_STATES,
        }),
    }
}

/// Best `(total, row-major digits)` over states `start..end`.
fn scan(model: &CostModel<'_>, n: u64, cells: usize, start: u64, end: u64) -> (u64, Vec<u32>) {
    let circuit = model.circuit();
    let (qubits, steps) = (circuit.num_qubits(), circuit.depth());

    let mut digits = vec![0u32; cells];
    let mut rest = start;
    for d in digits.iter_mut() {
        *d = (rest % n) as u32;
        rest /= n;
    }
    let mut schedule = to_schedule(&digits, qubits, steps);
    let mut best: Option<(u64, Vec<u32>)> = None;

    for _ in start..end {
        let total = model.total(&schedule);
        if best.as_ref().is_none_or(|(b, bd)| (total, &digits) < (*b, bd)) {
            best = Some((total, digits.clone()));
        }
        // Odometer step, digit 0 first.
        for (c, d) in digits.iter_mut().enumerate() {
            *d += 1;
            if u64::from(*d) == n {
                *d = 0;
                schedule.set(c / steps, c % steps, 0);
            } else {
                schedule.set(c / steps, c % steps, *d as usize);
                break;
            }
        }
    }
    best.expect("non-empty chunk")
}

fn to_schedule(digits: &[u32], qubits: usize, steps: usize) -> AssignmentSchedule {
    let mut s = AssignmentSchedule::filled(qubits, steps, 0);
    for (c, &d) in digits.iter().enumerate() {
        s.set(c / steps, c % steps, d as usize);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::network::Topology;

    fn edge(caps: Vec<usize>) -> Network {
        Network::new(Topology::Custom { edges: vec![(0, 1)] }, caps).unwrap()
    }

    #[test]
    fn lone_qubit_costs_nothing() {
        let lc = LayeredCircuit::from_layers(1, vec![vec![]]).unwrap();
        let res = brute_force_optimum(&lc, &Network::new(Topology::Ring, vec![1, 2, 3]).unwrap(), 10_000).unwrap();
        assert_eq!(res.cost.total, 0);
        assert_eq!(res.states, 3);
        assert_eq!(res.schedule.rows(), vec![vec![0]]);
    }

    #[test]
    fn capacity_forces_a_remote_cx() {
        let lc = LayeredCircuit::from_layers(2, vec![vec![Gate::cx(0, 1)]]).unwrap();
        let res = brute_force_optimum(&lc, &edge(vec![1, 1]), 10_000).unwrap();
        assert_eq!(res.cost.total, 1);
        assert_eq!(res.schedule.rows(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn three_qubit_path_instance() {
        let lc = LayeredCircuit::from_layers(3, vec![vec![Gate::cx(0, 1)], vec![Gate::cx(1, 2)]]).unwrap();
        let res = brute_force_optimum(&lc, &edge(vec![2, 2]), 10_000).unwrap();
        assert_eq!(res.states, 64);
        assert_eq!(res.cost.total, 1);
        // Smallest optimal matrix in row-major order.
        assert_eq!(res.schedule.rows(), vec![vec![0, 0], vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn guard_rail() {
        let lc = LayeredCircuit::from_layers(8, vec![vec![]; 8]).unwrap();
        let err = brute_force_optimum(&lc, &edge(vec![8, 8]), 1).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { .. }), "{err:?}");
    }
}
