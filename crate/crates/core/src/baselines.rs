//! Static placements used as comparison baselines. Both ignore topology and
//! fill QPUs with consecutive qubits, differing only in the QPU order.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::schedule::AssignmentSchedule;

/// Fill QPUs 0, 1, 2, ... in index order.
pub fn successive_assignment(qubits: usize, steps: usize, network: &Network) -> Result<AssignmentSchedule> {
    let order: Vec<usize> = (0..network.num_nodes()).collect();
    fill_in_order(&order, qubits, steps, network)
}

/// Fill QPUs in descending capacity order, lower index first among equals.
pub fn capacity_based_assignment(qubits: usize, steps: usize, network: &Network) -> Result<AssignmentSchedule> {
    let caps = network.capacities();
    let mut order: Vec<usize> = (0..network.num_nodes()).collect();
    // Stable sort keeps ascending index order among equal capacities.
    order.sort_by(|&a, &b| caps[b].cmp(&caps[a]));
    fill_in_order(&order, qubits, steps, network)
}

fn fill_in_order(order: &[usize], qubits: usize, steps: usize, network: &Network) -> Result<AssignmentSchedule> {
    let total = network.total_capacity();
    if total < qubits {
        return Err(Error::InsufficientCapacity {
            total,
            required: qubits,
        });
    }
    let caps = network.capacities();
    let column: Vec<usize> = order
        .iter()
        .flat_map(|&node| std::iter::repeat_n(node, caps[node]))
        .take(qubits)
        .collect();
    Ok(AssignmentSchedule::from_column(&column, steps))
}
