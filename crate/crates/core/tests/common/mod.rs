#![allow(dead_code)]

use proptest::prelude::*;
use qpart_core::{AssignmentSchedule, Gate, LayeredCircuit, Network, Topology};

/// Direct transcription of the objective over a row-major `x[q][t]` matrix.
/// Deliberately shares nothing with `CostModel`.
pub fn naive_cost(
    x: &[Vec<usize>],
    cx: &[Vec<(usize, usize)>],
    dist: &[Vec<u32>],
    capacities: &[usize],
    lambda: u64,
) -> (u64, u64, u64, u64) {
    let steps = cx.len();
    let mut remote = 0u64;
    for (t, pairs) in cx.iter().enumerate() {
        for &(i, j) in pairs {
            remote += dist[x[i][t]][x[j][t]] as u64;
        }
    }
    let mut teleport = 0u64;
    for row in x {
        for t in 0..steps.saturating_sub(1) {
            teleport += dist[row[t]][row[t + 1]] as u64;
        }
    }
    let mut violations = 0u64;
    for t in 0..steps {
        for (p, &cap) in capacities.iter().enumerate() {
            let count = x.iter().filter(|row| row[t] == p).count();
            if count > cap {
                violations += 1;
            }
        }
    }
    (remote, teleport, violations, remote + teleport + violations * lambda)
}

/// Hop distances by Floyd-Warshall, independent of the BFS in the library.
pub fn floyd_warshall(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn cx_layers(lc: &LayeredCircuit) -> Vec<Vec<(usize, usize)>> {
    (0..lc.depth()).map(|t| lc.cx_pairs(t).to_vec()).collect()
}

/// A random tiny instance: connected network on 1..=3 nodes, 1..=3 qubits,
/// 1..=3 time steps with at most one CX per step, total capacity >= Q.
#[derive(Clone, Debug)]
pub struct TinyInstance {
    pub circuit: LayeredCircuit,
    pub network: Network,
}

pub fn tiny_instance() -> impl Strategy<Value = TinyInstance> {
    (1usize..=3, 1usize..=3, 1usize..=3, any::<u64>())
        .prop_map(|(nodes, qubits, steps, salt)| make_tiny(nodes, qubits, steps, salt))
}

/// Deterministic tiny instance from a salt (64-bit LCG stream).
pub fn make_tiny(nodes: usize, qubits: usize, steps: usize, salt: u64) -> TinyInstance {
    let mut state = salt | 1;
    let mut next = move |m: usize| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as usize) % m
    };
    let edges = match nodes {
        1 => vec![],
        2 => vec![(0, 1)],
        _ => {
            if next(2) == 0 {
                vec![(0, 1), (1, 2)]
            } else {
                vec![(0, 1), (1, 2), (0, 2)]
            }
        }
    };
    let caps = loop {
        let caps: Vec<usize> = (0..nodes).map(|_| 1 + next(3)).collect();
        if caps.iter().sum::<usize>() >= qubits {
            break caps;
        }
    };
    let layers = (0..steps)
        .map(|_| {
            if qubits >= 2 && next(3) != 0 {
                let a = next(qubits);
                let b = (a + 1 + next(qubits - 1)) % qubits;
                vec![Gate::cx(a, b)]
            } else {
                vec![]
            }
        })
        .collect();
    TinyInstance {
        circuit: LayeredCircuit::from_layers(qubits, layers).unwrap(),
        network: Network::new(Topology::Custom { edges }, caps).unwrap(),
    }
}

pub fn schedule_strategy(qubits: usize, steps: usize, nodes: usize) -> impl Strategy<Value = AssignmentSchedule> {
    proptest::collection::vec(proptest::collection::vec(0..nodes, steps), qubits)
        .prop_map(|rows| AssignmentSchedule::from_rows(&rows).unwrap())
}
