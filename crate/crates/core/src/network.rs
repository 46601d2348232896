//! QPU networks: topology construction, hop distances and capacities.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded;

/// Retry budget for [`generate_capacities`].
pub const CAPACITY_RETRIES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Topology {
    Ring,
    /// Row-major 4-neighbour lattice without wraparound.
    Grid {
        rows: usize,
        cols: usize,
    },
    /// Node 0 is the hub.
    Star,
    Custom {
        edges: Vec<(usize, usize)>,
    },
}

impl Topology {
    pub fn name(&self) -> &'static str {
        match self {
            Topology::Ring => "ring",
            Topology::Grid { .. } => "grid",
            Topology::Star => "star",
            Topology::Custom { .. } => "custom",
        }
    }

    /// Square grid when `n` is a perfect square.
    pub fn square_grid(n: usize) -> Option<Topology> {
        let side = (n as f64).sqrt().round() as usize;
        (side >= 2 && side * side == n).then_some(Topology::Grid { rows: side, cols: side })
    }
}

/// Undirected edge set for `topology` on `n` nodes, normalized to `(a, b)`
/// with `a < b`, sorted and deduplicated.
pub fn build_topology(topology: &Topology, n: usize) -> Result<Vec<(usize, usize)>> {
    let mut edges = match topology {
        Topology::Ring => {
            if n < 3 {
                return Err(Error::InvalidNetwork(format!("ring needs at least 3 nodes, got {n}")));
            }
            (0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()
        }
        Topology::Grid { rows, cols } => {
            let (rows, cols) = (*rows, *cols);
            if rows < 2 || cols < 2 || rows * cols != n {
                return Err(Error::InvalidNetwork(format!(
                    "grid {rows}x{cols} does not describe {n} nodes (both sides must be at least 2)"
                )));
            }
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let node = r * cols + c;
                    if c + 1 < cols {
                        edges.push((node, node + 1));
                    }
                    if r + 1 < rows {
                        edges.push((node, node + cols));
                    }
                }
            }
            edges
        }
        Topology::Star => {
            if n < 2 {
                return Err(Error::InvalidNetwork(format!("star needs at least 2 nodes, got {n}")));
            }
            (1..n).map(|leaf| (0, leaf)).collect()
        }
        Topology::Custom { edges } => {
            for &(a, b) in edges {
                if a >= n || b >= n {
                    return Err(Error::InvalidNetwork(format!(
                        "edge ({a}, {b}) references a node outside 0..{n}"
                    )));
                }
                if a == b {
                    return Err(Error::InvalidNetwork(format!("self-loop on node {a}")));
                }
            }
            edges.clone()
        }
    };
    for e in &mut edges {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(edges)
}

/// N×N hop-count matrix, one BFS per source node.
pub fn all_pairs_hop_distance(edges: &[(usize, usize)], n: usize) -> Result<Vec<Vec<u32>>> {
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::InvalidNetwork(format!(
                "edge ({a}, {b}) references a node outside 0..{n}"
            )));
        }
        adjacency[a].push(b);
        adjacency[b].push(a);
    }

    let mut dist = vec![vec![u32::MAX; n]; n];
    let mut queue = VecDeque::with_capacity(n);
    for (source, row) in dist.iter_mut().enumerate() {
        row[source] = 0;
        queue.push_back(source);
        while let Some(node) = queue.pop_front() {
            let next = row[node] + 1;
            for &nb in &adjacency[node] {
                if row[nb] == u32::MAX {
                    row[nb] = next;
                    queue.push_back(nb);
                }
            }
        }
        if let Some(to) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::Disconnected { from: source, to });
        }
    }
    Ok(dist)
}

/// Per-node capacities drawn uniformly from `lo..=hi`, redrawn until their
/// sum reaches `min_total`.
pub fn generate_capacities(n: usize, lo: usize, hi: usize, min_total: usize, seed: u64) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidParameter("network needs at least one node".into()));
    }
    if lo < 1 || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "capacity range [{lo}, {hi}] must satisfy 1 <= lo <= hi"
        )));
    }
    if n * hi < min_total {
        return Err(Error::InvalidParameter(format!(
            "{n} nodes with capacity at most {hi} cannot reach a total of {min_total}"
        )));
    }
    let mut rng = seeded(seed);
    for _ in 0..CAPACITY_RETRIES {
        let caps: Vec<usize> = (0..n).map(|_| rng.gen_range(lo as u64..=hi as u64) as usize).collect();
        if caps.iter().sum::<usize>() >= min_total {
            return Ok(caps);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no capacity draw in [{lo}, {hi}] reached a total of {min_total} after {CAPACITY_RETRIES} attempts"
    )))
}

/// A connected network of QPUs with per-node qubit capacities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    topology: Topology,
    capacities: Vec<usize>,
    edges: Vec<(usize, usize)>,
    /// Row-major N×N.
    dist: Vec<u32>,
}

impl Network {
    pub fn new(topology: Topology, capacities: Vec<usize>) -> Result<Self> {
        let n = capacities.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("network needs at least one node".into()));
        }
        if let Some(node) = capacities.iter().position(|&c| c == 0) {
            return Err(Error::InvalidNetwork(format!("node {node} has zero capacity")));
        }
        let edges = build_topology(&topology, n)?;
        let dist = all_pairs_hop_distance(&edges, n)?.concat();
        Ok(Network {
            topology,
            capacities,
            edges,
            dist,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.capacities.len()
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn total_capacity(&self) -> usize {
        self.capacities.iter().sum()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> u32 {
        self.dist[a * self.num_nodes() + b]
    }

    /// Row-major distance matrix.
    pub fn dist_matrix(&self) -> &[u32] {
        &self.dist
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            n: self.num_nodes(),
            capacities: self.capacities.clone(),
            topology: self.topology.clone(),
        };
        serde_json::to_string_pretty(&file).expect("network serialization") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        if file.n != file.capacities.len() {
            return Err(Error::InvalidNetwork(format!(
                "n = {} but {} capacities given",
                file.n,
                file.capacities.len()
            )));
        }
        Network::new(file.topology, file.capacities)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    n: usize,
    capacities: Vec<usize>,
    topology: Topology,
}
