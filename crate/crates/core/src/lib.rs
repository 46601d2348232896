//! Assigns circuit qubits to QPUs of a capacity-constrained quantum network
//! at every time step, minimizing hop-weighted remote-CX and teleportation
//! cost plus a capacity penalty.

pub mod baselines;
pub mod circuit;
pub mod error;
pub mod experiment;
pub mod network;
pub mod operators;
pub mod oracle;
pub mod record;
pub mod rng;
pub mod schedule;
pub mod solver_ea;
pub mod solver_sa;

pub use baselines::{capacity_based_assignment, successive_assignment};
pub use circuit::{
    generate_random, layerize, parse_circuit, serialize_circuit, Circuit, Gate, GateKind, LayeredCircuit,
};
pub use error::{Error, Result};
pub use network::{all_pairs_hop_distance, build_topology, generate_capacities, Network, Topology};
pub use operators::{crossover, mutate, MutationKind};
pub use oracle::{brute_force_optimum, OracleResult};
pub use record::{RunRecord, TracePoint};
pub use schedule::{
    cost, initial_schedule, random_schedule, AssignmentSchedule, CostBreakdown, CostModel, InitMode, PenaltyMode,
    RandomInit, DEFAULT_LAMBDA,
};
pub use solver_ea::{run_ea, EaConfig};
pub use solver_sa::{acceptance_probability, run_sa, SaConfig};
