use proptest::prelude::*;
use qpart_core::{
    capacity_based_assignment, cost, generate_random, layerize, successive_assignment, Network, Topology,
    DEFAULT_LAMBDA,
};

fn topology(kind: u8, n: usize) -> Topology {
    match kind {
        0 => Topology::Ring,
        1 => Topology::Star,
        _ => Topology::Custom {
            edges: (1..n).map(|i| (i - 1, i)).collect(),
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn baselines_are_static_and_feasible(
        caps in proptest::collection::vec(1usize..6, 3..10),
        kind in 0u8..3,
        frac in 0.0f64..1.0,
        depth in 1usize..12,
        seed in any::<u64>(),
    ) {
        let total: usize = caps.iter().sum();
        let qubits = ((total as f64 * frac) as usize).max(2);
        let net = Network::new(topology(kind, caps.len()), caps).unwrap();
        let lc = layerize(&generate_random(qubits, depth, 0.4, seed).unwrap());
        for s in [
            successive_assignment(qubits, lc.depth(), &net).unwrap(),
            capacity_based_assignment(qubits, lc.depth(), &net).unwrap(),
        ] {
            prop_assert!(s.is_static());
            let c = cost(&s, &lc, &net, DEFAULT_LAMBDA).unwrap();
            prop_assert_eq!(c.teleport_cost, 0);
            prop_assert_eq!(c.penalty_count, 0);
        }
    }
}

#[test]
fn over_subscribed_network_is_an_error() {
    let net = Network::new(Topology::Ring, vec![1, 1, 1]).unwrap();
    let err = successive_assignment(4, 2, &net).unwrap_err();
    assert_eq!(err.kind(), "insufficient_capacity");
    assert!(capacity_based_assignment(4, 2, &net).is_err());
}
