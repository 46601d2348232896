mod common;

use proptest::prelude::*;
use qpart_core::{generate_capacities, Network, Topology};

#[allow(clippy::needless_range_loop)]
fn check_metric(net: &Network) {
    let n = net.num_nodes();
    let fw = common::floyd_warshall(n, net.edges());
    for a in 0..n {
        assert_eq!(net.dist(a, a), 0);
        for b in 0..n {
            assert_eq!(net.dist(a, b), net.dist(b, a));
            assert_eq!(net.dist(a, b), fw[a][b]);
            assert_eq!(net.dist(a, b) == 1, net.edges().contains(&(a.min(b), a.max(b))));
            for c in 0..n {
                assert!(net.dist(a, c) <= net.dist(a, b) + net.dist(b, c));
            }
        }
    }
}

#[test]
fn ring_distance_closed_form() {
    for n in 3..=25 {
        let ring = Network::new(Topology::Ring, vec![1; n]).unwrap();
        for i in 0..n {
            for j in 0..n {
                let d = i.abs_diff(j);
                assert_eq!(ring.dist(i, j) as usize, d.min(n - d));
            }
        }
        assert_eq!(ring.diameter() as usize, n / 2);
    }
}

#[test]
fn builtin_topologies_are_metrics() {
    for n in 3..=25 {
        check_metric(&Network::new(Topology::Ring, vec![1; n]).unwrap());
        let star = Network::new(Topology::Star, vec![1; n]).unwrap();
        check_metric(&star);
        assert_eq!(star.diameter(), 2);
    }
    for rows in 2..=5 {
        for cols in 2..=5 {
            let grid = Network::new(Topology::Grid { rows, cols }, vec![1; rows * cols]).unwrap();
            check_metric(&grid);
            assert_eq!(grid.diameter() as usize, rows - 1 + cols - 1);
        }
    }
}

proptest! {
    #[test]
    fn seeded_capacities(seed in any::<u64>(), lo in 1usize..4, span in 0usize..6) {
        let hi = lo + span;
        let caps = generate_capacities(25, lo, hi, 25 * lo, seed).unwrap();
        prop_assert!(caps.iter().all(|c| (lo..=hi).contains(c)));
        prop_assert_eq!(&caps, &generate_capacities(25, lo, hi, 25 * lo, seed).unwrap());
        let net = Network::new(Topology::Ring, caps).unwrap();
        prop_assert_eq!(Network::from_json(&net.to_json()).unwrap(), net);
    }

    #[test]
    fn random_connected_graphs_are_metrics(n in 2usize..12, extra in proptest::collection::vec((0usize..12, 0usize..12), 0..20)) {
        // Spanning path keeps the graph connected.
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        edges.extend(extra.into_iter().filter(|&(a, b)| a < n && b < n && a != b));
        check_metric(&Network::new(Topology::Custom { edges }, vec![1; n]).unwrap());
    }
}
