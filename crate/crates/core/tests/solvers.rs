mod common;

use proptest::prelude::*;
use qpart_core::oracle::brute_force_optimum;
use qpart_core::solver_ea::run_ea_observed;
use qpart_core::solver_sa::run_sa_from;
use qpart_core::{
    generate_random, layerize, run_ea, run_sa, successive_assignment, EaConfig, InitMode, LayeredCircuit, Network,
    SaConfig, Topology, DEFAULT_LAMBDA,
};

fn small_instance() -> (LayeredCircuit, Network) {
    let lc = layerize(&generate_random(8, 10, 0.3, 4).unwrap());
    let net = Network::new(Topology::Ring, vec![2, 3, 2, 3]).unwrap();
    (lc, net)
}

fn quick_sa(seed: u64) -> SaConfig {
    SaConfig {
        max_iterations: 3000,
        seed,
        ..SaConfig::default()
    }
}

fn quick_ea(seed: u64) -> EaConfig {
    EaConfig {
        population_size: 30,
        offspring_per_generation: 10,
        generations: 200,
        seed,
        ..EaConfig::default()
    }
}

#[test]
fn tiny_instances_reach_the_oracle() {
    for salt in 0..6u64 {
        let inst = common::make_tiny(3, 3, 2, salt * 7919 + 1);
        let oracle = brute_force_optimum(&inst.circuit, &inst.network, DEFAULT_LAMBDA).unwrap();
        let sa = run_sa(
            &inst.circuit,
            &inst.network,
            &SaConfig {
                max_iterations: 5000,
                init_mode: InitMode::FeasibleColumn,
                seed: salt,
                ..SaConfig::default()
            },
        )
        .unwrap();
        let ea = run_ea(
            &inst.circuit,
            &inst.network,
            &EaConfig {
                population_size: 50,
                offspring_per_generation: 15,
                generations: 500,
                seed: salt,
                ..EaConfig::default()
            },
        )
        .unwrap();
        assert_eq!(sa.final_cost.total, oracle.cost.total, "sa salt {salt}");
        assert_eq!(ea.final_cost.total, oracle.cost.total, "ea salt {salt}");
    }
}

#[test]
fn traces_are_monotone_and_sized() {
    let (lc, net) = small_instance();
    let sa = run_sa(&lc, &net, &quick_sa(3)).unwrap();
    assert!(sa.best_trace_is_monotone());
    assert_eq!(sa.trace.len(), 3001);
    assert_eq!(sa.trace.last().unwrap().best_cost, sa.final_cost.total);
    let ea = run_ea(&lc, &net, &quick_ea(3)).unwrap();
    assert!(ea.best_trace_is_monotone());
    assert_eq!(ea.trace.len(), 201);
    assert_eq!(ea.trace.last().unwrap().best_cost, ea.final_cost.total);
    assert!(ea.trace.iter().all(|p| p.temperature.is_none()));
}

#[test]
fn same_seed_same_run() {
    let (lc, net) = small_instance();
    let a = run_sa(&lc, &net, &quick_sa(9)).unwrap();
    let b = run_sa(&lc, &net, &quick_sa(9)).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.schedule, b.schedule);
    let c = run_ea(&lc, &net, &quick_ea(9)).unwrap();
    let d = run_ea(&lc, &net, &quick_ea(9)).unwrap();
    assert_eq!(c.trace, d.trace);
    assert_eq!(c.schedule, d.schedule);
    assert_ne!(a.trace, run_sa(&lc, &net, &quick_sa(10)).unwrap().trace);
}

#[test]
fn temperature_decays_geometrically() {
    let (lc, net) = small_instance();
    let cfg = SaConfig {
        initial_temp: 7.5,
        cooling_rate: 0.97,
        ..quick_sa(1)
    };
    let rec = run_sa(&lc, &net, &cfg).unwrap();
    for (k, p) in rec.trace.iter().enumerate().take(500) {
        let expected = 7.5 * 0.97f64.powi(k as i32);
        let got = p.temperature.unwrap();
        assert!(
            (got - expected).abs() <= 1e-9 * expected.max(1e-300),
            "k={k} {got} vs {expected}"
        );
    }
}

#[test]
fn start_schedule_is_trace_row_zero() {
    let (lc, net) = small_instance();
    let start = successive_assignment(lc.num_qubits(), lc.depth(), &net).unwrap();
    let model = qpart_core::CostModel::new(&lc, &net, DEFAULT_LAMBDA);
    let rec = run_sa_from(&lc, &net, &quick_sa(2), start.clone()).unwrap();
    assert_eq!(rec.trace[0].current_cost, model.total(&start));
    assert!(rec.final_cost.total <= model.total(&start));
}

#[test]
fn ea_population_size_is_constant() {
    let (lc, net) = small_instance();
    let cfg = quick_ea(5);
    let mut seen = 0;
    let mut prev_best = u64::MAX;
    run_ea_observed(&lc, &net, &cfg, |g| {
        assert_eq!(g.costs.len(), cfg.population_size);
        assert!(g.costs.windows(2).all(|w| w[0] <= w[1]));
        // Elitism: the population best never gets worse.
        assert!(g.costs[0] <= prev_best);
        prev_best = g.costs[0];
        seen += 1;
    })
    .unwrap();
    assert_eq!(seen, cfg.generations + 1);
}

#[test]
fn full_replacement_is_allowed() {
    let (lc, net) = small_instance();
    let cfg = EaConfig {
        offspring_per_generation: 30,
        ..quick_ea(1)
    };
    let rec = run_ea(&lc, &net, &cfg).unwrap();
    assert!(rec.best_trace_is_monotone());
}

#[test]
fn invalid_configs_are_rejected() {
    let (lc, net) = small_instance();
    assert!(run_sa(
        &lc,
        &net,
        &SaConfig {
            cooling_rate: 1.2,
            ..quick_sa(0)
        }
    )
    .is_err());
    assert!(run_ea(
        &lc,
        &net,
        &EaConfig {
            offspring_per_generation: 31,
            ..quick_ea(0)
        }
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solvers_never_beat_the_oracle(inst in common::tiny_instance(), seed in 0u64..1000) {
        let oracle = brute_force_optimum(&inst.circuit, &inst.network, DEFAULT_LAMBDA).unwrap();
        let sa = run_sa(&inst.circuit, &inst.network, &SaConfig { max_iterations: 300, seed, ..SaConfig::default() }).unwrap();
        let ea = run_ea(&inst.circuit, &inst.network, &EaConfig {
            population_size: 10, offspring_per_generation: 4, generations: 30, seed, ..EaConfig::default()
        }).unwrap();
        prop_assert!(sa.final_cost.total >= oracle.cost.total);
        prop_assert!(ea.final_cost.total >= oracle.cost.total);
        prop_assert!(sa.best_trace_is_monotone() && ea.best_trace_is_monotone());
    }
}
