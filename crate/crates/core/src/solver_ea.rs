//! Evolutionary algorithm with elitist replacement: every generation the
//! worst `offspring_per_generation` individuals make room for new children.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::LayeredCircuit;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::operators::{crossover, mutate};
use crate::record::{RunRecord, TracePoint};
use crate::rng::{index, seeded};
use crate::schedule::{initial_schedule, AssignmentSchedule, CostModel, InitMode, PenaltyMode, DEFAULT_LAMBDA};

pub const SOLVER_ID: &str = "ea";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EaConfig {
    pub population_size: usize,
    pub mutation_rate: f64,
    pub offspring_per_generation: usize,
    pub generations: usize,
    pub lambda: u64,
    pub penalty_mode: PenaltyMode,
    pub seed: u64,
    pub init_mode: InitMode,
}

impl Default for EaConfig {
    fn default() -> Self {
        EaConfig {
            population_size: 200,
            mutation_rate: 0.3,
            offspring_per_generation: 60,
            generations: 5000,
            lambda: DEFAULT_LAMBDA,
            penalty_mode: PenaltyMode::PerPair,
            seed: 0,
            init_mode: InitMode::FeasibleColumn,
        }
    }
}

impl EaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 1 {
            return Err(Error::Config("population_size must be at least 1".into()));
        }
        if self.offspring_per_generation < 1 || self.offspring_per_generation > self.population_size {
            return Err(Error::Config(format!(
                "offspring_per_generation must lie in 1..={}, got {}",
                self.population_size, self.offspring_per_generation
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Config(format!(
                "mutation_rate must lie in [0, 1], got {}",
                self.mutation_rate
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Individual {
    cost: u64,
    schedule: AssignmentSchedule,
}

/// Per-generation snapshot handed to [`run_ea_observed`] callbacks.
#[derive(Clone, Copy, Debug)]
pub struct Generation<'a> {
    pub index: usize,
    /// Costs of the whole population, ascending.
    pub costs: &'a [u64],
}

/// Runs the EA. `current_cost` in the trace is the best cost in the current
/// population; `best_cost` is the best seen in any generation.
pub fn run_ea(circuit: &LayeredCircuit, network: &Network, cfg: &EaConfig) -> Result<RunRecord> {
    run_ea_observed(circuit, network, cfg, |_| {})
}

pub fn run_ea_observed<F>(
    circuit: &LayeredCircuit,
    network: &Network,
    cfg: &EaConfig,
    mut observe: F,
) -> Result<RunRecord>
where
    F: FnMut(Generation<'_>),
{
    cfg.validate()?;
    let started = Instant::now();
    let model = CostModel::new(circuit, network, cfg.lambda).with_penalty_mode(cfg.penalty_mode);
    let nodes = network.num_nodes();
    let mut rng = seeded(cfg.seed);

    let mut population = (0..cfg.population_size)
        .map(|_| {
            let schedule = initial_schedule(&mut rng, &model, cfg.init_mode)?;
            Ok(Individual {
                cost: model.total(&schedule),
                schedule,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    population.sort_by_key(|ind| ind.cost);

    let mut best = population[0].clone();
    let mut trace = Vec::with_capacity(cfg.generations + 1);
    trace.push(TracePoint {
        iter: 0,
        current_cost: best.cost,
        best_cost: best.cost,
        temperature: None,
    });
    let mut costs: Vec<u64> = population.iter().map(|i| i.cost).collect();
    observe(Generation {
        index: 0,
        costs: &costs,
    });

    let size = cfg.population_size;
    let keep = size - cfg.offspring_per_generation;
    for generation in 1..=cfg.generations {
        let mut children = Vec::with_capacity(cfg.offspring_per_generation);
        for _ in 0..cfg.offspring_per_generation {
            let (i, j) = parent_pair(&mut rng, size);
            let mut child = crossover(&population[i].schedule, &population[j].schedule, &mut rng)?;
            if rng.gen::<f64>() < cfg.mutation_rate {
                child = mutate(&child, nodes, &mut rng);
            }
            children.push(Individual {
                cost: model.total(&child),
                schedule: child,
            });
        }

        population.truncate(keep);
        population.extend(children);
        population.sort_by_key(|ind| ind.cost);

        if population[0].cost < best.cost {
            best = population[0].clone();
        }
        trace.push(TracePoint {
            iter: generation,
            current_cost: population[0].cost,
            best_cost: best.cost,
            temperature: None,
        });
        costs.clear();
        costs.extend(population.iter().map(|i| i.cost));
        observe(Generation {
            index: generation,
            costs: &costs,
        });
    }

    Ok(RunRecord {
        solver: SOLVER_ID.to_string(),
        seed: cfg.seed,
        final_cost: model.evaluate(&best.schedule),
        schedule: best.schedule,
        trace,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        config: serde_json::to_value(cfg).expect("config serialization"),
    })
}

/// Two distinct uniformly drawn members in random order (the same member
/// twice only when the population has one).
fn parent_pair<R: Rng + ?Sized>(rng: &mut R, size: usize) -> (usize, usize) {
    if size < 2 {
        return (0, 0);
    }
    let a = index(rng, size);
    let mut b = index(rng, size - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}
