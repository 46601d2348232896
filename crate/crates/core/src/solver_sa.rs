//! Simulated annealing with geometric cooling.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::LayeredCircuit;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::operators::mutate;
use crate::record::{RunRecord, TracePoint};
use crate::rng::{seeded, SolverRng};
use crate::schedule::{initial_schedule, AssignmentSchedule, CostModel, InitMode, PenaltyMode, DEFAULT_LAMBDA};

pub const SOLVER_ID: &str = "sa";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaConfig {
    pub initial_temp: f64,
    pub cooling_rate: f64,
    pub max_iterations: usize,
    pub lambda: u64,
    pub penalty_mode: PenaltyMode,
    pub seed: u64,
    pub init_mode: InitMode,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            initial_temp: 10.0,
            cooling_rate: 0.99,
            max_iterations: 60_000,
            lambda: DEFAULT_LAMBDA,
            penalty_mode: PenaltyMode::PerPair,
            seed: 0,
            init_mode: InitMode::BestBaseline,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_temp > 0.0 && self.initial_temp.is_finite()) {
            return Err(Error::Config(format!(
                "initial_temp must be positive, got {}",
                self.initial_temp
            )));
        }
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return Err(Error::Config(format!(
                "cooling_rate must lie in (0, 1), got {}",
                self.cooling_rate
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Probability of moving from a state of cost `current` to one of cost
/// `neighbor` at temperature `temp`. Non-worsening moves are always taken;
/// at zero temperature worsening moves never are.
pub fn acceptance_probability(neighbor: f64, current: f64, temp: f64) -> f64 {
    if neighbor <= current {
        return 1.0;
    }
    if temp <= 0.0 {
        return 0.0;
    }
    (-(neighbor - current) / temp).exp()
}

/// Runs annealing and returns a record whose `schedule` is the best state
/// seen. The trace has `max_iterations + 1` rows.
pub fn run_sa(circuit: &LayeredCircuit, network: &Network, cfg: &SaConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let model = CostModel::new(circuit, network, cfg.lambda).with_penalty_mode(cfg.penalty_mode);
    let mut rng = seeded(cfg.seed);
    let initial = initial_schedule(&mut rng, &model, cfg.init_mode)?;
    anneal(&model, cfg, initial, rng)
}

/// Anneals from an explicit starting schedule instead of a random draw.
pub fn run_sa_from(
    circuit: &LayeredCircuit,
    network: &Network,
    cfg: &SaConfig,
    initial: AssignmentSchedule,
) -> Result<RunRecord> {
    cfg.validate()?;
    initial.validate(circuit, network)?;
    let model = CostModel::new(circuit, network, cfg.lambda).with_penalty_mode(cfg.penalty_mode);
    anneal(&model, cfg, initial, seeded(cfg.seed))
}

fn anneal(model: &CostModel<'_>, cfg: &SaConfig, initial: AssignmentSchedule, mut rng: SolverRng) -> Result<RunRecord> {
    let started = Instant::now();
    let nodes = model.network().num_nodes();

    let mut current = initial;
    let mut current_cost = model.total(&current);
    let mut best = current.clone();
    let mut best_cost = current_cost;
    let mut temp = cfg.initial_temp;

    let mut trace = Vec::with_capacity(cfg.max_iterations + 1);
    trace.push(TracePoint {
        iter: 0,
        current_cost,
        best_cost,
        temperature: Some(temp),
    });

    for iter in 1..=cfg.max_iterations {
        temp *= cfg.cooling_rate;
        let neighbor = mutate(&current, nodes, &mut rng);
        let neighbor_cost = model.total(&neighbor);
        let p = acceptance_probability(neighbor_cost as f64, current_cost as f64, temp);
        if rng.gen::<f64>() < p {
            current = neighbor;
            current_cost = neighbor_cost;
        }
        if current_cost < best_cost {
            best.clone_from(&current);
            best_cost = current_cost;
        }
        trace.push(TracePoint {
            iter,
            current_cost,
            best_cost,
            temperature: Some(temp),
        });
    }

    Ok(RunRecord {
        solver: SOLVER_ID.to_string(),
        seed: cfg.seed,
        final_cost: model.evaluate(&best),
        schedule: best,
        trace,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        config: serde_json::to_value(cfg).expect("config serialization"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improving_and_equal_moves_always_accepted() {
        assert_eq!(acceptance_probability(5.0, 10.0, 1.0), 1.0);
        assert_eq!(acceptance_probability(10.0, 10.0, 1.0), 1.0);
        assert_eq!(acceptance_probability(10.0, 10.0, 0.0), 1.0);
    }

    #[test]
    fn gap_equal_to_temperature() {
        assert!((acceptance_probability(13.0, 10.0, 3.0) - 0.367_879_441_171_442_3).abs() < 1e-9);
    }

    #[test]
    fn frozen_temperature_rejects_worse() {
        assert_eq!(acceptance_probability(11.0, 10.0, 0.0), 0.0);
        assert_eq!(acceptance_probability(11.0, 10.0, f64::MIN_POSITIVE), 0.0);
    }

    #[test]
    fn config_validation() {
        let ok = SaConfig::default();
        assert!(ok.validate().is_ok());
        assert!(SaConfig {
            cooling_rate: 1.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SaConfig {
            cooling_rate: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SaConfig {
            initial_temp: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SaConfig {
            max_iterations: 0,
            ..ok
        }
        .validate()
        .is_err());
    }
}
