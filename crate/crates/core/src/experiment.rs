//! Seeded multi-run experiments: configuration, orchestration, statistics
//! and CSV/JSON output.
//!
//! An output directory holds:
//!
//! - `summary.json`: deterministic results plus a separate `timing` section
//! - `circuit.json`, `network.json`: the resolved instance
//! - `schedules/<id>.json`: baseline and best solver schedules
//! - `traces/<solver>_seed<seed>.csv` and `traces/<solver>_aggregate.csv`

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{capacity_based_assignment, successive_assignment};
use crate::circuit::{generate_random, layerize, Circuit, DEFAULT_CX_FRACTION};
use crate::error::{Error, Result};
use crate::network::{generate_capacities, Network, Topology};
use crate::record::{RunRecord, TracePoint};
use crate::schedule::{AssignmentSchedule, CostBreakdown, CostModel, PenaltyMode, DEFAULT_LAMBDA};
use crate::solver_ea::{self, run_ea, EaConfig};
use crate::solver_sa::{self, run_sa, SaConfig};

pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitSource {
    File(PathBuf),
    Generate {
        qubits: usize,
        depth: usize,
        #[serde(default = "default_cx_fraction")]
        cx_fraction: f64,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Ring,
    Grid,
    Star,
}

impl TopologyKind {
    /// Grids default to the square arrangement of `nodes`.
    pub fn resolve(self, nodes: usize, rows: Option<usize>, cols: Option<usize>) -> Result<Topology> {
        match self {
            TopologyKind::Ring => Ok(Topology::Ring),
            TopologyKind::Star => Ok(Topology::Star),
            TopologyKind::Grid => match (rows, cols) {
                (Some(rows), Some(cols)) => Ok(Topology::Grid { rows, cols }),
                (Some(rows), None) if rows > 0 => Ok(Topology::Grid {
                    rows,
                    cols: nodes / rows,
                }),
                (None, Some(cols)) if cols > 0 => Ok(Topology::Grid {
                    rows: nodes / cols,
                    cols,
                }),
                _ => Topology::square_grid(nodes).ok_or_else(|| {
                    Error::InvalidNetwork(format!("{nodes} nodes do not form a square grid; give rows and cols"))
                }),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkSource {
    File(PathBuf),
    Generate {
        topology: TopologyKind,
        nodes: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cols: Option<usize>,
        cap_min: usize,
        cap_max: usize,
        /// Defaults to the circuit's qubit count.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_total: Option<usize>,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub circuit: CircuitSource,
    pub network: NetworkSource,
    #[serde(default = "default_true")]
    pub baselines: bool,
    /// Enables SA; `seed` and `lambda` are overridden per run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sa: Option<SaConfig>,
    /// Enables the EA; `seed` and `lambda` are overridden per run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ea: Option<EaConfig>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_lambda")]
    pub lambda: u64,
    #[serde(default)]
    pub penalty_mode: PenaltyMode,
    pub output_dir: PathBuf,
}

fn default_true() -> bool {
    true
}

fn default_seeds() -> Vec<u64> {
    DEFAULT_SEEDS.to_vec()
}

fn default_lambda() -> u64 {
    DEFAULT_LAMBDA
}

fn default_cx_fraction() -> f64 {
    DEFAULT_CX_FRACTION
}

impl ExperimentConfig {
    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let CircuitSource::File(p) = &mut cfg.circuit {
            resolve(p);
        }
        if let NetworkSource::File(p) = &mut cfg.network {
            resolve(p);
        }
        resolve(&mut cfg.output_dir);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must not be empty".into()));
        }
        if !self.baselines && self.sa.is_none() && self.ea.is_none() {
            return Err(Error::Config("enable at least one of baselines, sa, ea".into()));
        }
        if let Some(sa) = &self.sa {
            sa.validate()?;
        }
        if let Some(ea) = &self.ea {
            ea.validate()?;
        }
        Ok(())
    }

    pub fn load_circuit(&self) -> Result<Circuit> {
        match &self.circuit {
            CircuitSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                Circuit::from_json(&text)
            }
            CircuitSource::Generate {
                qubits,
                depth,
                cx_fraction,
                seed,
            } => generate_random(*qubits, *depth, *cx_fraction, *seed),
        }
    }

    pub fn load_network(&self, qubits: usize) -> Result<Network> {
        match &self.network {
            NetworkSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                Network::from_json(&text)
            }
            NetworkSource::Generate {
                topology,
                nodes,
                rows,
                cols,
                cap_min,
                cap_max,
                min_total,
                seed,
            } => {
                let topology = topology.resolve(*nodes, *rows, *cols)?;
                let caps = generate_capacities(*nodes, *cap_min, *cap_max, min_total.unwrap_or(qubits), *seed)?;
                Network::new(topology, caps)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub qubits: usize,
    pub depth: usize,
    pub cx_count: usize,
    pub nodes: usize,
    pub topology: String,
    pub capacities: Vec<usize>,
    pub total_capacity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub id: String,
    pub cost: CostBreakdown,
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostBreakdown>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub id: String,
    pub runs: Vec<RunSummary>,
    pub mean: Option<f64>,
    pub stddev: Option<f64>,
    /// Percent reduction of `mean` relative to the best baseline.
    pub improvement_pct: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seeds_defaulted: bool,
    pub notes: Vec<String>,
}

/// The part of a summary that reruns reproduce byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Results {
    pub instance: InstanceInfo,
    pub config: ExperimentConfig,
    pub baselines: Vec<BaselineResult>,
    pub best_baseline: Option<String>,
    pub solvers: Vec<SolverSummary>,
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub solver: String,
    pub seed: u64,
    pub wall_clock_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub runs: Vec<RunTiming>,
    pub total_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub results: Results,
    pub timing: Timing,
}

/// In-memory outcome of an experiment, before anything is written.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub summary: Summary,
    pub circuit: Circuit,
    pub network: Network,
    pub baseline_schedules: Vec<(String, AssignmentSchedule)>,
    /// Successful runs, sorted by solver id then seed order in the config.
    pub records: Vec<RunRecord>,
}

/// Runs the experiment and writes every artifact to `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Summary> {
    let outcome = execute(cfg)?;
    write_outputs(&outcome, &cfg.output_dir)?;
    Ok(outcome.summary)
}

#[derive(Clone, Copy)]
enum Job {
    Sa(u64),
    Ea(u64),
}

/// Runs the experiment without touching the filesystem (apart from reading
/// file-based sources).
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let circuit = cfg.load_circuit()?;
    let network = cfg.load_network(circuit.num_qubits())?;
    let layered = layerize(&circuit);
    let model = CostModel::new(&layered, &network, cfg.lambda).with_penalty_mode(cfg.penalty_mode);

    let mut baselines = Vec::new();
    let mut baseline_schedules = Vec::new();
    if cfg.baselines {
        let (q, t) = (layered.num_qubits(), layered.depth());
        for (id, schedule) in [
            ("successive", successive_assignment(q, t, &network)?),
            ("capacity_based", capacity_based_assignment(q, t, &network)?),
        ] {
            let cost = model.evaluate(&schedule);
            baselines.push(BaselineResult {
                id: id.to_string(),
                cost,
                mean: cost.total as f64,
                stddev: 0.0,
            });
            baseline_schedules.push((id.to_string(), schedule));
        }
    }
    // First of the two wins ties.
    let best_baseline = baselines.iter().min_by_key(|b| b.cost.total).cloned();

    let mut jobs = Vec::new();
    if cfg.ea.is_some() {
        jobs.extend(cfg.seeds.iter().map(|&s| Job::Ea(s)));
    }
    if cfg.sa.is_some() {
        jobs.extend(cfg.seeds.iter().map(|&s| Job::Sa(s)));
    }
    let outputs: Vec<(String, u64, Result<RunRecord>)> = jobs
        .par_iter()
        .map(|&job| match job {
            Job::Sa(seed) => {
                let sa = SaConfig {
                    seed,
                    lambda: cfg.lambda,
                    penalty_mode: cfg.penalty_mode,
                    ..cfg.sa.clone().expect("sa enabled")
                };
                (solver_sa::SOLVER_ID.to_string(), seed, run_sa(&layered, &network, &sa))
            }
            Job::Ea(seed) => {
                let ea = EaConfig {
                    seed,
                    lambda: cfg.lambda,
                    penalty_mode: cfg.penalty_mode,
                    ..cfg.ea.clone().expect("ea enabled")
                };
                (solver_ea::SOLVER_ID.to_string(), seed, run_ea(&layered, &network, &ea))
            }
        })
        .collect();

    let mut solvers: Vec<SolverSummary> = Vec::new();
    let mut records = Vec::new();
    let mut timings = Vec::new();
    for (id, seed, result) in outputs {
        if solvers.last().is_none_or(|s| s.id != id) {
            solvers.push(SolverSummary {
                id: id.clone(),
                runs: Vec::new(),
                mean: None,
                stddev: None,
                improvement_pct: None,
            });
        }
        let summary = solvers.last_mut().expect("just pushed");
        match result {
            Ok(record) => {
                summary.runs.push(RunSummary {
                    seed,
                    cost: Some(record.final_cost),
                    error: None,
                });
                timings.push(RunTiming {
                    solver: id,
                    seed,
                    wall_clock_secs: record.wall_clock_secs,
                });
                records.push(record);
            }
            Err(err) => summary.runs.push(RunSummary {
                seed,
                cost: None,
                error: Some(err.to_string()),
            }),
        }
    }
    for summary in &mut solvers {
        let totals: Vec<f64> = summary
            .runs
            .iter()
            .filter_map(|r| r.cost)
            .map(|c| c.total as f64)
            .collect();
        if let Some((mean, stddev)) = mean_stddev(&totals) {
            summary.mean = Some(mean);
            summary.stddev = Some(stddev);
            summary.improvement_pct = best_baseline
                .as_ref()
                .and_then(|b| improvement_pct(b.cost.total as f64, mean));
        }
    }

    let summary = Summary {
        results: Results {
            instance: InstanceInfo {
                qubits: circuit.num_qubits(),
                depth: layered.depth(),
                cx_count: layered.cx_count(),
                nodes: network.num_nodes(),
                topology: network.topology().name().to_string(),
                capacities: network.capacities().to_vec(),
                total_capacity: network.total_capacity(),
            },
            config: cfg.clone(),
            baselines,
            best_baseline: best_baseline.map(|b| b.id),
            solvers,
            metadata: Metadata {
                seeds_defaulted: cfg.seeds == DEFAULT_SEEDS,
                notes: vec![
                    "improvement_pct = (best_baseline - mean) / best_baseline * 100".into(),
                    "stddev is the population standard deviation over successful seeds".into(),
                    "default seeds [1, 2, 3, 4, 5] are a harness choice".into(),
                ],
            },
        },
        timing: Timing {
            runs: timings,
            total_secs: started.elapsed().as_secs_f64(),
        },
    };

    Ok(ExperimentOutcome {
        summary,
        circuit,
        network,
        baseline_schedules,
        records,
    })
}

/// Mean and population standard deviation; `None` for an empty slice.
pub fn mean_stddev(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

/// Percent reduction of `mean_cost` against `baseline`; `None` when the
/// baseline is zero.
pub fn improvement_pct(baseline: f64, mean_cost: f64) -> Option<f64> {
    (baseline > 0.0).then(|| (baseline - mean_cost) / baseline * 100.0)
}

pub fn write_outputs(outcome: &ExperimentOutcome, dir: &Path) -> Result<()> {
    let schedules = dir.join("schedules");
    fs::create_dir_all(&schedules).map_err(|e| Error::io(&schedules, e))?;
    write_file(&dir.join("circuit.json"), &outcome.circuit.to_json())?;
    write_file(&dir.join("network.json"), &outcome.network.to_json())?;
    for (id, schedule) in &outcome.baseline_schedules {
        write_file(&schedules.join(format!("{id}.json")), &schedule.to_json())?;
    }
    for record in &outcome.records {
        let name = format!("{}_seed{}.json", record.solver, record.seed);
        write_file(&schedules.join(name), &record.schedule.to_json())?;
    }
    emit_traces(&outcome.records, &dir.join("traces"))?;
    let summary = serde_json::to_string_pretty(&outcome.summary).expect("summary serialization");
    write_file(&dir.join("summary.json"), &(summary + "\n"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes one CSV per run plus one aggregate CSV per solver id. Returns the
/// written paths, per-run files first.
pub fn emit_traces(records: &[RunRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for record in records {
        let path = dir.join(format!("{}_seed{}.csv", record.solver, record.seed));
        write_trace_csv(&path, &record.trace)?;
        written.push(path);
    }

    let mut ids: Vec<&str> = records.iter().map(|r| r.solver.as_str()).collect();
    ids.dedup();
    for id in ids {
        let traces: Vec<&[TracePoint]> = records
            .iter()
            .filter(|r| r.solver == id)
            .map(|r| r.trace.as_slice())
            .collect();
        let path = dir.join(format!("{id}_aggregate.csv"));
        write_aggregate_csv(&path, &traces)?;
        written.push(path);
    }
    Ok(written)
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Columns `iter,current_cost,best_cost`, plus `temperature` when the trace
/// carries one.
pub fn write_trace_csv(path: &Path, trace: &[TracePoint]) -> Result<()> {
    let with_temp = trace.first().is_some_and(|p| p.temperature.is_some());
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["iter", "current_cost", "best_cost"];
    if with_temp {
        header.push("temperature");
    }
    w.write_record(&header).map_err(csv_err(path))?;
    for p in trace {
        let mut row = vec![p.iter.to_string(), p.current_cost.to_string(), p.best_cost.to_string()];
        if with_temp {
            row.push(p.temperature.map(|t| t.to_string()).unwrap_or_default());
        }
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TracePoint>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize::<TracePoint>()
        .map(|row| row.map_err(csv_err(path)))
        .collect()
}

/// Per-row mean and population stddev of `best_cost` across traces,
/// columns `iter,mean_best_cost,std_best_cost`.
pub fn write_aggregate_csv(path: &Path, traces: &[&[TracePoint]]) -> Result<()> {
    let rows = traces.iter().map(|t| t.len()).min().unwrap_or(0);
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["iter", "mean_best_cost", "std_best_cost"])
        .map_err(csv_err(path))?;
    let mut column = Vec::with_capacity(traces.len());
    for i in 0..rows {
        column.clear();
        column.extend(traces.iter().map(|t| t[i].best_cost as f64));
        let (mean, std) = mean_stddev(&column).expect("non-empty");
        w.write_record(&[traces[0][i].iter.to_string(), mean.to_string(), std.to_string()])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Row of an aggregate trace CSV.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct AggregateRow {
    pub iter: usize,
    pub mean_best_cost: f64,
    pub std_best_cost: f64,
}

pub fn read_aggregate_csv(path: &Path) -> Result<Vec<AggregateRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize::<AggregateRow>()
        .map(|row| row.map_err(csv_err(path)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improvement_arithmetic() {
        let pct = improvement_pct(1678.0, 1000.0).unwrap();
        assert!((pct - 40.405_244_338_498_21).abs() < 1e-9);
        assert_eq!(improvement_pct(0.0, 0.0), None);
    }

    #[test]
    fn single_value_has_zero_spread() {
        assert_eq!(mean_stddev(&[42.0]), Some((42.0, 0.0)));
        assert_eq!(mean_stddev(&[]), None);
        let (m, s) = mean_stddev(&[1.0, 3.0]).unwrap();
        assert_eq!((m, s), (2.0, 1.0));
    }

    #[test]
    fn grid_topology_resolution() {
        assert_eq!(
            TopologyKind::Grid.resolve(25, None, None).unwrap(),
            Topology::Grid { rows: 5, cols: 5 }
        );
        assert_eq!(
            TopologyKind::Grid.resolve(12, Some(3), None).unwrap(),
            Topology::Grid { rows: 3, cols: 4 }
        );
        assert!(TopologyKind::Grid.resolve(12, None, None).is_err());
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"circuit": {"generate": {"qubits": 4, "depth": 3, "seed": 1}},
                "network": {"generate": {"topology": "ring", "nodes": 3, "cap_min": 2, "cap_max": 2, "seed": 1}},
                "output_dir": "out"}"#,
        )
        .unwrap();
        assert!(cfg.baselines);
        assert_eq!(cfg.seeds, DEFAULT_SEEDS);
        assert_eq!(cfg.lambda, DEFAULT_LAMBDA);
        assert!(cfg.validate().is_ok());

        let none = ExperimentConfig {
            baselines: false,
            ..cfg.clone()
        };
        assert!(none.validate().is_err());
        let no_seeds = ExperimentConfig { seeds: vec![], ..cfg };
        assert!(no_seeds.validate().is_err());
    }
}
