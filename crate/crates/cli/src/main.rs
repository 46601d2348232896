use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qpart_core::experiment::{run_experiment, ExperimentConfig, TopologyKind};
use qpart_core::{
    brute_force_optimum, generate_capacities, generate_random, layerize, AssignmentSchedule, Circuit, CostModel, Error,
    Network, PenaltyMode, Result, DEFAULT_LAMBDA,
};

#[derive(Parser)]
#[command(
    name = "qpart",
    version,
    about = "Qubit-to-QPU assignment over time for quantum networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config and print its summary.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a random layered circuit.
    GenCircuit {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = qpart_core::circuit::DEFAULT_CX_FRACTION)]
        cx_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a network with random capacities.
    GenNetwork {
        #[arg(long, value_enum)]
        topology: TopologyArg,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        cap_min: usize,
        #[arg(long)]
        cap_max: usize,
        /// Lower bound on the capacity sum; defaults to nodes * cap_min.
        #[arg(long)]
        min_total: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the cost breakdown of a schedule as JSON.
    Cost {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: u64,
        #[arg(long, value_enum, default_value_t = PenaltyArg::PerPair)]
        penalty_mode: PenaltyArg,
    },
    /// Exhaustively find an optimal schedule for a tiny instance.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Ring,
    Grid,
    Star,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyArg {
    PerPair,
    PerTimeStep,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let summary = run_experiment(&cfg)?;
            print!("{}", pretty(&summary));
        }
        Command::GenCircuit {
            qubits,
            depth,
            cx_fraction,
            seed,
            out,
        } => {
            let circuit = generate_random(qubits, depth, cx_fraction, seed)?;
            emit(&circuit.to_json(), out.as_deref())?;
        }
        Command::GenNetwork {
            topology,
            nodes,
            cap_min,
            cap_max,
            min_total,
            rows,
            cols,
            seed,
            out,
        } => {
            let kind = match topology {
                TopologyArg::Ring => TopologyKind::Ring,
                TopologyArg::Grid => TopologyKind::Grid,
                TopologyArg::Star => TopologyKind::Star,
            };
            let topology = kind.resolve(nodes, rows, cols)?;
            let min_total = min_total.unwrap_or(nodes.saturating_mul(cap_min));
            let caps = generate_capacities(nodes, cap_min, cap_max, min_total, seed)?;
            emit(&Network::new(topology, caps)?.to_json(), out.as_deref())?;
        }
        Command::Cost {
            circuit,
            network,
            schedule,
            lambda,
            penalty_mode,
        } => {
            let lc = layerize(&Circuit::from_json(&read(&circuit)?)?);
            let net = Network::from_json(&read(&network)?)?;
            let schedule = AssignmentSchedule::from_json(&read(&schedule)?)?;
            let mode = match penalty_mode {
                PenaltyArg::PerPair => PenaltyMode::PerPair,
                PenaltyArg::PerTimeStep => PenaltyMode::PerTimeStep,
            };
            let breakdown = CostModel::new(&lc, &net, lambda)
                .with_penalty_mode(mode)
                .cost(&schedule)?;
            print!("{}", pretty(&breakdown));
        }
        Command::Oracle {
            circuit,
            network,
            lambda,
        } => {
            let lc = layerize(&Circuit::from_json(&read(&circuit)?)?);
            let net = Network::from_json(&read(&network)?)?;
            print!("{}", pretty(&brute_force_optimum(&lc, &net, lambda)?));
        }
    }
    Ok(())
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    let body = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if !err.use_stderr() => {
            // --help and --version.
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => return fail("usage", err.to_string().trim_end().to_string(), 2),
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => fail(err.kind(), err.to_string(), 1),
    }
}
