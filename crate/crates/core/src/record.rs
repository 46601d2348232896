use serde::{Deserialize, Serialize};

use crate::schedule::{AssignmentSchedule, CostBreakdown};

/// One row of a convergence trace. Row 0 describes the starting state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iter: usize,
    pub current_cost: u64,
    pub best_cost: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

/// Everything one solver run produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub solver: String,
    pub seed: u64,
    pub final_cost: CostBreakdown,
    pub schedule: AssignmentSchedule,
    pub trace: Vec<TracePoint>,
    pub wall_clock_secs: f64,
    /// Resolved solver configuration.
    pub config: serde_json::Value,
}

impl RunRecord {
    pub fn best_trace_is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].best_cost <= w[0].best_cost)
    }
}
