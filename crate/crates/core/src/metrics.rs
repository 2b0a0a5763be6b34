//! Evaluation metrics computed from (instance, solution) pairs: total cost,
//! servers placed, resource utilization, and mean latency deviation.
//! Infeasible or failed runs collapse to an all-zero row.

use serde::{Deserialize, Serialize};

use crate::model::{self, LatencyMode, ProblemInstance, Solution};

/// One measured data point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    /// Pure cost sum (server + link costs), independent of the objective
    /// weights.
    pub total_cost: f64,
    pub bbus_placed: usize,
    /// Assigned demand over placed capacity, in (0, 1] when feasible.
    pub utilization: f64,
    pub wall_time: f64,
    /// Mean signed latency deviation over assignments, in seconds.
    pub latency_deviation: f64,
    pub feasible: bool,
}

impl MetricsRow {
    pub fn zero(wall_time: f64) -> Self {
        MetricsRow {
            total_cost: 0.0,
            bbus_placed: 0,
            utilization: 0.0,
            wall_time,
            latency_deviation: 0.0,
            feasible: false,
        }
    }
}

/// Fraction of placed capacity consumed by assigned demand; 0 for an empty
/// placement.
pub fn utilization(instance: &ProblemInstance, solution: &Solution) -> f64 {
    let placed_capacity: f64 = solution
        .placed
        .iter()
        .filter_map(|&j| instance.candidates.get(j))
        .map(|c| c.capacity)
        .sum();
    if placed_capacity <= 0.0 {
        return 0.0;
    }
    let assigned_demand: f64 = solution
        .assignment
        .keys()
        .filter_map(|&i| instance.sites.get(i))
        .map(|s| s.demand)
        .sum();
    assigned_demand / placed_capacity
}

/// Mean signed latency deviation over all assignments.
pub fn latency_deviation(instance: &ProblemInstance, solution: &Solution) -> f64 {
    latency_deviation_with(instance, solution, LatencyMode::Signed)
}

pub fn latency_deviation_with(
    instance: &ProblemInstance,
    solution: &Solution,
    mode: LatencyMode,
) -> f64 {
    if solution.assignment.is_empty() {
        return 0.0;
    }
    let sum: f64 = solution
        .assignment
        .iter()
        .map(|(&i, &j)| {
            let dev = instance.fronthaul.latency[i][j] - instance.sites[i].desired_latency;
            match mode {
                LatencyMode::Signed => dev,
                LatencyMode::Clamped => dev.max(0.0),
            }
        })
        .sum();
    sum / solution.assignment.len() as f64
}

/// Collapses a solver outcome into a metrics row. A missing or infeasible
/// solution yields the all-zero row, matching the drop-to-zero convention of
/// the cost and utilization curves.
pub fn summarize(
    instance: &ProblemInstance,
    solution: Option<&Solution>,
    wall_time: f64,
) -> MetricsRow {
    summarize_with(instance, solution, wall_time, LatencyMode::Signed)
}

pub fn summarize_with(
    instance: &ProblemInstance,
    solution: Option<&Solution>,
    wall_time: f64,
    mode: LatencyMode,
) -> MetricsRow {
    let Some(solution) = solution else {
        return MetricsRow::zero(wall_time);
    };
    if !model::check_feasibility(instance, solution).is_ok() {
        return MetricsRow::zero(wall_time);
    }
    let breakdown = match model::objective_with(instance, solution, mode) {
        Ok(b) => b,
        Err(_) => return MetricsRow::zero(wall_time),
    };
    MetricsRow {
        total_cost: breakdown.cost_component,
        bbus_placed: solution.placed.len(),
        utilization: utilization(instance, solution),
        wall_time,
        latency_deviation: breakdown.latency_component / instance.site_count() as f64,
        feasible: true,
    }
}
