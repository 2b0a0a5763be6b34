//! The cost-aware greedy solver.
//!
//! Candidates are visited in ascending order of server setup cost. Each
//! visited candidate, while the placement budget allows and unassigned sites
//! remain, takes the remaining sites in ascending order of its link cost and
//! absorbs every site that fits its residual capacity; the candidate is
//! placed on its first absorbed site. The run fails when sites remain
//! unassigned after the sweep.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{self, ProblemInstance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyStatus {
    Success,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyOutcome {
    pub status: GreedyStatus,
    /// Present exactly when the status is `Success`.
    pub solution: Option<Solution>,
    pub wall_time: f64,
}

/// Runs the greedy placement-and-assignment sweep on `instance`.
///
/// Deterministic: equal setup costs are broken by candidate id and equal
/// link costs by site id. A site whose demand exactly matches the residual
/// capacity is accepted (the capacity constraint is non-strict).
pub fn solve_caga(instance: &ProblemInstance) -> Result<GreedyOutcome, Error> {
    instance.validate()?;
    let start = Instant::now();

    let mut order: Vec<usize> = (0..instance.candidates.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = model::server_cost(&instance.candidates[a]);
        let fb = model::server_cost(&instance.candidates[b]);
        fa.total_cmp(&fb).then(a.cmp(&b))
    });

    let mut unassigned: Vec<usize> = (0..instance.sites.len()).collect();
    let mut placed: BTreeSet<usize> = BTreeSet::new();
    let mut assignment: BTreeMap<usize, usize> = BTreeMap::new();

    for &j in &order {
        if placed.len() >= instance.budget || unassigned.is_empty() {
            break;
        }
        unassigned.sort_by(|&a, &b| {
            let ca = instance.link_cost(a, j).expect("validated index");
            let cb = instance.link_cost(b, j).expect("validated index");
            ca.total_cmp(&cb).then(a.cmp(&b))
        });
        let mut residual = instance.candidates[j].capacity;
        let mut still_unassigned = Vec::with_capacity(unassigned.len());
        for &i in &unassigned {
            if instance.sites[i].demand <= residual {
                placed.insert(j);
                assignment.insert(i, j);
                residual -= instance.sites[i].demand;
            } else {
                still_unassigned.push(i);
            }
        }
        unassigned = still_unassigned;
    }

    if !unassigned.is_empty() {
        return Ok(GreedyOutcome {
            status: GreedyStatus::Failed,
            solution: None,
            wall_time: start.elapsed().as_secs_f64(),
        });
    }

    let solution = Solution::evaluate(instance, placed, assignment)?;
    Ok(GreedyOutcome {
        status: GreedyStatus::Success,
        solution: Some(solution),
        wall_time: start.elapsed().as_secs_f64(),
    })
}
