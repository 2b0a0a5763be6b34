//! Exhaustive enumeration over every placement subset and assignment map.
//! Ground truth for the solver test suites; guarded to tiny instances.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::error::Error;
use crate::exact::{SolveOutcome, SolveStatus};
use crate::model::{self, ProblemInstance, Solution};

/// Hard size guard: enumeration is `|J|^|I|`-flavored.
pub const MAX_ENUMERABLE: usize = 8;

/// Finds the optimal solution by enumerating every placement subset of size
/// at most the budget and every assignment map into it. `nodes_explored` in
/// the outcome counts the assignment maps visited, which is exactly
/// `sum over k <= p of C(|J|, k) * k^|I|`.
pub fn enumerate_optimal(instance: &ProblemInstance) -> Result<SolveOutcome, Error> {
    instance.validate()?;
    let n_sites = instance.site_count();
    let n_cands = instance.candidate_count();
    if n_sites > MAX_ENUMERABLE || n_cands > MAX_ENUMERABLE {
        return Err(Error::TooLargeToEnumerate(format!(
            "{n_sites} sites x {n_cands} candidates exceeds the {MAX_ENUMERABLE} guard"
        )));
    }
    let start = Instant::now();

    let mut maps_visited: u64 = 0;
    let mut best: Option<Solution> = None;

    for mask in 0u32..(1u32 << n_cands) {
        let subset: Vec<usize> = (0..n_cands).filter(|j| mask & (1 << j) != 0).collect();
        if subset.is_empty() || subset.len() > instance.budget {
            continue;
        }
        let server_cost: f64 = subset
            .iter()
            .map(|&j| model::server_cost(&instance.candidates[j]))
            .sum();

        // Odometer over all |subset|^|I| assignment maps.
        let k = subset.len();
        let mut choice = vec![0usize; n_sites];
        loop {
            maps_visited += 1;

            let mut loads = vec![0.0f64; k];
            let mut feasible = true;
            for (i, &c) in choice.iter().enumerate() {
                loads[c] += instance.sites[i].demand;
                if loads[c] > instance.candidates[subset[c]].capacity {
                    feasible = false;
                    break;
                }
            }
            if feasible {
                let mut cost = server_cost;
                let mut latency = 0.0;
                for (i, &c) in choice.iter().enumerate() {
                    let j = subset[c];
                    cost += instance.link_cost(i, j)?;
                    latency += instance.fronthaul.latency[i][j] - instance.sites[i].desired_latency;
                }
                let objective = instance.alpha * cost + instance.beta * latency;
                let is_better = match &best {
                    None => true,
                    Some(incumbent) => {
                        if objective < incumbent.objective - model::OPT_TOL {
                            true
                        } else if objective <= incumbent.objective + model::OPT_TOL {
                            let candidate = build_solution(instance, &subset, &choice);
                            model::tie_break_less(&candidate, incumbent)
                        } else {
                            false
                        }
                    }
                };
                if is_better {
                    best = Some(build_solution(instance, &subset, &choice));
                }
            }

            // Advance the odometer.
            let mut pos = 0;
            loop {
                if pos == n_sites {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < k {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == n_sites {
                break;
            }
        }
    }

    let status = if best.is_some() {
        SolveStatus::Optimal
    } else {
        SolveStatus::Infeasible
    };
    Ok(SolveOutcome {
        status,
        solution: best,
        nodes_explored: maps_visited,
        wall_time: start.elapsed().as_secs_f64(),
        gap: if status == SolveStatus::Optimal {
            Some(0.0)
        } else {
            None
        },
    })
}

fn build_solution(instance: &ProblemInstance, subset: &[usize], choice: &[usize]) -> Solution {
    let placed: BTreeSet<usize> = subset.iter().copied().collect();
    let assignment: BTreeMap<usize, usize> = choice
        .iter()
        .enumerate()
        .map(|(i, &c)| (i, subset[c]))
        .collect();
    Solution::evaluate(instance, placed, assignment).expect("complete by construction")
}
