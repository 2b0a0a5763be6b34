//! Small hand-built instances and a direct random-instance builder.
//!
//! These are used throughout the test suites and are handy for experimenting
//! from the CLI or the Python bindings. The random builder draws cost and
//! latency matrices directly rather than deriving them from a topology, which
//! keeps huge instances cheap to construct.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{
    BbuCandidate, FronthaulParams, Point, ProblemInstance, RrhSite, Solution,
};

/// One site, one co-located candidate. `omega` is the fixed link cost and
/// `t` the link latency; gamma = chi = 1.
pub fn single_site(
    demand: f64,
    fixed_cost: f64,
    capacity: f64,
    marginal_cost: f64,
    omega: f64,
    t: f64,
    tau: f64,
) -> ProblemInstance {
    ProblemInstance {
        sites: vec![RrhSite {
            id: 0,
            position: Point { x: 0.0, y: 0.0 },
            demand,
            desired_latency: tau,
            ue_count: 0,
        }],
        candidates: vec![BbuCandidate {
            id: 0,
            site_id: 0,
            capacity,
            fixed_cost,
            marginal_cost,
        }],
        fronthaul: FronthaulParams {
            omega: vec![vec![omega]],
            latency: vec![vec![t]],
            distance: vec![vec![0.0]],
            gamma: 1.0,
            chi: 1.0,
        },
        budget: 1,
        alpha: 1.0,
        beta: 1.0,
    }
}

/// The three-site, two-candidate instance used across the solver tests.
///
/// Demands (60, 80, 70); candidate 0 has setup cost 100 and capacity 150,
/// candidate 1 setup cost 120 and capacity 200. chi = 0 so the link costs are
/// exactly the omega matrix [[10, 15], [20, 5], [30, 25]]. Budget 2, alpha 1,
/// beta 0: the greedy solver lands on cost 275 while the optimum is 260.
pub fn three_site_two_candidate() -> ProblemInstance {
    let demands = [60.0, 80.0, 70.0];
    let sites = demands
        .iter()
        .enumerate()
        .map(|(i, &demand)| RrhSite {
            id: i,
            position: Point {
                x: i as f64,
                y: 0.0,
            },
            demand,
            desired_latency: 1e-7,
            ue_count: 0,
        })
        .collect();
    let candidates = vec![
        BbuCandidate {
            id: 0,
            site_id: 0,
            capacity: 150.0,
            fixed_cost: 100.0,
            marginal_cost: 0.0,
        },
        BbuCandidate {
            id: 1,
            site_id: 1,
            capacity: 200.0,
            fixed_cost: 120.0,
            marginal_cost: 0.0,
        },
    ];
    ProblemInstance {
        sites,
        candidates,
        fronthaul: FronthaulParams {
            omega: vec![vec![10.0, 15.0], vec![20.0, 5.0], vec![30.0, 25.0]],
            latency: vec![vec![1e-9; 2]; 3],
            distance: vec![vec![0.0; 2]; 3],
            gamma: 1.0,
            chi: 0.0,
        },
        budget: 2,
        alpha: 1.0,
        beta: 0.0,
    }
}

/// Three sites totaling demand 210 against a single-server budget with no
/// candidate able to carry them all: infeasible for every solver.
pub fn infeasible_three_site() -> ProblemInstance {
    let mut instance = three_site_two_candidate();
    instance.budget = 1;
    // Largest capacity 200 < 210 total demand.
    instance
}

/// Assigns every site to the one candidate `j` and places only it.
pub fn assign_all_to(instance: &ProblemInstance, j: usize) -> Result<Solution, Error> {
    let mut placed = BTreeSet::new();
    placed.insert(j);
    let assignment: BTreeMap<usize, usize> =
        instance.sites.iter().map(|s| (s.id, j)).collect();
    Solution::evaluate(instance, placed, assignment)
}

/// Parameter ranges for [`random_instance`].
#[derive(Debug, Clone)]
pub struct RandomInstanceParams {
    pub demand_range: (f64, f64),
    pub capacity_range: (f64, f64),
    pub omega_range: (f64, f64),
    pub latency_range: (f64, f64),
    pub desired_latency_range: (f64, f64),
    pub fixed_cost: f64,
    pub marginal_cost: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for RandomInstanceParams {
    fn default() -> Self {
        RandomInstanceParams {
            demand_range: (50.0, 100.0),
            capacity_range: (250.0, 500.0),
            omega_range: (0.0, 1500.0),
            latency_range: (1e-8, 1.5e-6),
            desired_latency_range: (1e-7, 1e-6),
            fixed_cost: 500.0,
            marginal_cost: 1.0,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

/// Builds a random instance with directly drawn matrices. Deterministic in
/// the seed. Candidate `j` is co-located with site `j` (zero fixed link cost
/// and floor latency on the diagonal when `n_cands <= n_sites`).
pub fn random_instance(
    seed: u64,
    n_sites: usize,
    n_cands: usize,
    budget: usize,
    params: &RandomInstanceParams,
) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites: Vec<RrhSite> = (0..n_sites)
        .map(|i| RrhSite {
            id: i,
            position: Point {
                x: rng.random_range(0.0..=500.0),
                y: rng.random_range(0.0..=500.0),
            },
            demand: rng.random_range(params.demand_range.0..=params.demand_range.1),
            desired_latency: rng
                .random_range(params.desired_latency_range.0..=params.desired_latency_range.1),
            ue_count: 0,
        })
        .collect();
    let candidates: Vec<BbuCandidate> = (0..n_cands)
        .map(|j| BbuCandidate {
            id: j,
            site_id: j,
            capacity: rng.random_range(params.capacity_range.0..=params.capacity_range.1),
            fixed_cost: params.fixed_cost,
            marginal_cost: params.marginal_cost,
        })
        .collect();
    let mut omega = vec![vec![0.0; n_cands]; n_sites];
    let mut latency = vec![vec![0.0; n_cands]; n_sites];
    let mut distance = vec![vec![0.0; n_cands]; n_sites];
    for i in 0..n_sites {
        for j in 0..n_cands {
            if i == j {
                omega[i][j] = 0.0;
                latency[i][j] = 1e-9;
                distance[i][j] = 0.0;
            } else {
                omega[i][j] = rng.random_range(params.omega_range.0..=params.omega_range.1);
                latency[i][j] =
                    rng.random_range(params.latency_range.0..=params.latency_range.1);
                distance[i][j] = rng.random_range(0.0..=707.0);
            }
        }
    }
    ProblemInstance {
        sites,
        candidates,
        fronthaul: FronthaulParams {
            omega,
            latency,
            distance,
            gamma: 1.0,
            chi: 1.0,
        },
        budget,
        alpha: params.alpha,
        beta: params.beta,
    }
}
