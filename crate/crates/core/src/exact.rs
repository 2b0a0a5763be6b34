//! Exact solver: depth-first branch and bound over placements, then
//! assignments.
//!
//! Placement variables are branched in descending capacity-per-cost order,
//! place-first. Once every placement is decided (or the budget is full) the
//! search assigns sites in descending demand order, trying candidates by
//! ascending objective contribution. Nodes are pruned when their lower bound
//! reaches the incumbent minus the optimality tolerance; the bound combines
//! committed costs, each unassigned site's cheapest feasible link cost and
//! smallest possible latency deviation, and a fractional covering bound on
//! the server cost still required to reach total demand. The search is
//! seeded with the greedy solution whenever the greedy solver succeeds.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::greedy;
use crate::model::{self, ProblemInstance, Solution, OPT_TOL};

/// Search limits; zero means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolveLimits {
    #[serde(default)]
    pub time_limit: f64,
    #[serde(default)]
    pub node_limit: u64,
}

impl SolveLimits {
    pub fn validate(&self) -> Result<(), Error> {
        if self.time_limit < 0.0 {
            return Err(Error::InvalidConfig("time_limit must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    LimitReached,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// The optimum for `Optimal`; the best incumbent, if any, for
    /// `LimitReached`.
    pub solution: Option<Solution>,
    pub nodes_explored: u64,
    pub wall_time: f64,
    /// Relative optimality gap of the incumbent against the root lower
    /// bound; 0 for proven optima, absent without an incumbent.
    pub gap: Option<f64>,
}

/// Solves the instance to proven optimality within [`OPT_TOL`], or returns
/// the best incumbent when a limit fires first.
pub fn solve_exact(instance: &ProblemInstance, limits: &SolveLimits) -> Result<SolveOutcome, Error> {
    instance.validate()?;
    limits.validate()?;
    let start = Instant::now();

    // Necessary condition: even the largest budget-many capacities must
    // cover total demand.
    let total_demand = instance.total_demand();
    let mut caps: Vec<f64> = instance.candidates.iter().map(|c| c.capacity).collect();
    caps.sort_by(|a, b| b.total_cmp(a));
    let reachable: f64 = caps.iter().take(instance.budget).sum();
    if reachable < total_demand {
        return Ok(SolveOutcome {
            status: SolveStatus::Infeasible,
            solution: None,
            nodes_explored: 0,
            wall_time: start.elapsed().as_secs_f64(),
            gap: None,
        });
    }

    let mut searcher = Searcher::new(instance, limits, start);
    searcher.seed_incumbent()?;
    let root_bound = searcher.placement_bound(0, f64::INFINITY);
    searcher.place_node(0);

    let wall_time = start.elapsed().as_secs_f64();
    if std::env::var_os("VRANPAP_DEBUG_SEARCH").is_some() {
        eprintln!(
            "search: {} placement nodes, {} assignment nodes",
            searcher.placement_nodes,
            searcher.nodes - searcher.placement_nodes
        );
    }
    let (status, gap) = if searcher.limit_hit {
        let gap = searcher.incumbent.as_ref().map(|inc| {
            ((inc.objective - root_bound) / inc.objective.abs().max(1e-12)).max(0.0)
        });
        (SolveStatus::LimitReached, gap)
    } else if searcher.incumbent.is_some() {
        (SolveStatus::Optimal, Some(0.0))
    } else {
        (SolveStatus::Infeasible, None)
    };
    Ok(SolveOutcome {
        status,
        solution: searcher.incumbent,
        nodes_explored: searcher.nodes,
        wall_time,
        gap,
    })
}

struct Searcher<'a> {
    instance: &'a ProblemInstance,
    n_sites: usize,
    n_cands: usize,
    budget: usize,
    alpha: f64,
    beta: f64,
    total_demand: f64,

    demand: Vec<f64>,
    capacity: Vec<f64>,
    server_cost: Vec<f64>,
    link: Vec<Vec<f64>>,
    latdev: Vec<Vec<f64>>,
    /// alpha * link + beta * latdev, the per-assignment objective weight.
    contrib: Vec<Vec<f64>>,
    /// alpha * f_j / eta_j: server cost amortized per unit of demand.
    amortized_rate: Vec<f64>,

    branch_order: Vec<usize>,
    branch_pos: Vec<usize>,
    /// For each branch position k: capacities of the still-undecided
    /// candidates, largest first, as prefix sums.
    suffix_cap_prefix: Vec<Vec<f64>>,
    /// For each branch position k: undecided candidates sorted by cost per
    /// unit capacity, cheapest rate first.
    rate_suffix: Vec<Vec<usize>>,
    site_order: Vec<usize>,
    site_by_cost: Vec<Vec<usize>>,
    site_by_latdev: Vec<Vec<usize>>,
    site_by_contrib: Vec<Vec<usize>>,

    placed: Vec<bool>,
    placed_count: usize,
    placed_capacity: f64,
    committed_cost: f64,
    committed_lat: f64,
    residual: Vec<f64>,
    assignment: Vec<usize>,

    incumbent: Option<Solution>,
    incumbent_obj: f64,

    link_savings: SavingsBucket,
    joint_savings: SavingsBucket,

    nodes: u64,
    placement_nodes: u64,
    node_limit: u64,
    time_limit: f64,
    start: Instant,
    limit_hit: bool,
}

const UNASSIGNED: usize = usize::MAX;

/// Per-candidate accumulator of the savings sites forfeit when their
/// cheapest candidate is not placed. Placed candidates always realize their
/// bucket; undecided ones are capped at the remaining budget slots.
#[derive(Default)]
struct SavingsBucket {
    per_candidate: Vec<f64>,
    touched: Vec<usize>,
    sortable: Vec<f64>,
}

impl SavingsBucket {
    fn new(n_cands: usize) -> Self {
        SavingsBucket {
            per_candidate: vec![0.0; n_cands],
            touched: Vec::new(),
            sortable: Vec::new(),
        }
    }

    fn add(&mut self, candidate: usize, saving: f64) {
        if saving <= 0.0 {
            return;
        }
        if self.per_candidate[candidate] == 0.0 {
            self.touched.push(candidate);
        }
        self.per_candidate[candidate] += saving;
    }

    /// Sum of savings guaranteed realized (placed candidates) plus the best
    /// `slots` undecided buckets, then resets the accumulator.
    fn realize(&mut self, placed: &[bool], slots: usize) -> f64 {
        let mut realized = 0.0;
        self.sortable.clear();
        for &j in &self.touched {
            if placed[j] {
                realized += self.per_candidate[j];
            } else {
                self.sortable.push(self.per_candidate[j]);
            }
            self.per_candidate[j] = 0.0;
        }
        self.touched.clear();
        self.sortable.sort_by(|a, b| b.total_cmp(a));
        realized + self.sortable.iter().take(slots).sum::<f64>()
    }

    fn reset(&mut self) {
        for &j in &self.touched {
            self.per_candidate[j] = 0.0;
        }
        self.touched.clear();
    }
}

impl<'a> Searcher<'a> {
    fn new(instance: &'a ProblemInstance, limits: &SolveLimits, start: Instant) -> Self {
        let n_sites = instance.site_count();
        let n_cands = instance.candidate_count();
        let demand: Vec<f64> = instance.sites.iter().map(|s| s.demand).collect();
        let capacity: Vec<f64> = instance.candidates.iter().map(|c| c.capacity).collect();
        let server_cost: Vec<f64> = instance.candidates.iter().map(model::server_cost).collect();

        let mut link = vec![vec![0.0; n_cands]; n_sites];
        let mut latdev = vec![vec![0.0; n_cands]; n_sites];
        let mut contrib = vec![vec![0.0; n_cands]; n_sites];
        for i in 0..n_sites {
            for j in 0..n_cands {
                link[i][j] = instance.link_cost(i, j).expect("validated index");
                latdev[i][j] =
                    instance.fronthaul.latency[i][j] - instance.sites[i].desired_latency;
                contrib[i][j] = instance.alpha * link[i][j] + instance.beta * latdev[i][j];
            }
        }

        let mut branch_order: Vec<usize> = (0..n_cands).collect();
        branch_order.sort_by(|&a, &b| {
            let ra = if server_cost[a] > 0.0 {
                capacity[a] / server_cost[a]
            } else {
                f64::INFINITY
            };
            let rb = if server_cost[b] > 0.0 {
                capacity[b] / server_cost[b]
            } else {
                f64::INFINITY
            };
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let mut branch_pos = vec![0usize; n_cands];
        for (pos, &j) in branch_order.iter().enumerate() {
            branch_pos[j] = pos;
        }

        let mut suffix_cap_prefix = Vec::with_capacity(n_cands + 1);
        let mut rate_suffix = Vec::with_capacity(n_cands + 1);
        for k in 0..=n_cands {
            let undecided: Vec<usize> = branch_order[k..].to_vec();
            let mut caps: Vec<f64> = undecided.iter().map(|&j| capacity[j]).collect();
            caps.sort_by(|a, b| b.total_cmp(a));
            let mut prefix = Vec::with_capacity(caps.len() + 1);
            prefix.push(0.0);
            for c in caps {
                prefix.push(prefix.last().unwrap() + c);
            }
            suffix_cap_prefix.push(prefix);
            let mut by_rate = undecided;
            by_rate.sort_by(|&a, &b| {
                let ra = server_cost[a] / capacity[a];
                let rb = server_cost[b] / capacity[b];
                ra.total_cmp(&rb).then(a.cmp(&b))
            });
            rate_suffix.push(by_rate);
        }

        let mut site_order: Vec<usize> = (0..n_sites).collect();
        site_order.sort_by(|&a, &b| demand[b].total_cmp(&demand[a]).then(a.cmp(&b)));
        let sort_sites = |key: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<usize>> {
            (0..n_sites)
                .map(|i| {
                    let mut order: Vec<usize> = (0..n_cands).collect();
                    order.sort_by(|&a, &b| key(i, a).total_cmp(&key(i, b)).then(a.cmp(&b)));
                    order
                })
                .collect()
        };
        let site_by_cost = sort_sites(&|i, j| link[i][j]);
        let site_by_latdev = sort_sites(&|i, j| latdev[i][j]);
        let site_by_contrib = sort_sites(&|i, j| contrib[i][j]);

        let amortized_rate: Vec<f64> = (0..n_cands)
            .map(|j| instance.alpha * server_cost[j] / capacity[j])
            .collect();
        Searcher {
            instance,
            n_sites,
            n_cands,
            budget: instance.budget,
            alpha: instance.alpha,
            beta: instance.beta,
            total_demand: demand.iter().sum(),
            demand,
            capacity,
            server_cost,
            link,
            latdev,
            contrib,
            amortized_rate,
            branch_order,
            branch_pos,
            suffix_cap_prefix,
            rate_suffix,
            site_order,
            site_by_cost,
            site_by_latdev,
            site_by_contrib,
            placed: vec![false; n_cands],
            placed_count: 0,
            placed_capacity: 0.0,
            committed_cost: 0.0,
            committed_lat: 0.0,
            residual: vec![0.0; n_cands],
            assignment: vec![UNASSIGNED; n_sites],
            incumbent: None,
            incumbent_obj: f64::INFINITY,
            link_savings: SavingsBucket::new(n_cands),
            joint_savings: SavingsBucket::new(n_cands),
            nodes: 0,
            placement_nodes: 0,
            node_limit: limits.node_limit,
            time_limit: limits.time_limit,
            start,
            limit_hit: false,
        }
    }

    /// Installs the best cheap incumbent available before the search: the
    /// greedy solution when it succeeds and a top-capacity placement
    /// otherwise, each improved by a bounded deterministic local search over
    /// placements. Any feasible solution is a sound incumbent; optimality is
    /// still proven by the search itself.
    fn seed_incumbent(&mut self) -> Result<(), Error> {
        let mut starts: Vec<Vec<bool>> = Vec::new();
        if let Some(solution) = greedy::solve_caga(self.instance)?.solution {
            let mut placed = vec![false; self.n_cands];
            for &j in &solution.placed {
                placed[j] = true;
            }
            starts.push(placed);
        }
        let mut by_capacity: Vec<usize> = (0..self.n_cands).collect();
        by_capacity.sort_by(|&a, &b| self.capacity[b].total_cmp(&self.capacity[a]).then(a.cmp(&b)));
        let mut top = vec![false; self.n_cands];
        for &j in by_capacity.iter().take(self.budget) {
            top[j] = true;
        }
        starts.push(top);

        let mut best: Option<(Vec<bool>, Vec<usize>, f64)> = None;
        for start in starts {
            if let Some(improved) = self.improve_placement(start) {
                let replace = match &best {
                    None => true,
                    Some((_, _, obj)) => improved.2 < obj - OPT_TOL,
                };
                if replace {
                    best = Some(improved);
                }
            }
        }
        if let Some((placed, assignment, _)) = best {
            let placed_set: BTreeSet<usize> =
                (0..self.n_cands).filter(|&j| placed[j]).collect();
            let map: BTreeMap<usize, usize> =
                assignment.iter().enumerate().map(|(i, &j)| (i, j)).collect();
            let solution = Solution::evaluate(self.instance, placed_set, map)?;
            self.incumbent_obj = solution.objective;
            self.incumbent = Some(solution);
        }
        Ok(())
    }

    /// Assigns every site to its cheapest-contribution placed candidate with
    /// room, sites in descending demand order. Returns the assignment and
    /// the full objective, or None when some site does not fit.
    fn greedy_assign(&self, placed: &[bool]) -> Option<(Vec<usize>, f64)> {
        let mut residual: Vec<f64> = (0..self.n_cands)
            .map(|j| if placed[j] { self.capacity[j] } else { 0.0 })
            .collect();
        let mut assignment = vec![UNASSIGNED; self.n_sites];
        let mut contribution = 0.0;
        for &i in &self.site_order {
            let mut chosen = None;
            for &j in &self.site_by_contrib[i] {
                if placed[j] && residual[j] >= self.demand[i] {
                    chosen = Some(j);
                    break;
                }
            }
            let j = chosen?;
            assignment[i] = j;
            residual[j] -= self.demand[i];
            contribution += self.contrib[i][j];
        }
        let servers: f64 = (0..self.n_cands)
            .filter(|&j| placed[j])
            .map(|j| self.server_cost[j])
            .sum();
        Some((assignment, self.alpha * servers + contribution))
    }

    /// Steepest-descent search over placement sets via add, drop, and swap
    /// moves, each evaluated by greedy reassignment. Deterministic and
    /// bounded; used only to tighten the initial incumbent.
    fn improve_placement(&self, start: Vec<bool>) -> Option<(Vec<bool>, Vec<usize>, f64)> {
        let (assignment, objective) = self.greedy_assign(&start)?;
        let mut current = (start, assignment, objective);
        for _ in 0..100 {
            let placed_count = current.0.iter().filter(|&&p| p).count();
            let mut best_move: Option<(Vec<bool>, Vec<usize>, f64)> = None;
            let mut consider = |placed: Vec<bool>, searcher: &Self| {
                if let Some((assignment, objective)) = searcher.greedy_assign(&placed) {
                    let improves = match &best_move {
                        None => objective < current.2 - OPT_TOL,
                        Some((_, _, best_obj)) => objective < best_obj - OPT_TOL,
                    };
                    if improves {
                        best_move = Some((placed, assignment, objective));
                    }
                }
            };
            for j in 0..self.n_cands {
                if current.0[j] && placed_count > 1 {
                    let mut placed = current.0.clone();
                    placed[j] = false;
                    consider(placed, self);
                }
            }
            for j in 0..self.n_cands {
                if !current.0[j] && placed_count < self.budget {
                    let mut placed = current.0.clone();
                    placed[j] = true;
                    consider(placed, self);
                }
            }
            for j_out in 0..self.n_cands {
                if !current.0[j_out] {
                    continue;
                }
                for j_in in 0..self.n_cands {
                    if current.0[j_in] {
                        continue;
                    }
                    let mut placed = current.0.clone();
                    placed[j_out] = false;
                    placed[j_in] = true;
                    consider(placed, self);
                }
            }
            match best_move {
                Some(better) => current = better,
                None => break,
            }
        }
        Some(current)
    }

    fn enter_node(&mut self) -> bool {
        if self.limit_hit {
            return false;
        }
        self.nodes += 1;
        if self.node_limit > 0 && self.nodes > self.node_limit {
            self.limit_hit = true;
            return false;
        }
        if self.time_limit > 0.0
            && self.nodes % 64 == 0
            && self.start.elapsed().as_secs_f64() > self.time_limit
        {
            self.limit_hit = true;
            return false;
        }
        true
    }

    /// Cheapest feasible link cost for site `i` at placement position `k`,
    /// over placed candidates and (budget permitting) undecided ones.
    fn min_over_allowed(&self, i: usize, k: usize, order: &[Vec<usize>], values: &[Vec<f64>]) -> Option<f64> {
        let undecided_usable = self.placed_count < self.budget;
        for &j in &order[i] {
            if self.capacity[j] < self.demand[i] {
                continue;
            }
            if self.placed[j] || (undecided_usable && self.branch_pos[j] >= k) {
                return Some(values[i][j]);
            }
        }
        None
    }

    /// Lower bound at a placement node with candidates before position `k`
    /// decided: the larger of two sound relaxations. Infinite when some site
    /// has no feasible server left or the remaining demand cannot be covered.
    ///
    /// The first relaxation amortizes undecided server costs over the demand
    /// they would carry: a site assigned to an undecided candidate j pays at
    /// least `f_j * demand / capacity_j` of j's setup cost, since j's load
    /// never exceeds its capacity.
    ///
    /// The second combines a budget-aware link bound with a fractional
    /// covering bound on remaining server cost. Each site pays at least its
    /// second-cheapest allowed link cost unless its cheapest candidate ends
    /// up placed, and at most `budget - placed` undecided candidates can
    /// capture their sites' savings.
    /// `prune_at` short-circuits the computation: once the cheaper joint
    /// relaxation already reaches it, the covering relaxation is skipped.
    fn placement_bound(&mut self, k: usize, prune_at: f64) -> f64 {
        let mut servers_needed = 0.0;
        let need = self.total_demand - self.placed_capacity;
        if need > 0.0 {
            let mut remaining = need;
            for &j in &self.rate_suffix[k] {
                let eta = self.capacity[j];
                if eta >= remaining {
                    servers_needed += self.server_cost[j] * (remaining / eta);
                    remaining = 0.0;
                    break;
                }
                servers_needed += self.server_cost[j];
                remaining -= eta;
            }
            if remaining > 0.0 {
                return f64::INFINITY;
            }
        }

        let undecided_usable = self.placed_count < self.budget;
        let slots = self.budget - self.placed_count;
        let mut joint_savings = std::mem::take(&mut self.joint_savings);

        let mut joint_second_sum = 0.0;
        for i in 0..self.n_sites {
            // Two smallest joint values (link cost + latency deviation +
            // amortized server share for undecided candidates). The list is
            // sorted by the shareless base, so the scan stops once the base
            // can no longer improve the second-best.
            let mut joint_best = f64::INFINITY;
            let mut joint_best_at = usize::MAX;
            let mut joint_second = f64::INFINITY;
            for &j in &self.site_by_contrib[i] {
                let base = self.contrib[i][j];
                if base >= joint_second {
                    break;
                }
                if self.capacity[j] < self.demand[i] {
                    continue;
                }
                let joint = if self.placed[j] {
                    base
                } else if undecided_usable && self.branch_pos[j] >= k {
                    base + self.amortized_rate[j] * self.demand[i]
                } else {
                    continue;
                };
                if joint < joint_best {
                    joint_second = joint_best;
                    joint_best = joint;
                    joint_best_at = j;
                } else if joint < joint_second {
                    joint_second = joint;
                }
            }
            if joint_best_at == usize::MAX {
                joint_savings.reset();
                self.joint_savings = joint_savings;
                return f64::INFINITY;
            }
            if joint_second == f64::INFINITY {
                joint_second = joint_best;
            }
            joint_second_sum += joint_second;
            joint_savings.add(joint_best_at, joint_second - joint_best);
        }
        let joint_bound = self.alpha * self.committed_cost + joint_second_sum
            - joint_savings.realize(&self.placed, slots);
        self.joint_savings = joint_savings;
        if joint_bound >= prune_at {
            return joint_bound;
        }

        let mut link_savings = std::mem::take(&mut self.link_savings);
        let mut link_second_sum = 0.0;
        let mut lat_sum = 0.0;
        for i in 0..self.n_sites {
            // Two cheapest allowed link costs, for the bound that accounts
            // for server costs through fractional demand covering instead.
            let mut cheapest = f64::INFINITY;
            let mut cheapest_at = usize::MAX;
            let mut second = f64::INFINITY;
            for &j in &self.site_by_cost[i] {
                if self.capacity[j] < self.demand[i] {
                    continue;
                }
                if !(self.placed[j] || (undecided_usable && self.branch_pos[j] >= k)) {
                    continue;
                }
                if cheapest_at == usize::MAX {
                    cheapest = self.link[i][j];
                    cheapest_at = j;
                } else {
                    second = self.link[i][j];
                    break;
                }
            }
            if second == f64::INFINITY {
                second = cheapest;
            }
            link_second_sum += second;
            link_savings.add(cheapest_at, second - cheapest);

            if self.beta != 0.0 {
                match self.min_over_allowed(i, k, &self.site_by_latdev, &self.latdev) {
                    Some(d) => lat_sum += d,
                    None => unreachable!("joint scan already found a feasible candidate"),
                }
            }
        }
        let link_bound = link_second_sum - link_savings.realize(&self.placed, slots);
        let covering_bound = self.alpha * (self.committed_cost + link_bound + servers_needed)
            + self.beta * lat_sum;

        self.link_savings = link_savings;
        joint_bound.max(covering_bound)
    }

    /// Placement node: the candidates at branch positions before `k` are
    /// decided. Branches place-first on the candidate at position `k`; the
    /// assignment phase starts once every placement is decided or the budget
    /// is full.
    fn place_node(&mut self, k: usize) {
        if !self.enter_node() {
            return;
        }
        self.placement_nodes += 1;
        // Even the largest still-available capacities cannot cover demand.
        let slots = self.budget - self.placed_count;
        let prefix = &self.suffix_cap_prefix[k];
        let extra = prefix[slots.min(prefix.len() - 1)];
        if self.placed_capacity + extra < self.total_demand {
            return;
        }
        if self.placement_bound(k, self.incumbent_obj - OPT_TOL) >= self.incumbent_obj - OPT_TOL {
            return;
        }
        if self.placed_count == self.budget || k == self.n_cands {
            self.assign_node(0);
            return;
        }

        let j = self.branch_order[k];
        self.placed[j] = true;
        self.placed_count += 1;
        self.placed_capacity += self.capacity[j];
        self.committed_cost += self.server_cost[j];
        self.residual[j] = self.capacity[j];
        self.place_node(k + 1);
        self.placed[j] = false;
        self.placed_count -= 1;
        self.placed_capacity -= self.capacity[j];
        self.committed_cost -= self.server_cost[j];
        self.residual[j] = 0.0;
        if self.limit_hit {
            return;
        }

        self.place_node(k + 1);
    }

    /// Lower bound at an assignment node: committed objective plus each
    /// remaining site's cheapest feasible link cost and smallest feasible
    /// latency deviation.
    fn assignment_bound(&self, depth: usize) -> f64 {
        let mut bound = self.alpha * self.committed_cost + self.beta * self.committed_lat;
        for &i in &self.site_order[depth..] {
            let mut best_link = None;
            for &j in &self.site_by_cost[i] {
                if self.placed[j] && self.residual[j] >= self.demand[i] {
                    best_link = Some(self.link[i][j]);
                    break;
                }
            }
            match best_link {
                Some(c) => bound += self.alpha * c,
                None => return f64::INFINITY,
            }
            if self.beta != 0.0 {
                let mut best_dev = None;
                for &j in &self.site_by_latdev[i] {
                    if self.placed[j] && self.residual[j] >= self.demand[i] {
                        best_dev = Some(self.latdev[i][j]);
                        break;
                    }
                }
                match best_dev {
                    Some(d) => bound += self.beta * d,
                    None => return f64::INFINITY,
                }
            }
        }
        bound
    }

    fn assign_node(&mut self, depth: usize) {
        if !self.enter_node() {
            return;
        }
        if self.assignment_bound(depth) >= self.incumbent_obj - OPT_TOL {
            return;
        }
        if depth == self.n_sites {
            self.offer_incumbent();
            return;
        }
        let i = self.site_order[depth];
        for idx in 0..self.n_cands {
            let j = self.site_by_contrib[i][idx];
            if !self.placed[j] || self.residual[j] < self.demand[i] {
                continue;
            }
            self.assignment[i] = j;
            self.residual[j] -= self.demand[i];
            self.committed_cost += self.link[i][j];
            self.committed_lat += self.latdev[i][j];
            self.assign_node(depth + 1);
            self.assignment[i] = UNASSIGNED;
            self.residual[j] += self.demand[i];
            self.committed_cost -= self.link[i][j];
            self.committed_lat -= self.latdev[i][j];
            if self.limit_hit {
                return;
            }
        }
    }

    fn offer_incumbent(&mut self) {
        let placed: BTreeSet<usize> = (0..self.n_cands).filter(|&j| self.placed[j]).collect();
        let assignment: BTreeMap<usize, usize> = self
            .assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| (i, j))
            .collect();
        let solution = Solution::evaluate(self.instance, placed, assignment)
            .expect("complete assignment by construction");
        let objective = solution.objective;
        let accept = if objective < self.incumbent_obj - OPT_TOL {
            true
        } else if objective <= self.incumbent_obj + OPT_TOL {
            self.incumbent
                .as_ref()
                .map_or(true, |inc| model::tie_break_less(&solution, inc))
        } else {
            false
        };
        if accept {
            self.incumbent_obj = self.incumbent_obj.min(objective);
            self.incumbent = Some(solution);
        }
    }
}
