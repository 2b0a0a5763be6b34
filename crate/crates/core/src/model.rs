//! Domain types for the placement-and-assignment problem, the cost and
//! objective functions, and full feasibility checking.
//!
//! An instance couples a set of RRH sites (demand points) with a set of
//! candidate BBU servers (capacitated facilities, each co-located with a
//! site) through per-pair fronthaul cost and latency matrices. A solution
//! places at most `budget` servers and assigns every site to exactly one
//! placed server.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Absolute tolerance used for all solver optimality comparisons.
pub const OPT_TOL: f64 = 1e-9;

/// A 2D position in grid units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// A remote radio head site: a demand point that must be served by exactly
/// one placed BBU server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrhSite {
    pub id: usize,
    #[serde(flatten)]
    pub position: Point,
    /// Combined processing demand of the subscribers on this site.
    pub demand: f64,
    /// Desired maximum fronthaul latency, in seconds.
    pub desired_latency: f64,
    /// Subscriber count. Carried for reporting; unused by the optimization.
    pub ue_count: u32,
}

/// A candidate BBU server location, co-located with one of the RRH sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BbuCandidate {
    pub id: usize,
    pub site_id: usize,
    /// Processing capacity available if this server is placed.
    pub capacity: f64,
    /// Fixed installation cost.
    pub fixed_cost: f64,
    /// Incremental cost per unit of installed capacity.
    pub marginal_cost: f64,
}

/// Per-pair fronthaul link parameters. All matrices are row-major,
/// sites x candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FronthaulParams {
    /// Fixed link setup cost per (site, candidate) pair.
    pub omega: Vec<Vec<f64>>,
    /// Link latency in seconds per pair; strictly positive.
    pub latency: Vec<Vec<f64>>,
    /// Link distance in grid units per pair.
    pub distance: Vec<Vec<f64>>,
    /// Bandwidth required per unit of site demand.
    pub gamma: f64,
    /// Cost per unit of link bandwidth.
    pub chi: f64,
}

/// A complete, immutable problem instance.
///
/// Site and candidate ids are dense 0-based indices (`sites[i].id == i`,
/// `candidates[j].id == j`); they double as row/column indices into the
/// fronthaul matrices. `validate` enforces this along with every other
/// instance invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub sites: Vec<RrhSite>,
    pub candidates: Vec<BbuCandidate>,
    pub fronthaul: FronthaulParams,
    /// Maximum number of servers that may be placed.
    pub budget: usize,
    /// Weight of the cost component of the objective.
    pub alpha: f64,
    /// Weight of the latency-deviation component of the objective.
    pub beta: f64,
}

/// Placement set and assignment map together with the objective breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Ids of the placed candidates.
    pub placed: BTreeSet<usize>,
    /// Site id -> candidate id, one entry per site.
    pub assignment: BTreeMap<usize, usize>,
    /// alpha * cost_component + beta * latency_component.
    pub objective: f64,
    /// Server costs of placed candidates plus link costs of assignments.
    pub cost_component: f64,
    /// Sum of signed latency deviations over assignments, in seconds.
    pub latency_component: f64,
}

/// How latency deviations enter the objective and the deviation metric.
/// `Signed` keeps negative terms (assignments beating their desired latency
/// earn a reward), which is the default; `Clamped` floors each term at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatencyMode {
    #[default]
    Signed,
    Clamped,
}

/// Cost of placing a candidate server: fixed cost plus marginal cost times
/// installed capacity.
pub fn server_cost(candidate: &BbuCandidate) -> f64 {
    candidate.fixed_cost + candidate.marginal_cost * candidate.capacity
}

/// Bandwidth required on any fronthaul link serving `site`.
pub fn link_bandwidth(site: &RrhSite, gamma: f64) -> f64 {
    gamma * site.demand
}

/// Cost of the fronthaul link between `site` and candidate `candidate_id`:
/// the pair's fixed cost plus the bandwidth-dependent part.
pub fn link_cost(
    site: &RrhSite,
    candidate_id: usize,
    fronthaul: &FronthaulParams,
) -> Result<f64, Error> {
    let row = fronthaul
        .omega
        .get(site.id)
        .ok_or_else(|| Error::IndexOutOfRange(format!("site id {} out of range", site.id)))?;
    let omega = row.get(candidate_id).ok_or_else(|| {
        Error::IndexOutOfRange(format!("candidate id {candidate_id} out of range"))
    })?;
    Ok(omega + fronthaul.chi * link_bandwidth(site, fronthaul.gamma))
}

/// The three pieces of the objective value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub total: f64,
    pub cost_component: f64,
    pub latency_component: f64,
}

/// Evaluates the objective of a structurally complete solution: the weighted
/// sum of (server costs + link costs) and signed latency deviations.
pub fn objective(
    instance: &ProblemInstance,
    solution: &Solution,
) -> Result<ObjectiveBreakdown, Error> {
    objective_with(instance, solution, LatencyMode::Signed)
}

/// Same as [`objective`] but with an explicit latency-deviation mode.
pub fn objective_with(
    instance: &ProblemInstance,
    solution: &Solution,
    mode: LatencyMode,
) -> Result<ObjectiveBreakdown, Error> {
    for site in &instance.sites {
        if !solution.assignment.contains_key(&site.id) {
            return Err(Error::IncompleteSolution(format!(
                "site {} has no assignment",
                site.id
            )));
        }
    }
    if solution.assignment.len() != instance.sites.len() {
        return Err(Error::IncompleteSolution(format!(
            "assignment has {} entries for {} sites",
            solution.assignment.len(),
            instance.sites.len()
        )));
    }

    let mut cost = 0.0;
    for &j in &solution.placed {
        let cand = instance
            .candidates
            .get(j)
            .ok_or_else(|| Error::IndexOutOfRange(format!("placed candidate {j} unknown")))?;
        cost += server_cost(cand);
    }
    let mut latency = 0.0;
    for (&i, &j) in &solution.assignment {
        let site = instance
            .sites
            .get(i)
            .ok_or_else(|| Error::IndexOutOfRange(format!("assigned site {i} unknown")))?;
        cost += link_cost(site, j, &instance.fronthaul)?;
        let t = *instance
            .fronthaul
            .latency
            .get(i)
            .and_then(|row| row.get(j))
            .ok_or_else(|| Error::IndexOutOfRange(format!("latency entry ({i},{j}) missing")))?;
        let dev = t - site.desired_latency;
        latency += match mode {
            LatencyMode::Signed => dev,
            LatencyMode::Clamped => dev.max(0.0),
        };
    }
    Ok(ObjectiveBreakdown {
        total: instance.alpha * cost + instance.beta * latency,
        cost_component: cost,
        latency_component: latency,
    })
}

/// One constraint violation found by [`check_feasibility`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A site has no assignment (each site must be attached to one server).
    SiteUnassigned { site: usize },
    /// An assignment references a site id not in the instance.
    UnknownSite { site: usize },
    /// An assignment targets a candidate that was not placed.
    AssignmentToUnplaced { site: usize, candidate: usize },
    /// The placement or an assignment references an unknown candidate id.
    UnknownCandidate { candidate: usize },
    /// More servers placed than the budget allows.
    BudgetExceeded { placed: usize, budget: usize },
    /// Total demand assigned to a candidate exceeds its capacity.
    CapacityExceeded {
        candidate: usize,
        load: f64,
        capacity: f64,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::SiteUnassigned { site } => write!(f, "site {site} is unassigned"),
            Violation::UnknownSite { site } => write!(f, "assignment references unknown site {site}"),
            Violation::AssignmentToUnplaced { site, candidate } => {
                write!(f, "site {site} assigned to unplaced candidate {candidate}")
            }
            Violation::UnknownCandidate { candidate } => {
                write!(f, "unknown candidate {candidate}")
            }
            Violation::BudgetExceeded { placed, budget } => {
                write!(f, "{placed} servers placed but budget is {budget}")
            }
            Violation::CapacityExceeded {
                candidate,
                load,
                capacity,
            } => write!(
                f,
                "candidate {candidate} loaded with {load} over capacity {capacity} (excess {})",
                load - capacity
            ),
        }
    }
}

/// Result of checking a solution against every constraint family.
/// Violations are data, not errors; an empty list means feasible.
///
/// Domain constraints (assignments and placements are binary) hold by
/// construction of the solution types: a map key cannot be doubly assigned
/// and a set member cannot be placed twice, so those families can never
/// appear here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a solution against the placement, assignment, budget, and capacity
/// constraints, reporting every violation found.
pub fn check_feasibility(instance: &ProblemInstance, solution: &Solution) -> FeasibilityReport {
    let mut violations = Vec::new();
    let n_sites = instance.sites.len();
    let n_cands = instance.candidates.len();

    for &j in &solution.placed {
        if j >= n_cands {
            violations.push(Violation::UnknownCandidate { candidate: j });
        }
    }
    if solution.placed.len() > instance.budget {
        violations.push(Violation::BudgetExceeded {
            placed: solution.placed.len(),
            budget: instance.budget,
        });
    }

    for site in &instance.sites {
        if !solution.assignment.contains_key(&site.id) {
            violations.push(Violation::SiteUnassigned { site: site.id });
        }
    }
    let mut loads: BTreeMap<usize, f64> = BTreeMap::new();
    for (&i, &j) in &solution.assignment {
        if i >= n_sites {
            violations.push(Violation::UnknownSite { site: i });
            continue;
        }
        if j >= n_cands {
            violations.push(Violation::UnknownCandidate { candidate: j });
            continue;
        }
        if !solution.placed.contains(&j) {
            violations.push(Violation::AssignmentToUnplaced {
                site: i,
                candidate: j,
            });
        }
        *loads.entry(j).or_insert(0.0) += instance.sites[i].demand;
    }
    for (&j, &load) in &loads {
        let capacity = instance.candidates[j].capacity;
        if load > capacity {
            violations.push(Violation::CapacityExceeded {
                candidate: j,
                load,
                capacity,
            });
        }
    }

    FeasibilityReport { violations }
}

impl ProblemInstance {
    /// Checks every instance invariant; returns the first violation found.
    pub fn validate(&self) -> Result<(), Error> {
        let n_sites = self.sites.len();
        let n_cands = self.candidates.len();
        if n_sites == 0 {
            return Err(Error::InvalidInstance("no sites".into()));
        }
        if n_cands == 0 {
            return Err(Error::InvalidInstance("no candidates".into()));
        }
        if n_cands > n_sites {
            return Err(Error::InvalidInstance(format!(
                "{n_cands} candidates exceed {n_sites} sites"
            )));
        }
        if self.budget < 1 || self.budget > n_cands {
            return Err(Error::InvalidInstance(format!(
                "budget {} outside 1..={n_cands}",
                self.budget
            )));
        }
        if !(self.alpha >= 0.0) || !(self.beta >= 0.0) {
            return Err(Error::InvalidInstance(format!(
                "weights must be nonnegative (alpha={}, beta={})",
                self.alpha, self.beta
            )));
        }
        for (i, site) in self.sites.iter().enumerate() {
            if site.id != i {
                return Err(Error::InvalidInstance(format!(
                    "site ids must be dense 0-based indices (position {i} has id {})",
                    site.id
                )));
            }
            if !(site.demand > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "site {i} demand must be positive, got {}",
                    site.demand
                )));
            }
            if !(site.desired_latency > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "site {i} desired latency must be positive, got {}",
                    site.desired_latency
                )));
            }
        }
        for (j, cand) in self.candidates.iter().enumerate() {
            if cand.id != j {
                return Err(Error::InvalidInstance(format!(
                    "candidate ids must be dense 0-based indices (position {j} has id {})",
                    cand.id
                )));
            }
            if cand.site_id >= n_sites {
                return Err(Error::InvalidInstance(format!(
                    "candidate {j} references unknown site {}",
                    cand.site_id
                )));
            }
            if !(cand.capacity > 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "candidate {j} capacity must be positive, got {}",
                    cand.capacity
                )));
            }
            if !(cand.fixed_cost >= 0.0) || !(cand.marginal_cost >= 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "candidate {j} costs must be nonnegative"
                )));
            }
        }
        if !(self.fronthaul.gamma >= 0.0) || !(self.fronthaul.chi >= 0.0) {
            return Err(Error::InvalidInstance(
                "fronthaul gamma and chi must be nonnegative".into(),
            ));
        }
        let check_matrix = |name: &str, m: &Vec<Vec<f64>>| -> Result<(), Error> {
            if m.len() != n_sites {
                return Err(Error::InvalidInstance(format!(
                    "{name} matrix has {} rows for {n_sites} sites",
                    m.len()
                )));
            }
            for (i, row) in m.iter().enumerate() {
                if row.len() != n_cands {
                    return Err(Error::InvalidInstance(format!(
                        "{name} matrix row {i} has {} entries for {n_cands} candidates",
                        row.len()
                    )));
                }
                for (j, v) in row.iter().enumerate() {
                    if !v.is_finite() {
                        return Err(Error::InvalidInstance(format!(
                            "{name} matrix entry ({i},{j}) is not finite"
                        )));
                    }
                }
            }
            Ok(())
        };
        check_matrix("omega", &self.fronthaul.omega)?;
        check_matrix("latency", &self.fronthaul.latency)?;
        check_matrix("distance", &self.fronthaul.distance)?;
        for (i, row) in self.fronthaul.omega.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "omega entry ({i},{j}) is negative"
                    )));
                }
            }
        }
        for (i, row) in self.fronthaul.latency.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(v > 0.0) {
                    return Err(Error::InvalidInstance(format!(
                        "latency entry ({i},{j}) must be positive, got {v}"
                    )));
                }
            }
        }
        for (i, row) in self.fronthaul.distance.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "distance entry ({i},{j}) is negative"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn total_demand(&self) -> f64 {
        self.sites.iter().map(|s| s.demand).sum()
    }

    /// Link cost between site `i` and candidate `j` by index.
    pub fn link_cost(&self, i: usize, j: usize) -> Result<f64, Error> {
        let site = self
            .sites
            .get(i)
            .ok_or_else(|| Error::IndexOutOfRange(format!("site {i} out of range")))?;
        link_cost(site, j, &self.fronthaul)
    }

    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let instance: ProblemInstance = serde_json::from_str(text)?;
        instance.validate()?;
        Ok(instance)
    }
}

impl Solution {
    /// Builds a solution from a placement and assignment, evaluating the
    /// objective breakdown against the instance.
    pub fn evaluate(
        instance: &ProblemInstance,
        placed: BTreeSet<usize>,
        assignment: BTreeMap<usize, usize>,
    ) -> Result<Self, Error> {
        let mut solution = Solution {
            placed,
            assignment,
            objective: 0.0,
            cost_component: 0.0,
            latency_component: 0.0,
        };
        let breakdown = objective(instance, &solution)?;
        solution.objective = breakdown.total;
        solution.cost_component = breakdown.cost_component;
        solution.latency_component = breakdown.latency_component;
        Ok(solution)
    }

    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Deterministic ordering key for equal-objective solutions: the placed set
/// compared as a sorted sequence, then the assignment map as sorted pairs.
pub(crate) fn tie_break_less(a: &Solution, b: &Solution) -> bool {
    let a_placed: Vec<usize> = a.placed.iter().copied().collect();
    let b_placed: Vec<usize> = b.placed.iter().copied().collect();
    match a_placed.cmp(&b_placed) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => {
            let a_pairs: Vec<(usize, usize)> = a.assignment.iter().map(|(&i, &j)| (i, j)).collect();
            let b_pairs: Vec<(usize, usize)> = b.assignment.iter().map(|(&i, &j)| (i, j)).collect();
            a_pairs < b_pairs
        }
    }
}
