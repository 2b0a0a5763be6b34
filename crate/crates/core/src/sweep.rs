//! Experiment sweeps: vary the site count at a fixed budget, or the budget
//! at a fixed site count, running each enabled solver on seeded random
//! instances and collecting one metrics row per (solver, axis point, seed).

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::{self, SolveLimits, SolveStatus};
use crate::greedy::{self, GreedyStatus};
use crate::metrics::{self, MetricsRow};
use crate::model::LatencyMode;
use crate::topology::{self, GeneratorConfig};

/// Site counts above this run the greedy solver only, unless forced.
pub const EXACT_SWEEP_GUARD_SITES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    BySites,
    ByBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Exact,
    Caga,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverKind::Exact => write!(f, "exact"),
            SolverKind::Caga => write!(f, "caga"),
        }
    }
}

fn default_site_counts() -> Vec<usize> {
    vec![5, 10, 15, 20, 25, 30, 35, 40]
}
fn default_budgets() -> Vec<usize> {
    (1..=15).collect()
}
fn default_fixed_budget() -> usize {
    15
}
fn default_fixed_sites() -> usize {
    25
}
fn default_seeds() -> Vec<u64> {
    (1..=10).collect()
}
fn default_solvers() -> Vec<SolverKind> {
    vec![SolverKind::Exact, SolverKind::Caga]
}
fn default_limits() -> SolveLimits {
    SolveLimits {
        time_limit: 60.0,
        node_limit: 0,
    }
}
fn default_weight() -> f64 {
    1.0
}

/// Full description of one experiment sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub mode: SweepMode,
    #[serde(default = "default_site_counts")]
    pub site_counts: Vec<usize>,
    #[serde(default = "default_budgets")]
    pub budgets: Vec<usize>,
    /// Budget used for every cell of a by-sites sweep.
    #[serde(default = "default_fixed_budget")]
    pub fixed_budget: usize,
    /// Site count used for every cell of a by-budget sweep.
    #[serde(default = "default_fixed_sites")]
    pub fixed_sites: usize,
    /// One replication per seed at every axis point.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
    #[serde(default)]
    pub generator: GeneratorConfig,
    #[serde(default = "default_limits")]
    pub limits: SolveLimits,
    #[serde(default = "default_weight")]
    pub alpha: f64,
    #[serde(default = "default_weight")]
    pub beta: f64,
    /// Run the exact solver even on cells beyond the site-count guard.
    #[serde(default)]
    pub force_exact: bool,
    /// Worker threads for cell evaluation; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub latency_mode: LatencyMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: SweepMode::BySites,
            site_counts: default_site_counts(),
            budgets: default_budgets(),
            fixed_budget: default_fixed_budget(),
            fixed_sites: default_fixed_sites(),
            seeds: default_seeds(),
            solvers: default_solvers(),
            generator: GeneratorConfig::default(),
            limits: default_limits(),
            alpha: 1.0,
            beta: 1.0,
            force_exact: false,
            workers: 0,
            latency_mode: LatencyMode::Signed,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let axis_empty = match self.mode {
            SweepMode::BySites => self.site_counts.is_empty(),
            SweepMode::ByBudget => self.budgets.is_empty(),
        };
        if axis_empty {
            return Err(Error::InvalidConfig("empty sweep axis".into()));
        }
        if self.solvers.is_empty() {
            return Err(Error::InvalidConfig("no solvers enabled".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("no seeds".into()));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err(Error::InvalidConfig("weights must be nonnegative".into()));
        }
        self.limits.validate()?;
        match self.mode {
            SweepMode::BySites => {
                if self.fixed_budget < 1 {
                    return Err(Error::InvalidConfig("fixed budget must be positive".into()));
                }
            }
            SweepMode::ByBudget => {
                for &p in &self.budgets {
                    if p < 1 || p > self.fixed_sites {
                        return Err(Error::InvalidConfig(format!(
                            "budget {p} outside 1..={}",
                            self.fixed_sites
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let config: SweepConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Optimal,
    LimitReached,
    Infeasible,
    Success,
    Failed,
}

/// One line of the results table, in the exact CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub solver: SolverKind,
    pub site_count: usize,
    pub budget: usize,
    pub seed: u64,
    pub total_cost: f64,
    pub bbus_placed: usize,
    pub utilization: f64,
    pub wall_time_s: f64,
    pub latency_deviation_s: f64,
    pub status: RowStatus,
}

impl SweepRow {
    fn new(
        solver: SolverKind,
        site_count: usize,
        budget: usize,
        seed: u64,
        metrics: MetricsRow,
        status: RowStatus,
    ) -> Self {
        SweepRow {
            solver,
            site_count,
            budget,
            seed,
            total_cost: metrics.total_cost,
            bbus_placed: metrics.bbus_placed,
            utilization: metrics.utilization,
            wall_time_s: metrics.wall_time,
            latency_deviation_s: metrics.latency_deviation,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResultTable {
    pub mode: SweepMode,
    pub rows: Vec<SweepRow>,
}

/// Runs every (axis point, seed) cell of the sweep, one instance per cell
/// shared by all enabled solvers. Cells run in parallel; rows are returned
/// sorted by (solver, site count, budget, seed) so the table is
/// deterministic apart from the wall-time column.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResultTable, Error> {
    config.validate()?;

    // A budget can never exceed the number of candidates, so a by-sites
    // sweep caps each cell's budget at its site count.
    let cells: Vec<(usize, usize, u64)> = match config.mode {
        SweepMode::BySites => config
            .site_counts
            .iter()
            .flat_map(|&n| {
                config
                    .seeds
                    .iter()
                    .map(move |&s| (n, config.fixed_budget.min(n), s))
            })
            .collect(),
        SweepMode::ByBudget => config
            .budgets
            .iter()
            .flat_map(|&p| config.seeds.iter().map(move |&s| (config.fixed_sites, p, s)))
            .collect(),
    };

    let run_cells = || -> Result<Vec<Vec<SweepRow>>, Error> {
        cells
            .par_iter()
            .map(|&(site_count, budget, seed)| run_cell(config, site_count, budget, seed))
            .collect()
    };
    let nested = if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
        pool.install(run_cells)?
    } else {
        run_cells()?
    };

    let mut rows: Vec<SweepRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.solver, a.site_count, a.budget, a.seed).cmp(&(
            b.solver,
            b.site_count,
            b.budget,
            b.seed,
        ))
    });
    Ok(SweepResultTable {
        mode: config.mode,
        rows,
    })
}

fn run_cell(
    config: &SweepConfig,
    site_count: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<SweepRow>, Error> {
    let generator = GeneratorConfig {
        site_count,
        rng_seed: seed,
        ..config.generator.clone()
    };
    let instance = topology::generate_instance(&generator, budget, config.alpha, config.beta)?;

    let mut rows = Vec::new();
    for &solver in &config.solvers {
        match solver {
            SolverKind::Exact => {
                if site_count > EXACT_SWEEP_GUARD_SITES && !config.force_exact {
                    continue;
                }
                let outcome = exact::solve_exact(&instance, &config.limits)?;
                let status = match outcome.status {
                    SolveStatus::Optimal => RowStatus::Optimal,
                    SolveStatus::Infeasible => RowStatus::Infeasible,
                    SolveStatus::LimitReached => RowStatus::LimitReached,
                };
                let metrics = metrics::summarize_with(
                    &instance,
                    outcome.solution.as_ref(),
                    outcome.wall_time,
                    config.latency_mode,
                );
                rows.push(SweepRow::new(solver, site_count, budget, seed, metrics, status));
            }
            SolverKind::Caga => {
                let outcome = greedy::solve_caga(&instance)?;
                let status = match outcome.status {
                    GreedyStatus::Success => RowStatus::Success,
                    GreedyStatus::Failed => RowStatus::Failed,
                };
                let metrics = metrics::summarize_with(
                    &instance,
                    outcome.solution.as_ref(),
                    outcome.wall_time,
                    config.latency_mode,
                );
                rows.push(SweepRow::new(solver, site_count, budget, seed, metrics, status));
            }
        }
    }
    Ok(rows)
}

/// Writes the table as CSV with the fixed column order
/// `solver, site_count, budget, seed, total_cost, bbus_placed, utilization,
/// wall_time_s, latency_deviation_s, status`.
pub fn write_results_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<(), Error> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    for row in rows {
        csv_writer.serialize(row)?;
    }
    csv_writer.flush()?;
    Ok(())
}

pub fn write_results_csv_file(rows: &[SweepRow], path: &Path) -> Result<(), Error> {
    let file = std::fs::File::create(path)?;
    write_results_csv(rows, file)
}

/// Parses a results CSV back into rows; the exact inverse of
/// [`write_results_csv`].
pub fn read_results_csv<R: std::io::Read>(reader: R) -> Result<Vec<SweepRow>, Error> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for record in csv_reader.deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}
