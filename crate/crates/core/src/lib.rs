//! Solver toolkit for the virtualized-RAN placement and assignment problem:
//! place BBU servers among candidate RRH sites and assign every RRH to a
//! placed server, minimizing server and fronthaul setup costs together with
//! latency deviation.
//!
//! The crate provides:
//!
//! - [`model`]: problem and solution types, cost functions, the weighted
//!   objective, and feasibility checking;
//! - [`topology`]: seeded random RAN topologies on a grid and derivation of
//!   the fronthaul cost/latency matrices from cheapest paths;
//! - [`exact`]: a provably optimal branch-and-bound solver;
//! - [`greedy`]: the cost-aware greedy approximation;
//! - [`oracle`]: an exhaustive enumeration referee for tiny instances;
//! - [`metrics`]: evaluation metrics (cost, servers placed, utilization,
//!   latency deviation);
//! - [`sweep`] and [`report`]: the experiment harness with CSV and plot
//!   output;
//! - [`fixtures`]: small hand-built and random instances for tests and
//!   experimentation.

pub mod error;
pub mod exact;
pub mod fixtures;
pub mod greedy;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod report;
pub mod sweep;
pub mod topology;

pub use error::Error;
pub use exact::{solve_exact, SolveLimits, SolveOutcome, SolveStatus};
pub use greedy::{solve_caga, GreedyOutcome, GreedyStatus};
pub use model::{
    check_feasibility, objective, BbuCandidate, FronthaulParams, LatencyMode, ProblemInstance,
    RrhSite, Solution,
};
pub use oracle::enumerate_optimal;
pub use topology::{derive_instance, generate_instance, generate_ran, GeneratorConfig, RanGraph};
