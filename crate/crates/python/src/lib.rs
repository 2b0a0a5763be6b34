//! Python bindings: the problem and solution types plus the solvers,
//! feasibility check, metrics, and the topology-based instance generator.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vranpap::exact::{SolveLimits, SolveStatus};
use vranpap::greedy::GreedyStatus;
use vranpap::model::{LatencyMode, ProblemInstance, Solution};
use vranpap::topology::GeneratorConfig;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A complete problem instance: sites, candidate servers, fronthaul
/// matrices, budget, and objective weights.
#[pyclass(name = "Instance", skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: ProblemInstance,
}

#[pymethods]
impl PyInstance {
    /// Parses and validates an instance from its JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: ProblemInstance::from_json(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(value_error)
    }

    /// Generates a random connected topology on a grid and derives the
    /// instance from its cheapest paths. Deterministic in the seed.
    #[staticmethod]
    #[pyo3(signature = (site_count, seed, budget, alpha=1.0, beta=1.0, grid_size=500.0,
                        waxman_alpha=0.4, waxman_beta=0.4, hop_fixed_cost=500.0,
                        signal_speed=5e8))]
    #[allow(clippy::too_many_arguments)]
    fn generate(
        site_count: usize,
        seed: u64,
        budget: usize,
        alpha: f64,
        beta: f64,
        grid_size: f64,
        waxman_alpha: f64,
        waxman_beta: f64,
        hop_fixed_cost: f64,
        signal_speed: f64,
    ) -> PyResult<Self> {
        let config = GeneratorConfig {
            site_count,
            rng_seed: seed,
            grid_size,
            waxman_alpha,
            waxman_beta,
            hop_fixed_cost,
            signal_speed,
            ..GeneratorConfig::default()
        };
        let inner =
            vranpap::topology::generate_instance(&config, budget, alpha, beta).map_err(value_error)?;
        Ok(PyInstance { inner })
    }

    #[getter]
    fn site_count(&self) -> usize {
        self.inner.site_count()
    }

    #[getter]
    fn candidate_count(&self) -> usize {
        self.inner.candidate_count()
    }

    #[getter]
    fn budget(&self) -> usize {
        self.inner.budget
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    fn total_demand(&self) -> f64 {
        self.inner.total_demand()
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance({} sites, {} candidates, budget {})",
            self.inner.site_count(),
            self.inner.candidate_count(),
            self.inner.budget
        )
    }
}

/// A placement set and assignment map with its objective breakdown.
#[pyclass(name = "Solution", skip_from_py_object)]
#[derive(Clone)]
struct PySolution {
    inner: Solution,
}

#[pymethods]
impl PySolution {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySolution {
            inner: Solution::from_json(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(value_error)
    }

    #[getter]
    fn placed(&self) -> Vec<usize> {
        self.inner.placed.iter().copied().collect()
    }

    #[getter]
    fn assignment(&self) -> BTreeMap<usize, usize> {
        self.inner.assignment.clone()
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.inner.objective
    }

    #[getter]
    fn cost_component(&self) -> f64 {
        self.inner.cost_component
    }

    #[getter]
    fn latency_component(&self) -> f64 {
        self.inner.latency_component
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution({} placed, objective {:.3})",
            self.inner.placed.len(),
            self.inner.objective
        )
    }
}

/// Result of a solver run: a status string, the solution when one exists,
/// and solver bookkeeping.
#[pyclass(name = "Outcome")]
struct PyOutcome {
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    solution: Option<PySolution>,
    #[pyo3(get)]
    nodes_explored: u64,
    #[pyo3(get)]
    wall_time: f64,
    #[pyo3(get)]
    gap: Option<f64>,
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        format!("Outcome({}, {:.4} s)", self.status, self.wall_time)
    }
}

/// Branch-and-bound solve to proven optimality; zero limits mean unlimited.
#[pyfunction]
#[pyo3(signature = (instance, time_limit=0.0, node_limit=0))]
fn solve_exact(instance: &PyInstance, time_limit: f64, node_limit: u64) -> PyResult<PyOutcome> {
    let limits = SolveLimits {
        time_limit,
        node_limit,
    };
    let outcome = vranpap::exact::solve_exact(&instance.inner, &limits).map_err(value_error)?;
    let status = match outcome.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::LimitReached => "limit_reached",
    };
    Ok(PyOutcome {
        status: status.into(),
        solution: outcome.solution.map(|inner| PySolution { inner }),
        nodes_explored: outcome.nodes_explored,
        wall_time: outcome.wall_time,
        gap: outcome.gap,
    })
}

/// The cost-aware greedy sweep.
#[pyfunction]
fn solve_caga(instance: &PyInstance) -> PyResult<PyOutcome> {
    let outcome = vranpap::greedy::solve_caga(&instance.inner).map_err(value_error)?;
    let status = match outcome.status {
        GreedyStatus::Success => "success",
        GreedyStatus::Failed => "failed",
    };
    Ok(PyOutcome {
        status: status.into(),
        solution: outcome.solution.map(|inner| PySolution { inner }),
        nodes_explored: 0,
        wall_time: outcome.wall_time,
        gap: None,
    })
}

/// Exhaustive enumeration for tiny instances (at most 8 sites and 8
/// candidates).
#[pyfunction]
fn enumerate_optimal(instance: &PyInstance) -> PyResult<PyOutcome> {
    let outcome = vranpap::oracle::enumerate_optimal(&instance.inner).map_err(value_error)?;
    let status = match outcome.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::LimitReached => "limit_reached",
    };
    Ok(PyOutcome {
        status: status.into(),
        solution: outcome.solution.map(|inner| PySolution { inner }),
        nodes_explored: outcome.nodes_explored,
        wall_time: outcome.wall_time,
        gap: outcome.gap,
    })
}

/// Returns one human-readable line per violated constraint; an empty list
/// means the solution is feasible.
#[pyfunction]
fn check_feasibility(instance: &PyInstance, solution: &PySolution) -> Vec<String> {
    vranpap::model::check_feasibility(&instance.inner, &solution.inner)
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect()
}

/// Evaluates the objective breakdown: (total, cost component, latency
/// component).
#[pyfunction]
#[pyo3(signature = (instance, solution, clamp_latency=false))]
fn objective(
    instance: &PyInstance,
    solution: &PySolution,
    clamp_latency: bool,
) -> PyResult<(f64, f64, f64)> {
    let mode = if clamp_latency {
        LatencyMode::Clamped
    } else {
        LatencyMode::Signed
    };
    let b = vranpap::model::objective_with(&instance.inner, &solution.inner, mode)
        .map_err(value_error)?;
    Ok((b.total, b.cost_component, b.latency_component))
}

/// Assigned demand over placed capacity.
#[pyfunction]
fn utilization(instance: &PyInstance, solution: &PySolution) -> f64 {
    vranpap::metrics::utilization(&instance.inner, &solution.inner)
}

/// Mean signed latency deviation over assignments, in seconds.
#[pyfunction]
fn latency_deviation(instance: &PyInstance, solution: &PySolution) -> f64 {
    vranpap::metrics::latency_deviation(&instance.inner, &solution.inner)
}

#[pymodule]
fn vranpap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(solve_exact, m)?)?;
    m.add_function(wrap_pyfunction!(solve_caga, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(check_feasibility, m)?)?;
    m.add_function(wrap_pyfunction!(objective, m)?)?;
    m.add_function(wrap_pyfunction!(utilization, m)?)?;
    m.add_function(wrap_pyfunction!(latency_deviation, m)?)?;
    Ok(())
}
