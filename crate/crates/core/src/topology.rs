//! Random RAN topology generation on a grid and derivation of the fronthaul
//! matrices that turn a topology into a problem instance.
//!
//! Topologies follow the Waxman model: node positions are uniform on the
//! grid and an edge between two nodes exists with probability
//! `alpha * exp(-d / (beta * L_max))` where `L_max` is the grid diagonal.
//! Disconnected graphs are repaired by repeatedly adding the shortest edge
//! between components. Fronthaul fixed costs are per-hop costs summed along
//! cheapest paths; latencies are path length over signal speed.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{
    BbuCandidate, FronthaulParams, Point, ProblemInstance, RrhSite,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    #[serde(flatten)]
    pub position: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub hop_fixed_cost: f64,
    pub length: f64,
}

/// An undirected RAN topology with per-hop link costs and distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RanGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

fn default_grid_size() -> f64 {
    500.0
}
fn default_waxman() -> f64 {
    0.4
}
fn default_hop_fixed_cost() -> f64 {
    500.0
}
fn default_demand_range() -> (f64, f64) {
    (50.0, 100.0)
}
fn default_capacity_range() -> (f64, f64) {
    (250.0, 500.0)
}
fn default_latency_range() -> (f64, f64) {
    (1e-7, 1e-6)
}
fn default_signal_speed() -> f64 {
    5e8
}
fn default_server_fixed_cost() -> f64 {
    500.0
}
fn default_server_marginal_cost() -> f64 {
    1.0
}
fn default_unit() -> f64 {
    1.0
}
fn default_self_latency_floor() -> f64 {
    1e-9
}
fn default_site_count() -> usize {
    25
}
fn default_seed() -> u64 {
    1
}

/// Everything needed to generate a topology and derive an instance from it.
/// All fields have defaults so a partial JSON document works.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(default = "default_site_count")]
    pub site_count: usize,
    #[serde(default = "default_grid_size")]
    pub grid_size: f64,
    #[serde(default = "default_waxman")]
    pub waxman_alpha: f64,
    #[serde(default = "default_waxman")]
    pub waxman_beta: f64,
    /// Fixed cost contributed by each hop of a fronthaul path.
    #[serde(default = "default_hop_fixed_cost")]
    pub hop_fixed_cost: f64,
    #[serde(default = "default_demand_range")]
    pub demand_range: (f64, f64),
    #[serde(default = "default_capacity_range")]
    pub capacity_range: (f64, f64),
    /// Range of per-site desired latencies, in seconds.
    #[serde(default = "default_latency_range")]
    pub latency_range: (f64, f64),
    /// Signal propagation speed, grid units per second.
    #[serde(default = "default_signal_speed")]
    pub signal_speed: f64,
    #[serde(default = "default_seed")]
    pub rng_seed: u64,
    #[serde(default = "default_server_fixed_cost")]
    pub server_fixed_cost: f64,
    #[serde(default = "default_server_marginal_cost")]
    pub server_marginal_cost: f64,
    #[serde(default = "default_unit")]
    pub gamma: f64,
    #[serde(default = "default_unit")]
    pub chi: f64,
    /// Lower bound applied to every derived link latency so that co-located
    /// pairs still carry a positive latency.
    #[serde(default = "default_self_latency_floor")]
    pub self_latency_floor: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            site_count: default_site_count(),
            grid_size: default_grid_size(),
            waxman_alpha: default_waxman(),
            waxman_beta: default_waxman(),
            hop_fixed_cost: default_hop_fixed_cost(),
            demand_range: default_demand_range(),
            capacity_range: default_capacity_range(),
            latency_range: default_latency_range(),
            signal_speed: default_signal_speed(),
            rng_seed: default_seed(),
            server_fixed_cost: default_server_fixed_cost(),
            server_marginal_cost: default_server_marginal_cost(),
            gamma: default_unit(),
            chi: default_unit(),
            self_latency_floor: default_self_latency_floor(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.site_count == 0 {
            return Err(Error::InvalidConfig("site_count must be positive".into()));
        }
        if !(self.grid_size > 0.0) {
            return Err(Error::InvalidConfig("grid_size must be positive".into()));
        }
        if !(self.waxman_alpha > 0.0 && self.waxman_alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "waxman_alpha must be in (0, 1], got {}",
                self.waxman_alpha
            )));
        }
        if !(self.waxman_beta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "waxman_beta must be positive, got {}",
                self.waxman_beta
            )));
        }
        if self.hop_fixed_cost < 0.0 {
            return Err(Error::InvalidConfig("hop_fixed_cost must be nonnegative".into()));
        }
        for (name, range) in [
            ("demand_range", self.demand_range),
            ("capacity_range", self.capacity_range),
            ("latency_range", self.latency_range),
        ] {
            if !(range.0 > 0.0 && range.1 >= range.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a nonempty range with a positive lower bound, got {range:?}"
                )));
            }
        }
        if !(self.signal_speed > 0.0) {
            return Err(Error::InvalidConfig("signal_speed must be positive".into()));
        }
        if self.server_fixed_cost < 0.0 || self.server_marginal_cost < 0.0 {
            return Err(Error::InvalidConfig("server costs must be nonnegative".into()));
        }
        if self.gamma < 0.0 || self.chi < 0.0 {
            return Err(Error::InvalidConfig("gamma and chi must be nonnegative".into()));
        }
        if !(self.self_latency_floor > 0.0) {
            return Err(Error::InvalidConfig("self_latency_floor must be positive".into()));
        }
        Ok(())
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Generates a connected Waxman random graph. Deterministic in the seed.
pub fn generate_ran(config: &GeneratorConfig) -> Result<RanGraph, Error> {
    config.validate()?;
    let n = config.site_count;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    let nodes: Vec<GraphNode> = (0..n)
        .map(|id| GraphNode {
            id,
            position: Point {
                x: rng.random_range(0.0..=config.grid_size),
                y: rng.random_range(0.0..=config.grid_size),
            },
        })
        .collect();

    let l_max = config.grid_size * std::f64::consts::SQRT_2;
    let mut edges = Vec::new();
    let mut components = DisjointSet::new(n);
    let mut component_count = n;
    for a in 0..n {
        for b in (a + 1)..n {
            let d = nodes[a].position.distance(&nodes[b].position);
            let p = (config.waxman_alpha * (-d / (config.waxman_beta * l_max)).exp()).min(1.0);
            if rng.random_range(0.0..1.0) < p {
                edges.push(GraphEdge {
                    a,
                    b,
                    hop_fixed_cost: config.hop_fixed_cost,
                    length: d,
                });
                if components.union(a, b) {
                    component_count -= 1;
                }
            }
        }
    }

    // Augment until connected: add the shortest edge between any two
    // components, ties broken by node pair.
    let mut rounds = 0;
    while component_count > 1 {
        rounds += 1;
        if rounds > n {
            return Err(Error::Generation(format!(
                "connectivity not reached after {rounds} augmentation rounds"
            )));
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..n {
            for b in (a + 1)..n {
                if components.find(a) == components.find(b) {
                    continue;
                }
                let d = nodes[a].position.distance(&nodes[b].position);
                let candidate = (d, a, b);
                let better = match best {
                    None => true,
                    Some(current) => {
                        candidate.0 < current.0
                            || (candidate.0 == current.0 && (candidate.1, candidate.2) < (current.1, current.2))
                    }
                };
                if better {
                    best = Some(candidate);
                }
            }
        }
        let (d, a, b) = best.expect("multiple components imply a crossing pair");
        edges.push(GraphEdge {
            a,
            b,
            hop_fixed_cost: config.hop_fixed_cost,
            length: d,
        });
        components.union(a, b);
        component_count -= 1;
    }

    Ok(RanGraph { nodes, edges })
}

impl RanGraph {
    /// Checks the structural invariants: edge endpoints in range, lengths
    /// equal to the endpoint distance, nonnegative hop costs, connectivity.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return Err(Error::Generation(format!(
                    "node ids must be dense 0-based indices (position {i} has id {})",
                    node.id
                )));
            }
        }
        let mut components = DisjointSet::new(n);
        let mut component_count = n;
        for edge in &self.edges {
            if edge.a >= n || edge.b >= n {
                return Err(Error::Generation(format!(
                    "edge ({}, {}) out of range",
                    edge.a, edge.b
                )));
            }
            if edge.hop_fixed_cost < 0.0 {
                return Err(Error::Generation("negative hop cost".into()));
            }
            let d = self.nodes[edge.a].position.distance(&self.nodes[edge.b].position);
            if (edge.length - d).abs() > 1e-9 * d.max(1.0) {
                return Err(Error::Generation(format!(
                    "edge ({}, {}) length {} does not match endpoint distance {d}",
                    edge.a, edge.b, edge.length
                )));
            }
            if components.union(edge.a, edge.b) {
                component_count -= 1;
            }
        }
        if component_count > 1 {
            return Err(Error::Disconnected(format!(
                "{component_count} components"
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Totals along the cheapest path between a pair of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathInfo {
    pub fixed_cost: f64,
    pub length: f64,
    pub hops: u32,
}

impl PathInfo {
    const ZERO: PathInfo = PathInfo {
        fixed_cost: 0.0,
        length: 0.0,
        hops: 0,
    };

    /// Lexicographic comparison over (fixed cost, hop count, length); paths
    /// are minimized in that order.
    fn cmp_key(&self, other: &PathInfo) -> Ordering {
        self.fixed_cost
            .total_cmp(&other.fixed_cost)
            .then(self.hops.cmp(&other.hops))
            .then(self.length.total_cmp(&other.length))
    }

    fn extend(&self, edge: &GraphEdge) -> PathInfo {
        PathInfo {
            fixed_cost: self.fixed_cost + edge.hop_fixed_cost,
            length: self.length + edge.length,
            hops: self.hops + 1,
        }
    }
}

struct HeapEntry {
    info: PathInfo,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and Dijkstra wants the minimum.
        other
            .info
            .cmp_key(&self.info)
            .then(other.node.cmp(&self.node))
    }
}

/// All-pairs cheapest paths over the topology. The path metric minimizes
/// total fixed cost, breaking ties by hop count and then by path length.
pub fn shortest_paths(graph: &RanGraph) -> Result<Vec<Vec<PathInfo>>, Error> {
    let n = graph.nodes.len();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, edge) in graph.edges.iter().enumerate() {
        adjacency[edge.a].push(idx);
        adjacency[edge.b].push(idx);
    }

    let mut result = Vec::with_capacity(n);
    for source in 0..n {
        let mut dist: Vec<Option<PathInfo>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(PathInfo::ZERO);
        heap.push(HeapEntry {
            info: PathInfo::ZERO,
            node: source,
        });
        while let Some(HeapEntry { info, node }) = heap.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            for &edge_idx in &adjacency[node] {
                let edge = &graph.edges[edge_idx];
                let next = if edge.a == node { edge.b } else { edge.a };
                if done[next] {
                    continue;
                }
                let candidate = info.extend(edge);
                let improves = match &dist[next] {
                    None => true,
                    Some(current) => candidate.cmp_key(current) == Ordering::Less,
                };
                if improves {
                    dist[next] = Some(candidate);
                    heap.push(HeapEntry {
                        info: candidate,
                        node: next,
                    });
                }
            }
        }
        let row: Option<Vec<PathInfo>> = dist.into_iter().collect();
        match row {
            Some(row) => result.push(row),
            None => {
                return Err(Error::Disconnected(format!(
                    "no path from node {source} to some node"
                )))
            }
        }
    }
    Ok(result)
}

/// Derives a complete problem instance from a topology: one site and one
/// co-located candidate per node, demands/capacities/desired latencies drawn
/// uniformly from the configured ranges, and fronthaul matrices taken from
/// the cheapest paths. Deterministic in the seed; the attribute draws use a
/// separate RNG stream from the topology draws, in the order demands, then
/// desired latencies, then capacities.
pub fn derive_instance(
    graph: &RanGraph,
    config: &GeneratorConfig,
    budget: usize,
    alpha: f64,
    beta: f64,
) -> Result<ProblemInstance, Error> {
    config.validate()?;
    let n = graph.nodes.len();
    if budget < 1 || budget > n {
        return Err(Error::InvalidConfig(format!(
            "budget {budget} outside 1..={n}"
        )));
    }
    let paths = shortest_paths(graph)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(1);
    let demands: Vec<f64> = (0..n)
        .map(|_| rng.random_range(config.demand_range.0..=config.demand_range.1))
        .collect();
    let desired: Vec<f64> = (0..n)
        .map(|_| rng.random_range(config.latency_range.0..=config.latency_range.1))
        .collect();
    let capacities: Vec<f64> = (0..n)
        .map(|_| rng.random_range(config.capacity_range.0..=config.capacity_range.1))
        .collect();

    let sites: Vec<RrhSite> = graph
        .nodes
        .iter()
        .map(|node| RrhSite {
            id: node.id,
            position: node.position,
            demand: demands[node.id],
            desired_latency: desired[node.id],
            ue_count: 0,
        })
        .collect();
    let candidates: Vec<BbuCandidate> = graph
        .nodes
        .iter()
        .map(|node| BbuCandidate {
            id: node.id,
            site_id: node.id,
            capacity: capacities[node.id],
            fixed_cost: config.server_fixed_cost,
            marginal_cost: config.server_marginal_cost,
        })
        .collect();

    let mut omega = vec![vec![0.0; n]; n];
    let mut latency = vec![vec![0.0; n]; n];
    let mut distance = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let info = paths[i][j];
            omega[i][j] = info.fixed_cost;
            distance[i][j] = info.length;
            latency[i][j] = (info.length / config.signal_speed).max(config.self_latency_floor);
        }
    }

    let instance = ProblemInstance {
        sites,
        candidates,
        fronthaul: FronthaulParams {
            omega,
            latency,
            distance,
            gamma: config.gamma,
            chi: config.chi,
        },
        budget,
        alpha,
        beta,
    };
    instance.validate()?;
    Ok(instance)
}

/// Generates a topology and derives the instance in one step.
pub fn generate_instance(
    config: &GeneratorConfig,
    budget: usize,
    alpha: f64,
    beta: f64,
) -> Result<ProblemInstance, Error> {
    let graph = generate_ran(config)?;
    derive_instance(&graph, config, budget, alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            site_count: n,
            rng_seed: seed,
            ..GeneratorConfig::default()
        }
    }

    /// Independent all-pairs oracle: Floyd-Warshall over the lexicographic
    /// (cost, hops, length) key.
    fn floyd_warshall(graph: &RanGraph) -> Vec<Vec<PathInfo>> {
        let n = graph.nodes.len();
        let inf = PathInfo {
            fixed_cost: f64::INFINITY,
            length: f64::INFINITY,
            hops: u32::MAX,
        };
        let mut d = vec![vec![inf; n]; n];
        for i in 0..n {
            d[i][i] = PathInfo::ZERO;
        }
        for edge in &graph.edges {
            let info = PathInfo {
                fixed_cost: edge.hop_fixed_cost,
                length: edge.length,
                hops: 1,
            };
            if info.cmp_key(&d[edge.a][edge.b]) == Ordering::Less {
                d[edge.a][edge.b] = info;
                d[edge.b][edge.a] = info;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k].fixed_cost.is_infinite() || d[k][j].fixed_cost.is_infinite() {
                        continue;
                    }
                    let via = PathInfo {
                        fixed_cost: d[i][k].fixed_cost + d[k][j].fixed_cost,
                        length: d[i][k].length + d[k][j].length,
                        hops: d[i][k].hops + d[k][j].hops,
                    };
                    if via.cmp_key(&d[i][j]) == Ordering::Less {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }

    #[test]
    fn singleton_graph_is_trivially_connected() {
        let graph = generate_ran(&config(1, 7)).unwrap();
        assert_eq!(graph.nodes.len(), 1);
        assert!(graph.edges.is_empty());
        graph.validate().unwrap();
        let paths = shortest_paths(&graph).unwrap();
        assert_eq!(paths[0][0], PathInfo::ZERO);
    }

    #[test]
    fn near_certain_edge_probability_connects_two_nodes() {
        let cfg = GeneratorConfig {
            site_count: 2,
            waxman_alpha: 1.0,
            waxman_beta: 1e9,
            rng_seed: 3,
            ..GeneratorConfig::default()
        };
        let graph = generate_ran(&cfg).unwrap();
        assert_eq!(graph.edges.len(), 1);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_ran(&config(30, 42)).unwrap();
        let b = generate_ran(&config(30, 42)).unwrap();
        assert_eq!(a, b);
        let c = generate_ran(&config(30, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generated_graphs_are_connected_with_valid_edges() {
        for seed in 0..20 {
            let graph = generate_ran(&config(15, seed)).unwrap();
            graph.validate().unwrap();
            for node in &graph.nodes {
                assert!(node.position.x >= 0.0 && node.position.x <= 500.0);
                assert!(node.position.y >= 0.0 && node.position.y <= 500.0);
            }
        }
    }

    #[test]
    fn two_hop_path_sums_hop_costs() {
        // A - B - C in a line, no direct A-C edge.
        let nodes = vec![
            GraphNode { id: 0, position: Point { x: 0.0, y: 0.0 } },
            GraphNode { id: 1, position: Point { x: 1.0, y: 0.0 } },
            GraphNode { id: 2, position: Point { x: 2.0, y: 0.0 } },
        ];
        let edges = vec![
            GraphEdge { a: 0, b: 1, hop_fixed_cost: 500.0, length: 1.0 },
            GraphEdge { a: 1, b: 2, hop_fixed_cost: 500.0, length: 1.0 },
        ];
        let graph = RanGraph { nodes, edges };
        let paths = shortest_paths(&graph).unwrap();
        assert_eq!(paths[0][2].fixed_cost, 1000.0);
        assert_eq!(paths[0][2].hops, 2);
        assert_eq!(paths[0][2].length, 2.0);
        assert_eq!(paths[1][1], PathInfo::ZERO);
    }

    #[test]
    fn shortest_paths_match_floyd_warshall() {
        for seed in 0..30 {
            let graph = generate_ran(&config(8, seed)).unwrap();
            let dijkstra = shortest_paths(&graph).unwrap();
            let oracle = floyd_warshall(&graph);
            for i in 0..8 {
                for j in 0..8 {
                    assert!(
                        (dijkstra[i][j].fixed_cost - oracle[i][j].fixed_cost).abs() < 1e-9,
                        "cost mismatch at ({i},{j}) seed {seed}"
                    );
                    assert_eq!(dijkstra[i][j].hops, oracle[i][j].hops, "hops at ({i},{j})");
                    assert!(
                        (dijkstra[i][j].length - oracle[i][j].length).abs() < 1e-9,
                        "length mismatch at ({i},{j}) seed {seed}"
                    );
                }
            }
        }
    }

    /// Second independent oracle: enumerate every simple path with DFS and
    /// take the lexicographic (cost, hops, length) minimum.
    fn enumerate_best_paths(graph: &RanGraph) -> Vec<Vec<PathInfo>> {
        let n = graph.nodes.len();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (idx, edge) in graph.edges.iter().enumerate() {
            adjacency[edge.a].push(idx);
            adjacency[edge.b].push(idx);
        }
        let mut best = vec![vec![None::<PathInfo>; n]; n];
        fn dfs(
            graph: &RanGraph,
            adjacency: &[Vec<usize>],
            visited: &mut Vec<bool>,
            best_row: &mut [Option<PathInfo>],
            node: usize,
            so_far: PathInfo,
        ) {
            let improves = match &best_row[node] {
                None => true,
                Some(current) => so_far.cmp_key(current) == Ordering::Less,
            };
            if improves {
                best_row[node] = Some(so_far);
            }
            for &edge_idx in &adjacency[node] {
                let edge = &graph.edges[edge_idx];
                let next = if edge.a == node { edge.b } else { edge.a };
                if visited[next] {
                    continue;
                }
                visited[next] = true;
                dfs(graph, adjacency, visited, best_row, next, so_far.extend(edge));
                visited[next] = false;
            }
        }
        for source in 0..n {
            let mut visited = vec![false; n];
            visited[source] = true;
            dfs(
                graph,
                &adjacency,
                &mut visited,
                &mut best[source],
                source,
                PathInfo::ZERO,
            );
        }
        best.into_iter()
            .map(|row| row.into_iter().map(|info| info.unwrap()).collect())
            .collect()
    }

    #[test]
    fn shortest_paths_match_simple_path_enumeration() {
        for seed in 100..115 {
            let n = 4 + (seed as usize % 5);
            let graph = generate_ran(&config(n, seed)).unwrap();
            let dijkstra = shortest_paths(&graph).unwrap();
            let oracle = enumerate_best_paths(&graph);
            for i in 0..n {
                for j in 0..n {
                    assert!(
                        (dijkstra[i][j].fixed_cost - oracle[i][j].fixed_cost).abs() < 1e-9,
                        "cost mismatch at ({i},{j}) seed {seed}"
                    );
                    assert_eq!(dijkstra[i][j].hops, oracle[i][j].hops);
                    assert!((dijkstra[i][j].length - oracle[i][j].length).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn path_costs_are_symmetric_and_obey_triangle_inequality() {
        for seed in 50..60 {
            let graph = generate_ran(&config(10, seed)).unwrap();
            let paths = shortest_paths(&graph).unwrap();
            let n = graph.nodes.len();
            for i in 0..n {
                assert_eq!(paths[i][i], PathInfo::ZERO);
                for j in 0..n {
                    assert!((paths[i][j].fixed_cost - paths[j][i].fixed_cost).abs() < 1e-9);
                    for k in 0..n {
                        assert!(
                            paths[i][k].fixed_cost
                                <= paths[i][j].fixed_cost + paths[j][k].fixed_cost + 1e-9
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn derived_instance_has_expected_structure() {
        let cfg = config(12, 11);
        let graph = generate_ran(&cfg).unwrap();
        let instance = derive_instance(&graph, &cfg, 5, 1.0, 1.0).unwrap();
        instance.validate().unwrap();
        assert_eq!(instance.sites.len(), 12);
        assert_eq!(instance.candidates.len(), 12);
        for i in 0..12 {
            assert_eq!(instance.fronthaul.omega[i][i], 0.0);
            assert_eq!(instance.fronthaul.distance[i][i], 0.0);
            assert_eq!(instance.fronthaul.latency[i][i], cfg.self_latency_floor);
            let site = &instance.sites[i];
            assert!(site.demand >= 50.0 && site.demand <= 100.0);
            assert!(site.desired_latency >= 1e-7 && site.desired_latency <= 1e-6);
            let cand = &instance.candidates[i];
            assert!(cand.capacity >= 250.0 && cand.capacity <= 500.0);
            assert_eq!(cand.fixed_cost, 500.0);
            assert_eq!(cand.marginal_cost, 1.0);
        }
    }

    #[test]
    fn derived_instance_is_deterministic_and_round_trips() {
        let cfg = config(9, 99);
        let a = generate_instance(&cfg, 4, 1.0, 1.0).unwrap();
        let b = generate_instance(&cfg, 4, 1.0, 1.0).unwrap();
        assert_eq!(a, b);
        let json = a.to_json().unwrap();
        let parsed = ProblemInstance::from_json(&json).unwrap();
        assert_eq!(parsed, a);
        assert_eq!(parsed.to_json().unwrap(), json);
    }

    #[test]
    fn graph_json_round_trips() {
        let graph = generate_ran(&config(6, 5)).unwrap();
        let json = graph.to_json().unwrap();
        let parsed = RanGraph::from_json(&json).unwrap();
        assert_eq!(parsed, graph);
    }

    #[test]
    fn config_validation_rejects_bad_ranges() {
        let mut cfg = GeneratorConfig::default();
        cfg.waxman_alpha = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = GeneratorConfig::default();
        cfg.demand_range = (100.0, 50.0);
        assert!(cfg.validate().is_err());
        let mut cfg = GeneratorConfig::default();
        cfg.site_count = 0;
        assert!(cfg.validate().is_err());
    }
}
