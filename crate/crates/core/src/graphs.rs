//! Interaction graph, behind graph and its relaxation, connectivity.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::configuration::AgentConfiguration;

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adjacency: vec![Vec::new(); n],
            matrix: vec![false; n * n],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Adds `{i, j}`. Self-loops and repeated edges are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "vertex out of range");
        if i == j || self.matrix[i * self.n + j] {
            return;
        }
        self.matrix[i * self.n + j] = true;
        self.matrix[j * self.n + i] = true;
        self.adjacency[i].push(j);
        self.adjacency[j].push(i);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.n + j]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.n)
            .flat_map(|i| self.adjacency[i].iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Directed graph on `0..n` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    out: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            out: vec![Vec::new(); n],
            matrix: vec![false; n * n],
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "vertex out of range");
        if i == j || self.matrix[i * self.n + j] {
            return;
        }
        self.matrix[i * self.n + j] = true;
        self.out[i].push(j);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.matrix[i * self.n + j]
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.out.iter().all(Vec::is_empty)
    }

    /// Sorted list of `(from, to)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.n)
            .flat_map(|i| self.out[i].iter().map(move |&j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_subgraph_of(&self, other: &DirectedGraph) -> bool {
        self.n == other.n && self.edges().iter().all(|&(i, j)| other.has_edge(i, j))
    }

    /// Whether every edge joins two neighbors of `g`.
    pub fn is_within(&self, g: &UndirectedGraph) -> bool {
        self.n == g.n_vertices() && self.edges().iter().all(|&(i, j)| g.has_edge(i, j))
    }
}

/// `{i, j}` is an edge iff `|x_i - x_j| <= 1 + eps`.
pub fn interaction_graph(config: &AgentConfiguration, eps: f64) -> UndirectedGraph {
    interaction_graph_with_radius(config, 1.0 + eps)
}

pub fn interaction_graph_with_radius(config: &AgentConfiguration, radius: f64) -> UndirectedGraph {
    let n = config.n_agents();
    let mut g = UndirectedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if config.distance(i, j) <= radius {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Whether agent `j` lies in the critical region of agent `i`, given the
/// distance between them and `x̄_i - x_i`.
#[inline]
pub(crate) fn in_critical_region(
    xi: &[f64],
    xj: &[f64],
    desired: &[f64],
    dist: f64,
    r_star: f64,
    eps: f64,
) -> bool {
    if dist < 1.0 - r_star - eps || dist > 1.0 + eps {
        return false;
    }
    let mut p = 0.0;
    for k in 0..xi.len() {
        p += desired[k] * (xj[k] - xi[k]);
    }
    p <= 0.0
}

/// Edge `(i, j)` iff `j` is in the critical region of `i`.
pub fn behind_graph(
    config: &AgentConfiguration,
    averages: &AgentConfiguration,
    r_star: f64,
    eps: f64,
) -> DirectedGraph {
    let n = config.n_agents();
    let mut g = DirectedGraph::new(n);
    let mut desired = vec![0.0; config.dim()];
    for i in 0..n {
        let xi = config.agent(i);
        for (d, (a, x)) in desired.iter_mut().zip(averages.agent(i).iter().zip(xi)) {
            *d = a - x;
        }
        for j in 0..n {
            if j != i && in_critical_region(xi, config.agent(j), &desired, config.distance(i, j), r_star, eps) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Greedy relaxation of `behind`: owners are visited in `order`, their
/// targets in ascending index, and an edge `(i, j)` is dropped when some
/// interaction neighbor `k` of `i` already kept `(k, j)`.
pub fn relax_behind_graph(interaction: &UndirectedGraph, behind: &DirectedGraph, order: &[usize]) -> DirectedGraph {
    let n = behind.n_vertices();
    assert_eq!(interaction.n_vertices(), n, "graph sizes differ");
    assert_eq!(order.len(), n, "order must list every agent once");
    let mut relaxed = DirectedGraph::new(n);
    for &i in order {
        let mut targets = behind.out_neighbors(i).to_vec();
        targets.sort_unstable();
        for j in targets {
            let covered = interaction.neighbors(i).iter().any(|&k| relaxed.has_edge(k, j));
            if !covered {
                relaxed.add_edge(i, j);
            }
        }
    }
    debug_assert!(is_relaxed(interaction, &relaxed));
    relaxed
}

/// No two interaction neighbors both keep an edge to the same target.
pub fn is_relaxed(interaction: &UndirectedGraph, g: &DirectedGraph) -> bool {
    interaction
        .edges()
        .into_iter()
        .all(|(i, j)| g.out_neighbors(i).iter().all(|&k| !g.has_edge(j, k)))
}

/// Uniformly random permutation of `0..n`.
pub fn random_order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

/// Breadth-first search from vertex 0.
pub fn is_connected(g: &UndirectedGraph) -> bool {
    component_count(g) <= 1
}

pub fn component_count(g: &UndirectedGraph) -> usize {
    let n = g.n_vertices();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

/// Connectivity of the radius-`radius` graph without building it. In 1-D
/// this sorts and checks consecutive gaps.
pub fn is_connected_within(config: &AgentConfiguration, radius: f64) -> bool {
    if config.dim() == 1 {
        let mut xs = config.as_flat().to_vec();
        xs.sort_unstable_by(f64::total_cmp);
        return xs.windows(2).all(|w| w[1] - w[0] <= radius);
    }
    is_connected(&interaction_graph_with_radius(config, radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{interaction_weights, local_average, InteractionFunction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(xs: &[f64]) -> AgentConfiguration {
        AgentConfiguration::from_scalars(xs).unwrap()
    }

    fn averages(c: &AgentConfiguration) -> AgentConfiguration {
        local_average(c, &interaction_weights(c, &InteractionFunction::Indicator, 1e-9))
    }

    #[test]
    fn interaction_graph_examples() {
        assert_eq!(interaction_graph(&cfg(&[0.0, 0.5]), 1e-9).edge_count(), 1);
        assert_eq!(interaction_graph(&cfg(&[0.0, 1.5]), 1e-9).edge_count(), 0);
        let chain = interaction_graph(&cfg(&[0.0, 0.9, 1.8]), 1e-9);
        assert_eq!(chain.edges(), vec![(0, 1), (1, 2)]);
        assert!(is_connected(&chain));
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&UndirectedGraph::new(1)));
        assert!(!is_connected(&UndirectedGraph::new(2)));
        assert_eq!(component_count(&UndirectedGraph::new(3)), 3);
        assert!(is_connected_within(&cfg(&[2.0, 0.0, 1.0]), 1.0));
        assert!(!is_connected_within(&cfg(&[2.1, 0.0, 1.0]), 1.0));
    }

    #[test]
    fn coincident_agents_have_no_behind_edges() {
        let c = cfg(&[0.3; 4]);
        assert!(behind_graph(&c, &averages(&c), 0.5, 1e-9).is_empty());
    }

    #[test]
    fn behind_edge_is_directed() {
        // agent 0 at 0 is pulled right by agent 2, agent 1 at -0.8 trails it
        let c = cfg(&[0.0, -0.8, 0.9]);
        let avg = averages(&c);
        let g = behind_graph(&c, &avg, 0.5, 1e-9);
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(1, 0));
        assert!(g.is_within(&interaction_graph(&c, 1e-9)));
    }

    #[test]
    fn counterexample_line_keeps_outer_agents_behind() {
        let c = cfg(&[1.0, 2.0, 3.0, 4.0]);
        let g = behind_graph(&c, &averages(&c), 1.0, 1e-9);
        assert!(g.has_edge(1, 0));
        assert!(g.has_edge(2, 3));
    }

    #[test]
    fn relaxation_of_shared_target() {
        // 0 and 2 are neighbors, both have 1 behind them
        let mut e = UndirectedGraph::new(3);
        e.add_edge(0, 1);
        e.add_edge(1, 2);
        e.add_edge(0, 2);
        let mut b = DirectedGraph::new(3);
        b.add_edge(0, 1);
        b.add_edge(2, 1);
        let first = relax_behind_graph(&e, &b, &[0, 1, 2]);
        assert_eq!(first.edges(), vec![(0, 1)]);
        let second = relax_behind_graph(&e, &b, &[2, 0, 1]);
        assert_eq!(second.edges(), vec![(2, 1)]);
        assert!(is_relaxed(&e, &first) && is_relaxed(&e, &second));
        assert!(!is_relaxed(&e, &b));
    }

    #[test]
    fn relaxation_keeps_unshared_edges() {
        let e = interaction_graph(&cfg(&[0.0, 0.9, 1.8]), 1e-9);
        let mut b = DirectedGraph::new(3);
        b.add_edge(1, 0);
        assert_eq!(relax_behind_graph(&e, &b, &[2, 1, 0]), b);
        let empty = DirectedGraph::new(3);
        assert!(relax_behind_graph(&e, &empty, &[0, 1, 2]).is_empty());
    }

    #[test]
    fn random_order_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut o = random_order(20, &mut rng);
        o.sort_unstable();
        assert_eq!(o, (0..20).collect::<Vec<_>>());
    }
}
