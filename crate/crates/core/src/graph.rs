//! Simple undirected graphs with labeled edges, plus the graph transforms
//! used by the reductions: powers, subdivision and jagged graphs.

use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} not in graph")]
    EdgeNotInGraph(usize, usize),
}

/// Simple undirected graph on vertices `0..n` with one opaque string label
/// per edge. The default label is `"1"`.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    /// Edges in insertion order, endpoints normalized to `u < v`.
    edges: Vec<(usize, usize)>,
    labels: HashMap<(usize, usize), String>,
}

pub const DEFAULT_LABEL: &str = "1";

impl LabeledGraph {
    pub fn new(n: usize) -> Self {
        LabeledGraph {
            n,
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            labels: HashMap::new(),
        }
    }

    /// Builds a graph from an edge list. Omitted labels default to `"1"`.
    pub fn build(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, Option<String>)>,
    ) -> Result<Self, GraphError> {
        let mut g = LabeledGraph::new(n);
        for (u, v, label) in edges {
            g.add_edge_labeled(u, v, label.unwrap_or_else(|| DEFAULT_LABEL.to_string()))?;
        }
        Ok(g)
    }

    /// Builds a graph from unlabeled edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        LabeledGraph::build(n, edges.into_iter().map(|(u, v)| (u, v, None)))
            .expect("invalid edge list")
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.add_edge_labeled(u, v, DEFAULT_LABEL.to_string())
    }

    pub fn add_edge_labeled(&mut self, u: usize, v: usize, label: String) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let key = (u.min(v), u.max(v));
        if self.labels.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.adj[u].sort_unstable();
        self.adj[v].sort_unstable();
        self.edges.push(key);
        self.labels.insert(key, label);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order with normalized endpoints.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted open neighborhood of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.labels.contains_key(&(u.min(v), u.max(v)))
    }

    /// Label of edge `uv`; `None` for non-edges.
    pub fn label(&self, u: usize, v: usize) -> Option<&str> {
        self.labels.get(&(u.min(v), u.max(v))).map(|s| s.as_str())
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Breadth-first distances from `v`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Closed ball `N^r[v]`, sorted. `r = 0` gives `{v}`.
    pub fn closed_ball(&self, v: usize, r: usize) -> Vec<usize> {
        let dist = self.bfs_distances(v);
        (0..self.n)
            .filter(|&u| dist[u].map_or(false, |d| d <= r))
            .collect()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Origin of a vertex in a transformed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    /// An original vertex, kept under the same id.
    Vertex(usize),
    /// A vertex standing for the original edge `(u, v)` with `u < v`.
    Edge(usize, usize),
}

/// Maps each vertex of a transformed graph back to its origin.
#[derive(Debug, Clone)]
pub struct VertexMap {
    origins: Vec<VertexOrigin>,
}

impl VertexMap {
    pub fn origin(&self, v: usize) -> VertexOrigin {
        self.origins[v]
    }

    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    /// Id of the edge-vertex standing for `uv`, if the transform created one.
    pub fn edge_vertex(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.origins.iter().position(|&o| o == VertexOrigin::Edge(key.0, key.1))
    }
}

/// `p`-th power: same vertices, edge `uv` iff `dist(u, v) <= p`. Original
/// edges keep their labels, new edges get the default label.
pub fn graph_power(g: &LabeledGraph, p: usize) -> LabeledGraph {
    assert!(p >= 1, "power must be >= 1");
    let mut out = LabeledGraph::new(g.vertex_count());
    for (u, v) in g.edges() {
        out.add_edge_labeled(*u, *v, g.label(*u, *v).unwrap().to_string())
            .unwrap();
    }
    for u in 0..g.vertex_count() {
        let dist = g.bfs_distances(u);
        for v in u + 1..g.vertex_count() {
            if !out.has_edge(u, v) && dist[v].map_or(false, |d| d <= p) {
                out.add_edge(u, v).unwrap();
            }
        }
    }
    out
}

fn transform_with_edge_vertices(g: &LabeledGraph, keep_original_edges: bool) -> (LabeledGraph, VertexMap) {
    let n = g.vertex_count();
    let mut out = LabeledGraph::new(n + g.edge_count());
    let mut origins: Vec<VertexOrigin> = (0..n).map(VertexOrigin::Vertex).collect();
    if keep_original_edges {
        for (u, v) in g.edges() {
            out.add_edge_labeled(*u, *v, g.label(*u, *v).unwrap().to_string())
                .unwrap();
        }
    }
    // Edge-vertices are appended after the original vertices in input edge
    // order, so the map is deterministic.
    for (idx, (u, v)) in g.edges().iter().enumerate() {
        let x = n + idx;
        origins.push(VertexOrigin::Edge(*u, *v));
        out.add_edge(*u, x).unwrap();
        out.add_edge(*v, x).unwrap();
    }
    (out, VertexMap { origins })
}

/// Subdivision graph `S(G)`: each edge `uv` becomes a path `u - x_uv - v`.
pub fn transform_subdivision(g: &LabeledGraph) -> (LabeledGraph, VertexMap) {
    transform_with_edge_vertices(g, false)
}

/// Jagged graph `J(G)`: original edges are kept and each edge-vertex is
/// joined to both endpoints of its edge.
pub fn transform_jagged(g: &LabeledGraph) -> (LabeledGraph, VertexMap) {
    transform_with_edge_vertices(g, true)
}

/// Path on `n` vertices, `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> LabeledGraph {
    LabeledGraph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> LabeledGraph {
    assert!(n >= 3);
    LabeledGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> LabeledGraph {
    LabeledGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(
            LabeledGraph::build(3, [(0, 1, None), (0, 1, None)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            LabeledGraph::build(3, [(1, 0, None), (0, 1, None)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            LabeledGraph::build(2, [(0, 0, None)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            LabeledGraph::build(2, [(0, 2, None)]).unwrap_err(),
            GraphError::VertexOutOfRange(2, 2)
        );
    }

    #[test]
    fn build_defaults_labels() {
        let g = path(3);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.label(0, 1), Some("1"));
        assert_eq!(g.label(1, 2), Some("1"));
        assert_eq!(g.label(0, 2), None);
        let k1 = LabeledGraph::new(1);
        assert_eq!(k1.edge_count(), 0);
    }

    #[test]
    fn power_of_p4() {
        // BFS distance oracle: P4 squared has edges 01 12 23 02 13.
        let g = graph_power(&path(4), 2);
        let mut expect = vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)];
        expect.sort_unstable();
        let mut got = g.edges().to_vec();
        got.sort_unstable();
        assert_eq!(got, expect);
    }

    #[test]
    fn power_one_is_identity() {
        let g = cycle(5);
        let p = graph_power(&g, 1);
        assert_eq!(p.edge_count(), g.edge_count());
        for (u, v) in g.edges() {
            assert!(p.has_edge(*u, *v));
        }
    }

    #[test]
    fn c5_squared_is_complete() {
        assert!(graph_power(&cycle(5), 2).is_complete());
    }

    #[test]
    fn power_monotone_and_degree_bounds() {
        // E(G) subseteq E(G^p) subseteq E(G^{p+1}); Delta(G) <= Delta(G^p) <= Delta(G)^p
        let g = LabeledGraph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6)]);
        let mut prev = g.clone();
        for p in 2..=3 {
            let gp = graph_power(&g, p);
            for (u, v) in prev.edges() {
                assert!(gp.has_edge(*u, *v));
            }
            assert!(g.max_degree() <= gp.max_degree());
            assert!(gp.max_degree() <= g.max_degree().pow(p as u32));
            prev = gp;
        }
    }

    #[test]
    fn subdivision_of_k3_is_c6() {
        let (s, map) = transform_subdivision(&complete(3));
        assert_eq!(s.vertex_count(), 6);
        assert_eq!(s.edge_count(), 6);
        // original vertices form an independent set
        for u in 0..3 {
            for v in u + 1..3 {
                assert!(!s.has_edge(u, v));
            }
        }
        // every vertex has degree 2, so it is a cycle
        assert!((0..6).all(|v| s.degree(v) == 2));
        assert!(s.is_connected());
        assert_eq!(map.origin(3), VertexOrigin::Edge(0, 1));
    }

    #[test]
    fn subdivision_trivial_cases() {
        let (s, _) = transform_subdivision(&LabeledGraph::new(1));
        assert_eq!((s.vertex_count(), s.edge_count()), (1, 0));
        let (p, _) = transform_subdivision(&path(2));
        assert_eq!((p.vertex_count(), p.edge_count()), (3, 2));
    }

    #[test]
    fn jagged_of_p2_is_k3() {
        let (j, map) = transform_jagged(&path(2));
        assert_eq!(j.vertex_count(), 3);
        assert_eq!(j.edge_count(), 3);
        assert!(j.is_complete());
        assert_eq!(map.edge_vertex(0, 1), Some(2));
    }

    #[test]
    fn jagged_counts() {
        let (j, _) = transform_jagged(&path(3));
        assert_eq!((j.vertex_count(), j.edge_count()), (5, 6));
        let (k, _) = transform_jagged(&LabeledGraph::new(1));
        assert_eq!((k.vertex_count(), k.edge_count()), (1, 0));
        // |E(J(G))| = 3|E(G)|, |E(S(G))| = 2|E(G)|
        let g = cycle(6);
        assert_eq!(transform_jagged(&g).0.edge_count(), 3 * g.edge_count());
        assert_eq!(transform_subdivision(&g).0.edge_count(), 2 * g.edge_count());
    }

    #[test]
    fn closed_ball_examples() {
        let g = path(5);
        assert_eq!(g.closed_ball(2, 1), vec![1, 2, 3]);
        assert_eq!(g.closed_ball(0, 2), vec![0, 1, 2]);
        assert_eq!(g.closed_ball(3, 0), vec![3]);
    }

    #[test]
    fn closed_ball_matches_neighbor_expansion() {
        let g = LabeledGraph::from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (6, 7)]);
        for v in 0..8 {
            for r in 0..4 {
                let mut set: Vec<usize> = vec![v];
                for _ in 0..r {
                    let mut next = set.clone();
                    for &u in &set {
                        next.extend(g.neighbors(u));
                    }
                    next.sort_unstable();
                    next.dedup();
                    set = next;
                }
                assert_eq!(g.closed_ball(v, r), set, "v={v} r={r}");
            }
        }
    }

    #[test]
    fn components_split() {
        let g = LabeledGraph::from_edges(5, [(0, 1), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        assert!(path(4).is_connected());
    }
}
