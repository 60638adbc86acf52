//! Polynomial solver for locally checkable problems on complete graphs
//! with unit labels, when the check depends only on the vertex, its color
//! and the global color counts: enumerate color distributions and solve a
//! minimum-cost maximum-flow problem per distribution.

use crate::algebra::{Weight, WeightAlgebra};
use crate::instance::{ColorId, ProblemInstance};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("graph is not complete")]
    NotComplete,
    #[error("graph has non-unit edge labels")]
    NonUnitLabels,
    #[error("{0} colors exceed the limit of {1}")]
    TooManyColors(usize, usize),
    #[error("flow costs require the min-plus algebra, got {0}")]
    WrongAlgebra(&'static str),
}

/// Directed capacitated network with costs, built per color distribution.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc4>,
}

#[derive(Debug, Clone, Copy)]
struct Arc4 {
    from: usize,
    to: usize,
    capacity: i64,
    cost: i64,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            node_count,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: i64, cost: i64) {
        assert!(capacity >= 0);
        assert!(to != self.source && from != self.sink);
        self.arcs.push(Arc4 {
            from,
            to,
            capacity,
            cost,
        });
    }
}

/// Result of a min-cost max-flow computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub flow: i64,
    pub cost: i64,
    /// Integral flow per arc, in insertion order.
    pub arc_flows: Vec<i64>,
}

/// Successive shortest augmenting paths with potentials; requires
/// nonnegative arc costs, returns the maximum flow of minimum total cost.
pub fn min_cost_max_flow(net: &FlowNetwork) -> FlowResult {
    let n = net.node_count;
    // residual graph: forward/backward arc pairs
    let mut head: Vec<usize> = Vec::new();
    let mut cap: Vec<i64> = Vec::new();
    let mut cost: Vec<i64> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in &net.arcs {
        debug_assert!(a.cost >= 0);
        adj[a.from].push(head.len());
        head.push(a.to);
        cap.push(a.capacity);
        cost.push(a.cost);
        adj[a.to].push(head.len());
        head.push(a.from);
        cap.push(0);
        cost.push(-a.cost);
    }
    let inf = i64::MAX / 4;
    let mut potential = vec![0i64; n];
    let mut total_flow = 0i64;
    let mut total_cost = 0i64;
    loop {
        // Dijkstra over reduced costs
        let mut dist = vec![inf; n];
        let mut parent_edge = vec![usize::MAX; n];
        dist[net.source] = 0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse((0i64, net.source)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &adj[u] {
                if cap[e] <= 0 {
                    continue;
                }
                let v = head[e];
                let nd = d + cost[e] + potential[u] - potential[v];
                debug_assert!(cost[e] + potential[u] - potential[v] >= 0);
                if nd < dist[v] {
                    dist[v] = nd;
                    parent_edge[v] = e;
                    heap.push(std::cmp::Reverse((nd, v)));
                }
            }
        }
        if dist[net.sink] >= inf {
            break;
        }
        for v in 0..n {
            if dist[v] < inf {
                potential[v] += dist[v];
            }
        }
        // bottleneck along the path
        let mut bottleneck = inf;
        let mut v = net.sink;
        while v != net.source {
            let e = parent_edge[v];
            bottleneck = bottleneck.min(cap[e]);
            v = head[e ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let e = parent_edge[v];
            cap[e] -= bottleneck;
            cap[e ^ 1] += bottleneck;
            total_cost += bottleneck * cost[e];
            v = head[e ^ 1];
        }
        total_flow += bottleneck;
    }
    let arc_flows: Vec<i64> = (0..net.arcs.len()).map(|i| cap[2 * i + 1]).collect();
    FlowResult {
        flow: total_flow,
        cost: total_cost,
        arc_flows,
    }
}

/// Distribution-dependent check: `check'(v, i, counts)` where `counts[j]`
/// is the number of vertices colored `j` under the candidate distribution.
pub type DistributionCheck = Arc<dyn Fn(usize, ColorId, &[usize]) -> bool + Send + Sync>;

pub const MAX_FLOW_COLORS: usize = 16;

#[derive(Debug, Clone)]
pub struct CompleteGraphReport {
    pub optimum: Weight,
    pub witness: Option<Vec<ColorId>>,
    /// Number of color distributions examined.
    pub distributions: usize,
}

/// Solves an instance on a complete graph with unit labels and a
/// count-dependent check (asserted by the caller through `check`).
///
/// For every distribution `(k_1, ..., k_C)` summing to `n`, a network is
/// built with arcs source -> color (capacity `k_i`), color -> (v, i)
/// (capacity 1, present when `k_i >= 1`, `i` in `L_v` and the check
/// holds), (v, i) -> v (capacity 1, cost `w_{v,i}`), v -> sink
/// (capacity 1). The distribution is achievable iff the maximum flow
/// saturates all vertices; the answer is the minimum cost over achievable
/// distributions, `Error` when none is.
pub fn solve_complete_graph(
    inst: &ProblemInstance,
    check: &DistributionCheck,
) -> Result<CompleteGraphReport, FlowError> {
    if !inst.graph.is_complete() {
        return Err(FlowError::NotComplete);
    }
    if inst
        .graph
        .edges()
        .iter()
        .any(|(u, v)| inst.graph.label(*u, *v) != Some(crate::graph::DEFAULT_LABEL))
    {
        return Err(FlowError::NonUnitLabels);
    }
    if inst.algebra != WeightAlgebra::MinPlus {
        return Err(FlowError::WrongAlgebra(inst.algebra.name()));
    }
    let color_count = inst.colors.len();
    if color_count > MAX_FLOW_COLORS {
        return Err(FlowError::TooManyColors(color_count, MAX_FLOW_COLORS));
    }
    let n = inst.vertex_count();
    if n == 0 {
        return Ok(CompleteGraphReport {
            optimum: inst.algebra.neutral(),
            witness: Some(vec![]),
            distributions: 0,
        });
    }

    // node ids: source, sink, colors, (v, i) pairs, vertices
    let source = 0usize;
    let sink = 1usize;
    let color_node = |i: usize| 2 + i;
    let pair_node = |v: usize, i: usize| 2 + color_count + v * color_count + i;
    let vertex_node = |v: usize| 2 + color_count + n * color_count + v;
    let node_count = 2 + color_count + n * color_count + n;

    let mut best = Weight::Error;
    let mut best_witness: Option<Vec<ColorId>> = None;
    let mut distributions = 0usize;
    let mut counts = vec![0usize; color_count];
    // enumerate compositions of n into color_count nonnegative parts
    fn enumerate(
        counts: &mut Vec<usize>,
        pos: usize,
        remaining: usize,
        f: &mut impl FnMut(&[usize]),
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = remaining;
            f(counts);
            return;
        }
        for k in 0..=remaining {
            counts[pos] = k;
            enumerate(counts, pos + 1, remaining - k, f);
        }
    }
    let mut consider = |counts: &[usize]| {
        distributions += 1;
        let mut net = FlowNetwork::new(node_count, source, sink);
        let mut pair_arcs: Vec<(usize, usize, usize)> = Vec::new(); // (arc index, v, i)
        for (i, &k) in counts.iter().enumerate() {
            if k >= 1 {
                net.add_arc(source, color_node(i), k as i64, 0);
            }
        }
        for v in 0..n {
            for &i in inst.list(v) {
                if counts[i] >= 1 && check(v, i, counts) {
                    net.add_arc(color_node(i), pair_node(v, i), 1, 0);
                    let w = match inst.cost(v, i) {
                        Weight::Value(x) => x,
                        Weight::Error => unreachable!("instance costs are finite"),
                    };
                    debug_assert!(w >= 0, "flow solver needs nonnegative costs");
                    pair_arcs.push((net.arcs.len(), v, i));
                    net.add_arc(pair_node(v, i), vertex_node(v), 1, w);
                }
            }
            net.add_arc(vertex_node(v), sink, 1, 0);
        }
        let result = min_cost_max_flow(&net);
        if result.flow == n as i64 {
            let w = Weight::Value(result.cost);
            if inst.algebra.compare(w, best) == std::cmp::Ordering::Less {
                best = w;
                let mut coloring = vec![usize::MAX; n];
                for &(arc_idx, v, i) in &pair_arcs {
                    if result.arc_flows[arc_idx] > 0 {
                        coloring[v] = i;
                    }
                }
                debug_assert!(coloring.iter().all(|&c| c != usize::MAX));
                best_witness = Some(coloring);
            }
        }
    };
    enumerate(&mut counts, 0, n, &mut consider);
    Ok(CompleteGraphReport {
        optimum: best,
        witness: best_witness,
        distributions,
    })
}

/// Derives a distribution check from an instance's check by materializing
/// a coloring with the requested global counts. Exact when the check
/// depends only on `(v, c(v), counts)` (the caller asserts this) and every
/// vertex may take every color; returns `None` otherwise.
pub fn distribution_check_from_instance(inst: &ProblemInstance) -> Option<DistributionCheck> {
    let n = inst.vertex_count();
    let full: Vec<ColorId> = (0..inst.colors.len()).collect();
    for v in 0..n {
        if inst.list(v) != full.as_slice() {
            return None;
        }
    }
    let inst = inst.clone();
    Some(Arc::new(move |v, i, counts| {
        if counts[i] == 0 {
            return false;
        }
        let mut remaining = counts.to_vec();
        remaining[i] -= 1;
        let mut coloring = vec![0usize; n];
        coloring[v] = i;
        let mut slot = (0..n).filter(|&u| u != v);
        for (color, &cnt) in remaining.iter().enumerate() {
            for _ in 0..cnt {
                match slot.next() {
                    Some(u) => coloring[u] = color,
                    None => return false,
                }
            }
        }
        (inst.check)(&inst.graph, v, &coloring)
    }))
}

/// Number of color distributions for `n` vertices and `c` colors:
/// `binom(n + c - 1, c - 1)`.
pub fn distribution_count(n: usize, c: usize) -> u128 {
    let mut result: u128 = 1;
    for i in 0..(c - 1) {
        result = result * (n as u128 + i as u128 + 1) / (i as u128 + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;

    #[test]
    fn two_disjoint_unit_paths() {
        // source -> a -> sink costing 5, source -> b -> sink costing 1
        let mut net = FlowNetwork::new(4, 0, 1);
        net.add_arc(0, 2, 1, 5);
        net.add_arc(2, 1, 1, 0);
        net.add_arc(0, 3, 1, 1);
        net.add_arc(3, 1, 1, 0);
        let r = min_cost_max_flow(&net);
        assert_eq!((r.flow, r.cost), (2, 6));
    }

    #[test]
    fn zero_capacity_network() {
        let mut net = FlowNetwork::new(3, 0, 1);
        net.add_arc(0, 2, 0, 7);
        net.add_arc(2, 1, 0, 0);
        let r = min_cost_max_flow(&net);
        assert_eq!((r.flow, r.cost), (0, 0));
    }

    #[test]
    fn diamond_forces_both_routes() {
        // capacity 2 out of the source, two unit routes costing 1 and 10
        let mut net = FlowNetwork::new(4, 0, 1);
        net.add_arc(0, 2, 1, 1);
        net.add_arc(0, 3, 1, 10);
        net.add_arc(2, 1, 1, 0);
        net.add_arc(3, 1, 1, 0);
        let r = min_cost_max_flow(&net);
        assert_eq!((r.flow, r.cost), (2, 11));
        // flow conservation at internal nodes
        assert_eq!(r.arc_flows, vec![1, 1, 1, 1]);
    }

    #[test]
    fn trivial_distribution_enumeration() {
        // 2 colors, n = 3, check always true, costs all 0:
        // binom(3 + 1, 1) = 4 distributions, optimum 0
        let inst = ProblemInstance::uniform(
            Arc::new(complete(3)),
            WeightAlgebra::MinPlus,
            vec!["a".into(), "b".into()],
            |_| 0,
            Arc::new(|_, _, _| true),
        );
        let always: DistributionCheck = Arc::new(|_, _, _| true);
        let report = solve_complete_graph(&inst, &always).unwrap();
        assert_eq!(report.optimum, Weight::Value(0));
        assert_eq!(report.distributions, 4);
        assert_eq!(distribution_count(3, 2), 4);
    }

    #[test]
    fn impossible_check_is_error() {
        let inst = ProblemInstance::uniform(
            Arc::new(complete(3)),
            WeightAlgebra::MinPlus,
            vec!["a".into()],
            |_| 0,
            Arc::new(|_, _, _| true),
        );
        let never: DistributionCheck = Arc::new(|_, _, _| false);
        let report = solve_complete_graph(&inst, &never).unwrap();
        assert_eq!(report.optimum, Weight::Error);
    }

    #[test]
    fn rejects_incomplete_graphs_and_wrong_algebra() {
        let inst = ProblemInstance::uniform(
            Arc::new(crate::graph::path(3)),
            WeightAlgebra::MinPlus,
            vec!["a".into()],
            |_| 0,
            Arc::new(|_, _, _| true),
        );
        let always: DistributionCheck = Arc::new(|_, _, _| true);
        assert_eq!(
            solve_complete_graph(&inst, &always).unwrap_err(),
            FlowError::NotComplete
        );
        let inst = ProblemInstance::uniform(
            Arc::new(complete(3)),
            WeightAlgebra::MaxPlus,
            vec!["a".into()],
            |_| 0,
            Arc::new(|_, _, _| true),
        );
        assert!(matches!(
            solve_complete_graph(&inst, &always).unwrap_err(),
            FlowError::WrongAlgebra(_)
        ));
    }
}
