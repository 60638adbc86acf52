//! Brute-force reference solvers. These enumerate colorings directly from
//! the problem definition and deliberately avoid any pruning cleverness;
//! every acceptance test measures the engine against them.

use crate::algebra::Weight;
use crate::globals::GlobalConstraint;
use crate::graph::LabeledGraph;
use crate::instance::{ColorId, ProblemInstance};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {0} colorings exceeds the budget of {1}")]
    BudgetExceeded(u128, u128),
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimum: Weight,
    /// All co-optimal proper colorings; collected only when requested.
    pub optimal_colorings: Vec<Vec<ColorId>>,
}

fn class_of(coloring: &[ColorId], colors: &[ColorId]) -> Vec<usize> {
    coloring
        .iter()
        .enumerate()
        .filter(|(_, c)| colors.contains(c))
        .map(|(v, _)| v)
        .collect()
}

fn induced_connected(g: &LabeledGraph, class: &[usize]) -> bool {
    if class.len() <= 1 {
        return true;
    }
    let inside = |v: usize| class.binary_search(&v).is_ok();
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![class[0]];
    seen[class[0]] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if inside(w) && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == class.len()
}

fn induced_acyclic(g: &LabeledGraph, class: &[usize]) -> bool {
    // a simple graph on a vertex set is acyclic iff every connected piece
    // has edges = vertices - 1; equivalently total edges < vertices when
    // checked piecewise. Use DFS cycle detection.
    let inside = |v: usize| class.binary_search(&v).is_ok();
    let mut seen = vec![false; g.vertex_count()];
    for &s in class {
        if seen[s] {
            continue;
        }
        // iterative DFS carrying the parent
        let mut stack = vec![(s, usize::MAX)];
        seen[s] = true;
        let mut vertices = 0usize;
        let mut edges = 0usize;
        while let Some((u, _)) = stack.pop() {
            vertices += 1;
            for &w in g.neighbors(u) {
                if !inside(w) {
                    continue;
                }
                edges += 1;
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, u));
                }
            }
        }
        if edges / 2 >= vertices {
            return false;
        }
    }
    true
}

/// Checks the constraints directly on a candidate coloring.
pub fn constraints_hold(
    g: &LabeledGraph,
    constraints: &[GlobalConstraint],
    coloring: &[ColorId],
) -> bool {
    constraints.iter().all(|c| match c {
        GlobalConstraint::SizeAutomaton { colors, automaton } => {
            automaton.accepts_length(class_of(coloring, colors).len())
        }
        GlobalConstraint::Connected { colors } => {
            induced_connected(g, &class_of(coloring, colors))
        }
        GlobalConstraint::Acyclic { colors } => induced_acyclic(g, &class_of(coloring, colors)),
    })
}

/// Exhaustive minimum over proper colorings satisfying the constraints.
///
/// `budget` bounds the number of enumerated colorings (default `10^7`).
/// `collect_optima` additionally gathers every co-optimal coloring.
pub fn brute_force_solve(
    inst: &ProblemInstance,
    constraints: &[GlobalConstraint],
    budget: Option<u128>,
    collect_optima: bool,
) -> Result<OracleResult, OracleError> {
    let budget = budget.unwrap_or(10_000_000);
    let n = inst.vertex_count();
    let mut space: u128 = 1;
    for v in 0..n {
        space = space.saturating_mul(inst.list(v).len() as u128);
    }
    if space > budget {
        return Err(OracleError::BudgetExceeded(space, budget));
    }
    let alg = inst.algebra;
    let mut best = Weight::Error;
    let mut optima: Vec<Vec<ColorId>> = Vec::new();
    let mut idx = vec![0usize; n];
    let mut coloring: Vec<ColorId> = (0..n).map(|v| inst.list(v)[0]).collect();
    if n == 0 {
        return Ok(OracleResult {
            optimum: alg.neutral(),
            optimal_colorings: if collect_optima { vec![vec![]] } else { vec![] },
        });
    }
    loop {
        if inst.is_proper(&coloring).unwrap()
            && constraints_hold(&inst.graph, constraints, &coloring)
        {
            let w = inst.coloring_weight(&coloring).unwrap();
            let cmp = alg.compare(w, best);
            if cmp == std::cmp::Ordering::Less {
                best = w;
                if collect_optima {
                    optima.clear();
                    optima.push(coloring.clone());
                }
            } else if cmp == std::cmp::Ordering::Equal && collect_optima && !w.is_error() {
                optima.push(coloring.clone());
            }
        }
        // odometer over the per-vertex lists
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(OracleResult {
                    optimum: best,
                    optimal_colorings: optima,
                });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < inst.list(pos).len() {
                coloring[pos] = inst.list(pos)[idx[pos]];
                break;
            }
            idx[pos] = 0;
            coloring[pos] = inst.list(pos)[0];
        }
    }
}

/// Maximum length of a legal dominating sequence, by direct enumeration of
/// sequences (independent of the engine's pair encoding). `total` switches
/// to open neighborhoods. `None` when no legal dominating sequence exists
/// (the total variant on graphs with isolated vertices).
pub fn brute_force_grundy(g: &LabeledGraph, total: bool) -> Result<Option<usize>, OracleError> {
    let n = g.vertex_count();
    if n > 8 {
        return Err(OracleError::BudgetExceeded(u128::MAX, 1 << 24));
    }
    fn ball(g: &LabeledGraph, v: usize, total: bool) -> u64 {
        let mut m = 0u64;
        for &u in g.neighbors(v) {
            m |= 1 << u;
        }
        if !total {
            m |= 1 << v;
        }
        m
    }
    fn rec_dom(
        g: &LabeledGraph,
        total: bool,
        all: u64,
        used: u64,
        footprinted: u64,
        len: usize,
        best: &mut Option<usize>,
    ) {
        if footprinted == all {
            *best = Some(best.map_or(len, |b| b.max(len)));
        }
        for v in 0..g.vertex_count() {
            if used & (1 << v) != 0 {
                continue;
            }
            let b = ball(g, v, total);
            if b & !footprinted == 0 {
                continue; // footprints nothing new: not legal
            }
            rec_dom(g, total, all, used | (1 << v), footprinted | b, len + 1, best);
        }
    }
    let all: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let mut best = None;
    rec_dom(g, total, all, 0, 0, 0, &mut best);
    Ok(best)
}

/// Native brute-force optima for the edge problems, straight from their
/// set definitions. Used to validate the jagged-graph reductions.
pub mod edge_native {
    use crate::graph::LabeledGraph;

    fn edge_subsets(g: &LabeledGraph) -> impl Iterator<Item = u64> + '_ {
        let m = g.edge_count();
        assert!(m < 63);
        0..(1u64 << m)
    }

    pub fn min_vertex_cover(g: &LabeledGraph) -> Option<usize> {
        let n = g.vertex_count();
        assert!(n < 63);
        (0..(1u64 << n))
            .filter(|set| {
                g.edges()
                    .iter()
                    .all(|(u, v)| set & (1 << u) != 0 || set & (1 << v) != 0)
            })
            .map(|set| set.count_ones() as usize)
            .min()
    }

    pub fn max_matching(g: &LabeledGraph) -> Option<usize> {
        edge_subsets(g)
            .filter(|set| {
                let mut touched = 0u64;
                for (i, (u, v)) in g.edges().iter().enumerate() {
                    if set & (1 << i) != 0 {
                        let mask = (1u64 << u) | (1 << v);
                        if touched & mask != 0 {
                            return false;
                        }
                        touched |= mask;
                    }
                }
                true
            })
            .map(|set| set.count_ones() as usize)
            .max()
    }

    pub fn min_edge_cover(g: &LabeledGraph) -> Option<usize> {
        edge_subsets(g)
            .filter(|set| {
                let mut touched = 0u64;
                for (i, (u, v)) in g.edges().iter().enumerate() {
                    if set & (1 << i) != 0 {
                        touched |= (1u64 << u) | (1 << v);
                    }
                }
                (0..g.vertex_count()).all(|v| touched & (1 << v) != 0)
            })
            .map(|set| set.count_ones() as usize)
            .min()
    }

    pub fn min_edge_domination(g: &LabeledGraph) -> Option<usize> {
        edge_subsets(g)
            .filter(|set| {
                g.edges().iter().enumerate().all(|(i, (u, v))| {
                    if set & (1 << i) != 0 {
                        return true;
                    }
                    g.edges().iter().enumerate().any(|(j, (x, y))| {
                        set & (1 << j) != 0 && (x == u || x == v || y == u || y == v)
                    })
                })
            })
            .map(|set| set.count_ones() as usize)
            .min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WeightAlgebra;
    use crate::graph::{complete, cycle, path};
    use std::sync::Arc;

    fn dominating_set(g: LabeledGraph) -> ProblemInstance {
        ProblemInstance::uniform(
            Arc::new(g),
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into()],
            |i| i as i64,
            Arc::new(|g, v, c| c[v] == 1 || g.neighbors(v).iter().any(|&u| c[u] == 1)),
        )
    }

    #[test]
    fn dominating_p4_is_two() {
        let res = brute_force_solve(&dominating_set(path(4)), &[], None, true).unwrap();
        assert_eq!(res.optimum, Weight::Value(2));
        for c in &res.optimal_colorings {
            let inst = dominating_set(path(4));
            assert_eq!(inst.is_proper(c), Ok(true));
            assert_eq!(inst.coloring_weight(c), Ok(Weight::Value(2)));
        }
    }

    #[test]
    fn three_coloring_k4_is_error() {
        let inst = ProblemInstance::uniform(
            Arc::new(complete(4)),
            WeightAlgebra::MinMax,
            vec!["1".into(), "2".into(), "3".into()],
            |i| i as i64 + 1,
            Arc::new(|g, v, c| g.neighbors(v).iter().all(|&u| c[u] != c[v])),
        );
        let res = brute_force_solve(&inst, &[], None, false).unwrap();
        assert_eq!(res.optimum, Weight::Error);
    }

    #[test]
    fn independent_set_k1() {
        let inst = ProblemInstance::uniform(
            Arc::new(LabeledGraph::new(1)),
            WeightAlgebra::MaxPlus,
            vec!["0".into(), "1".into()],
            |i| i as i64,
            Arc::new(|g, v, c| c[v] == 0 || g.neighbors(v).iter().all(|&u| c[u] == 0)),
        );
        let res = brute_force_solve(&inst, &[], None, false).unwrap();
        assert_eq!(res.optimum, Weight::Value(1));
    }

    #[test]
    fn budget_is_enforced() {
        let inst = dominating_set(path(8));
        assert!(matches!(
            brute_force_solve(&inst, &[], Some(100), false),
            Err(OracleError::BudgetExceeded(256, 100))
        ));
    }

    #[test]
    fn constrained_solve_filters() {
        // dominating set of P4 with a connected class: {v1,v2} works, size 2
        let inst = dominating_set(path(4));
        let conn = GlobalConstraint::Connected { colors: vec![1] };
        let res = brute_force_solve(&inst, &[conn], None, false).unwrap();
        assert_eq!(res.optimum, Weight::Value(2));
        // size forced to exactly 3
        let auto = crate::globals::build_size_automaton(&crate::globals::SizeSpec::Finite(vec![3]))
            .unwrap();
        let size = GlobalConstraint::SizeAutomaton {
            colors: vec![1],
            automaton: Arc::new(auto),
        };
        let res = brute_force_solve(&inst, &[size], None, false).unwrap();
        assert_eq!(res.optimum, Weight::Value(3));
    }

    #[test]
    fn acyclic_constraint_detects_cycles() {
        let g = cycle(3);
        assert!(!induced_acyclic(&g, &[0, 1, 2]));
        assert!(induced_acyclic(&g, &[0, 1]));
        assert!(induced_connected(&g, &[0, 1]));
        assert!(!induced_connected(&cycle(5), &[0, 2]));
    }

    #[test]
    fn grundy_small_cases() {
        assert_eq!(brute_force_grundy(&path(3), false).unwrap(), Some(2));
        assert_eq!(brute_force_grundy(&LabeledGraph::new(1), false).unwrap(), Some(1));
        assert_eq!(brute_force_grundy(&complete(3), false).unwrap(), Some(1));
        // total variant on P2: both vertices footprint each other
        assert_eq!(brute_force_grundy(&path(2), true).unwrap(), Some(2));
        // total variant is impossible with an isolated vertex
        assert_eq!(brute_force_grundy(&LabeledGraph::new(1), true).unwrap(), None);
    }

    #[test]
    fn edge_native_oracles() {
        assert_eq!(edge_native::min_vertex_cover(&path(3)), Some(1));
        assert_eq!(edge_native::max_matching(&cycle(4)), Some(2));
        assert_eq!(edge_native::min_edge_cover(&path(2)), Some(1));
        assert_eq!(edge_native::min_edge_domination(&path(4)), Some(1));
    }
}
