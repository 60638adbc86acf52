//! Tree decompositions: validation, a min-fill construction heuristic,
//! conversion to easy form, and decomposition lifting for graph powers and
//! edge transforms.

use crate::graph::LabeledGraph;
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("decomposition tree is not a tree")]
    NotATree,
    #[error("bag vertex {0} out of range")]
    BagVertexOutOfRange(usize),
    #[error("invalid decomposition: {0}")]
    Invalid(Violation),
    #[error("decomposition has no nodes")]
    Empty,
}

/// Which decomposition property failed, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// W1: vertex not covered by any bag.
    UncoveredVertex(usize),
    /// W2: edge with no bag containing both endpoints.
    UncoveredEdge(usize, usize),
    /// W3: occurrence set of the vertex is not connected in the tree.
    DisconnectedOccurrence(usize),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UncoveredVertex(v) => write!(f, "W1: vertex {v} in no bag"),
            Violation::UncoveredEdge(u, v) => write!(f, "W2: edge {u}-{v} in no bag"),
            Violation::DisconnectedOccurrence(v) => {
                write!(f, "W3: occurrences of vertex {v} not connected")
            }
        }
    }
}

/// A tree decomposition: a tree of bags. Nodes are indexed `0..node_count`.
#[derive(Debug, Clone)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    /// Tree edges between node indices.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and tree edges, checking that the
    /// node graph is a tree (connected and acyclic).
    pub fn from_parts(
        bags: Vec<Vec<usize>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, DecompositionError> {
        let n = bags.len();
        if n == 0 {
            return Err(DecompositionError::Empty);
        }
        if edges.len() != n - 1 {
            return Err(DecompositionError::NotATree);
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in &edges {
            if i >= n || j >= n || i == j {
                return Err(DecompositionError::NotATree);
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        // connectivity check; together with |E| = n - 1 this implies a tree
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        if count != n {
            return Err(DecompositionError::NotATree);
        }
        let mut bags = bags;
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        Ok(TreeDecomposition { bags, edges, adj })
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// `max |bag| - 1`.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }
}

/// Checks W1-W3 against `g`; returns the width on success, the first
/// violated property with a witness otherwise.
pub fn validate_decomposition(
    g: &LabeledGraph,
    td: &TreeDecomposition,
) -> Result<usize, Violation> {
    let n = g.vertex_count();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags().iter().enumerate() {
        for &v in bag {
            debug_assert!(v < n, "bag vertex out of range");
            occurrences[v].push(i);
        }
    }
    if let Some(v) = (0..n).find(|&v| occurrences[v].is_empty()) {
        return Err(Violation::UncoveredVertex(v));
    }
    for (u, v) in g.edges() {
        let covered = td
            .bags()
            .iter()
            .any(|b| b.binary_search(u).is_ok() && b.binary_search(v).is_ok());
        if !covered {
            return Err(Violation::UncoveredEdge(*u, *v));
        }
    }
    for v in 0..n {
        let occ: HashSet<usize> = occurrences[v].iter().copied().collect();
        let start = occurrences[v][0];
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in td.neighbors(i) {
                if occ.contains(&j) && seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        if seen.len() != occ.len() {
            return Err(Violation::DisconnectedOccurrence(v));
        }
    }
    Ok(td.width())
}

/// Min-fill elimination heuristic. The width is not guaranteed optimal but
/// the result always validates. Ties break on the lowest vertex id.
pub fn heuristic_decomposition(g: &LabeledGraph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::from_parts(vec![vec![]], vec![]).unwrap();
    }
    let mut work: Vec<HashSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut position: Vec<usize> = vec![0; n];
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);

    for step in 0..n {
        let mut best: Option<(usize, usize)> = None; // (fill, vertex)
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let nbrs: Vec<usize> = work[v].iter().copied().collect();
            let mut fill = 0usize;
            for (a, &x) in nbrs.iter().enumerate() {
                for &y in &nbrs[a + 1..] {
                    if !work[x].contains(&y) {
                        fill += 1;
                    }
                }
            }
            match best {
                Some((bf, bv)) if (fill, v) >= (bf, bv) => {}
                _ => best = Some((fill, v)),
            }
        }
        let (_, v) = best.unwrap();
        let mut bag: Vec<usize> = work[v].iter().copied().collect();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        position[v] = step;
        order.push(v);
        let nbrs: Vec<usize> = work[v].iter().copied().collect();
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                work[x].insert(y);
                work[y].insert(x);
            }
        }
        for &x in &nbrs {
            work[x].remove(&v);
        }
        alive[v] = false;
        work[v].clear();
    }

    // Bag of step i connects to the bag of the earliest-eliminated vertex
    // among its later members; elimination roots of separate components are
    // chained so the node graph is a single tree.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let v = order[i];
        let parent = bag
            .iter()
            .filter(|&&u| u != v && position[u] > i)
            .min_by_key(|&&u| position[u]);
        match parent {
            Some(&u) => edges.push((i, position[u])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::from_parts(bags, edges).unwrap()
}

/// Node kinds of an easy decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// An easy tree decomposition: a rooted binary tree whose root and leaf
/// bags are singletons, with every node a leaf, introduce, forget or join.
#[derive(Debug, Clone)]
pub struct EasyDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub kinds: Vec<NodeKind>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl EasyDecomposition {
    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node ids in post order (children before parents).
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Views the easy decomposition as a plain one, e.g. for validation.
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (t, ch) in self.children.iter().enumerate() {
            for &c in ch {
                edges.push((t, c));
            }
        }
        TreeDecomposition::from_parts(self.bags.clone(), edges).unwrap()
    }

    /// Checks the structural invariants of easy form.
    pub fn check_easy_invariants(&self) -> Result<(), String> {
        if self.bags[self.root].len() != 1 {
            return Err("root bag is not a singleton".into());
        }
        for t in 0..self.node_count() {
            let bag = &self.bags[t];
            let ch = &self.children[t];
            match self.kinds[t] {
                NodeKind::Leaf => {
                    if !ch.is_empty() || bag.len() != 1 {
                        return Err(format!("node {t}: bad leaf"));
                    }
                }
                NodeKind::Introduce(v) => {
                    if ch.len() != 1 {
                        return Err(format!("node {t}: introduce needs one child"));
                    }
                    let child = &self.bags[ch[0]];
                    if child.binary_search(&v).is_ok() || bag.binary_search(&v).is_err() {
                        return Err(format!("node {t}: introduce({v}) bag mismatch"));
                    }
                    let mut expect = child.clone();
                    expect.push(v);
                    expect.sort_unstable();
                    if *bag != expect {
                        return Err(format!("node {t}: introduce({v}) bag equation fails"));
                    }
                }
                NodeKind::Forget(v) => {
                    if ch.len() != 1 {
                        return Err(format!("node {t}: forget needs one child"));
                    }
                    let child = &self.bags[ch[0]];
                    let expect: Vec<usize> =
                        child.iter().copied().filter(|&u| u != v).collect();
                    if child.binary_search(&v).is_err() || *bag != expect {
                        return Err(format!("node {t}: forget({v}) bag equation fails"));
                    }
                }
                NodeKind::Join => {
                    if ch.len() != 2 {
                        return Err(format!("node {t}: join needs two children"));
                    }
                    if self.bags[ch[0]] != *bag || self.bags[ch[1]] != *bag {
                        return Err(format!("node {t}: join bags differ"));
                    }
                }
            }
        }
        Ok(())
    }
}

struct EasyBuilder {
    bags: Vec<Vec<usize>>,
    kinds: Vec<NodeKind>,
    children: Vec<Vec<usize>>,
}

impl EasyBuilder {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.kinds.push(kind);
        self.children.push(children);
        self.bags.len() - 1
    }

    /// Builds the adapter chain turning a subtree with root bag `from` into
    /// a node with bag `to`: forget the extras, then introduce the missing.
    fn adapt(&mut self, mut node: usize, to: &[usize]) -> usize {
        let mut current = self.bags[node].clone();
        let to_set: HashSet<usize> = to.iter().copied().collect();
        let extras: Vec<usize> = current.iter().copied().filter(|v| !to_set.contains(v)).collect();
        for v in extras {
            current.retain(|&u| u != v);
            node = self.push(current.clone(), NodeKind::Forget(v), vec![node]);
        }
        let have: HashSet<usize> = current.iter().copied().collect();
        for &v in to.iter().filter(|v| !have.contains(v)) {
            current.push(v);
            current.sort_unstable();
            node = self.push(current.clone(), NodeKind::Introduce(v), vec![node]);
        }
        node
    }
}

/// Converts a valid decomposition into easy form of the same width.
///
/// The construction re-roots at the lowest node id, binarizes branching
/// nodes into left-deep join chains, bridges differing bags with
/// forget/introduce chains, and peels root and leaf bags down to singletons
/// (the leaf singleton is the lowest-id bag member).
pub fn to_easy(
    g: &LabeledGraph,
    td: &TreeDecomposition,
) -> Result<EasyDecomposition, DecompositionError> {
    validate_decomposition(g, td).map_err(DecompositionError::Invalid)?;

    // Drop empty-bag leaves; they carry no information. Remaining empty
    // bags, if any, are internal bridges and are handled by the chains.
    let mut keep: Vec<bool> = vec![true; td.node_count()];
    loop {
        let mut changed = false;
        for i in 0..td.node_count() {
            if !keep[i] || !td.bags()[i].is_empty() {
                continue;
            }
            let live_deg = td.neighbors(i).iter().filter(|&&j| keep[j]).count();
            if live_deg <= 1 {
                keep[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if keep.iter().all(|k| !k) {
        // all bags empty: only possible for the empty graph
        keep[0] = true;
    }

    let root_old = (0..td.node_count())
        .filter(|&i| keep[i])
        .min_by_key(|&i| (td.bags()[i].is_empty(), i))
        .unwrap();

    let mut builder = EasyBuilder {
        bags: Vec::new(),
        kinds: Vec::new(),
        children: Vec::new(),
    };

    // Iterative DFS from the chosen root over kept nodes. Produces, for
    // each original node, an easy subtree whose root bag equals the node's
    // bag.
    enum Frame {
        Visit { node: usize, parent: Option<usize> },
        Finish { node: usize, child_count: usize },
    }
    let mut stack = vec![Frame::Visit {
        node: root_old,
        parent: None,
    }];
    let mut results: Vec<usize> = Vec::new();
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Visit { node, parent } => {
                let kids: Vec<usize> = td
                    .neighbors(node)
                    .iter()
                    .copied()
                    .filter(|&j| keep[j] && Some(j) != parent)
                    .collect();
                stack.push(Frame::Finish {
                    node,
                    child_count: kids.len(),
                });
                for k in kids.into_iter().rev() {
                    stack.push(Frame::Visit {
                        node: k,
                        parent: Some(node),
                    });
                }
            }
            Frame::Finish { node, child_count } => {
                let bag = td.bags()[node].clone();
                let child_roots: Vec<usize> =
                    results.drain(results.len() - child_count..).collect();
                // Original leaves start a singleton-leaf introduce chain;
                // internal nodes are built purely from their adapted child
                // subtrees so no unnecessary joins appear.
                let mut adapted: Vec<usize> = Vec::new();
                if child_roots.is_empty() && !bag.is_empty() {
                    let seed = bag[0];
                    let mut t = builder.push(vec![seed], NodeKind::Leaf, vec![]);
                    t = builder.adapt(t, &bag);
                    adapted.push(t);
                }
                for c in child_roots {
                    adapted.push(builder.adapt(c, &bag));
                }
                let mut acc = match adapted.first() {
                    Some(&t) => t,
                    None => {
                        // empty bag and no children: a singleton placeholder
                        // cannot exist; an empty-graph decomposition is
                        // handled by the caller before reaching here.
                        return Err(DecompositionError::Empty);
                    }
                };
                for &t in &adapted[1..] {
                    acc = builder.push(bag.clone(), NodeKind::Join, vec![acc, t]);
                }
                results.push(acc);
            }
        }
    }
    let mut root = results.pop().unwrap();
    // Peel the root down to a singleton.
    let mut bag = builder.bags[root].clone();
    while bag.len() > 1 {
        let v = *bag.last().unwrap();
        bag.retain(|&u| u != v);
        root = builder.push(bag.clone(), NodeKind::Forget(v), vec![root]);
    }

    let easy = EasyDecomposition {
        bags: builder.bags,
        kinds: builder.kinds,
        children: builder.children,
        root,
    };
    debug_assert_eq!(easy.check_easy_invariants(), Ok(()));
    debug_assert!(validate_decomposition(g, &easy.as_tree_decomposition()).is_ok());
    Ok(easy)
}

/// Lifts a decomposition of `g` to one of `g^p` by growing every bag to its
/// `ceil(p/2)`-ball. The width is at most `(w+1)(Delta+1)^{ceil(p/2)} - 1`.
pub fn lift_power(g: &LabeledGraph, td: &TreeDecomposition, p: usize) -> TreeDecomposition {
    assert!(p >= 1);
    let radius = p.div_ceil(2);
    let bags: Vec<Vec<usize>> = td
        .bags()
        .iter()
        .map(|bag| {
            let mut grown: Vec<usize> = bag
                .iter()
                .flat_map(|&v| g.closed_ball(v, radius))
                .collect();
            grown.sort_unstable();
            grown.dedup();
            grown
        })
        .collect();
    TreeDecomposition::from_parts(bags, td.tree_edges().collect()).unwrap()
}

/// Which edge transform a decomposition should be lifted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeTransformKind {
    Subdivision,
    Jagged,
}

/// Lifts a decomposition of `g` to one of `S(g)` or `J(g)`: for each edge,
/// a new leaf bag `X ∪ {x_e}` hangs off the lowest-id node whose bag
/// contains both endpoints. Width grows by at most one.
pub fn lift_edge_transform(
    g: &LabeledGraph,
    td: &TreeDecomposition,
    kind: EdgeTransformKind,
) -> TreeDecomposition {
    let _ = kind; // the construction is identical for both transforms
    let n = g.vertex_count();
    let mut bags: Vec<Vec<usize>> = td.bags().to_vec();
    let mut edges: Vec<(usize, usize)> = td.tree_edges().collect();
    for (idx, (u, v)) in g.edges().iter().enumerate() {
        let host = (0..td.node_count())
            .find(|&i| {
                td.bags()[i].binary_search(u).is_ok() && td.bags()[i].binary_search(v).is_ok()
            })
            .expect("valid decomposition covers every edge");
        let mut bag = td.bags()[host].clone();
        bag.push(n + idx);
        bag.sort_unstable();
        let new_node = bags.len();
        bags.push(bag);
        edges.push((host, new_node));
    }
    TreeDecomposition::from_parts(bags, edges).unwrap()
}

/// The canonical width-1 path decomposition of a path graph: bags
/// `{i, i+1}` in a chain. Panics when the input is not the standard path.
pub fn path_decomposition(n: usize) -> TreeDecomposition {
    assert!(n >= 1);
    if n == 1 {
        return TreeDecomposition::from_parts(vec![vec![0]], vec![]).unwrap();
    }
    let bags: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
    let edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
    TreeDecomposition::from_parts(bags, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, transform_jagged, transform_subdivision, graph_power};

    #[test]
    fn validate_canonical_path() {
        let g = path(3);
        let td = TreeDecomposition::from_parts(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]).unwrap();
        assert_eq!(validate_decomposition(&g, &td), Ok(1));
    }

    #[test]
    fn validate_reports_w2() {
        let g = path(3);
        let td = TreeDecomposition::from_parts(vec![vec![0, 1], vec![2]], vec![(0, 1)]).unwrap();
        assert_eq!(
            validate_decomposition(&g, &td),
            Err(Violation::UncoveredEdge(1, 2))
        );
    }

    #[test]
    fn validate_reports_w1_and_w3() {
        let g = LabeledGraph::new(2);
        let td = TreeDecomposition::from_parts(vec![vec![0]], vec![]).unwrap();
        assert_eq!(
            validate_decomposition(&g, &td),
            Err(Violation::UncoveredVertex(1))
        );
        let g = path(3);
        let td = TreeDecomposition::from_parts(
            vec![vec![0, 1], vec![1, 2], vec![0]],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(
            validate_decomposition(&g, &td),
            Err(Violation::DisconnectedOccurrence(0))
        );
    }

    #[test]
    fn validate_single_bag_k4() {
        let g = complete(4);
        let td = TreeDecomposition::from_parts(vec![vec![0, 1, 2, 3]], vec![]).unwrap();
        assert_eq!(validate_decomposition(&g, &td), Ok(3));
    }

    #[test]
    fn minfill_on_tree_has_width_one() {
        // a small tree on 10 vertices
        let g = LabeledGraph::from_edges(
            10,
            [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (5, 7), (5, 8), (8, 9)],
        );
        let td = heuristic_decomposition(&g);
        assert_eq!(validate_decomposition(&g, &td), Ok(1));
    }

    #[test]
    fn minfill_widths() {
        let td = heuristic_decomposition(&cycle(5));
        assert_eq!(validate_decomposition(&cycle(5), &td), Ok(2));
        let td = heuristic_decomposition(&complete(4));
        assert_eq!(validate_decomposition(&complete(4), &td), Ok(3));
    }

    #[test]
    fn minfill_disconnected_is_single_tree() {
        let g = LabeledGraph::from_edges(6, [(0, 1), (2, 3), (4, 5)]);
        let td = heuristic_decomposition(&g);
        assert!(validate_decomposition(&g, &td).is_ok());
    }

    #[test]
    fn minfill_width_at_least_clique_bound() {
        for k in 2..=5 {
            let g = complete(k);
            let td = heuristic_decomposition(&g);
            assert!(td.width() >= k - 1);
        }
    }

    #[test]
    fn easy_single_bag() {
        let g = LabeledGraph::new(1);
        let td = TreeDecomposition::from_parts(vec![vec![0]], vec![]).unwrap();
        let easy = to_easy(&g, &td).unwrap();
        assert_eq!(easy.node_count(), 1);
        assert_eq!(easy.kinds[easy.root], NodeKind::Leaf);
    }

    #[test]
    fn easy_path_decomposition() {
        let g = path(3);
        let td = TreeDecomposition::from_parts(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]).unwrap();
        let easy = to_easy(&g, &td).unwrap();
        easy.check_easy_invariants().unwrap();
        assert_eq!(easy.width(), 1);
        assert!(validate_decomposition(&g, &easy.as_tree_decomposition()).is_ok());
    }

    #[test]
    fn easy_preserves_width() {
        for g in [cycle(6), complete(4), path(7)] {
            let td = heuristic_decomposition(&g);
            let easy = to_easy(&g, &td).unwrap();
            easy.check_easy_invariants().unwrap();
            assert_eq!(easy.width(), td.width());
            assert!(validate_decomposition(&g, &easy.as_tree_decomposition()).is_ok());
        }
    }

    #[test]
    fn easy_handles_branching_tds() {
        // star-shaped decomposition to force joins
        let g = LabeledGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let td = TreeDecomposition::from_parts(
            vec![vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2)],
        )
        .unwrap();
        let easy = to_easy(&g, &td).unwrap();
        easy.check_easy_invariants().unwrap();
        assert!(easy.kinds.iter().any(|k| matches!(k, NodeKind::Join)));
        assert!(validate_decomposition(&g, &easy.as_tree_decomposition()).is_ok());
    }

    #[test]
    fn lift_power_validates_with_bound() {
        let g = path(4);
        let td = path_decomposition(4);
        let lifted = lift_power(&g, &td, 2);
        let gp = graph_power(&g, 2);
        let w = validate_decomposition(&gp, &lifted).unwrap();
        assert!(w <= 3);
        // p = 1: bags grow to X ∪ N(X); still valid for g
        let l1 = lift_power(&g, &td, 1);
        let w1 = validate_decomposition(&g, &l1).unwrap();
        assert!(w1 <= (td.width() + 1) * (g.max_degree() + 1) - 1);
        // K1 unchanged
        let k1 = LabeledGraph::new(1);
        let tdk = TreeDecomposition::from_parts(vec![vec![0]], vec![]).unwrap();
        assert_eq!(lift_power(&k1, &tdk, 3).bags(), tdk.bags());
    }

    #[test]
    fn lift_edge_transform_examples() {
        // single edge, jagged: one size-3 bag
        let g = path(2);
        let td = TreeDecomposition::from_parts(vec![vec![0, 1]], vec![]).unwrap();
        let lifted = lift_edge_transform(&g, &td, EdgeTransformKind::Jagged);
        let (j, _) = transform_jagged(&g);
        assert_eq!(validate_decomposition(&j, &lifted), Ok(2));

        // K3 subdivision -> C6, width <= 3
        let g = complete(3);
        let td = TreeDecomposition::from_parts(vec![vec![0, 1, 2]], vec![]).unwrap();
        let lifted = lift_edge_transform(&g, &td, EdgeTransformKind::Subdivision);
        let (s, _) = transform_subdivision(&g);
        let w = validate_decomposition(&s, &lifted).unwrap();
        assert!(w <= 3);

        // tree with width-1 decomposition, jagged: width <= 2
        let g = LabeledGraph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]);
        let td = heuristic_decomposition(&g);
        assert_eq!(td.width(), 1);
        let lifted = lift_edge_transform(&g, &td, EdgeTransformKind::Jagged);
        let (j, _) = transform_jagged(&g);
        let w = validate_decomposition(&j, &lifted).unwrap();
        assert!(w <= 2);
    }

    #[test]
    fn path_decomposition_is_canonical() {
        let td = path_decomposition(5);
        assert_eq!(validate_decomposition(&path(5), &td), Ok(1));
    }
}
