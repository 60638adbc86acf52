//! Global-property extensions: class-size automata, connectivity and
//! acyclicity of a color class. These augment the engine's per-node state;
//! the transition rules here are driven by the engine at each node kind.

use crate::instance::ColorId;
use smallvec::SmallVec;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlobalsError {
    #[error("empty size set")]
    EmptySet,
    #[error("too many constraints: {0} (limit {1})")]
    TooManyConstraints(usize, usize),
    #[error("modulus must be positive")]
    BadModulus,
}

/// Deterministic finite automaton over the unary alphabet `{1}`.
#[derive(Debug, Clone)]
pub struct UnaryAutomaton {
    delta: Vec<u32>,
    start: u32,
    accepting: Vec<bool>,
}

impl UnaryAutomaton {
    pub fn new(delta: Vec<u32>, start: u32, accepting: Vec<bool>) -> Self {
        assert_eq!(delta.len(), accepting.len());
        assert!((start as usize) < delta.len());
        assert!(delta.iter().all(|&q| (q as usize) < accepting.len()));
        UnaryAutomaton {
            delta,
            start,
            accepting,
        }
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn step(&self, q: u32) -> u32 {
        self.delta[q as usize]
    }

    pub fn accepts_state(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    /// Whether the automaton accepts the string `1^len`.
    pub fn accepts_length(&self, len: usize) -> bool {
        let mut q = self.start;
        for _ in 0..len {
            q = self.step(q);
        }
        self.accepts_state(q)
    }
}

/// Specification of an accepted class-size set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeSpec {
    /// Sizes in a finite set.
    Finite(Vec<usize>),
    /// Sizes congruent to `rem` modulo `modulus`.
    Residue { rem: usize, modulus: usize },
    /// At least one element.
    NonEmpty,
    /// At most one element.
    AtMostOne,
}

/// Builds the unary automaton accepting exactly the sizes in the spec.
/// The finite-set construction uses states `s_0..s_{m+1}` with `s_{m+1}`
/// absorbing, where `m` is the maximum of the set.
pub fn build_size_automaton(spec: &SizeSpec) -> Result<UnaryAutomaton, GlobalsError> {
    match spec {
        SizeSpec::Finite(set) => {
            if set.is_empty() {
                return Err(GlobalsError::EmptySet);
            }
            let m = *set.iter().max().unwrap();
            let count = m + 2;
            let delta: Vec<u32> = (0..count)
                .map(|i| if i <= m { i as u32 + 1 } else { i as u32 })
                .collect();
            let accepting: Vec<bool> = (0..count).map(|i| set.contains(&i)).collect();
            Ok(UnaryAutomaton::new(delta, 0, accepting))
        }
        SizeSpec::Residue { rem, modulus } => {
            if *modulus == 0 {
                return Err(GlobalsError::BadModulus);
            }
            let delta: Vec<u32> = (0..*modulus).map(|i| ((i + 1) % modulus) as u32).collect();
            let accepting: Vec<bool> = (0..*modulus).map(|i| i == rem % modulus).collect();
            Ok(UnaryAutomaton::new(delta, 0, accepting))
        }
        SizeSpec::NonEmpty => Ok(UnaryAutomaton::new(vec![1, 1], 0, vec![false, true])),
        SizeSpec::AtMostOne => Ok(UnaryAutomaton::new(vec![1, 2, 2], 0, vec![true, true, false])),
    }
}

/// A global constraint over one set of tracked colors.
#[derive(Clone)]
pub enum GlobalConstraint {
    /// The tracked class size must be accepted by the automaton.
    SizeAutomaton {
        colors: Vec<ColorId>,
        automaton: Arc<UnaryAutomaton>,
    },
    /// The tracked class must induce a connected subgraph (empty and
    /// singleton classes count as connected).
    Connected { colors: Vec<ColorId> },
    /// The tracked class must induce an acyclic subgraph.
    Acyclic { colors: Vec<ColorId> },
}

impl std::fmt::Debug for GlobalConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlobalConstraint::SizeAutomaton { colors, .. } => {
                write!(f, "SizeAutomaton({colors:?})")
            }
            GlobalConstraint::Connected { colors } => write!(f, "Connected({colors:?})"),
            GlobalConstraint::Acyclic { colors } => write!(f, "Acyclic({colors:?})"),
        }
    }
}

impl GlobalConstraint {
    pub fn tracked(&self, i: ColorId) -> bool {
        match self {
            GlobalConstraint::SizeAutomaton { colors, .. }
            | GlobalConstraint::Connected { colors }
            | GlobalConstraint::Acyclic { colors } => colors.contains(&i),
        }
    }
}

/// Component labels over bag positions; 0 marks untracked vertices.
pub type CompLabels = SmallVec<[u8; 8]>;

/// Renames component ids to their order of first appearance along the bag
/// order; the partition structure is unchanged.
pub fn canonical_components(labels: &CompLabels) -> CompLabels {
    let mut rename: Vec<u8> = Vec::new();
    labels
        .iter()
        .map(|&l| {
            if l == 0 {
                0
            } else {
                match rename.iter().position(|&r| r == l) {
                    Some(p) => p as u8 + 1,
                    None => {
                        rename.push(l);
                        rename.len() as u8
                    }
                }
            }
        })
        .collect()
}

/// Accept mode threaded through a size automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SizeAccept {
    /// Check membership in the accepting set.
    Final,
    /// Check equality with a specific state (created at join splits).
    Eq(u32),
}

/// Connectivity tracker state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConnState {
    /// No tracked vertex may appear anywhere in this subtree.
    EmptyRequired,
    /// Component labels over the bag; `exclusive` records that the
    /// prescription so far places no tracked vertex outside this subtree,
    /// which permits a whole class to live below a tracked-free join bag.
    Blocks { labels: CompLabels, exclusive: bool },
}

/// Per-constraint component of an engine state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintState {
    Size { q: u32, accept: SizeAccept },
    Conn(ConnState),
    Acyclic { labels: CompLabels },
}

/// Context for deriving the child state at a forget node: the child bag
/// gains `v` at position `v_pos`.
pub struct ForgetCtx<'a> {
    pub v_pos: usize,
    pub v_tracked: bool,
    /// Positions (in the child bag) of v's tracked bag neighbors.
    pub tracked_neighbors: &'a [usize],
}

/// Context for deriving the child state at an introduce node: the child
/// bag loses the vertex at position `v_pos`.
pub struct IntroduceCtx {
    pub v_pos: usize,
    pub v_tracked: bool,
}

fn splice_in(labels: &CompLabels, pos: usize, value: u8) -> CompLabels {
    let mut out = labels.clone();
    out.insert(pos, value);
    out
}

fn splice_out(labels: &CompLabels, pos: usize) -> CompLabels {
    let mut out = labels.clone();
    out.remove(pos);
    out
}

impl GlobalConstraint {
    /// State at a root-aggregation candidate: the root vertex is counted
    /// here, everything else at its forget node.
    pub fn root_state(&self, root_tracked: bool) -> ConstraintState {
        match self {
            GlobalConstraint::SizeAutomaton { automaton, .. } => ConstraintState::Size {
                q: if root_tracked {
                    automaton.step(automaton.start())
                } else {
                    automaton.start()
                },
                accept: SizeAccept::Final,
            },
            GlobalConstraint::Connected { .. } => ConnState::Blocks {
                labels: SmallVec::from_slice(&[if root_tracked { 1 } else { 0 }]),
                exclusive: true,
            }
            .into(),
            GlobalConstraint::Acyclic { .. } => ConstraintState::Acyclic {
                labels: SmallVec::from_slice(&[if root_tracked { 1 } else { 0 }]),
            },
        }
    }

    /// Child state of a forget node, or `None` when the forgotten color
    /// violates the constraint (skips this color choice).
    pub fn forget_child(&self, st: &ConstraintState, ctx: &ForgetCtx) -> Option<ConstraintState> {
        match (self, st) {
            (GlobalConstraint::SizeAutomaton { automaton, .. }, ConstraintState::Size { q, accept }) => {
                Some(ConstraintState::Size {
                    q: if ctx.v_tracked { automaton.step(*q) } else { *q },
                    accept: accept.clone(),
                })
            }
            (GlobalConstraint::Connected { .. }, ConstraintState::Conn(conn)) => match conn {
                ConnState::EmptyRequired => {
                    if ctx.v_tracked {
                        None
                    } else {
                        Some(ConnState::EmptyRequired.into())
                    }
                }
                ConnState::Blocks { labels, exclusive } => {
                    if !ctx.v_tracked {
                        return Some(
                            ConnState::Blocks {
                                labels: canonical_components(&splice_in(labels, ctx.v_pos, 0)),
                                exclusive: *exclusive,
                            }
                            .into(),
                        );
                    }
                    let mut child = splice_in(labels, ctx.v_pos, 0);
                    let nbr_labels: Vec<u8> = ctx
                        .tracked_neighbors
                        .iter()
                        .map(|&p| child[p])
                        .filter(|&l| l != 0)
                        .collect();
                    if nbr_labels.is_empty() {
                        let fresh = child.iter().copied().max().unwrap_or(0) + 1;
                        child[ctx.v_pos] = fresh;
                    } else {
                        let target = *nbr_labels.iter().min().unwrap();
                        for l in child.iter_mut() {
                            if nbr_labels.contains(l) {
                                *l = target;
                            }
                        }
                        child[ctx.v_pos] = target;
                    }
                    Some(
                        ConnState::Blocks {
                            labels: canonical_components(&child),
                            exclusive: *exclusive,
                        }
                        .into(),
                    )
                }
            },
            (GlobalConstraint::Acyclic { .. }, ConstraintState::Acyclic { labels }) => {
                let mut child = splice_in(labels, ctx.v_pos, 0);
                if ctx.v_tracked {
                    let nbr_labels: Vec<u8> = ctx
                        .tracked_neighbors
                        .iter()
                        .map(|&p| child[p])
                        .filter(|&l| l != 0)
                        .collect();
                    // two neighbors already in one component close a cycle
                    let mut sorted = nbr_labels.clone();
                    sorted.sort_unstable();
                    if sorted.windows(2).any(|w| w[0] == w[1]) {
                        return None;
                    }
                    if nbr_labels.is_empty() {
                        let fresh = child.iter().copied().max().unwrap_or(0) + 1;
                        child[ctx.v_pos] = fresh;
                    } else {
                        let target = *nbr_labels.iter().min().unwrap();
                        for l in child.iter_mut() {
                            if nbr_labels.contains(l) {
                                *l = target;
                            }
                        }
                        child[ctx.v_pos] = target;
                    }
                }
                Some(ConstraintState::Acyclic {
                    labels: canonical_components(&child),
                })
            }
            _ => unreachable!("constraint/state mismatch"),
        }
    }

    /// Child state of an introduce node, or `None` for an inconsistent
    /// prescription (the introduced tracked vertex's component would be
    /// stranded).
    pub fn introduce_child(
        &self,
        st: &ConstraintState,
        ctx: &IntroduceCtx,
    ) -> Option<ConstraintState> {
        match (self, st) {
            (GlobalConstraint::SizeAutomaton { .. }, ConstraintState::Size { .. }) => {
                Some(st.clone())
            }
            (GlobalConstraint::Connected { .. }, ConstraintState::Conn(conn)) => match conn {
                ConnState::EmptyRequired => {
                    if ctx.v_tracked {
                        None
                    } else {
                        Some(ConnState::EmptyRequired.into())
                    }
                }
                ConnState::Blocks { labels, exclusive } => {
                    let child = splice_out(labels, ctx.v_pos);
                    if !ctx.v_tracked {
                        return Some(
                            ConnState::Blocks {
                                labels: canonical_components(&child),
                                exclusive: *exclusive,
                            }
                            .into(),
                        );
                    }
                    let block = labels[ctx.v_pos];
                    debug_assert_ne!(block, 0);
                    if child.iter().any(|&l| l == block) {
                        // the component stays represented in the bag
                        Some(
                            ConnState::Blocks {
                                labels: canonical_components(&child),
                                // v is tracked and now outside the subtree
                                exclusive: false,
                            }
                            .into(),
                        )
                    } else if child.iter().any(|&l| l != 0) {
                        // stranded component next to other tracked vertices
                        None
                    } else {
                        // no tracked bag vertices remain: the class below
                        // must be empty, since v lies outside the subtree
                        Some(ConnState::EmptyRequired.into())
                    }
                }
            },
            (GlobalConstraint::Acyclic { .. }, ConstraintState::Acyclic { labels }) => {
                Some(ConstraintState::Acyclic {
                    labels: canonical_components(&splice_out(labels, ctx.v_pos)),
                })
            }
            _ => unreachable!("constraint/state mismatch"),
        }
    }

    /// Enumerates the (left, right) child-state pairs of a join node, in a
    /// deterministic order.
    pub fn join_splits(&self, st: &ConstraintState) -> Vec<(ConstraintState, ConstraintState)> {
        match (self, st) {
            (GlobalConstraint::SizeAutomaton { automaton, .. }, ConstraintState::Size { q, accept }) => {
                // chain the automaton: left runs from q to q_mid, right
                // continues from q_mid
                (0..automaton.state_count() as u32)
                    .map(|q_mid| {
                        (
                            ConstraintState::Size {
                                q: *q,
                                accept: SizeAccept::Eq(q_mid),
                            },
                            ConstraintState::Size {
                                q: q_mid,
                                accept: accept.clone(),
                            },
                        )
                    })
                    .collect()
            }
            (GlobalConstraint::Connected { .. }, ConstraintState::Conn(conn)) => match conn {
                ConnState::EmptyRequired => vec![(
                    ConnState::EmptyRequired.into(),
                    ConnState::EmptyRequired.into(),
                )],
                ConnState::Blocks { labels, exclusive } => {
                    let mut ids: Vec<u8> = labels.iter().copied().filter(|&l| l != 0).collect();
                    ids.sort_unstable();
                    ids.dedup();
                    if ids.is_empty() {
                        // no tracked vertex in the separator: either the
                        // class avoids this subtree, or (when nothing
                        // tracked exists outside it) it lives wholly in
                        // one branch
                        let mut out = vec![(
                            ConnState::EmptyRequired.into(),
                            ConnState::EmptyRequired.into(),
                        )];
                        if *exclusive {
                            let open: ConstraintState = ConnState::Blocks {
                                labels: labels.clone(),
                                exclusive: true,
                            }
                            .into();
                            out.push((open.clone(), ConnState::EmptyRequired.into()));
                            out.push((ConnState::EmptyRequired.into(), open));
                        }
                        return out;
                    }
                    // split the merging work: the left branch unifies the
                    // components labeled in S, the right those in R, with
                    // S ∪ R covering everything and exactly one shared label
                    let mut out = Vec::new();
                    for (xi, &x) in ids.iter().enumerate() {
                        let rest: Vec<u8> =
                            ids.iter().copied().filter(|&l| l != x).collect();
                        for mask in 0..(1u32 << rest.len()) {
                            let mut s_set = vec![x];
                            let mut r_set = vec![x];
                            for (bi, &l) in rest.iter().enumerate() {
                                if mask & (1 << bi) == 0 {
                                    s_set.push(l);
                                } else {
                                    r_set.push(l);
                                }
                            }
                            let relabel = |set: &[u8]| -> ConstraintState {
                                let target = *set.iter().min().unwrap();
                                let new: CompLabels = labels
                                    .iter()
                                    .map(|&l| if l != 0 && set.contains(&l) { target } else { l })
                                    .collect();
                                ConnState::Blocks {
                                    labels: canonical_components(&new),
                                    exclusive: false,
                                }
                                .into()
                            };
                            out.push((relabel(&s_set), relabel(&r_set)));
                        }
                        let _ = xi;
                    }
                    out
                }
            },
            (GlobalConstraint::Acyclic { .. }, ConstraintState::Acyclic { labels }) => {
                // pairs of refinements whose forest-merge reproduces the
                // parent partition
                let tracked: Vec<usize> = labels
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l != 0)
                    .map(|(p, _)| p)
                    .collect();
                if tracked.is_empty() {
                    return vec![(st.clone(), st.clone())];
                }
                let refinements = refinements_of(labels, &tracked);
                let mut out = Vec::new();
                for left in &refinements {
                    for right in &refinements {
                        if let Some(merged) = forest_merge(left, right, &tracked) {
                            if partition_eq(&merged, labels, &tracked) {
                                out.push((
                                    ConstraintState::Acyclic {
                                        labels: canonical_components(left),
                                    },
                                    ConstraintState::Acyclic {
                                        labels: canonical_components(right),
                                    },
                                ));
                            }
                        }
                    }
                }
                out
            }
            _ => unreachable!("constraint/state mismatch"),
        }
    }

    /// Final check at a leaf node.
    pub fn leaf_ok(&self, st: &ConstraintState) -> bool {
        match (self, st) {
            (GlobalConstraint::SizeAutomaton { automaton, .. }, ConstraintState::Size { q, accept }) => {
                match accept {
                    SizeAccept::Final => automaton.accepts_state(*q),
                    SizeAccept::Eq(target) => q == target,
                }
            }
            _ => true,
        }
    }
}

impl From<ConnState> for ConstraintState {
    fn from(c: ConnState) -> Self {
        ConstraintState::Conn(c)
    }
}

/// All partitions of the tracked positions refining the parent partition,
/// expressed as label vectors. Deterministic order.
fn refinements_of(parent: &CompLabels, tracked: &[usize]) -> Vec<CompLabels> {
    // group tracked positions by parent block
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_ids: Vec<u8> = Vec::new();
    for &p in tracked {
        match block_ids.iter().position(|&b| b == parent[p]) {
            Some(i) => blocks[i].push(p),
            None => {
                block_ids.push(parent[p]);
                blocks.push(vec![p]);
            }
        }
    }
    // set partitions of each block via restricted growth strings
    let per_block: Vec<Vec<Vec<u8>>> = blocks.iter().map(|b| set_partitions(b.len())).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; blocks.len()];
    loop {
        let mut labels: CompLabels = SmallVec::from_elem(0u8, parent.len());
        let mut next_label = 1u8;
        for (bi, block) in blocks.iter().enumerate() {
            let rgs = &per_block[bi][idx[bi]];
            let groups = rgs.iter().copied().max().map_or(0, |m| m + 1);
            for (pi, &p) in block.iter().enumerate() {
                labels[p] = next_label + rgs[pi];
            }
            next_label += groups;
        }
        out.push(labels);
        let mut pos = blocks.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_block[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Restricted growth strings enumerating set partitions of `n` elements.
fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(cur: &mut Vec<u8>, pos: usize, max_used: u8, out: &mut Vec<Vec<u8>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for label in 0..=max_used.min(pos as u8) {
            cur[pos] = label;
            let next_max = max_used.max(label + 1);
            rec(cur, pos + 1, next_max, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(&mut cur, 0, 0, &mut out);
    out
}

/// Transitive-closure merge of two partitions; `None` when the merge
/// creates a cycle (the bipartite block-incidence graph is not a forest).
fn forest_merge(a: &CompLabels, b: &CompLabels, tracked: &[usize]) -> Option<CompLabels> {
    // union-find over tracked positions by either partition
    let k = tracked.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, x: usize, y: usize| {
        let (rx, ry) = (find(parent, x), find(parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    };
    for labels in [a, b] {
        for i in 0..k {
            for j in i + 1..k {
                if labels[tracked[i]] == labels[tracked[j]] {
                    union(&mut parent, i, j);
                }
            }
        }
    }
    let merged_blocks: std::collections::HashSet<usize> =
        (0..k).map(|i| find(&mut parent, i)).collect();
    let blocks_a: std::collections::HashSet<u8> = tracked.iter().map(|&p| a[p]).collect();
    let blocks_b: std::collections::HashSet<u8> = tracked.iter().map(|&p| b[p]).collect();
    // each tracked vertex is an edge between its block in a and its block
    // in b; the merge is acyclic iff edges = nodes - components
    if k != blocks_a.len() + blocks_b.len() - merged_blocks.len() {
        return None;
    }
    let mut out: CompLabels = SmallVec::from_elem(0u8, a.len());
    for i in 0..k {
        out[tracked[i]] = find(&mut parent, i) as u8 + 1;
    }
    Some(canonical_components(&out))
}

fn partition_eq(a: &CompLabels, b: &CompLabels, tracked: &[usize]) -> bool {
    for i in 0..tracked.len() {
        for j in i + 1..tracked.len() {
            let same_a = a[tracked[i]] == a[tracked[j]];
            let same_b = b[tracked[i]] == b[tracked[j]];
            if same_a != same_b {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_set_automaton() {
        // sigma = {0, 2}: states s0..s3, accepting {s0, s2}
        let a = build_size_automaton(&SizeSpec::Finite(vec![0, 2])).unwrap();
        assert_eq!(a.state_count(), 4);
        assert!(a.accepts_length(0));
        assert!(!a.accepts_length(1));
        assert!(a.accepts_length(2));
        assert!(!a.accepts_length(3));
        assert!(!a.accepts_length(7));
    }

    #[test]
    fn parity_automaton() {
        let a = build_size_automaton(&SizeSpec::Residue { rem: 1, modulus: 2 }).unwrap();
        assert_eq!(a.state_count(), 2);
        assert!(a.accepts_length(1));
        assert!(a.accepts_length(3));
        assert!(!a.accepts_length(0));
        assert!(!a.accepts_length(4));
    }

    #[test]
    fn threshold_automata() {
        let a = build_size_automaton(&SizeSpec::NonEmpty).unwrap();
        assert_eq!(a.state_count(), 2);
        assert!(!a.accepts_length(0));
        assert!(a.accepts_length(1));
        assert!(a.accepts_length(5));
        let b = build_size_automaton(&SizeSpec::AtMostOne).unwrap();
        assert!(b.accepts_length(0));
        assert!(b.accepts_length(1));
        assert!(!b.accepts_length(2));
    }

    #[test]
    fn empty_set_rejected() {
        assert_eq!(
            build_size_automaton(&SizeSpec::Finite(vec![])).unwrap_err(),
            GlobalsError::EmptySet
        );
    }

    #[test]
    fn canonicalization() {
        let labels: CompLabels = SmallVec::from_slice(&[3, 3, 1]);
        assert_eq!(canonical_components(&labels).as_slice(), &[1, 1, 2]);
        let empty: CompLabels = SmallVec::new();
        assert_eq!(canonical_components(&empty).as_slice(), &[] as &[u8]);
        let canonical: CompLabels = SmallVec::from_slice(&[1, 0, 2]);
        assert_eq!(canonical_components(&canonical), canonical);
    }

    #[test]
    fn canonicalization_preserves_partition() {
        let labels: CompLabels = SmallVec::from_slice(&[5, 2, 5, 0, 2]);
        let canon = canonical_components(&labels);
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                if labels[i] != 0 && labels[j] != 0 {
                    assert_eq!(labels[i] == labels[j], canon[i] == canon[j]);
                }
            }
        }
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        assert_eq!(set_partitions(0).len(), 1);
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(2).len(), 2);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
    }

    #[test]
    fn conn_join_splits_cover_label_pairs() {
        let c = GlobalConstraint::Connected { colors: vec![1] };
        let st: ConstraintState = ConnState::Blocks {
            labels: SmallVec::from_slice(&[1, 2]),
            exclusive: false,
        }
        .into();
        // two labels: shared x in {1,2}, one remaining label on either side
        let splits = c.join_splits(&st);
        assert_eq!(splits.len(), 4);
    }

    #[test]
    fn size_join_splits_chain_states() {
        let a = Arc::new(build_size_automaton(&SizeSpec::Finite(vec![1])).unwrap());
        let c = GlobalConstraint::SizeAutomaton {
            colors: vec![0],
            automaton: a.clone(),
        };
        let st = ConstraintState::Size {
            q: 0,
            accept: SizeAccept::Final,
        };
        let splits = c.join_splits(&st);
        assert_eq!(splits.len(), a.state_count());
    }
}
