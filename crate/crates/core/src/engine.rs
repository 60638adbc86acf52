//! The dynamic program over easy tree decompositions.
//!
//! The engine evaluates the table function over states `(S, c, ω, η, č)`
//! per decomposition node: `S` is the bag subset whose internal edges are
//! deleted, `c` a bag coloring, `ω` per-vertex charge flags, `η`
//! per-vertex accumulator values, and `č` per-vertex check modes (the full
//! acceptance test or equality with a fixed accumulator value, the latter
//! created at join nodes). Global constraints extend the state with their
//! own per-constraint components.
//!
//! Evaluation is top-down reachable-state discovery followed by bottom-up
//! evaluation in post order, so only states reachable from the root
//! aggregation are ever computed and no recursion depth is needed.

use crate::algebra::Weight;
use crate::globals::{ConstraintState, ForgetCtx, GlobalConstraint, IntroduceCtx};
use crate::instance::{ColorId, ProblemInstance};
use crate::pns::{NVal, NeighborhoodSystem};
use crate::treedec::{EasyDecomposition, NodeKind};
use smallvec::SmallVec;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("engine requires radius 1, instance has {0}")]
    RadiusUnsupported(usize),
    #[error("too many global constraints: {0} (limit {1})")]
    TooManyConstraints(usize, usize),
    #[error("invalid easy decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("state budget of {0} exceeded")]
    StateBudgetExceeded(usize),
    #[error("bag of size {0} exceeds the 63-vertex state encoding")]
    BagTooLarge(usize),
}

/// Per-vertex check mode: the full acceptance test, or equality with a
/// fixed accumulator value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CheckMode {
    Final,
    MustEqual(NVal),
}

/// Memoization key: the state tuple in canonical form. Bag-indexed vectors
/// are parallel to the sorted bag of the node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    removed: u64,
    charged: u64,
    colors: SmallVec<[u32; 8]>,
    acc: SmallVec<[NVal; 8]>,
    mode: SmallVec<[CheckMode; 8]>,
    globals: SmallVec<[ConstraintState; 2]>,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub witness: bool,
    /// When false, evaluation recomputes subtrees recursively instead of
    /// memoizing; results must be identical. Only sensible on small inputs.
    pub memoize: bool,
    /// Number of threads for per-node state evaluation; 1 is fully
    /// sequential. Results are identical either way.
    pub threads: usize,
    /// Log one line per evaluated state at trace level.
    pub trace: bool,
    pub max_states: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            witness: true,
            memoize: true,
            threads: 1,
            trace: false,
            max_states: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub optimum: Weight,
    pub witness: Option<Vec<ColorId>>,
    pub width: usize,
    pub nodes: usize,
    pub states: usize,
}

pub const MAX_CONSTRAINTS: usize = 4;

struct StateTable {
    keys: Vec<StateKey>,
    index: HashMap<StateKey, u32>,
    values: Vec<Weight>,
}

impl StateTable {
    fn new() -> Self {
        StateTable {
            keys: Vec::new(),
            index: HashMap::new(),
            values: Vec::new(),
        }
    }

    fn intern(&mut self, key: StateKey) -> (u32, bool) {
        match self.index.get(&key) {
            Some(&i) => (i, false),
            None => {
                let i = self.keys.len() as u32;
                self.index.insert(key.clone(), i);
                self.keys.push(key);
                (i, true)
            }
        }
    }

    fn value_of(&self, key: &StateKey) -> Weight {
        let i = *self.index.get(key).expect("child state not discovered");
        self.values[i as usize]
    }
}

struct Engine<'a> {
    inst: &'a ProblemInstance,
    pns: &'a dyn NeighborhoodSystem,
    etd: &'a EasyDecomposition,
    constraints: &'a [GlobalConstraint],
}

/// Advances a mixed-radix counter; returns false after the last value.
fn odometer_next(idx: &mut [usize], sizes: &[usize]) -> bool {
    let mut pos = idx.len();
    loop {
        if pos == 0 {
            return false;
        }
        pos -= 1;
        idx[pos] += 1;
        if idx[pos] < sizes[pos] {
            return true;
        }
        idx[pos] = 0;
    }
}

enum Derivation {
    Leaf(Weight),
    /// Per color of the forgotten vertex, the child state (or a skip when a
    /// constraint rules the color out).
    Forget {
        child: usize,
        choices: Vec<(ColorId, Option<StateKey>)>,
    },
    /// `ω(v)` and the child state; `None` when the introduce check fails.
    Introduce {
        child: usize,
        result: Option<(Weight, StateKey)>,
    },
    Join(JoinDerivation),
}

struct JoinDerivation {
    left: usize,
    right: usize,
    w: Weight,
    /// Accumulator domain per bag position.
    domains: Vec<Vec<NVal>>,
    /// `η(v) ⊞ ns(v, c, (G_t∖S)[X_t])` per bag position.
    base: Vec<NVal>,
    /// Split options per constraint.
    splits: Vec<Vec<(ConstraintState, ConstraintState)>>,
    colors: SmallVec<[u32; 8]>,
}

impl JoinDerivation {
    fn child_key(&self, bag: &[usize], eta: &[usize], side_left: bool, split_idx: &[usize], engine: &Engine) -> StateKey {
        let full: u64 = if bag.is_empty() { 0 } else { (1u64 << bag.len()) - 1 };
        let acc: SmallVec<[NVal; 8]> = bag
            .iter()
            .enumerate()
            .map(|(p, &v)| engine.pns.neutral(v, self.colors[p] as ColorId))
            .collect();
        let mode: SmallVec<[CheckMode; 8]> = eta
            .iter()
            .enumerate()
            .map(|(p, &choice)| CheckMode::MustEqual(self.domains[p][choice].clone()))
            .collect();
        let globals: SmallVec<[ConstraintState; 2]> = self
            .splits
            .iter()
            .zip(split_idx.iter())
            .map(|(options, &si)| {
                let (l, r) = &options[si];
                if side_left { l.clone() } else { r.clone() }
            })
            .collect();
        StateKey {
            removed: full,
            charged: 0,
            colors: self.colors.clone(),
            acc,
            mode,
            globals,
        }
    }
}

impl<'a> Engine<'a> {
    fn bag(&self, t: usize) -> &[usize] {
        &self.etd.bags[t]
    }

    fn color(&self, key: &StateKey, p: usize) -> ColorId {
        key.colors[p] as ColorId
    }

    /// Fold of `observe` over the bag neighbors of position `p` in the
    /// bag graph with `S`-internal edges removed.
    fn bag_ns(&self, t: usize, key: &StateKey, p: usize) -> NVal {
        let bag = self.bag(t);
        let v = bag[p];
        let i = self.color(key, p);
        let mut acc = self.pns.neutral(v, i);
        for (q, &u) in bag.iter().enumerate() {
            if q == p || !self.inst.graph.has_edge(u, v) {
                continue;
            }
            if key.removed & (1 << p) != 0 && key.removed & (1 << q) != 0 {
                continue;
            }
            let obs = self.pns.observe(v, i, u, self.color(key, q));
            acc = self.pns.combine(v, i, &acc, &obs);
        }
        acc
    }

    fn mode_accepts(&self, mode: &CheckMode, v: usize, i: ColorId, n: &NVal) -> bool {
        match mode {
            CheckMode::Final => self.pns.accept(v, i, n),
            CheckMode::MustEqual(target) => n == target,
        }
    }

    fn charge(&self, key: &StateKey, bag: &[usize], p: usize) -> Weight {
        if key.charged & (1 << p) != 0 {
            self.inst.cost(bag[p], self.color(key, p))
        } else {
            self.inst.algebra.neutral()
        }
    }

    /// Positions, in the child bag, of `v`'s bag neighbors whose child
    /// color is tracked by the constraint.
    fn tracked_neighbor_positions(
        &self,
        constraint: &GlobalConstraint,
        child_bag: &[usize],
        child_colors: &[u32],
        v: usize,
    ) -> Vec<usize> {
        child_bag
            .iter()
            .enumerate()
            .filter(|(q, &u)| {
                u != v
                    && self.inst.graph.has_edge(u, v)
                    && constraint.tracked(child_colors[*q] as ColorId)
            })
            .map(|(q, _)| q)
            .collect()
    }

    fn derive(&self, t: usize, key: &StateKey) -> Derivation {
        let bag = self.bag(t);
        match self.etd.kinds[t] {
            NodeKind::Leaf => {
                debug_assert_eq!(bag.len(), 1);
                let v = bag[0];
                let i = self.color(key, 0);
                let ok = self.mode_accepts(&key.mode[0], v, i, &key.acc[0])
                    && self
                        .constraints
                        .iter()
                        .zip(key.globals.iter())
                        .all(|(c, st)| c.leaf_ok(st));
                Derivation::Leaf(if ok {
                    self.charge(key, bag, 0)
                } else {
                    Weight::Error
                })
            }
            NodeKind::Forget(v) => {
                let child = self.etd.children[t][0];
                let child_bag = self.bag(child);
                let vp = child_bag.binary_search(&v).expect("forget vertex in child bag");
                let insert_bit = |mask: u64| -> u64 {
                    let low = mask & ((1u64 << vp) - 1);
                    let high = mask >> vp;
                    low | (high << (vp + 1))
                };
                let mut choices = Vec::with_capacity(self.inst.list(v).len());
                for &i in self.inst.list(v) {
                    let mut colors = key.colors.clone();
                    colors.insert(vp, i as u32);
                    let mut acc = key.acc.clone();
                    acc.insert(vp, self.pns.neutral(v, i));
                    let mut mode = key.mode.clone();
                    mode.insert(vp, CheckMode::Final);
                    let mut globals: SmallVec<[ConstraintState; 2]> = SmallVec::new();
                    let mut ok = true;
                    for (c, st) in self.constraints.iter().zip(key.globals.iter()) {
                        let tracked_neighbors =
                            self.tracked_neighbor_positions(c, child_bag, &colors, v);
                        let ctx = ForgetCtx {
                            v_pos: vp,
                            v_tracked: c.tracked(i),
                            tracked_neighbors: &tracked_neighbors,
                        };
                        match c.forget_child(st, &ctx) {
                            Some(next) => globals.push(next),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        choices.push((i, None));
                        continue;
                    }
                    choices.push((
                        i,
                        Some(StateKey {
                            removed: insert_bit(key.removed),
                            charged: insert_bit(key.charged) | (1 << vp),
                            colors,
                            acc,
                            mode,
                            globals,
                        }),
                    ));
                }
                Derivation::Forget { child, choices }
            }
            NodeKind::Introduce(v) => {
                let child = self.etd.children[t][0];
                let vp = bag.binary_search(&v).expect("introduced vertex in bag");
                let i = self.color(key, vp);
                let n_v = {
                    let ns = self.bag_ns(t, key, vp);
                    self.pns.combine(v, i, &key.acc[vp], &ns)
                };
                if !self.mode_accepts(&key.mode[vp], v, i, &n_v) {
                    return Derivation::Introduce {
                        child,
                        result: None,
                    };
                }
                let drop_bit = |mask: u64| -> u64 {
                    let low = mask & ((1u64 << vp) - 1);
                    let high = mask >> (vp + 1);
                    low | (high << vp)
                };
                let mut colors = key.colors.clone();
                colors.remove(vp);
                let mut mode = key.mode.clone();
                mode.remove(vp);
                // surviving bag neighbors of v absorb its observation,
                // unless the edge is S-internal
                let mut acc: SmallVec<[NVal; 8]> = SmallVec::new();
                for (q, &u) in bag.iter().enumerate() {
                    if q == vp {
                        continue;
                    }
                    let mut a = key.acc[q].clone();
                    let edge_removed = key.removed & (1 << q) != 0 && key.removed & (1 << vp) != 0;
                    if self.inst.graph.has_edge(u, v) && !edge_removed {
                        let j = self.color(key, q);
                        let obs = self.pns.observe(u, j, v, i);
                        a = self.pns.combine(u, j, &a, &obs);
                    }
                    acc.push(a);
                }
                let mut globals: SmallVec<[ConstraintState; 2]> = SmallVec::new();
                for (c, st) in self.constraints.iter().zip(key.globals.iter()) {
                    let ctx = IntroduceCtx {
                        v_pos: vp,
                        v_tracked: c.tracked(i),
                    };
                    match c.introduce_child(st, &ctx) {
                        Some(next) => globals.push(next),
                        None => {
                            return Derivation::Introduce {
                                child,
                                result: None,
                            }
                        }
                    }
                }
                let child_key = StateKey {
                    removed: drop_bit(key.removed),
                    charged: drop_bit(key.charged),
                    colors,
                    acc,
                    mode,
                    globals,
                };
                Derivation::Introduce {
                    child,
                    result: Some((self.charge(key, bag, vp), child_key)),
                }
            }
            NodeKind::Join => {
                let left = self.etd.children[t][0];
                let right = self.etd.children[t][1];
                let w = self
                    .inst
                    .algebra
                    .fold((0..bag.len()).map(|p| self.charge(key, bag, p)));
                let domains: Vec<Vec<NVal>> = bag
                    .iter()
                    .enumerate()
                    .map(|(p, &v)| self.pns.domain(v, self.color(key, p)))
                    .collect();
                let base: Vec<NVal> = (0..bag.len())
                    .map(|p| {
                        let ns = self.bag_ns(t, key, p);
                        self.pns
                            .combine(bag[p], self.color(key, p), &key.acc[p], &ns)
                    })
                    .collect();
                let splits: Vec<Vec<(ConstraintState, ConstraintState)>> = self
                    .constraints
                    .iter()
                    .zip(key.globals.iter())
                    .map(|(c, st)| c.join_splits(st))
                    .collect();
                Derivation::Join(JoinDerivation {
                    left,
                    right,
                    w,
                    domains,
                    base,
                    splits,
                    colors: key.colors.clone(),
                })
            }
        }
    }

    /// All root aggregation states: every color of the root vertex with
    /// full charge, neutral accumulator and final checks.
    fn root_states(&self) -> Vec<(ColorId, StateKey)> {
        let root_bag = self.bag(self.etd.root);
        debug_assert_eq!(root_bag.len(), 1);
        let v = root_bag[0];
        self.inst
            .list(v)
            .iter()
            .map(|&i| {
                let globals: SmallVec<[ConstraintState; 2]> = self
                    .constraints
                    .iter()
                    .map(|c| c.root_state(c.tracked(i)))
                    .collect();
                (
                    i,
                    StateKey {
                        removed: 0,
                        charged: 1,
                        colors: SmallVec::from_slice(&[i as u32]),
                        acc: SmallVec::from_vec(vec![self.pns.neutral(v, i)]),
                        mode: SmallVec::from_vec(vec![CheckMode::Final]),
                        globals,
                    },
                )
            })
            .collect()
    }
}

/// Solves the instance over the given easy decomposition. Plain solving is
/// the empty-constraints case.
pub fn solve(
    inst: &ProblemInstance,
    pns: &dyn NeighborhoodSystem,
    etd: &EasyDecomposition,
    constraints: &[GlobalConstraint],
    options: &SolveOptions,
) -> Result<SolveReport, EngineError> {
    if inst.radius != 1 {
        return Err(EngineError::RadiusUnsupported(inst.radius));
    }
    if constraints.len() > MAX_CONSTRAINTS {
        return Err(EngineError::TooManyConstraints(
            constraints.len(),
            MAX_CONSTRAINTS,
        ));
    }
    if inst.vertex_count() == 0 {
        return Ok(SolveReport {
            optimum: inst.algebra.neutral(),
            witness: options.witness.then(Vec::new),
            width: 0,
            nodes: 0,
            states: 0,
        });
    }
    etd.check_easy_invariants()
        .map_err(EngineError::InvalidDecomposition)?;
    if let Some(bag) = etd.bags.iter().find(|b| b.len() > 63) {
        return Err(EngineError::BagTooLarge(bag.len()));
    }

    let engine = Engine {
        inst,
        pns,
        etd,
        constraints,
    };

    if !options.memoize {
        return solve_unmemoized(&engine, options);
    }

    let node_count = etd.node_count();
    let mut tables: Vec<StateTable> = (0..node_count).map(|_| StateTable::new()).collect();

    // Phase 1: discover reachable states top-down.
    let mut stack: Vec<(usize, u32)> = Vec::new();
    let root = etd.root;
    for (_, key) in engine.root_states() {
        let (idx, new) = tables[root].intern(key);
        if new {
            stack.push((root, idx));
        }
    }
    let mut total_states = tables[root].keys.len();
    while let Some((t, ki)) = stack.pop() {
        let key = tables[t].keys[ki as usize].clone();
        let push_child = |tables: &mut Vec<StateTable>,
                              stack: &mut Vec<(usize, u32)>,
                              total: &mut usize,
                              node: usize,
                              child_key: StateKey|
         -> Result<(), EngineError> {
            let (idx, new) = tables[node].intern(child_key);
            if new {
                *total += 1;
                if let Some(max) = options.max_states {
                    if *total > max {
                        return Err(EngineError::StateBudgetExceeded(max));
                    }
                }
                stack.push((node, idx));
            }
            Ok(())
        };
        match engine.derive(t, &key) {
            Derivation::Leaf(_) => {}
            Derivation::Forget { child, choices } => {
                for (_, choice) in choices {
                    if let Some(ck) = choice {
                        push_child(&mut tables, &mut stack, &mut total_states, child, ck)?;
                    }
                }
            }
            Derivation::Introduce { child, result } => {
                if let Some((_, ck)) = result {
                    push_child(&mut tables, &mut stack, &mut total_states, child, ck)?;
                }
            }
            Derivation::Join(join) => {
                let bag = engine.bag(t);
                let sizes: Vec<usize> = join.domains.iter().map(|d| d.len()).collect();
                let split_sizes: Vec<usize> = join.splits.iter().map(|s| s.len()).collect();
                for side_left in [true, false] {
                    let mut eta = vec![0usize; bag.len()];
                    loop {
                        let mut split_idx = vec![0usize; split_sizes.len()];
                        loop {
                            let ck = join.child_key(bag, &eta, side_left, &split_idx, &engine);
                            let node = if side_left { join.left } else { join.right };
                            push_child(&mut tables, &mut stack, &mut total_states, node, ck)?;
                            if !odometer_next(&mut split_idx, &split_sizes) {
                                break;
                            }
                        }
                        if !odometer_next(&mut eta, &sizes) {
                            break;
                        }
                    }
                }
            }
        }
    }

    // Phase 2: evaluate bottom-up.
    let order = etd.post_order();
    for &t in &order {
        let keys = std::mem::take(&mut tables[t].keys);
        let eval_one = |key: &StateKey| -> Weight {
            let value = match engine.derive(t, key) {
                Derivation::Leaf(w) => w,
                Derivation::Forget { child, choices } => {
                    let child_table = &tables[child];
                    inst.algebra.min_all(choices.iter().map(|(_, ck)| match ck {
                        Some(ck) => child_table.value_of(ck),
                        None => Weight::Error,
                    }))
                }
                Derivation::Introduce { child, result } => match result {
                    Some((w, ck)) => inst.algebra.combine(w, tables[child].value_of(&ck)),
                    None => Weight::Error,
                },
                Derivation::Join(join) => {
                    eval_join(&engine, engine.bag(t), key, &join, &tables[join.left], &tables[join.right])
                }
            };
            if options.trace {
                log::trace!(
                    "node={} kind={:?} state={:?} value={:?}",
                    t,
                    etd.kinds[t],
                    key,
                    value
                );
            }
            value
        };
        let values: Vec<Weight> = if options.threads > 1 && keys.len() > 64 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(options.threads)
                .build()
                .expect("thread pool");
            pool.install(|| keys.par_iter().map(eval_one).collect())
        } else {
            keys.iter().map(eval_one).collect()
        };
        tables[t].keys = keys;
        tables[t].values = values;
    }

    // Root aggregation.
    let mut optimum = Weight::Error;
    let mut best_root: Option<(ColorId, StateKey)> = None;
    for (i, key) in engine.root_states() {
        let w = tables[root].value_of(&key);
        if inst.algebra.compare(w, optimum) == std::cmp::Ordering::Less {
            optimum = w;
            best_root = Some((i, key));
        }
    }

    let witness = if options.witness && !optimum.is_error() {
        let (root_color, root_key) = best_root.expect("finite optimum has a root state");
        Some(extract_witness(
            &engine, &tables, root_color, root_key,
        ))
    } else {
        None
    };

    Ok(SolveReport {
        optimum,
        witness,
        width: etd.width(),
        nodes: etd.node_count(),
        states: total_states,
    })
}

fn eval_join(
    engine: &Engine,
    bag: &[usize],
    key: &StateKey,
    join: &JoinDerivation,
    left_table: &StateTable,
    right_table: &StateTable,
) -> Weight {
    let alg = engine.inst.algebra;
    if join.w.is_error() {
        return Weight::Error;
    }
    let sizes: Vec<usize> = join.domains.iter().map(|d| d.len()).collect();
    let split_sizes: Vec<usize> = join.splits.iter().map(|s| s.len()).collect();
    let mut best = Weight::Error;
    let mut eta_r = vec![0usize; bag.len()];
    loop {
        // base ⊞ η_r, reused across the inner loop
        let partial: Vec<NVal> = (0..bag.len())
            .map(|p| {
                let v = bag[p];
                let i = key.colors[p] as ColorId;
                engine
                    .pns
                    .combine(v, i, &join.base[p], &join.domains[p][eta_r[p]])
            })
            .collect();
        let mut eta_s = vec![0usize; bag.len()];
        loop {
            let good = (0..bag.len()).all(|p| {
                let v = bag[p];
                let i = key.colors[p] as ColorId;
                let n = engine
                    .pns
                    .combine(v, i, &partial[p], &join.domains[p][eta_s[p]]);
                engine.mode_accepts(&key.mode[p], v, i, &n)
            });
            if good {
                let mut split_idx = vec![0usize; split_sizes.len()];
                loop {
                    let lk = join.child_key(bag, &eta_r, true, &split_idx, engine);
                    let lv = left_table.value_of(&lk);
                    if !lv.is_error() {
                        let rk = join.child_key(bag, &eta_s, false, &split_idx, engine);
                        let rv = right_table.value_of(&rk);
                        let cand = alg.combine(join.w, alg.combine(lv, rv));
                        best = alg.min(best, cand);
                    }
                    if !odometer_next(&mut split_idx, &split_sizes) {
                        break;
                    }
                }
            }
            if !odometer_next(&mut eta_s, &sizes) {
                break;
            }
        }
        if !odometer_next(&mut eta_r, &sizes) {
            break;
        }
    }
    best
}

/// Walks the state tree from the chosen root state, recording the
/// minimizing color at every forget node (and the root's own color).
/// Ties resolve to the first choice in deterministic enumeration order.
fn extract_witness(
    engine: &Engine,
    tables: &[StateTable],
    root_color: ColorId,
    root_key: StateKey,
) -> Vec<ColorId> {
    let inst = engine.inst;
    let alg = inst.algebra;
    let n = inst.vertex_count();
    let mut witness: Vec<Option<ColorId>> = vec![None; n];
    let root_vertex = engine.bag(engine.etd.root)[0];
    witness[root_vertex] = Some(root_color);

    let mut stack: Vec<(usize, StateKey)> = vec![(engine.etd.root, root_key)];
    while let Some((t, key)) = stack.pop() {
        let stored = tables[t].value_of(&key);
        match engine.derive(t, &key) {
            Derivation::Leaf(_) => {}
            Derivation::Forget { child, choices } => {
                let v = match engine.etd.kinds[t] {
                    NodeKind::Forget(v) => v,
                    _ => unreachable!(),
                };
                let mut chosen = None;
                for (i, ck) in &choices {
                    if let Some(ck) = ck {
                        if tables[child].value_of(ck) == stored {
                            chosen = Some((*i, ck.clone()));
                            break;
                        }
                    }
                }
                let (i, ck) = chosen.expect("finite forget value has a witness color");
                witness[v] = Some(i);
                stack.push((child, ck));
            }
            Derivation::Introduce { child, result } => {
                let (_, ck) = result.expect("finite introduce value has a child");
                stack.push((child, ck));
            }
            Derivation::Join(join) => {
                let bag = engine.bag(t);
                let sizes: Vec<usize> = join.domains.iter().map(|d| d.len()).collect();
                let split_sizes: Vec<usize> = join.splits.iter().map(|s| s.len()).collect();
                let mut found = false;
                let mut eta_r = vec![0usize; bag.len()];
                'outer: loop {
                    let partial: Vec<NVal> = (0..bag.len())
                        .map(|p| {
                            let v = bag[p];
                            let i = key.colors[p] as ColorId;
                            engine
                                .pns
                                .combine(v, i, &join.base[p], &join.domains[p][eta_r[p]])
                        })
                        .collect();
                    let mut eta_s = vec![0usize; bag.len()];
                    loop {
                        let good = (0..bag.len()).all(|p| {
                            let v = bag[p];
                            let i = key.colors[p] as ColorId;
                            let nv = engine
                                .pns
                                .combine(v, i, &partial[p], &join.domains[p][eta_s[p]]);
                            engine.mode_accepts(&key.mode[p], v, i, &nv)
                        });
                        if good {
                            let mut split_idx = vec![0usize; split_sizes.len()];
                            loop {
                                let lk = join.child_key(bag, &eta_r, true, &split_idx, engine);
                                let rk = join.child_key(bag, &eta_s, false, &split_idx, engine);
                                let lv = tables[join.left].value_of(&lk);
                                let rv = tables[join.right].value_of(&rk);
                                if alg.combine(join.w, alg.combine(lv, rv)) == stored {
                                    stack.push((join.left, lk));
                                    stack.push((join.right, rk));
                                    found = true;
                                    break 'outer;
                                }
                                if !odometer_next(&mut split_idx, &split_sizes) {
                                    break;
                                }
                            }
                        }
                        if !odometer_next(&mut eta_s, &sizes) {
                            break;
                        }
                    }
                    if !odometer_next(&mut eta_r, &sizes) {
                        break;
                    }
                }
                assert!(found, "finite join value has a good pair");
            }
        }
    }
    witness.into_iter().map(|c| c.expect("total witness")).collect()
}

/// Reference evaluator without memoization: recomputes child states
/// recursively. Exponential on joins; used to validate memoization
/// soundness on small inputs.
fn solve_unmemoized(engine: &Engine, options: &SolveOptions) -> Result<SolveReport, EngineError> {
    fn eval(engine: &Engine, t: usize, key: &StateKey) -> Weight {
        let alg = engine.inst.algebra;
        match engine.derive(t, key) {
            Derivation::Leaf(w) => w,
            Derivation::Forget { child, choices } => alg.min_all(
                choices
                    .iter()
                    .map(|(_, ck)| match ck {
                        Some(ck) => eval(engine, child, ck),
                        None => Weight::Error,
                    }),
            ),
            Derivation::Introduce { child, result } => match result {
                Some((w, ck)) => alg.combine(w, eval(engine, child, &ck)),
                None => Weight::Error,
            },
            Derivation::Join(join) => {
                if join.w.is_error() {
                    return Weight::Error;
                }
                let bag = engine.bag(t);
                let sizes: Vec<usize> = join.domains.iter().map(|d| d.len()).collect();
                let split_sizes: Vec<usize> = join.splits.iter().map(|s| s.len()).collect();
                let mut best = Weight::Error;
                let mut eta_r = vec![0usize; bag.len()];
                loop {
                    let mut eta_s = vec![0usize; bag.len()];
                    loop {
                        let good = (0..bag.len()).all(|p| {
                            let v = bag[p];
                            let i = key.colors[p] as ColorId;
                            let mut nv = engine.pns.combine(
                                v,
                                i,
                                &join.base[p],
                                &join.domains[p][eta_r[p]],
                            );
                            nv = engine.pns.combine(v, i, &nv, &join.domains[p][eta_s[p]]);
                            engine.mode_accepts(&key.mode[p], v, i, &nv)
                        });
                        if good {
                            let mut split_idx = vec![0usize; split_sizes.len()];
                            loop {
                                let lk = join.child_key(bag, &eta_r, true, &split_idx, engine);
                                let rk = join.child_key(bag, &eta_s, false, &split_idx, engine);
                                let lv = eval(engine, join.left, &lk);
                                let rv = eval(engine, join.right, &rk);
                                best = alg.min(best, alg.combine(join.w, alg.combine(lv, rv)));
                                if !odometer_next(&mut split_idx, &split_sizes) {
                                    break;
                                }
                            }
                        }
                        if !odometer_next(&mut eta_s, &sizes) {
                            break;
                        }
                    }
                    if !odometer_next(&mut eta_r, &sizes) {
                        break;
                    }
                }
                best
            }
        }
    }

    let mut optimum = Weight::Error;
    for (_, key) in engine.root_states() {
        let w = eval(engine, engine.etd.root, &key);
        optimum = engine.inst.algebra.min(optimum, w);
    }
    let _ = options;
    Ok(SolveReport {
        optimum,
        witness: None,
        width: engine.etd.width(),
        nodes: engine.etd.node_count(),
        states: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WeightAlgebra;
    use crate::graph::{path, LabeledGraph};
    use crate::pns::{AccKind, TupleSystem};
    use crate::treedec::{heuristic_decomposition, path_decomposition, to_easy};
    use std::sync::Arc;

    fn dominating_set(g: LabeledGraph) -> (ProblemInstance, TupleSystem) {
        let inst = ProblemInstance::uniform(
            Arc::new(g),
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into()],
            |i| i as i64,
            Arc::new(|g, v, c| c[v] == 1 || g.neighbors(v).iter().any(|&u| c[u] == 1)),
        );
        let pns = TupleSystem::counter(1, |_, _, _, j| j as u16, |_, i, n| i == 1 || n >= 1);
        (inst, pns)
    }

    #[test]
    fn dominating_p3_canonical() {
        let (inst, pns) = dominating_set(path(3));
        let etd = to_easy(&inst.graph, &path_decomposition(3)).unwrap();
        let report = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        assert_eq!(report.optimum, Weight::Value(1));
        let w = report.witness.unwrap();
        assert_eq!(inst.is_proper(&w), Ok(true));
        assert_eq!(inst.coloring_weight(&w), Ok(Weight::Value(1)));
        assert_eq!(w, vec![0, 1, 0]);
    }

    #[test]
    fn one_coloring_k2_is_error() {
        let g = path(2);
        let inst = ProblemInstance::uniform(
            Arc::new(g),
            WeightAlgebra::MinMax,
            vec!["1".into()],
            |_| 1,
            Arc::new(|g, v, c| g.neighbors(v).iter().all(|&u| c[u] != c[v])),
        );
        let pns = TupleSystem::boolean(AccKind::And, |_, i, _, j| j != i, |_, _, n| n);
        let etd = to_easy(&inst.graph, &path_decomposition(2)).unwrap();
        let report = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        assert_eq!(report.optimum, Weight::Error);
        assert!(report.witness.is_none());
    }

    #[test]
    fn single_vertex_reduction() {
        let (inst, pns) = dominating_set(LabeledGraph::new(1));
        let etd = to_easy(&inst.graph, &path_decomposition(1)).unwrap();
        let report = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        assert_eq!(report.optimum, Weight::Value(1));
        assert_eq!(report.witness.unwrap(), vec![1]);
    }

    #[test]
    fn join_route_agrees() {
        // a branching decomposition for P3 forces a join over a bag
        let g = path(3);
        let td = crate::treedec::TreeDecomposition::from_parts(
            vec![vec![1], vec![0, 1], vec![1, 2]],
            vec![(0, 1), (0, 2)],
        )
        .unwrap();
        let (inst, pns) = dominating_set(g);
        let etd = to_easy(&inst.graph, &td).unwrap();
        assert!(etd.kinds.iter().any(|k| matches!(k, NodeKind::Join)));
        let report = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        assert_eq!(report.optimum, Weight::Value(1));
        let w = report.witness.unwrap();
        assert_eq!(inst.is_proper(&w), Ok(true));
        assert_eq!(inst.coloring_weight(&w), Ok(Weight::Value(1)));
    }

    #[test]
    fn memoization_on_off_identical() {
        let g = LabeledGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]);
        let (inst, pns) = dominating_set(g);
        let etd = to_easy(&inst.graph, &heuristic_decomposition(&inst.graph)).unwrap();
        let on = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        let off = solve(
            &inst,
            &pns,
            &etd,
            &[],
            &SolveOptions {
                memoize: false,
                witness: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(on.optimum, off.optimum);
    }

    #[test]
    fn disconnected_graph_combines_components() {
        // P2 + isolated vertex: dominating set needs 1 + 1
        let g = LabeledGraph::from_edges(3, [(0, 1)]);
        let (inst, pns) = dominating_set(g);
        let td = heuristic_decomposition(&inst.graph);
        let etd = to_easy(&inst.graph, &td).unwrap();
        let report = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        assert_eq!(report.optimum, Weight::Value(2));
        let w = report.witness.unwrap();
        assert_eq!(inst.is_proper(&w), Ok(true));
    }

    #[test]
    fn empty_graph_is_neutral() {
        let (inst, pns) = dominating_set(LabeledGraph::new(0));
        let etd = EasyDecomposition {
            bags: vec![vec![]],
            kinds: vec![NodeKind::Leaf],
            children: vec![vec![]],
            root: 0,
        };
        let report = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        assert_eq!(report.optimum, Weight::Value(0));
    }

    #[test]
    fn parallel_evaluation_is_identical() {
        let g = crate::graph::cycle(6);
        let (inst, pns) = dominating_set(g);
        let etd = to_easy(&inst.graph, &heuristic_decomposition(&inst.graph)).unwrap();
        let seq = solve(&inst, &pns, &etd, &[], &SolveOptions::default()).unwrap();
        let par = solve(
            &inst,
            &pns,
            &etd,
            &[],
            &SolveOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq.optimum, par.optimum);
        assert_eq!(seq.witness, par.witness);
    }
}
