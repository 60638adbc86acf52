//! Partial neighborhood systems: per-(vertex, color) accumulator algebras
//! that replace direct neighborhood inspection in the dynamic program.
//!
//! A system provides, for every vertex `v` and color `i`, a commutative
//! monoid of accumulator values, a way to turn "neighbor `u` has color `j`"
//! into a value, and an acceptance predicate that must agree with the
//! instance's `check` whenever the values of all neighbors are folded
//! together.

use crate::graph::LabeledGraph;
use crate::instance::{ColorId, ProblemInstance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use std::sync::Arc;

/// Canonical byte encoding of an accumulator value. The engine treats it
/// as an opaque table key; each system chooses its own compact encoding.
pub type NVal = SmallVec<[u8; 8]>;

pub trait NeighborhoodSystem: Send + Sync {
    /// Neutral element of the accumulator monoid of `(v, i)`.
    fn neutral(&self, v: usize, i: ColorId) -> NVal;
    /// The combining operation of `(v, i)`.
    fn combine(&self, v: usize, i: ColorId, a: &NVal, b: &NVal) -> NVal;
    /// Value contributed to `v` (colored `i`) by neighbor `u` colored `j`.
    /// May read the label of the edge `vu`.
    fn observe(&self, v: usize, i: ColorId, u: usize, j: ColorId) -> NVal;
    /// Acceptance test over a fully accumulated value.
    fn accept(&self, v: usize, i: ColorId, n: &NVal) -> bool;
    /// The full accumulator domain of `(v, i)`, in a deterministic order.
    fn domain(&self, v: usize, i: ColorId) -> Vec<NVal>;
}

pub type SharedSystem = Arc<dyn NeighborhoodSystem>;

fn encode_u16s(values: &[u16]) -> NVal {
    let mut out = NVal::new();
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn decode_u16s(n: &NVal) -> SmallVec<[u16; 4]> {
    n.chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect()
}

/// One accumulator component of a [`TupleSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccKind {
    /// Saturating counter: `min(a + b, cap)`.
    SatAdd(u16),
    /// Boolean conjunction, neutral 1.
    And,
    /// Boolean disjunction, neutral 0.
    Or,
    /// Set union over a `bits`-wide bitmask.
    UnionBits(u8),
}

impl AccKind {
    fn neutral(self) -> u16 {
        match self {
            AccKind::SatAdd(_) | AccKind::Or | AccKind::UnionBits(_) => 0,
            AccKind::And => 1,
        }
    }

    fn combine(self, a: u16, b: u16) -> u16 {
        match self {
            AccKind::SatAdd(cap) => (a + b).min(cap),
            AccKind::And => a & b,
            AccKind::Or | AccKind::UnionBits(_) => a | b,
        }
    }

    fn domain_size(self) -> usize {
        match self {
            AccKind::SatAdd(cap) => cap as usize + 1,
            AccKind::And | AccKind::Or => 2,
            AccKind::UnionBits(bits) => 1usize << bits,
        }
    }
}

type ObserveFn =
    Arc<dyn Fn(usize, ColorId, usize, ColorId) -> SmallVec<[u16; 4]> + Send + Sync>;
type AcceptFn = Arc<dyn Fn(usize, ColorId, &[u16]) -> bool + Send + Sync>;

/// A fixed product of scalar accumulators. Covers every constant system in
/// the catalog: booleans, saturating counters, bitmask unions and small
/// tuples thereof.
#[derive(Clone)]
pub struct TupleSystem {
    comps: Vec<AccKind>,
    observe_fn: ObserveFn,
    accept_fn: AcceptFn,
}

impl TupleSystem {
    pub fn new(comps: Vec<AccKind>, observe_fn: ObserveFn, accept_fn: AcceptFn) -> Self {
        TupleSystem {
            comps,
            observe_fn,
            accept_fn,
        }
    }

    /// Single saturating counter, the most common shape in the catalog.
    pub fn counter(
        cap: u16,
        observe: impl Fn(usize, ColorId, usize, ColorId) -> u16 + Send + Sync + 'static,
        accept: impl Fn(usize, ColorId, u16) -> bool + Send + Sync + 'static,
    ) -> Self {
        TupleSystem::new(
            vec![AccKind::SatAdd(cap)],
            Arc::new(move |v, i, u, j| SmallVec::from_slice(&[observe(v, i, u, j)])),
            Arc::new(move |v, i, t| accept(v, i, t[0])),
        )
    }

    /// Single boolean accumulator.
    pub fn boolean(
        kind: AccKind,
        observe: impl Fn(usize, ColorId, usize, ColorId) -> bool + Send + Sync + 'static,
        accept: impl Fn(usize, ColorId, bool) -> bool + Send + Sync + 'static,
    ) -> Self {
        debug_assert!(matches!(kind, AccKind::And | AccKind::Or));
        TupleSystem::new(
            vec![kind],
            Arc::new(move |v, i, u, j| SmallVec::from_slice(&[observe(v, i, u, j) as u16])),
            Arc::new(move |v, i, t| accept(v, i, t[0] != 0)),
        )
    }
}

impl NeighborhoodSystem for TupleSystem {
    fn neutral(&self, _v: usize, _i: ColorId) -> NVal {
        let vals: SmallVec<[u16; 4]> = self.comps.iter().map(|k| k.neutral()).collect();
        encode_u16s(&vals)
    }

    fn combine(&self, _v: usize, _i: ColorId, a: &NVal, b: &NVal) -> NVal {
        let xs = decode_u16s(a);
        let ys = decode_u16s(b);
        let vals: SmallVec<[u16; 4]> = self
            .comps
            .iter()
            .zip(xs.iter().zip(ys.iter()))
            .map(|(k, (&x, &y))| k.combine(x, y))
            .collect();
        encode_u16s(&vals)
    }

    fn observe(&self, v: usize, i: ColorId, u: usize, j: ColorId) -> NVal {
        let vals = (self.observe_fn)(v, i, u, j);
        debug_assert_eq!(vals.len(), self.comps.len());
        encode_u16s(&vals)
    }

    fn accept(&self, v: usize, i: ColorId, n: &NVal) -> bool {
        (self.accept_fn)(v, i, &decode_u16s(n))
    }

    fn domain(&self, _v: usize, _i: ColorId) -> Vec<NVal> {
        let mut out = Vec::new();
        let mut odometer: Vec<u16> = vec![0; self.comps.len()];
        loop {
            out.push(encode_u16s(&odometer));
            let mut pos = self.comps.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                odometer[pos] += 1;
                if (odometer[pos] as usize) < self.comps[pos].domain_size() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }
}

/// The counting system: per-color saturating counters of neighbor colors.
/// Sound whenever the instance's check depends only on the vertex, its
/// color and the multiset of neighbor colors (asserted by the caller).
pub struct CountingSystem {
    graph: Arc<LabeledGraph>,
    instance: ProblemInstance,
    caps: Vec<u16>,
}

impl CountingSystem {
    /// Builds the system, or `None` when some vertex's neighborhood could
    /// not reconstruct arbitrary count vectors (a neighbor with a
    /// restricted color list).
    pub fn new(instance: &ProblemInstance, caps: Option<Vec<u16>>) -> Option<Self> {
        let num_colors = instance.colors.len();
        let graph = instance.graph.clone();
        let caps = caps.unwrap_or_else(|| {
            vec![graph.max_degree().min(u16::MAX as usize) as u16; num_colors]
        });
        assert_eq!(caps.len(), num_colors);
        // Reconstruction assigns colors to neighbors greedily; it is exact
        // only when every neighbor may take every color.
        let full: Vec<ColorId> = (0..num_colors).collect();
        for v in 0..graph.vertex_count() {
            for &u in graph.neighbors(v) {
                if instance.list(u) != full.as_slice() {
                    return None;
                }
            }
        }
        Some(CountingSystem {
            graph,
            instance: instance.clone(),
            caps,
        })
    }

    fn effective_cap(&self, v: usize, color: usize) -> u16 {
        self.caps[color].min(self.graph.degree(v) as u16)
    }

    /// Rebuilds some coloring of `N[v]` whose per-color counts saturate to
    /// `counts`, then defers to the instance check. Returns `None` when no
    /// accumulation could have produced `counts`.
    fn reconstruct(&self, v: usize, i: ColorId, counts: &[u16]) -> Option<Vec<ColorId>> {
        let d = self.graph.degree(v);
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        if total > d {
            return None;
        }
        let mut expanded: Vec<u16> = counts.to_vec();
        let mut extra = d - total;
        if extra > 0 {
            // lost units can only hide behind a saturated counter
            let slot = (0..counts.len())
                .find(|&j| counts[j] == self.effective_cap(v, j) && counts[j] > 0)?;
            expanded[slot] += extra as u16;
            extra = 0;
        }
        debug_assert_eq!(extra, 0);
        let mut coloring = vec![0usize; self.graph.vertex_count()];
        coloring[v] = i;
        let mut iter = self.graph.neighbors(v).iter();
        for (j, &cnt) in expanded.iter().enumerate() {
            for _ in 0..cnt {
                coloring[*iter.next().unwrap()] = j;
            }
        }
        Some(coloring)
    }
}

impl NeighborhoodSystem for CountingSystem {
    fn neutral(&self, _v: usize, _i: ColorId) -> NVal {
        SmallVec::from_elem(0u8, self.caps.len())
    }

    fn combine(&self, v: usize, _i: ColorId, a: &NVal, b: &NVal) -> NVal {
        a.iter()
            .zip(b.iter())
            .enumerate()
            .map(|(j, (&x, &y))| {
                let cap = self.effective_cap(v, j) as u32;
                ((x as u32 + y as u32).min(cap)) as u8
            })
            .collect()
    }

    fn observe(&self, v: usize, _i: ColorId, _u: usize, j: ColorId) -> NVal {
        let mut out: NVal = SmallVec::from_elem(0u8, self.caps.len());
        out[j] = 1u8.min(self.effective_cap(v, j) as u8);
        out
    }

    fn accept(&self, v: usize, i: ColorId, n: &NVal) -> bool {
        let counts: Vec<u16> = n.iter().map(|&b| b as u16).collect();
        match self.reconstruct(v, i, &counts) {
            Some(coloring) => (self.instance.check)(&self.graph, v, &coloring),
            None => false,
        }
    }

    fn domain(&self, v: usize, _i: ColorId) -> Vec<NVal> {
        let caps: Vec<u8> = (0..self.caps.len())
            .map(|j| self.effective_cap(v, j) as u8)
            .collect();
        let mut out = Vec::new();
        let mut odometer: Vec<u8> = vec![0; caps.len()];
        loop {
            out.push(NVal::from_slice(&odometer));
            let mut pos = caps.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if odometer[pos] < caps[pos] {
                    odometer[pos] += 1;
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }
}

/// The generic system that exists for every radius-1 instance: one slot per
/// neighbor holding "unassigned", "conflict" or a color.
pub struct GenericSystem {
    graph: Arc<LabeledGraph>,
    instance: ProblemInstance,
}

const SLOT_BOT: u16 = 0;
const SLOT_CONFLICT: u16 = 1;

impl GenericSystem {
    pub fn new(instance: &ProblemInstance) -> Self {
        GenericSystem {
            graph: instance.graph.clone(),
            instance: instance.clone(),
        }
    }

    fn slot_of(&self, v: usize, u: usize) -> usize {
        self.graph
            .neighbors(v)
            .binary_search(&u)
            .expect("observe called with a non-neighbor")
    }
}

impl NeighborhoodSystem for GenericSystem {
    fn neutral(&self, v: usize, _i: ColorId) -> NVal {
        encode_u16s(&vec![SLOT_BOT; self.graph.degree(v)])
    }

    fn combine(&self, _v: usize, _i: ColorId, a: &NVal, b: &NVal) -> NVal {
        let xs = decode_u16s(a);
        let ys = decode_u16s(b);
        let vals: SmallVec<[u16; 4]> = xs
            .iter()
            .zip(ys.iter())
            .map(|(&x, &y)| match (x, y) {
                _ if x == y || y == SLOT_BOT => x,
                _ if x == SLOT_BOT => y,
                _ => SLOT_CONFLICT,
            })
            .collect();
        encode_u16s(&vals)
    }

    fn observe(&self, v: usize, _i: ColorId, u: usize, j: ColorId) -> NVal {
        let mut slots = vec![SLOT_BOT; self.graph.degree(v)];
        slots[self.slot_of(v, u)] = j as u16 + 2;
        encode_u16s(&slots)
    }

    fn accept(&self, v: usize, i: ColorId, n: &NVal) -> bool {
        let slots = decode_u16s(n);
        let mut coloring = vec![0usize; self.graph.vertex_count()];
        coloring[v] = i;
        for (pos, &s) in slots.iter().enumerate() {
            if s == SLOT_BOT || s == SLOT_CONFLICT {
                return false;
            }
            coloring[self.graph.neighbors(v)[pos]] = (s - 2) as usize;
        }
        (self.instance.check)(&self.graph, v, &coloring)
    }

    fn domain(&self, v: usize, _i: ColorId) -> Vec<NVal> {
        let slots: Vec<Vec<u16>> = self
            .graph
            .neighbors(v)
            .iter()
            .map(|&u| {
                let mut opts = vec![SLOT_BOT, SLOT_CONFLICT];
                opts.extend(self.instance.list(u).iter().map(|&c| c as u16 + 2));
                opts
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; slots.len()];
        loop {
            let vals: Vec<u16> = idx.iter().zip(slots.iter()).map(|(&i, s)| s[i]).collect();
            out.push(encode_u16s(&vals));
            let mut pos = slots.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < slots[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// The generic system of Remark-style tuples; always consistent.
pub fn generic_pns(instance: &ProblemInstance) -> SharedSystem {
    Arc::new(GenericSystem::new(instance))
}

/// The counting system; `None` when reconstruction cannot be exact for
/// this instance.
pub fn counting_pns(instance: &ProblemInstance, caps: Option<Vec<u16>>) -> Option<SharedSystem> {
    CountingSystem::new(instance, caps).map(|s| Arc::new(s) as SharedSystem)
}

/// A witness that a system disagrees with its instance.
#[derive(Debug, Clone)]
pub struct SelfcheckFailure {
    pub vertex: usize,
    pub coloring: Vec<ColorId>,
    pub expected: bool,
    pub got: bool,
    pub detail: String,
}

impl std::fmt::Display for SelfcheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertex {} coloring {:?}: check = {}, system = {} ({})",
            self.vertex, self.coloring, self.expected, self.got, self.detail
        )
    }
}

/// Verifies the consistency equation and the monoid laws, exhaustively for
/// small neighborhoods and by seeded sampling beyond `sample_budget`.
pub fn pns_selfcheck(
    instance: &ProblemInstance,
    pns: &dyn NeighborhoodSystem,
    sample_budget: usize,
) -> Result<(), SelfcheckFailure> {
    let g = &instance.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    for v in 0..g.vertex_count() {
        let nbrs: Vec<usize> = g.neighbors(v).to_vec();
        for &i in instance.list(v) {
            // monoid laws on a deterministic sample of the domain
            let dom = pns.domain(v, i);
            let lane: Vec<&NVal> = dom.iter().take(6).collect();
            let e = pns.neutral(v, i);
            for &a in &lane {
                let an = pns.combine(v, i, a, &e);
                if an != *a {
                    return Err(SelfcheckFailure {
                        vertex: v,
                        coloring: vec![],
                        expected: true,
                        got: false,
                        detail: format!("neutral law fails on {a:?}"),
                    });
                }
                for &b in &lane {
                    if pns.combine(v, i, a, b) != pns.combine(v, i, b, a) {
                        return Err(SelfcheckFailure {
                            vertex: v,
                            coloring: vec![],
                            expected: true,
                            got: false,
                            detail: "combine not commutative".into(),
                        });
                    }
                    for &c in &lane {
                        let left = pns.combine(v, i, &pns.combine(v, i, a, b), c);
                        let right = pns.combine(v, i, a, &pns.combine(v, i, b, c));
                        if left != right {
                            return Err(SelfcheckFailure {
                                vertex: v,
                                coloring: vec![],
                                expected: true,
                                got: false,
                                detail: "combine not associative".into(),
                            });
                        }
                    }
                }
            }
        }

        // consistency: accept(fold of observe) == check, over colorings of N[v]
        let mut combos: usize = instance.list(v).len();
        for &u in &nbrs {
            combos = combos.saturating_mul(instance.list(u).len());
            if combos > sample_budget {
                break;
            }
        }
        let exhaustive = combos <= sample_budget;
        let trials = if exhaustive { combos } else { sample_budget };
        let mut coloring = vec![0usize; g.vertex_count()];
        for trial in 0..trials {
            // decode trial index into a choice per vertex of N[v], or sample
            let mut t = trial;
            let mut pick = |list: &[ColorId], rng: &mut ChaCha8Rng| -> ColorId {
                if exhaustive {
                    let c = list[t % list.len()];
                    t /= list.len();
                    c
                } else {
                    *list.choose(rng).unwrap()
                }
            };
            let ci = pick(instance.list(v), &mut rng);
            coloring[v] = ci;
            for &u in &nbrs {
                coloring[u] = pick(instance.list(u), &mut rng);
            }
            let expected = (instance.check)(g, v, &coloring);
            let mut acc = pns.neutral(v, ci);
            // fold in a shuffled order half the time to also exercise
            // order independence of the accumulated result
            let mut order = nbrs.clone();
            if trial % 2 == 1 {
                order.shuffle(&mut rng);
            }
            for &u in &order {
                let obs = pns.observe(v, ci, u, coloring[u]);
                acc = pns.combine(v, ci, &acc, &obs);
            }
            let got = pns.accept(v, ci, &acc);
            if got != expected {
                return Err(SelfcheckFailure {
                    vertex: v,
                    coloring: coloring.clone(),
                    expected,
                    got,
                    detail: "consistency equation fails".into(),
                });
            }
            let _ = rng.gen::<u8>();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WeightAlgebra;
    use crate::graph::{complete, path};

    fn roman(g: crate::graph::LabeledGraph) -> ProblemInstance {
        ProblemInstance::uniform(
            Arc::new(g),
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into(), "2".into()],
            |i| i as i64,
            Arc::new(|g, v, c| c[v] != 0 || g.neighbors(v).iter().any(|&u| c[u] == 2)),
        )
    }

    fn roman_system() -> TupleSystem {
        TupleSystem::boolean(
            AccKind::Or,
            |_, _, _, j| j == 2,
            |_, i, n| i != 0 || n,
        )
    }

    #[test]
    fn roman_table_system_passes_on_p4() {
        let inst = roman(path(4));
        pns_selfcheck(&inst, &roman_system(), 100_000).unwrap();
    }

    #[test]
    fn corrupted_system_fails_with_witness() {
        let inst = roman(path(3));
        // wrong observe: looks for color 1 instead of 2
        let bad = TupleSystem::boolean(AccKind::Or, |_, _, _, j| j == 1, |_, i, n| i != 0 || n);
        let err = pns_selfcheck(&inst, &bad, 100_000).unwrap_err();
        assert!(!err.coloring.is_empty());
    }

    #[test]
    fn counting_system_dominating_set_on_k4() {
        let inst = ProblemInstance::uniform(
            Arc::new(complete(4)),
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into()],
            |i| i as i64,
            Arc::new(|g, v, c| c[v] == 1 || g.neighbors(v).iter().any(|&u| c[u] == 1)),
        );
        let pns = counting_pns(&inst, None).unwrap();
        pns_selfcheck(&inst, pns.as_ref(), 100_000).unwrap();
    }

    #[test]
    fn counting_rejects_restricted_lists() {
        let g = Arc::new(path(2));
        let inst = ProblemInstance::new(
            g,
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into()],
            vec![Arc::new(vec![0, 1]), Arc::new(vec![0])],
            vec![
                Arc::new(vec![crate::algebra::Weight::Value(0), crate::algebra::Weight::Value(1)]),
                Arc::new(vec![crate::algebra::Weight::Value(0)]),
            ],
            Arc::new(|_, _, _| true),
        )
        .unwrap();
        assert!(counting_pns(&inst, None).is_none());
    }

    #[test]
    fn counting_combine_saturates() {
        let inst = ProblemInstance::uniform(
            Arc::new(complete(5)),
            WeightAlgebra::MinPlus,
            vec!["a".into(), "b".into()],
            |_| 0,
            Arc::new(|_, _, _| true),
        );
        let sys = CountingSystem::new(&inst, Some(vec![2, 2])).unwrap();
        let a = NVal::from_slice(&[1, 0]);
        let b = NVal::from_slice(&[1, 1]);
        assert_eq!(sys.combine(0, 0, &a, &b).as_slice(), &[2, 1]);
        assert_eq!(sys.observe(0, 0, 1, 1).as_slice(), &[0, 1]);
        assert_eq!(sys.neutral(0, 0).as_slice(), &[0, 0]);
    }

    #[test]
    fn generic_system_merge_rules() {
        let inst = roman(path(3));
        let sys = GenericSystem::new(&inst);
        // middle vertex has neighbors 0 and 2
        let a = sys.observe(1, 0, 0, 2); // 2 at slot 0
        let b = sys.observe(1, 0, 2, 1); // 1 at slot 1
        let merged = sys.combine(1, 0, &a, &b);
        assert_eq!(decode_u16s(&merged).as_slice(), &[4, 3]);
        // conflicting assignments to the same slot
        let c = sys.observe(1, 0, 0, 0);
        let bad = sys.combine(1, 0, &a, &c);
        assert_eq!(decode_u16s(&bad)[0], SLOT_CONFLICT);
        assert!(!sys.accept(1, 0, &bad));
    }

    #[test]
    fn generic_system_is_consistent() {
        let inst = roman(path(4));
        let pns = generic_pns(&inst);
        pns_selfcheck(&inst, pns.as_ref(), 100_000).unwrap();
    }
}
