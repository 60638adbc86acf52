//! Built-in problem catalog: each entry bundles an instance builder with
//! its constant or polynomial partial neighborhood system, plus any graph
//! transform and global constraints the encoding needs.

use crate::algebra::{Weight, WeightAlgebra};
use crate::globals::GlobalConstraint;
use crate::graph::{
    graph_power, transform_jagged, transform_subdivision, LabeledGraph, VertexMap,
};
use crate::instance::{ColorId, ProblemInstance};
use crate::pns::{AccKind, SharedSystem, TupleSystem};
use serde_json::Value;
use smallvec::SmallVec;
use std::collections::HashSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("invalid parameter `{0}`: {1}")]
    InvalidParameter(&'static str, String),
    #[error("weak edge {0}-{1} not in graph")]
    EdgeNotInGraph(usize, usize),
    #[error("graph has an isolated vertex ({0})")]
    IsolatedVertex(usize),
}

/// Which transform, if any, the entry applied to the input graph. The
/// instance lives on the transformed graph; decompositions of the input
/// graph can be lifted accordingly.
#[derive(Debug, Clone)]
pub enum AppliedTransform {
    None,
    Power(usize),
    Subdivision(VertexMap),
    Jagged(VertexMap),
    /// A bespoke auxiliary graph (distance-labeled power); decompositions
    /// of the input can be lifted with the power rule for this radius.
    LabeledPower(usize),
}

/// A built problem: instance + system + transform + global constraints.
/// The solved optimum is the problem's answer directly for every entry.
pub struct Bundle {
    pub instance: ProblemInstance,
    pub system: SharedSystem,
    pub transform: AppliedTransform,
    pub constraints: Vec<GlobalConstraint>,
}

pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "k-coloring",
        "k-chromatic-sum",
        "list-coloring",
        "h-coloring",
        "k-tuple-domination",
        "total-k-tuple-domination",
        "k-domination",
        "{k}-domination",
        "k-rainbow-domination",
        "roman-domination",
        "dominating-set",
        "total-domination",
        "independent-set",
        "{k}-packing-function",
        "{k}-limited-packing",
        "double-roman-domination",
        "grundy-domination",
        "grundy-total-domination",
        "chromatic-violation",
        "additive-coloring",
        "distance-domination",
        "semitotal-domination",
        "vertex-cover",
        "edge-cover",
        "matching",
        "edge-domination",
        "connected-dominating-set",
        "k-independent-set",
        "l-h-k-labeling",
        "packing-chromatic",
    ]
}

fn param_usize(params: &Value, key: &'static str) -> Result<usize, CatalogError> {
    params
        .get(key)
        .ok_or(CatalogError::MissingParameter(key))?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| CatalogError::InvalidParameter(key, "expected a nonnegative integer".into()))
}

fn param_usize_or(params: &Value, key: &'static str, default: usize) -> Result<usize, CatalogError> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| CatalogError::InvalidParameter(key, "expected a nonnegative integer".into())),
    }
}

fn positive(k: usize, key: &'static str) -> Result<usize, CatalogError> {
    if k == 0 {
        Err(CatalogError::InvalidParameter(key, "must be positive".into()))
    } else {
        Ok(k)
    }
}

fn no_isolated(g: &LabeledGraph) -> Result<(), CatalogError> {
    match (0..g.vertex_count()).find(|&v| g.degree(v) == 0) {
        Some(v) => Err(CatalogError::IsolatedVertex(v)),
        None => Ok(()),
    }
}

fn int_tokens(range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| i.to_string()).collect()
}

/// Proper-coloring entries share this check and system.
fn proper_coloring_bundle(g: Arc<LabeledGraph>, algebra: WeightAlgebra, k: usize, cost_is_color: bool) -> Bundle {
    let check = Arc::new(|g: &LabeledGraph, v: usize, c: &[ColorId]| {
        g.neighbors(v).iter().all(|&u| c[u] != c[v])
    });
    let instance = ProblemInstance::uniform(
        g,
        algebra,
        int_tokens(1..=k),
        move |i| if cost_is_color { i as i64 + 1 } else { 0 },
        check,
    );
    let system = Arc::new(TupleSystem::boolean(
        AccKind::And,
        |_, i, _, j| j != i,
        |_, _, n| n,
    ));
    Bundle {
        instance,
        system,
        transform: AppliedTransform::None,
        constraints: vec![],
    }
}

/// Closed/open neighborhood domination-style counters over 0/1 colors.
fn counter_bundle(
    g: Arc<LabeledGraph>,
    algebra: WeightAlgebra,
    colors: usize,
    cap: u16,
    check: crate::instance::CheckFn,
    accept: impl Fn(usize, ColorId, u16) -> bool + Send + Sync + 'static,
) -> Bundle {
    let instance = ProblemInstance::uniform(g, algebra, int_tokens(0..=colors - 1), |i| i as i64, check);
    let system = Arc::new(TupleSystem::counter(cap, |_, _, _, j| j as u16, accept));
    Bundle {
        instance,
        system,
        transform: AppliedTransform::None,
        constraints: vec![],
    }
}

pub fn instantiate(name: &str, params: &Value, g: &LabeledGraph) -> Result<Bundle, CatalogError> {
    let g = Arc::new(g.clone());
    match name {
        "k-coloring" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            Ok(proper_coloring_bundle(g, WeightAlgebra::MinMax, k, true))
        }
        "k-chromatic-sum" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            Ok(proper_coloring_bundle(g, WeightAlgebra::MinPlus, k, true))
        }
        "list-coloring" => {
            let raw = params
                .get("lists")
                .ok_or(CatalogError::MissingParameter("lists"))?
                .as_array()
                .ok_or_else(|| CatalogError::InvalidParameter("lists", "expected an array".into()))?;
            if raw.len() != g.vertex_count() {
                return Err(CatalogError::InvalidParameter(
                    "lists",
                    format!("expected {} lists", g.vertex_count()),
                ));
            }
            let mut tokens: Vec<String> = Vec::new();
            let mut lists: Vec<Arc<Vec<ColorId>>> = Vec::new();
            for entry in raw {
                let list = entry
                    .as_array()
                    .ok_or_else(|| CatalogError::InvalidParameter("lists", "expected arrays".into()))?;
                let mut ids = Vec::new();
                for t in list {
                    let tok = t.as_str().map(|s| s.to_string()).unwrap_or_else(|| t.to_string());
                    let id = match tokens.iter().position(|x| *x == tok) {
                        Some(p) => p,
                        None => {
                            tokens.push(tok);
                            tokens.len() - 1
                        }
                    };
                    ids.push(id);
                }
                lists.push(Arc::new(ids));
            }
            let costs: Vec<Arc<Vec<Weight>>> = lists
                .iter()
                .map(|l| Arc::new(vec![Weight::Value(0); l.len()]))
                .collect();
            let check = Arc::new(|g: &LabeledGraph, v: usize, c: &[ColorId]| {
                g.neighbors(v).iter().all(|&u| c[u] != c[v])
            });
            let instance = ProblemInstance::new(g, WeightAlgebra::MinPlus, tokens, lists, costs, check)
                .map_err(|e| CatalogError::InvalidParameter("lists", e.to_string()))?;
            let system = Arc::new(TupleSystem::boolean(
                AccKind::And,
                |_, i, _, j| j != i,
                |_, _, n| n,
            ));
            Ok(Bundle {
                instance,
                system,
                transform: AppliedTransform::None,
                constraints: vec![],
            })
        }
        "h-coloring" => {
            let h = params.get("h").ok_or(CatalogError::MissingParameter("h"))?;
            let hn = param_usize(h, "n")?;
            let edges = h
                .get("edges")
                .ok_or(CatalogError::MissingParameter("edges"))?
                .as_array()
                .ok_or_else(|| CatalogError::InvalidParameter("edges", "expected an array".into()))?;
            let mut adj: HashSet<(usize, usize)> = HashSet::new();
            for e in edges {
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| CatalogError::InvalidParameter("edges", "expected pairs".into()))?;
                let a = pair[0].as_u64().unwrap_or(u64::MAX) as usize;
                let b = pair[1].as_u64().unwrap_or(u64::MAX) as usize;
                if a >= hn || b >= hn {
                    return Err(CatalogError::InvalidParameter("edges", "vertex out of range".into()));
                }
                // loops allowed: adjacent input vertices may share the color
                adj.insert((a, b));
                adj.insert((b, a));
            }
            let adj = Arc::new(adj);
            let adj_check = adj.clone();
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                g.neighbors(v).iter().all(|&u| adj_check.contains(&(c[v], c[u])))
            });
            let instance =
                ProblemInstance::uniform(g, WeightAlgebra::MinPlus, int_tokens(0..=hn - 1), |_| 0, check);
            let adj_sys = adj.clone();
            let system = Arc::new(TupleSystem::boolean(
                AccKind::And,
                move |_, i, _, j| adj_sys.contains(&(i, j)),
                |_, _, n| n,
            ));
            Ok(Bundle {
                instance,
                system,
                transform: AppliedTransform::None,
                constraints: vec![],
            })
        }
        "dominating-set" => {
            instantiate("k-tuple-domination", &serde_json::json!({ "k": 1 }), &g)
        }
        "total-domination" => {
            instantiate("total-k-tuple-domination", &serde_json::json!({ "k": 1 }), &g)
        }
        "k-tuple-domination" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] + g.neighbors(v).iter().map(|&u| c[u]).sum::<usize>() >= k
            });
            Ok(counter_bundle(g, WeightAlgebra::MinPlus, 2, k as u16, check, move |_, i, n| {
                n as usize + i >= k
            }))
        }
        "total-k-tuple-domination" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                g.neighbors(v).iter().map(|&u| c[u]).sum::<usize>() >= k
            });
            Ok(counter_bundle(g, WeightAlgebra::MinPlus, 2, k as u16, check, move |_, _, n| {
                n as usize >= k
            }))
        }
        "k-domination" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] == 1 || g.neighbors(v).iter().map(|&u| c[u]).sum::<usize>() >= k
            });
            Ok(counter_bundle(g, WeightAlgebra::MinPlus, 2, k as u16, check, move |_, i, n| {
                i == 1 || n as usize >= k
            }))
        }
        "{k}-domination" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] + g.neighbors(v).iter().map(|&u| c[u]).sum::<usize>() >= k
            });
            Ok(counter_bundle(g, WeightAlgebra::MinPlus, k + 1, k as u16, check, move |_, i, n| {
                n as usize + i >= k
            }))
        }
        "k-rainbow-domination" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            if k > 8 {
                return Err(CatalogError::InvalidParameter("k", "at most 8".into()));
            }
            let full = (1usize << k) - 1;
            let tokens: Vec<String> = (0..=full)
                .map(|mask| {
                    let inside: Vec<String> =
                        (1..=k).filter(|b| mask & (1 << (b - 1)) != 0).map(|b| b.to_string()).collect();
                    format!("{{{}}}", inside.join(","))
                })
                .collect();
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                let mut union = c[v];
                for &u in g.neighbors(v) {
                    union |= c[u];
                }
                union == full
            });
            let instance = ProblemInstance::uniform(
                g,
                WeightAlgebra::MinPlus,
                tokens,
                |i| (i as u64).count_ones() as i64,
                check,
            );
            let system = Arc::new(TupleSystem::new(
                vec![AccKind::UnionBits(k as u8)],
                Arc::new(|_, _, _, j| SmallVec::from_slice(&[j as u16])),
                Arc::new(move |_, i, t| (t[0] as usize | i).count_ones() as usize == k),
            ));
            Ok(Bundle {
                instance,
                system,
                transform: AppliedTransform::None,
                constraints: vec![],
            })
        }
        "roman-domination" => {
            let check = Arc::new(|g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] != 0 || g.neighbors(v).iter().any(|&u| c[u] == 2)
            });
            let instance =
                ProblemInstance::uniform(g, WeightAlgebra::MinPlus, int_tokens(0..=2), |i| i as i64, check);
            let system = Arc::new(TupleSystem::boolean(
                AccKind::Or,
                |_, _, _, j| j == 2,
                |_, i, n| i != 0 || n,
            ));
            Ok(Bundle {
                instance,
                system,
                transform: AppliedTransform::None,
                constraints: vec![],
            })
        }
        "independent-set" => {
            let check = Arc::new(|g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] == 0 || g.neighbors(v).iter().all(|&u| c[u] == 0)
            });
            Ok(counter_bundle(g, WeightAlgebra::MaxPlus, 2, 1, check, |_, i, n| {
                i == 0 || n == 0
            }))
        }
        "{k}-packing-function" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] + g.neighbors(v).iter().map(|&u| c[u]).sum::<usize>() <= k
            });
            Ok(counter_bundle(g, WeightAlgebra::MaxPlus, k + 1, k as u16 + 1, check, move |_, i, n| {
                n as usize + i <= k
            }))
        }
        "{k}-limited-packing" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                c[v] + g.neighbors(v).iter().map(|&u| c[u]).sum::<usize>() <= k
            });
            Ok(counter_bundle(g, WeightAlgebra::MaxPlus, 2, k as u16 + 1, check, move |_, i, n| {
                n as usize + i <= k
            }))
        }
        "double-roman-domination" => {
            let check = Arc::new(|g: &LabeledGraph, v: usize, c: &[ColorId]| {
                let twos = g.neighbors(v).iter().filter(|&&u| c[u] == 2).count();
                let threes = g.neighbors(v).iter().filter(|&&u| c[u] == 3).count();
                (c[v] != 0 || twos >= 2 || threes >= 1) && (c[v] != 1 || twos + threes >= 1)
            });
            let instance =
                ProblemInstance::uniform(g, WeightAlgebra::MinPlus, int_tokens(0..=3), |i| i as i64, check);
            let system = Arc::new(TupleSystem::new(
                vec![AccKind::SatAdd(2), AccKind::SatAdd(1)],
                Arc::new(|_, _, _, j| match j {
                    2 => SmallVec::from_slice(&[1, 0]),
                    3 => SmallVec::from_slice(&[0, 1]),
                    _ => SmallVec::from_slice(&[0, 0]),
                }),
                Arc::new(|_, i, t| {
                    (i != 0 || t[0] >= 2 || t[1] >= 1) && (i != 1 || t[0] + t[1] >= 1)
                }),
            ));
            Ok(Bundle {
                instance,
                system,
                transform: AppliedTransform::None,
                constraints: vec![],
            })
        }
        "grundy-domination" => grundy_bundle(g, false),
        "grundy-total-domination" => grundy_bundle(g, true),
        "chromatic-violation" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let weak_raw = params
                .get("weak")
                .map(|w| {
                    w.as_array()
                        .ok_or_else(|| CatalogError::InvalidParameter("weak", "expected an array".into()))
                })
                .transpose()?
                .cloned()
                .unwrap_or_default();
            let mut weak: HashSet<(usize, usize)> = HashSet::new();
            for e in &weak_raw {
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| CatalogError::InvalidParameter("weak", "expected pairs".into()))?;
                let a = pair[0].as_u64().unwrap_or(u64::MAX) as usize;
                let b = pair[1].as_u64().unwrap_or(u64::MAX) as usize;
                if !g.has_edge(a, b) {
                    return Err(CatalogError::EdgeNotInGraph(a, b));
                }
                weak.insert((a.min(b), a.max(b)));
            }
            chromatic_violation_bundle(&g, weak, k)
        }
        "additive-coloring" => {
            let delta = g.max_degree();
            let default_eta = if delta == 0 { 1 } else { delta * delta - delta + 1 };
            let eta = positive(param_usize_or(params, "eta", default_eta)?, "eta")?;
            additive_bundle(g, eta)
        }
        "distance-domination" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let route = params.get("route").and_then(|r| r.as_str()).unwrap_or("native");
            match route {
                "native" => {
                    let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
                        c[v] == 0 || g.neighbors(v).iter().any(|&u| c[u] + 1 == c[v])
                    });
                    let instance = ProblemInstance::uniform(
                        g,
                        WeightAlgebra::MinPlus,
                        int_tokens(0..=k),
                        |i| if i == 0 { 1 } else { 0 },
                        check,
                    );
                    let system = Arc::new(TupleSystem::boolean(
                        AccKind::Or,
                        |_, i, _, j| j + 1 == i,
                        |_, i, n| i == 0 || n,
                    ));
                    Ok(Bundle {
                        instance,
                        system,
                        transform: AppliedTransform::None,
                        constraints: vec![],
                    })
                }
                "power" => {
                    let powered = graph_power(&g, k);
                    let mut bundle =
                        instantiate("dominating-set", &serde_json::json!({}), &powered)?;
                    bundle.transform = AppliedTransform::Power(k);
                    Ok(bundle)
                }
                other => Err(CatalogError::InvalidParameter(
                    "route",
                    format!("`{other}` is not `native` or `power`"),
                )),
            }
        }
        "semitotal-domination" => {
            no_isolated(&g)?;
            // colors: 0 = in D with a D-neighbor, 1 = in D with a witness at
            // distance two, 2 = outside D, 3 = outside D acting as the nexus
            let check = Arc::new(|g: &LabeledGraph, v: usize, c: &[ColorId]| {
                let dom = |u: usize| c[u] == 0 || c[u] == 1;
                match c[v] {
                    0 | 2 => g.neighbors(v).iter().any(|&u| dom(u)),
                    1 => g.neighbors(v).iter().any(|&u| c[u] == 3),
                    _ => g.neighbors(v).iter().filter(|&&u| dom(u)).count() >= 2,
                }
            });
            let instance = ProblemInstance::uniform(
                g,
                WeightAlgebra::MinPlus,
                vec!["D1".into(), "D2".into(), "out".into(), "nexus".into()],
                |i| if i <= 1 { 1 } else { 0 },
                check,
            );
            let system = Arc::new(TupleSystem::counter(
                2,
                |_, i, _, j| {
                    if i == 1 {
                        (j == 3) as u16
                    } else {
                        (j <= 1) as u16
                    }
                },
                |_, i, n| if i == 3 { n >= 2 } else { n >= 1 },
            ));
            Ok(Bundle {
                instance,
                system,
                transform: AppliedTransform::None,
                constraints: vec![],
            })
        }
        "vertex-cover" | "edge-cover" | "matching" | "edge-domination" => edge_problem(name, &g),
        "connected-dominating-set" => {
            let mut bundle = instantiate("dominating-set", &serde_json::json!({}), &g)?;
            bundle.constraints = vec![GlobalConstraint::Connected { colors: vec![1] }];
            Ok(bundle)
        }
        "k-independent-set" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            let powered = graph_power(&g, k);
            let mut bundle = instantiate("independent-set", &serde_json::json!({}), &powered)?;
            bundle.transform = AppliedTransform::Power(k);
            Ok(bundle)
        }
        "l-h-k-labeling" => {
            let h = param_usize(params, "h")?;
            let k2 = param_usize(params, "k")?;
            let span = param_usize(params, "span")?;
            lhk_bundle(&g, h, k2, span)
        }
        "packing-chromatic" => {
            let k = positive(param_usize(params, "k")?, "k")?;
            packing_chromatic_bundle(&g, k)
        }
        other => Err(CatalogError::UnknownProblem(other.to_string())),
    }
}

/// Grundy (total) domination via position/footprinter pairs. A color is a
/// pair `(p, f)` with `p` the vertex's position in the sequence (or `n+1`
/// for "not selected") and `f` the position of its footprinter.
fn grundy_bundle(g: Arc<LabeledGraph>, total: bool) -> Result<Bundle, CatalogError> {
    let n = g.vertex_count();
    let bottom = n + 1;
    // color id = (p - 1) * n + (f - 1), p in 1..=n+1, f in 1..=n
    let decode = move |i: ColorId| -> (usize, usize) { (i / n + 1, i % n + 1) };
    let tokens: Vec<String> = (0..(n + 1) * n)
        .map(|i| {
            let (p, f) = decode(i);
            if p == bottom {
                format!("(-,{f})")
            } else {
                format!("({p},{f})")
            }
        })
        .collect();
    let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
        let (p, f) = decode(c[v]);
        let closed = !total;
        let mut matches = 0usize;
        if closed && p == f {
            matches += 1;
        }
        for &u in g.neighbors(v) {
            let (pu, _) = decode(c[u]);
            if f == pu {
                matches += 1;
            }
        }
        if matches != 1 {
            return false;
        }
        if closed && f > p {
            return false;
        }
        if g.neighbors(v).iter().any(|&u| f > decode(c[u]).0) {
            return false;
        }
        if p != bottom {
            let footprints_someone = (closed && p == f)
                || g.neighbors(v).iter().any(|&u| decode(c[u]).1 == p);
            if !footprints_someone {
                return false;
            }
            if g.neighbors(v).iter().any(|&u| decode(c[u]).0 == p) {
                return false;
            }
        }
        true
    });
    let instance = ProblemInstance::uniform(
        g,
        WeightAlgebra::MaxPlus,
        tokens,
        move |i| if decode(i).0 == bottom { 0 } else { 1 },
        check,
    );
    let observe = move |_: usize, i: ColorId, _: usize, j: ColorId| -> SmallVec<[u16; 4]> {
        let (p, f) = decode(i);
        let (pu, fu) = decode(j);
        SmallVec::from_slice(&[
            (f == pu) as u16,
            (f <= pu) as u16,
            (p == fu) as u16,
            (p != pu) as u16,
        ])
    };
    let accept = move |_: usize, i: ColorId, t: &[u16]| -> bool {
        let (p, f) = decode(i);
        let closed = !total;
        let self_match = closed && p == f;
        let cond1 = if self_match { t[0] == 0 } else { t[0] == 1 };
        let cond2 = t[1] == 1 && (!closed || f <= p);
        let cond3 = p == bottom || t[2] == 1 || self_match;
        let cond4 = p == bottom || t[3] == 1;
        cond1 && cond2 && cond3 && cond4
    };
    let system = Arc::new(TupleSystem::new(
        vec![AccKind::SatAdd(2), AccKind::And, AccKind::Or, AccKind::And],
        Arc::new(observe),
        Arc::new(accept),
    ));
    Ok(Bundle {
        instance,
        system,
        transform: AppliedTransform::None,
        constraints: vec![],
    })
}

/// Minimum chromatic violation on the subdivision graph: edge vertices are
/// colored with endpoint-color pairs and charge 1 when monochromatic.
fn chromatic_violation_bundle(
    g: &Arc<LabeledGraph>,
    weak: HashSet<(usize, usize)>,
    k: usize,
) -> Result<Bundle, CatalogError> {
    let (sg, map) = transform_subdivision(g);
    let n = g.vertex_count();
    let sg = Arc::new(sg);
    // ids: 0..k are vertex colors 1..=k; k + (a-1)*k + (b-1) is the pair (a, b)
    let _pair_id = move |a: usize, b: usize| k + (a - 1) * k + (b - 1);
    let decode_pair = move |i: ColorId| -> (usize, usize) { ((i - k) / k + 1, (i - k) % k + 1) };
    let mut tokens = int_tokens(1..=k);
    for a in 1..=k {
        for b in 1..=k {
            tokens.push(format!("({a},{b})"));
        }
    }
    let vertex_list: Arc<Vec<ColorId>> = Arc::new((0..k).collect());
    let pair_list: Arc<Vec<ColorId>> = Arc::new((k..k + k * k).collect());
    let mut lists = Vec::with_capacity(sg.vertex_count());
    let mut costs: Vec<Arc<Vec<Weight>>> = Vec::with_capacity(sg.vertex_count());
    let vertex_costs: Arc<Vec<Weight>> = Arc::new(vec![Weight::Value(0); k]);
    let pair_costs: Arc<Vec<Weight>> = Arc::new(
        (0..k * k)
            .map(|off| {
                let (a, b) = (off / k + 1, off % k + 1);
                Weight::Value(if a == b { 1 } else { 0 })
            })
            .collect(),
    );
    for v in 0..sg.vertex_count() {
        if v < n {
            lists.push(vertex_list.clone());
            costs.push(vertex_costs.clone());
        } else {
            lists.push(pair_list.clone());
            costs.push(pair_costs.clone());
        }
    }
    let map = Arc::new(map);
    let weak = Arc::new(weak);
    let origin = {
        let map = map.clone();
        move |x: usize| match map.origin(x) {
            crate::graph::VertexOrigin::Edge(u, v) => (u, v),
            crate::graph::VertexOrigin::Vertex(_) => unreachable!(),
        }
    };
    let check = {
        let weak = weak.clone();
        let origin = origin.clone();
        Arc::new(move |_: &LabeledGraph, x: usize, c: &[ColorId]| {
            if x < n {
                return true;
            }
            let (u, v) = origin(x);
            let (a, b) = decode_pair(c[x]);
            c[u] + 1 == a && c[v] + 1 == b && (weak.contains(&(u, v)) || a != b)
        })
    };
    let instance = ProblemInstance::new(sg, WeightAlgebra::MinPlus, tokens, lists, costs, check)
        .expect("chromatic violation instance is well formed");
    let observe = {
        let origin = origin.clone();
        move |x: usize, i: ColorId, w: usize, j: ColorId| -> SmallVec<[u16; 4]> {
            if x < n {
                return SmallVec::from_slice(&[1]);
            }
            let (u, _v) = origin(x);
            let (a, b) = decode_pair(i);
            let expected = if w == u { a } else { b };
            SmallVec::from_slice(&[(j + 1 == expected) as u16])
        }
    };
    let accept = {
        let weak = weak.clone();
        move |x: usize, i: ColorId, t: &[u16]| -> bool {
            if x < n {
                return true;
            }
            let (u, v) = origin(x);
            let (a, b) = decode_pair(i);
            t[0] == 1 && (weak.contains(&(u, v)) || a != b)
        }
    };
    let system = Arc::new(TupleSystem::new(
        vec![AccKind::And],
        Arc::new(observe),
        Arc::new(accept),
    ));
    Ok(Bundle {
        instance,
        system,
        transform: AppliedTransform::Subdivision((*map).clone()),
        constraints: vec![],
    })
}

/// Additive coloring: colors are pairs (number, claimed neighbor sum); the
/// check pins the claimed sum to the actual one and requires adjacent sums
/// to differ.
fn additive_bundle(g: Arc<LabeledGraph>, eta: usize) -> Result<Bundle, CatalogError> {
    let delta = g.max_degree();
    let max_sum = delta * eta;
    // color id = (a - 1) * (max_sum + 1) + s, a in 1..=eta, s in 0..=max_sum
    let decode = move |i: ColorId| -> (usize, usize) { (i / (max_sum + 1) + 1, i % (max_sum + 1)) };
    let tokens: Vec<String> = (0..eta * (max_sum + 1))
        .map(|i| {
            let (a, s) = decode(i);
            format!("({a},{s})")
        })
        .collect();
    let check = Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
        let (_, s) = decode(c[v]);
        let actual: usize = g.neighbors(v).iter().map(|&u| decode(c[u]).0).sum();
        s == actual && g.neighbors(v).iter().all(|&u| decode(c[u]).1 != s)
    });
    let instance = ProblemInstance::uniform(
        g,
        WeightAlgebra::MinMax,
        tokens,
        move |i| decode(i).0 as i64,
        check,
    );
    let observe = move |_: usize, i: ColorId, _: usize, j: ColorId| -> SmallVec<[u16; 4]> {
        let (_, s) = decode(i);
        let (aj, sj) = decode(j);
        SmallVec::from_slice(&[(s != sj) as u16, aj as u16])
    };
    let accept = move |_: usize, i: ColorId, t: &[u16]| -> bool {
        let (_, s) = decode(i);
        t[0] == 1 && t[1] as usize == s
    };
    let system = Arc::new(TupleSystem::new(
        vec![AccKind::And, AccKind::SatAdd(max_sum as u16 + 1)],
        Arc::new(observe),
        Arc::new(accept),
    ));
    Ok(Bundle {
        instance,
        system,
        transform: AppliedTransform::None,
        constraints: vec![],
    })
}

/// Edge problems on the jagged graph: edge-vertices carry the edge's color
/// and the original vertices relay or aggregate incident information.
fn edge_problem(name: &str, g: &Arc<LabeledGraph>) -> Result<Bundle, CatalogError> {
    if name == "edge-cover" {
        no_isolated(g)?;
    }
    let (jg, map) = transform_jagged(g);
    let n = g.vertex_count();
    let jg = Arc::new(jg);
    let is_edge_vertex = move |x: usize| x >= n;
    let zero_list: Arc<Vec<ColorId>> = Arc::new(vec![0]);
    let both_list: Arc<Vec<ColorId>> = Arc::new(vec![0, 1]);
    let zero_costs: Arc<Vec<Weight>> = Arc::new(vec![Weight::Value(0)]);
    let value_costs: Arc<Vec<Weight>> = Arc::new(vec![Weight::Value(0), Weight::Value(1)]);
    let free_costs: Arc<Vec<Weight>> = Arc::new(vec![Weight::Value(0), Weight::Value(0)]);
    let tokens = vec!["0".to_string(), "1".to_string()];
    let (algebra, lists, costs): (WeightAlgebra, Vec<Arc<Vec<ColorId>>>, Vec<Arc<Vec<Weight>>>) =
        match name {
            "vertex-cover" => (
                WeightAlgebra::MinPlus,
                (0..jg.vertex_count())
                    .map(|x| if is_edge_vertex(x) { zero_list.clone() } else { both_list.clone() })
                    .collect(),
                (0..jg.vertex_count())
                    .map(|x| if is_edge_vertex(x) { zero_costs.clone() } else { value_costs.clone() })
                    .collect(),
            ),
            "matching" | "edge-cover" => (
                if name == "matching" { WeightAlgebra::MaxPlus } else { WeightAlgebra::MinPlus },
                (0..jg.vertex_count())
                    .map(|x| if is_edge_vertex(x) { both_list.clone() } else { zero_list.clone() })
                    .collect(),
                (0..jg.vertex_count())
                    .map(|x| if is_edge_vertex(x) { value_costs.clone() } else { zero_costs.clone() })
                    .collect(),
            ),
            "edge-domination" => (
                WeightAlgebra::MinPlus,
                vec![both_list.clone(); jg.vertex_count()],
                (0..jg.vertex_count())
                    .map(|x| if is_edge_vertex(x) { value_costs.clone() } else { free_costs.clone() })
                    .collect(),
            ),
            _ => unreachable!(),
        };
    let check: crate::instance::CheckFn = match name {
        "vertex-cover" => Arc::new(move |jg: &LabeledGraph, x: usize, c: &[ColorId]| {
            !is_edge_vertex(x) || jg.neighbors(x).iter().map(|&u| c[u]).sum::<usize>() >= 1
        }),
        "matching" => Arc::new(move |jg: &LabeledGraph, x: usize, c: &[ColorId]| {
            is_edge_vertex(x)
                || jg
                    .neighbors(x)
                    .iter()
                    .filter(|&&u| is_edge_vertex(u))
                    .map(|&u| c[u])
                    .sum::<usize>()
                    <= 1
        }),
        "edge-cover" => Arc::new(move |jg: &LabeledGraph, x: usize, c: &[ColorId]| {
            is_edge_vertex(x)
                || jg
                    .neighbors(x)
                    .iter()
                    .filter(|&&u| is_edge_vertex(u))
                    .map(|&u| c[u])
                    .sum::<usize>()
                    >= 1
        }),
        "edge-domination" => Arc::new(move |jg: &LabeledGraph, x: usize, c: &[ColorId]| {
            if is_edge_vertex(x) {
                // an unchosen edge needs an endpoint that claims coverage
                c[x] == 1 || jg.neighbors(x).iter().any(|&u| c[u] == 1)
            } else {
                // the claim must be backed by a chosen incident edge
                c[x] == 0
                    || jg
                        .neighbors(x)
                        .iter()
                        .any(|&u| is_edge_vertex(u) && c[u] == 1)
            }
        }),
        _ => unreachable!(),
    };
    let instance = ProblemInstance::new(jg, algebra, tokens, lists, costs, check)
        .expect("edge problem instance is well formed");
    let system: SharedSystem = match name {
        "vertex-cover" => Arc::new(TupleSystem::counter(
            1,
            |_, _, _, j| j as u16,
            move |x, _, nacc| !is_edge_vertex(x) || nacc >= 1,
        )),
        "matching" => Arc::new(TupleSystem::counter(
            2,
            move |_, _, u, j| if is_edge_vertex(u) { j as u16 } else { 0 },
            move |x, _, nacc| is_edge_vertex(x) || nacc <= 1,
        )),
        "edge-cover" => Arc::new(TupleSystem::counter(
            1,
            move |_, _, u, j| if is_edge_vertex(u) { j as u16 } else { 0 },
            move |x, _, nacc| is_edge_vertex(x) || nacc >= 1,
        )),
        "edge-domination" => Arc::new(TupleSystem::counter(
            1,
            move |x, _, u, j| {
                if is_edge_vertex(x) {
                    j as u16
                } else if is_edge_vertex(u) {
                    j as u16
                } else {
                    0
                }
            },
            move |x, i, nacc| {
                if is_edge_vertex(x) {
                    i == 1 || nacc >= 1
                } else {
                    i == 0 || nacc >= 1
                }
            },
        )),
        _ => unreachable!(),
    };
    // edge-domination: an edge vertex accumulates endpoint claims (both
    // neighbors are original vertices) while an original vertex counts its
    // chosen incident edges; the accept clauses encode c=0 -> covered and
    // c=1 -> backed, respectively. The shared counter shape keeps both in
    // one system since an edge vertex's neighbors are never edge vertices.
    Ok(Bundle {
        instance,
        system,
        transform: AppliedTransform::Jagged(map),
        constraints: vec![],
    })
}

/// Distance-constrained labeling on a distance-labeled square of the
/// input: adjacent labels differ by at least `h`, labels at distance two
/// by at least `k`.
fn lhk_bundle(g: &Arc<LabeledGraph>, h: usize, k: usize, span: usize) -> Result<Bundle, CatalogError> {
    let mut labeled = LabeledGraph::new(g.vertex_count());
    for v in 0..g.vertex_count() {
        let dist = g.bfs_distances(v);
        for u in v + 1..g.vertex_count() {
            match dist[u] {
                Some(1) => labeled.add_edge_labeled(v, u, "1".into()).unwrap(),
                Some(2) => labeled.add_edge_labeled(v, u, "2".into()).unwrap(),
                _ => {}
            }
        }
    }
    let labeled = Arc::new(labeled);
    let check = Arc::new(move |lg: &LabeledGraph, v: usize, c: &[ColorId]| {
        lg.neighbors(v).iter().all(|&u| {
            let need = if lg.label(v, u) == Some("1") { h } else { k };
            c[v].abs_diff(c[u]) >= need
        })
    });
    let instance = ProblemInstance::uniform(
        labeled.clone(),
        WeightAlgebra::MinMax,
        int_tokens(0..=span),
        |i| i as i64,
        check,
    );
    let lg = labeled.clone();
    let system = Arc::new(TupleSystem::boolean(
        AccKind::And,
        move |v, i, u, j| {
            let need = if lg.label(v, u) == Some("1") { h } else { k };
            i.abs_diff(j) >= need
        },
        |_, _, nacc| nacc,
    ));
    Ok(Bundle {
        instance,
        system,
        transform: AppliedTransform::LabeledPower(2),
        constraints: vec![],
    })
}

/// Packing chromatic number: class `i` demands pairwise distance greater
/// than `i`; encoded on the distance-labeled `k`-th power.
fn packing_chromatic_bundle(g: &Arc<LabeledGraph>, k: usize) -> Result<Bundle, CatalogError> {
    let mut labeled = LabeledGraph::new(g.vertex_count());
    for v in 0..g.vertex_count() {
        let dist = g.bfs_distances(v);
        for u in v + 1..g.vertex_count() {
            if let Some(d) = dist[u] {
                if d >= 1 && d <= k {
                    labeled.add_edge_labeled(v, u, d.to_string()).unwrap();
                }
            }
        }
    }
    let labeled = Arc::new(labeled);
    let check = Arc::new(move |lg: &LabeledGraph, v: usize, c: &[ColorId]| {
        lg.neighbors(v).iter().all(|&u| {
            let d: usize = lg.label(v, u).unwrap().parse().unwrap();
            c[u] != c[v] || d > c[v] + 1
        })
    });
    let instance = ProblemInstance::uniform(
        labeled.clone(),
        WeightAlgebra::MinMax,
        int_tokens(1..=k),
        |i| i as i64 + 1,
        check,
    );
    let lg = labeled.clone();
    let system = Arc::new(TupleSystem::boolean(
        AccKind::And,
        move |v, i, u, j| {
            let d: usize = lg.label(v, u).unwrap().parse().unwrap();
            j != i || d > i + 1
        },
        |_, _, nacc| nacc,
    ));
    Ok(Bundle {
        instance,
        system,
        transform: AppliedTransform::LabeledPower(k),
        constraints: vec![],
    })
}

/// The two complete-graph encodings of the domination problem, kept as
/// test fixtures for the flow solver and the oracle.
pub mod complete_reductions {
    use super::*;
    use crate::flow::DistributionCheck;

    /// Domination encoded on a complete graph with 0/1 edge labels; only
    /// the oracle can evaluate this one (the check reads labels).
    pub fn domination_label_reduction(g: &LabeledGraph) -> ProblemInstance {
        let n = g.vertex_count();
        let mut complete = LabeledGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                let label = if g.has_edge(u, v) { "1" } else { "0" };
                complete.add_edge_labeled(u, v, label.into()).unwrap();
            }
        }
        ProblemInstance::uniform(
            Arc::new(complete),
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into()],
            |i| i as i64,
            Arc::new(|cg: &LabeledGraph, v: usize, c: &[ColorId]| {
                let covered: usize = cg
                    .neighbors(v)
                    .iter()
                    .map(|&u| if cg.label(v, u) == Some("1") { c[u] } else { 0 })
                    .sum();
                c[v] + covered >= 1
            }),
        )
    }

    /// Domination encoded on a complete graph with unit labels: each
    /// vertex picks either the empty set or its closed ball in the
    /// original graph; the check only needs global color counts.
    pub fn domination_list_reduction(g: &LabeledGraph) -> (ProblemInstance, DistributionCheck) {
        let n = g.vertex_count();
        let complete = Arc::new(crate::graph::complete(n));
        // color 0 is the empty set; color 1 + u is N_G[u]
        let balls: Arc<Vec<Vec<usize>>> = Arc::new((0..n).map(|u| g.closed_ball(u, 1)).collect());
        let mut tokens = vec!["{}".to_string()];
        tokens.extend((0..n).map(|u| format!("N[{u}]")));
        let lists: Vec<Arc<Vec<ColorId>>> =
            (0..n).map(|v| Arc::new(vec![0, 1 + v])).collect();
        let costs: Vec<Arc<Vec<Weight>>> =
            (0..n).map(|_| Arc::new(vec![Weight::Value(0), Weight::Value(1)])).collect();
        let balls_check = balls.clone();
        let check = Arc::new(move |cg: &LabeledGraph, v: usize, c: &[ColorId]| {
            let in_set = |color: ColorId| color > 0 && balls_check[color - 1].binary_search(&v).is_ok();
            in_set(c[v]) || cg.neighbors(v).iter().any(|&u| in_set(c[u]))
        });
        let instance = ProblemInstance::new(
            complete,
            WeightAlgebra::MinPlus,
            tokens,
            lists,
            costs,
            check,
        )
        .expect("list reduction instance is well formed");
        let dist_check: DistributionCheck = Arc::new(move |v, _i, counts| {
            counts
                .iter()
                .enumerate()
                .any(|(color, &cnt)| cnt >= 1 && color > 0 && balls[color - 1].binary_search(&v).is_ok())
        });
        (instance, dist_check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{solve, SolveOptions};
    use crate::graph::{complete, cycle, path};
    use crate::oracle::brute_force_solve;
    use crate::pns::pns_selfcheck;
    use crate::treedec::{heuristic_decomposition, to_easy};

    fn dp(bundle: &Bundle) -> Weight {
        let g = &bundle.instance.graph;
        let td = heuristic_decomposition(g);
        let etd = to_easy(g, &td).unwrap();
        solve(
            &bundle.instance,
            bundle.system.as_ref(),
            &etd,
            &bundle.constraints,
            &SolveOptions::default(),
        )
        .unwrap()
        .optimum
    }

    fn named(name: &str, params: Value, g: &LabeledGraph) -> Bundle {
        instantiate(name, &params, g).unwrap()
    }

    #[test]
    fn k_coloring_c5() {
        let b = named("k-coloring", serde_json::json!({"k": 3}), &cycle(5));
        assert_eq!(dp(&b), Weight::Value(3));
    }

    #[test]
    fn roman_domination_p4() {
        let b = named("roman-domination", serde_json::json!({}), &path(4));
        assert_eq!(dp(&b), Weight::Value(3));
        assert_eq!(
            brute_force_solve(&b.instance, &[], None, false).unwrap().optimum,
            Weight::Value(3)
        );
    }

    #[test]
    fn brace_domination_k2() {
        let b = named("{k}-domination", serde_json::json!({"k": 2}), &path(2));
        assert_eq!(dp(&b), Weight::Value(2));
    }

    #[test]
    fn double_roman_p3() {
        let b = named("double-roman-domination", serde_json::json!({}), &path(3));
        assert_eq!(dp(&b), Weight::Value(3));
    }

    #[test]
    fn independent_set_c5() {
        let b = named("independent-set", serde_json::json!({}), &cycle(5));
        assert_eq!(dp(&b), Weight::Value(2));
    }

    #[test]
    fn rainbow_domination_p2() {
        let b = named("k-rainbow-domination", serde_json::json!({"k": 2}), &path(2));
        assert_eq!(dp(&b), Weight::Value(2));
    }

    #[test]
    fn grundy_small() {
        let b = named("grundy-domination", serde_json::json!({}), &path(3));
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("grundy-domination", serde_json::json!({}), &LabeledGraph::new(1));
        assert_eq!(dp(&b), Weight::Value(1));
        let b = named("grundy-total-domination", serde_json::json!({}), &path(2));
        assert_eq!(dp(&b), Weight::Value(2));
    }

    #[test]
    fn chromatic_violation_examples() {
        let b = named(
            "chromatic-violation",
            serde_json::json!({"k": 2, "weak": [[0, 1]]}),
            &complete(3),
        );
        assert_eq!(dp(&b), Weight::Value(1));
        let b = named("chromatic-violation", serde_json::json!({"k": 3}), &complete(3));
        assert_eq!(dp(&b), Weight::Value(0));
        let b = named("chromatic-violation", serde_json::json!({"k": 1}), &path(3));
        assert_eq!(dp(&b), Weight::Error);
        assert!(matches!(
            instantiate(
                "chromatic-violation",
                &serde_json::json!({"k": 2, "weak": [[0, 2]]}),
                &path(3)
            ),
            Err(CatalogError::EdgeNotInGraph(0, 2))
        ));
    }

    #[test]
    fn additive_coloring_examples() {
        let b = named("additive-coloring", serde_json::json!({"eta": 4}), &path(2));
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("additive-coloring", serde_json::json!({"eta": 4}), &path(3));
        assert_eq!(dp(&b), Weight::Value(1));
        let b = named("additive-coloring", serde_json::json!({"eta": 1}), &LabeledGraph::new(1));
        assert_eq!(dp(&b), Weight::Value(1));
    }

    #[test]
    fn distance_domination_examples() {
        let b = named("distance-domination", serde_json::json!({"k": 2}), &path(5));
        assert_eq!(dp(&b), Weight::Value(1));
        let b = named("distance-domination", serde_json::json!({"k": 1}), &path(5));
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("distance-domination", serde_json::json!({"k": 3}), &LabeledGraph::new(1));
        assert_eq!(dp(&b), Weight::Value(1));
        // both routes agree
        let native = named("distance-domination", serde_json::json!({"k": 2}), &path(6));
        let power = named(
            "distance-domination",
            serde_json::json!({"k": 2, "route": "power"}),
            &path(6),
        );
        assert_eq!(dp(&native), dp(&power));
    }

    #[test]
    fn semitotal_domination_examples() {
        let b = named("semitotal-domination", serde_json::json!({}), &path(4));
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("semitotal-domination", serde_json::json!({}), &path(2));
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("semitotal-domination", serde_json::json!({}), &cycle(6));
        let oracle = brute_force_solve(&b.instance, &[], None, false).unwrap().optimum;
        assert_eq!(dp(&b), oracle);
        assert!(matches!(
            instantiate("semitotal-domination", &serde_json::json!({}), &LabeledGraph::new(2)),
            Err(CatalogError::IsolatedVertex(0))
        ));
    }

    #[test]
    fn edge_problems_examples() {
        let b = named("vertex-cover", serde_json::json!({}), &path(3));
        assert_eq!(dp(&b), Weight::Value(1));
        let b = named("matching", serde_json::json!({}), &cycle(4));
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("edge-cover", serde_json::json!({}), &path(2));
        assert_eq!(dp(&b), Weight::Value(1));
        let b = named("edge-domination", serde_json::json!({}), &path(4));
        assert_eq!(dp(&b), Weight::Value(1));
    }

    #[test]
    fn power_reduction_entries() {
        let b = named("k-independent-set", serde_json::json!({"k": 2}), &path(5));
        // vertices pairwise at distance >= 3 in P5: {0, 3} or {0, 4} etc
        assert_eq!(dp(&b), Weight::Value(2));
        let b = named("l-h-k-labeling", serde_json::json!({"h": 2, "k": 1, "span": 4}), &path(3));
        let oracle = brute_force_solve(&b.instance, &[], None, false).unwrap().optimum;
        assert_eq!(dp(&b), oracle);
        let b = named("packing-chromatic", serde_json::json!({"k": 3}), &path(4));
        let oracle = brute_force_solve(&b.instance, &[], None, false).unwrap().optimum;
        assert_eq!(dp(&b), oracle);
    }

    #[test]
    fn connected_dominating_set_entry() {
        let b = named("connected-dominating-set", serde_json::json!({}), &path(4));
        assert_eq!(b.constraints.len(), 1);
        assert_eq!(dp(&b), Weight::Value(2));
    }

    #[test]
    fn systems_selfcheck_on_small_graphs() {
        let g = LabeledGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]);
        for (name, params) in [
            ("k-coloring", serde_json::json!({"k": 3})),
            ("k-chromatic-sum", serde_json::json!({"k": 2})),
            ("k-tuple-domination", serde_json::json!({"k": 1})),
            ("total-k-tuple-domination", serde_json::json!({"k": 2})),
            ("k-domination", serde_json::json!({"k": 2})),
            ("{k}-domination", serde_json::json!({"k": 2})),
            ("k-rainbow-domination", serde_json::json!({"k": 2})),
            ("roman-domination", serde_json::json!({})),
            ("independent-set", serde_json::json!({})),
            ("{k}-packing-function", serde_json::json!({"k": 2})),
            ("{k}-limited-packing", serde_json::json!({"k": 1})),
            ("double-roman-domination", serde_json::json!({})),
            ("semitotal-domination", serde_json::json!({})),
            ("distance-domination", serde_json::json!({"k": 2})),
            ("additive-coloring", serde_json::json!({"eta": 2})),
            ("vertex-cover", serde_json::json!({})),
            ("matching", serde_json::json!({})),
            ("edge-cover", serde_json::json!({})),
            ("edge-domination", serde_json::json!({})),
        ] {
            let b = named(name, params, &g);
            pns_selfcheck(&b.instance, b.system.as_ref(), 20_000)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn h_coloring_entry() {
        // H = single edge: homomorphisms to K2 exist iff bipartite
        let h = serde_json::json!({"h": {"n": 2, "edges": [[0, 1]]}});
        let b = named("h-coloring", h.clone(), &path(4));
        assert_eq!(dp(&b), Weight::Value(0));
        let b = named("h-coloring", h, &cycle(5));
        assert_eq!(dp(&b), Weight::Error);
    }

    #[test]
    fn unknown_problem_reported() {
        assert!(matches!(
            instantiate("no-such-problem", &serde_json::json!({}), &path(2)),
            Err(CatalogError::UnknownProblem(_))
        ));
        assert!(matches!(
            instantiate("k-coloring", &serde_json::json!({}), &path(2)),
            Err(CatalogError::MissingParameter("k"))
        ));
    }
}
