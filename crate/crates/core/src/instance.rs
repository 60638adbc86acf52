//! Problem instances: one locally checkable problem on one graph.

use crate::algebra::{Weight, WeightAlgebra};
use crate::graph::LabeledGraph;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// Index into an instance's color universe.
pub type ColorId = usize;

/// The local feasibility predicate. Receives the graph, the vertex under
/// check and a full coloring slice; it must only read colors of vertices in
/// the radius-`r` ball of the vertex.
pub type CheckFn = Arc<dyn Fn(&LabeledGraph, usize, &[ColorId]) -> bool + Send + Sync>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("vertex {0} has an empty color list")]
    EmptyList(usize),
    #[error("cost of vertex {0}, color {1} is Error")]
    ErrorCost(usize, usize),
    #[error("color {1} not in the list of vertex {0}")]
    InvalidColor(usize, usize),
    #[error("coloring has length {0}, expected {1}")]
    WrongLength(usize, usize),
}

/// One locally checkable problem bound to one graph: per-vertex color
/// lists, per-color costs, a weight algebra and a check predicate.
#[derive(Clone)]
pub struct ProblemInstance {
    pub graph: Arc<LabeledGraph>,
    pub algebra: WeightAlgebra,
    /// Checking radius. The tree decomposition engine requires 1; larger
    /// radii are reduced through graph powers before instances are built.
    pub radius: usize,
    /// Display tokens of the color universe.
    pub colors: Arc<Vec<String>>,
    lists: Vec<Arc<Vec<ColorId>>>,
    costs: Vec<Arc<Vec<Weight>>>,
    pub check: CheckFn,
}

impl std::fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("n", &self.graph.vertex_count())
            .field("algebra", &self.algebra)
            .field("colors", &self.colors.len())
            .finish()
    }
}

impl ProblemInstance {
    /// Builds an instance, checking that every list is nonempty and no cost
    /// is `Error`.
    pub fn new(
        graph: Arc<LabeledGraph>,
        algebra: WeightAlgebra,
        colors: Vec<String>,
        lists: Vec<Arc<Vec<ColorId>>>,
        costs: Vec<Arc<Vec<Weight>>>,
        check: CheckFn,
    ) -> Result<Self, InstanceError> {
        assert_eq!(lists.len(), graph.vertex_count());
        assert_eq!(costs.len(), graph.vertex_count());
        for v in 0..graph.vertex_count() {
            if lists[v].is_empty() {
                return Err(InstanceError::EmptyList(v));
            }
            assert_eq!(lists[v].len(), costs[v].len());
            for (pos, w) in costs[v].iter().enumerate() {
                if w.is_error() {
                    return Err(InstanceError::ErrorCost(v, lists[v][pos]));
                }
            }
        }
        Ok(ProblemInstance {
            graph,
            algebra,
            radius: 1,
            colors: Arc::new(colors),
            lists,
            costs,
            check,
        })
    }

    /// Convenience constructor for instances where every vertex has the
    /// same list and the cost depends only on the color.
    pub fn uniform(
        graph: Arc<LabeledGraph>,
        algebra: WeightAlgebra,
        colors: Vec<String>,
        cost: impl Fn(ColorId) -> i64,
        check: CheckFn,
    ) -> Self {
        let n = graph.vertex_count();
        let list: Arc<Vec<ColorId>> = Arc::new((0..colors.len()).collect());
        let costs: Arc<Vec<Weight>> = Arc::new((0..colors.len()).map(|i| Weight::Value(cost(i))).collect());
        ProblemInstance::new(
            graph,
            algebra,
            colors,
            vec![list; n],
            vec![costs; n],
            check,
        )
        .expect("uniform instance is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// The color list `L_v`, in definition order.
    pub fn list(&self, v: usize) -> &[ColorId] {
        &self.lists[v]
    }

    /// `w_{v,i}`; panics if `i` is not in `L_v`.
    pub fn cost(&self, v: usize, i: ColorId) -> Weight {
        let pos = self.lists[v]
            .iter()
            .position(|&c| c == i)
            .expect("color not in list");
        self.costs[v][pos]
    }

    pub fn color_in_list(&self, v: usize, i: ColorId) -> bool {
        self.lists[v].contains(&i)
    }

    fn check_valid(&self, coloring: &[ColorId]) -> Result<(), InstanceError> {
        if coloring.len() != self.vertex_count() {
            return Err(InstanceError::WrongLength(
                coloring.len(),
                self.vertex_count(),
            ));
        }
        for (v, &c) in coloring.iter().enumerate() {
            if !self.color_in_list(v, c) {
                return Err(InstanceError::InvalidColor(v, c));
            }
        }
        Ok(())
    }

    /// True iff `check` holds at every vertex of a valid total coloring.
    pub fn is_proper(&self, coloring: &[ColorId]) -> Result<bool, InstanceError> {
        self.check_valid(coloring)?;
        Ok((0..self.vertex_count()).all(|v| (self.check)(&self.graph, v, coloring)))
    }

    /// `w(c)`: the fold of vertex costs under the algebra's combine. The
    /// empty graph yields the neutral element.
    pub fn coloring_weight(&self, coloring: &[ColorId]) -> Result<Weight, InstanceError> {
        self.check_valid(coloring)?;
        Ok(self
            .algebra
            .fold(coloring.iter().enumerate().map(|(v, &c)| self.cost(v, c))))
    }

    /// Serializable summary of the instance data (checks are code and are
    /// referenced through the problem identifier).
    pub fn describe(&self, problem: &str, params: serde_json::Value) -> InstanceDescriptor {
        InstanceDescriptor {
            problem: problem.to_string(),
            params,
            algebra: self.algebra.name().to_string(),
            colors: (*self.colors).clone(),
            lists: self
                .lists
                .iter()
                .map(|l| l.iter().map(|&c| self.colors[c].clone()).collect())
                .collect(),
            costs: self.costs.iter().map(|c| (**c).clone()).collect(),
        }
    }
}

/// JSON-facing instance summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub problem: String,
    pub params: serde_json::Value,
    pub algebra: String,
    pub colors: Vec<String>,
    pub lists: Vec<Vec<String>>,
    pub costs: Vec<Vec<Weight>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;

    fn dominating_set(g: LabeledGraph) -> ProblemInstance {
        ProblemInstance::uniform(
            Arc::new(g),
            WeightAlgebra::MinPlus,
            vec!["0".into(), "1".into()],
            |i| i as i64,
            Arc::new(|g, v, c| {
                c[v] == 1 || g.neighbors(v).iter().any(|&u| c[u] == 1)
            }),
        )
    }

    #[test]
    fn is_proper_dominating_set() {
        let inst = dominating_set(path(3));
        assert_eq!(inst.is_proper(&[0, 1, 0]), Ok(true));
        assert_eq!(inst.is_proper(&[0, 0, 0]), Ok(false));
    }

    #[test]
    fn invalid_color_is_reported() {
        let inst = dominating_set(path(3));
        assert_eq!(
            inst.is_proper(&[0, 2, 0]).unwrap_err(),
            InstanceError::InvalidColor(1, 2)
        );
    }

    #[test]
    fn two_coloring_k2() {
        let g = path(2);
        let inst = ProblemInstance::uniform(
            Arc::new(g),
            WeightAlgebra::MinMax,
            vec!["1".into(), "2".into()],
            |i| i as i64 + 1,
            Arc::new(|g, v, c| g.neighbors(v).iter().all(|&u| c[u] != c[v])),
        );
        assert_eq!(inst.is_proper(&[0, 1]), Ok(true));
        assert_eq!(inst.is_proper(&[0, 0]), Ok(false));
    }

    #[test]
    fn coloring_weight_folds() {
        let inst = dominating_set(path(3));
        assert_eq!(inst.coloring_weight(&[0, 1, 0]), Ok(Weight::Value(1)));
        // max-plus with costs 1,3,2 under a min-max algebra
        let inst = ProblemInstance::uniform(
            Arc::new(path(3)),
            WeightAlgebra::MinMax,
            vec!["1".into(), "2".into(), "3".into()],
            |i| i as i64 + 1,
            Arc::new(|_, _, _| true),
        );
        assert_eq!(inst.coloring_weight(&[0, 2, 1]), Ok(Weight::Value(3)));
    }

    #[test]
    fn empty_graph_weight_is_neutral() {
        let inst = ProblemInstance::uniform(
            Arc::new(LabeledGraph::new(0)),
            WeightAlgebra::MinPlus,
            vec!["0".into()],
            |_| 0,
            Arc::new(|_, _, _| true),
        );
        assert_eq!(inst.coloring_weight(&[]), Ok(Weight::Value(0)));
    }

    #[test]
    fn rejects_empty_lists() {
        let g = Arc::new(path(1));
        let err = ProblemInstance::new(
            g,
            WeightAlgebra::MinPlus,
            vec!["0".into()],
            vec![Arc::new(vec![])],
            vec![Arc::new(vec![])],
            Arc::new(|_, _, _| true),
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::EmptyList(0));
    }
}
