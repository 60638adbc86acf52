//! Solver library for 1-locally checkable vertex problems on graphs of
//! bounded treewidth.
//!
//! A problem assigns each vertex a color from its list, at a per-color
//! cost, subject to a per-vertex check over the closed neighborhood; the
//! goal is the minimum total weight under a chosen weight algebra. The
//! engine solves such problems by dynamic programming over an easy tree
//! decomposition, driven by a partial neighborhood system that
//! accumulates neighbor information incrementally. A brute-force oracle,
//! a flow-based solver for complete graphs, a problem catalog and a small
//! definition language round out the toolkit.

pub mod algebra;
pub mod catalog;
pub mod corpus;
pub mod dsl;
pub mod engine;
pub mod flow;
pub mod globals;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod pns;
pub mod treedec;

pub use algebra::{Weight, WeightAlgebra};
pub use engine::{solve, SolveOptions, SolveReport};
pub use globals::{build_size_automaton, GlobalConstraint, SizeSpec, UnaryAutomaton};
pub use graph::{
    graph_power, transform_jagged, transform_subdivision, LabeledGraph, VertexMap, VertexOrigin,
};
pub use instance::{ColorId, ProblemInstance};
pub use oracle::{brute_force_grundy, brute_force_solve, OracleResult};
pub use pns::{counting_pns, generic_pns, pns_selfcheck, NeighborhoodSystem, SharedSystem};
pub use treedec::{
    heuristic_decomposition, lift_edge_transform, lift_power, to_easy, validate_decomposition,
    EasyDecomposition, TreeDecomposition,
};
