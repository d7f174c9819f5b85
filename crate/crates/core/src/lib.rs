//! Path and ordering algorithms under quality-of-service constraints:
//! budget-constrained bicriteria paths, shortest-path and subset-sum
//! sensitivity, tournament Hamiltonian paths, exact-`Q` subset paths,
//! Hamiltonian paths in graph cubes, and color-alternating paths and Euler
//! cycles. The [`oracles`] module holds brute-force references used for
//! self-checks.

pub mod alt_euler;
pub mod alt_path;
pub mod bicriteria;
pub mod cube_ham;
pub mod graph;
pub mod knapsack;
pub mod oracles;
pub mod sensitivity;
pub mod subset_path;
pub mod tournament;

pub use graph::{
    parse_graph, serialize_graph, Aggregate, AnyGraph, BiEdge, BiweightedDigraph, ColoredDigraph, ColoredEdge,
    ColoredMultigraph, Cost, GraphError, GraphKind, MultiEdge, PathResult, Vertex, WeightedDigraph, WeightedEdge,
    WeightedGraph,
};
pub use sensitivity::{Category, ElementClassification};
