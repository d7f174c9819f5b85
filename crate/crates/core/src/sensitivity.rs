//! Which vertices and edges lie on every, some, or no shortest `s`-`t` path.
//!
//! An element is marked when `ds(u) + dt(u) = ds(t)`. The tight edges between
//! marked vertices form the shortest-path subgraph `G'`; an element of `G'` is
//! on every shortest path iff it is a bridge or cut vertex of `G'` with
//! directions forgotten. This equivalence needs strictly positive weights:
//! zero-weight edges let shortest walks revisit vertices.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{transpose, undirected_to_directed, Cost, OrdCost, Vertex, WeightedDigraph, WeightedGraph};

/// Absolute tolerance for tightness tests on non-integral weights.
pub const TIGHTNESS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge weights must all be equal and positive, found {0} and {1}")]
    NonUniformWeights(Cost, Cost),
}

/// Membership of an element in the optimal solutions of a problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    /// In every optimal solution.
    Every = 1,
    /// In some but not all optimal solutions.
    Some = 2,
    /// In no optimal solution (or there is no solution).
    None = 3,
}

impl Category {
    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementClassification {
    pub vertex: Vec<Category>,
    pub edge: Vec<Category>,
}

impl ElementClassification {
    fn all(n: usize, m: usize, c: Category) -> Self {
        Self {
            vertex: vec![c; n],
            edge: vec![c; m],
        }
    }
}

/// `ds` from the source and `dt` to the target; unreachable is `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceLabels {
    pub ds: Vec<Cost>,
    pub dt: Vec<Cost>,
}

impl DistanceLabels {
    pub fn compute(g: &WeightedDigraph, s: Vertex, t: Vertex) -> Self {
        Self {
            ds: dijkstra(g, s),
            dt: dijkstra(&transpose(g), t),
        }
    }

    pub fn shortest(&self, t: Vertex) -> Cost {
        self.ds[t]
    }
}

fn dijkstra(g: &WeightedDigraph, s: Vertex) -> Vec<Cost> {
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Reverse((OrdCost(0.0), s)));
    while let Some(Reverse((OrdCost(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &id in g.out_edges(u) {
            let e = g.edge(id);
            let nd = d + e.weight;
            if nd < dist[e.to] {
                dist[e.to] = nd;
                heap.push(Reverse((OrdCost(nd), e.to)));
            }
        }
    }
    dist
}

fn bfs(n: usize, succ: impl Fn(Vertex) -> Vec<Vertex>, s: Vertex) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued vertices are labeled");
        for v in succ(u) {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn check_endpoints(n: usize, s: Vertex, t: Vertex) -> Result<(), SensitivityError> {
    for v in [s, t] {
        if v >= n {
            return Err(SensitivityError::VertexOutOfRange { vertex: v, n });
        }
    }
    Ok(())
}

/// Bridges and cut vertices of an undirected multigraph given as an edge list.
/// Only edges with `active[i]` participate. Parallel edges are never bridges.
pub fn bridges_and_cut_vertices(n: usize, edges: &[(Vertex, Vertex)], active: &[bool]) -> (Vec<bool>, Vec<bool>) {
    let mut incident = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if active[i] {
            incident[u].push(i);
            if u != v {
                incident[v].push(i);
            }
        }
    }
    let other = |id: usize, u: Vertex| {
        let (a, b) = edges[id];
        if a == u {
            b
        } else {
            a
        }
    };

    let mut bridge = vec![false; edges.len()];
    let mut cut = vec![false; n];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut clock = 0;
    for root in 0..n {
        if disc[root] != usize::MAX || incident[root].is_empty() {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        let mut root_children = 0;
        // (vertex, edge used to enter it, next incidence index)
        let mut stack: Vec<(Vertex, Option<usize>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (u, via, k) = *top;
            if let Some(&id) = incident[u].get(k) {
                top.2 += 1;
                if Some(id) == via {
                    continue;
                }
                let w = other(id, u);
                if disc[w] == usize::MAX {
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, Some(id), 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
                continue;
            }
            stack.pop();
            let Some(id) = via else { continue };
            let p = other(id, u);
            low[p] = low[p].min(low[u]);
            if low[u] > disc[p] {
                bridge[id] = true;
            }
            if p == root {
                root_children += 1;
            } else if low[u] >= disc[p] {
                cut[p] = true;
            }
        }
        if root_children >= 2 {
            cut[root] = true;
        }
    }
    (bridge, cut)
}

/// Category of every vertex and edge of a digraph with non-negative weights,
/// using priority-queue distances and bridges/cut vertices of `G'`.
pub fn classify_weighted(g: &WeightedDigraph, s: Vertex, t: Vertex) -> Result<ElementClassification, SensitivityError> {
    let n = g.vertex_count();
    check_endpoints(n, s, t)?;
    let labels = DistanceLabels::compute(g, s, t);
    let total = labels.shortest(t);
    let m = g.edge_count();
    if !total.is_finite() {
        return Ok(ElementClassification::all(n, m, Category::None));
    }
    let exact = g.has_integral_weights();
    let eq = |a: f64, b: f64| {
        if exact {
            a == b
        } else {
            (a - b).abs() <= TIGHTNESS_TOLERANCE
        }
    };
    let (ds, dt) = (&labels.ds, &labels.dt);
    let marked: Vec<bool> = (0..n)
        .map(|u| ds[u].is_finite() && dt[u].is_finite() && eq(ds[u] + dt[u], total))
        .collect();
    let in_sub: Vec<bool> = g
        .edges()
        .iter()
        .map(|e| marked[e.from] && marked[e.to] && eq(ds[e.from] + e.weight + dt[e.to], total))
        .collect();

    let ends: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| (e.from, e.to)).collect();
    let (bridge, cut) = bridges_and_cut_vertices(n, &ends, &in_sub);
    let vertex = (0..n)
        .map(|u| match (marked[u], cut[u] || u == s || u == t) {
            (false, _) => Category::None,
            (true, true) => Category::Every,
            (true, false) => Category::Some,
        })
        .collect();
    let edge = (0..m)
        .map(|i| match (in_sub[i], bridge[i]) {
            (false, _) => Category::None,
            (true, true) => Category::Every,
            (true, false) => Category::Some,
        })
        .collect();
    Ok(ElementClassification { vertex, edge })
}

/// Linear-time classification when every edge has the same positive weight:
/// a vertex of `G'` is on every shortest path iff it is alone on its BFS level.
pub fn classify_unit(g: &WeightedDigraph, s: Vertex, t: Vertex) -> Result<ElementClassification, SensitivityError> {
    let n = g.vertex_count();
    check_endpoints(n, s, t)?;
    if let Some(first) = g.edges().first() {
        if let Some(e) = g.edges().iter().find(|e| e.weight != first.weight || e.weight <= 0.0) {
            return Err(SensitivityError::NonUniformWeights(first.weight, e.weight));
        }
    }
    let m = g.edge_count();
    let ds = bfs(n, |u| g.out_edges(u).iter().map(|&id| g.edge(id).to).collect(), s);
    let rev = transpose(g);
    let dt = bfs(n, |u| rev.out_edges(u).iter().map(|&id| rev.edge(id).to).collect(), t);
    let Some(total) = ds[t] else {
        return Ok(ElementClassification::all(n, m, Category::None));
    };
    let level: Vec<Option<usize>> = (0..n)
        .map(|u| match (ds[u], dt[u]) {
            (Some(a), Some(b)) if a + b == total => Some(a),
            _ => None,
        })
        .collect();
    let mut count = vec![0usize; total + 1];
    for d in level.iter().flatten() {
        count[*d] += 1;
    }
    let vertex: Vec<Category> = level
        .iter()
        .map(|l| match l {
            None => Category::None,
            Some(d) if count[*d] == 1 => Category::Every,
            Some(_) => Category::Some,
        })
        .collect();
    let edge = g
        .edges()
        .iter()
        .map(|e| match (level[e.from], level[e.to]) {
            (Some(a), Some(b)) if b == a + 1 => {
                if vertex[e.from] == Category::Every && vertex[e.to] == Category::Every {
                    Category::Every
                } else {
                    Category::Some
                }
            }
            _ => Category::None,
        })
        .collect();
    Ok(ElementClassification { vertex, edge })
}

/// Undirected classification through the doubled digraph. An undirected edge
/// takes the category of whichever orientation lies on a shortest path.
pub fn classify_undirected(
    ug: &WeightedGraph,
    s: Vertex,
    t: Vertex,
) -> Result<ElementClassification, SensitivityError> {
    let doubled = undirected_to_directed(ug);
    let directed = classify_weighted(&doubled.digraph, s, t)?;
    let mut edge = vec![Category::None; ug.edge_count()];
    for (id, &c) in directed.edge.iter().enumerate() {
        let slot = &mut edge[doubled.origin[id]];
        *slot = (*slot).min(c);
    }
    Ok(ElementClassification {
        vertex: directed.vertex,
        edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedEdge;
    use Category::{Every as C1, None as C3, Some as C2};

    fn digraph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedDigraph {
        WeightedDigraph::new(
            n,
            edges
                .iter()
                .map(|&(from, to, weight)| WeightedEdge { from, to, weight })
                .collect(),
        )
        .unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
        WeightedGraph::new(
            n,
            edges
                .iter()
                .map(|&(from, to, weight)| WeightedEdge { from, to, weight })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn chain() {
        let g = digraph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let c = classify_weighted(&g, 0, 2).unwrap();
        assert_eq!(c.vertex, vec![C1; 3]);
        assert_eq!(c.edge, vec![C1; 2]);
        assert_eq!(classify_unit(&g, 0, 2).unwrap(), c);
    }

    #[test]
    fn diamond() {
        let g = digraph(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0)]);
        let c = classify_weighted(&g, 0, 3).unwrap();
        assert_eq!(c.vertex, vec![C1, C2, C2, C1]);
        assert_eq!(c.edge, vec![C2; 4]);
        assert_eq!(classify_unit(&g, 0, 3).unwrap(), c);
    }

    #[test]
    fn unreachable() {
        let g = digraph(3, &[(0, 1, 1.0)]);
        let c = classify_weighted(&g, 0, 2).unwrap();
        assert_eq!(c, ElementClassification::all(3, 1, C3));
        assert_eq!(classify_unit(&g, 0, 2).unwrap(), c);
    }

    #[test]
    fn source_equals_target() {
        let g = digraph(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)]);
        let c = classify_unit(&g, 1, 1).unwrap();
        assert_eq!(c.vertex, vec![C3, C1, C3]);
        assert_eq!(c.edge, vec![C3; 3]);
        assert_eq!(classify_weighted(&g, 1, 1).unwrap(), c);
    }

    #[test]
    fn heavy_edge_between_marked_vertices() {
        // 0->1->2 costs 2; the direct 0->2 edge costs 5 but joins marked vertices.
        let g = digraph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]);
        let c = classify_weighted(&g, 0, 2).unwrap();
        assert_eq!(c.edge, vec![C1, C1, C3]);
        assert_eq!(c.vertex, vec![C1; 3]);
    }

    #[test]
    fn weighted_bypass() {
        // Two routes of cost 3: 0->1->3 and 0->2->3, and a shared prefix-free edge.
        let g = digraph(
            5,
            &[
                (0, 1, 1.0),
                (1, 3, 2.0),
                (0, 2, 2.0),
                (2, 3, 1.0),
                (3, 4, 1.0),
                (0, 4, 9.0),
            ],
        );
        let c = classify_weighted(&g, 0, 4).unwrap();
        assert_eq!(c.vertex, vec![C1, C2, C2, C1, C1]);
        assert_eq!(c.edge, vec![C2, C2, C2, C2, C1, C3]);
    }

    #[test]
    fn fractional_weights_use_tolerance() {
        let g = digraph(4, &[(0, 1, 0.1), (1, 3, 0.2), (0, 2, 0.2), (2, 3, 0.1)]);
        let c = classify_weighted(&g, 0, 3).unwrap();
        assert_eq!(c.vertex, vec![C1, C2, C2, C1]);
    }

    #[test]
    fn unit_rejects_mixed_weights() {
        let g = digraph(3, &[(0, 1, 1.0), (1, 2, 2.0)]);
        assert!(matches!(
            classify_unit(&g, 0, 2),
            Err(SensitivityError::NonUniformWeights(..))
        ));
        let g = digraph(2, &[(0, 1, 0.0)]);
        assert!(classify_unit(&g, 0, 1).is_err());
    }

    #[test]
    fn unit_accepts_scaled_weights() {
        let g = digraph(4, &[(0, 1, 3.0), (1, 3, 3.0), (0, 2, 3.0), (2, 3, 3.0)]);
        assert_eq!(classify_unit(&g, 0, 3).unwrap(), classify_weighted(&g, 0, 3).unwrap());
    }

    #[test]
    fn endpoints_checked() {
        let g = digraph(2, &[(0, 1, 1.0)]);
        assert_eq!(
            classify_weighted(&g, 0, 5),
            Err(SensitivityError::VertexOutOfRange { vertex: 5, n: 2 })
        );
    }

    #[test]
    fn undirected_path() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let c = classify_undirected(&g, 0, 2).unwrap();
        assert_eq!(c.vertex, vec![C1; 3]);
        assert_eq!(c.edge, vec![C1; 2]);
    }

    #[test]
    fn undirected_triangle() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let c = classify_undirected(&g, 0, 1).unwrap();
        assert_eq!(c.vertex, vec![C1, C1, C3]);
        assert_eq!(c.edge, vec![C1, C3, C3]);
    }

    #[test]
    fn undirected_square() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]);
        let c = classify_undirected(&g, 0, 2).unwrap();
        assert_eq!(c.vertex, vec![C1, C2, C1, C2]);
        assert_eq!(c.edge, vec![C2; 4]);
    }

    #[test]
    fn bridges_in_multigraph() {
        let edges = [(0, 1), (1, 2), (1, 2), (2, 3)];
        let (bridge, cut) = bridges_and_cut_vertices(4, &edges, &[true; 4]);
        assert_eq!(bridge, vec![true, false, false, true]);
        assert_eq!(cut, vec![false, true, true, false]);
        let (bridge, _) = bridges_and_cut_vertices(4, &edges, &[true, true, false, true]);
        assert_eq!(bridge, vec![true, true, false, true]);
    }

    #[test]
    fn cut_vertex_at_root() {
        let (_, cut) = bridges_and_cut_vertices(3, &[(0, 1), (0, 2)], &[true, true]);
        assert_eq!(cut, vec![true, false, false]);
    }

    #[test]
    fn category_numbers() {
        assert_eq!([C1, C2, C3].map(Category::number), [1, 2, 3]);
        assert_eq!(C2.to_string(), "2");
    }
}
