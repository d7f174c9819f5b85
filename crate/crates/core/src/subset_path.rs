//! Cheapest path or cycle through exactly `Q` distinct vertices, by dynamic
//! programming over vertex subsets encoded as bitmasks.
//!
//! `Dmin(i, S)` is the cheapest path that visits exactly the vertices of `S`
//! and ends at `i`:
//!
//! ```text
//! Dmin(i, {i}) = cn(i)
//! Dmin(i, S)   = cn(i) agg min { Dmin(j, S \ {i}) agg cm(j -> i) }
//! ```
//!
//! Cycles reuse the same table restricted to paths that start at the lowest
//! vertex of `S`, closed by an edge back to it.

use thiserror::Error;

use crate::graph::{Aggregate, Cost, PathResult, Vertex, WeightedDigraph};

/// Largest vertex count accepted by the bitmask tables.
pub const DEFAULT_MAX_VERTICES: usize = 20;
/// Largest vertex count for the `O(n^2 2^n)` pairwise cycle table.
pub const PAIRWISE_MAX_VERTICES: usize = 12;

const NO_PARENT: u8 = u8::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsetPathError {
    #[error("Q = {q} is outside 1..={n}")]
    InvalidQ { q: usize, n: usize },
    #[error("a cycle needs at least 2 vertices, got Q = {0}")]
    CycleTooShort(usize),
    #[error("graph has {n} vertices, above the limit of {cap}")]
    TooManyVertices { n: usize, cap: usize },
}

/// Restricts which vertex sets may form the answer. `within` prunes every
/// intermediate set; `predicate` is checked only on complete `Q`-sets.
#[derive(Clone, Copy, Default)]
pub struct SubsetFilter<'a> {
    pub within: Option<u32>,
    pub predicate: Option<&'a dyn Fn(u32) -> bool>,
}

impl<'a> SubsetFilter<'a> {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn within(mask: u32) -> Self {
        Self {
            within: Some(mask),
            predicate: None,
        }
    }

    fn admits_partial(&self, set: u32) -> bool {
        self.within.is_none_or(|w| set & !w == 0)
    }

    fn admits(&self, set: u32) -> bool {
        self.admits_partial(set) && self.predicate.is_none_or(|p| p(set))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetPathResult {
    /// For cycles the first vertex is repeated at the end.
    pub path: PathResult,
    pub cost: Cost,
    pub vertex_set: u32,
}

/// `agg` over every vertex cost and edge cost of the walk, each counted once
/// per occurrence (the closing vertex of a cycle is not counted twice).
pub fn walk_cost(g: &WeightedDigraph, path: &PathResult, agg: Aggregate) -> Cost {
    let vertices = if path.is_closed() && !path.edges.is_empty() {
        &path.vertices[..path.vertices.len() - 1]
    } else {
        &path.vertices[..]
    };
    let vc = vertices.iter().map(|&v| g.vertex_cost(v));
    let ec = path.edges.iter().map(|&id| g.edge(id).weight);
    agg.fold(vc.chain(ec))
}

struct Tables {
    n: usize,
    cost: Vec<f64>,
    parent: Vec<u8>,
}

impl Tables {
    fn new(n: usize) -> Self {
        let size = (1usize << n) * n;
        Self {
            n,
            cost: vec![f64::INFINITY; size],
            parent: vec![NO_PARENT; size],
        }
    }

    fn at(&self, set: u32, i: usize) -> usize {
        set as usize * self.n + i
    }

    /// Vertices of the path ending at `end` that covers `set`, in order.
    fn trace(&self, mut set: u32, mut end: usize) -> Vec<Vertex> {
        let mut rev = vec![end];
        loop {
            let p = self.parent[self.at(set, end)];
            if p == NO_PARENT {
                break;
            }
            set &= !(1 << end);
            end = p as usize;
            rev.push(end);
        }
        rev.reverse();
        rev
    }
}

fn edge_matrix(g: &WeightedDigraph) -> Vec<Option<usize>> {
    let n = g.vertex_count();
    let mut m = vec![None; n * n];
    for (id, e) in g.edges().iter().enumerate() {
        m[e.from * n + e.to] = Some(id);
    }
    m
}

fn check(g: &WeightedDigraph, q: usize, cap: usize) -> Result<(), SubsetPathError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(SubsetPathError::TooManyVertices { n, cap });
    }
    if q == 0 || q > n {
        return Err(SubsetPathError::InvalidQ { q, n });
    }
    Ok(())
}

fn in_lists(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    let mut incoming = vec![Vec::new(); g.vertex_count()];
    for (id, e) in g.edges().iter().enumerate() {
        incoming[e.to].push(id);
    }
    incoming
}

fn edges_along(matrix: &[Option<usize>], n: usize, vertices: &[Vertex]) -> Vec<usize> {
    vertices
        .windows(2)
        .map(|w| matrix[w[0] * n + w[1]].expect("traced steps follow edges"))
        .collect()
}

/// Fills `Dmin` for every set of size at most `q`. With `anchored`, only
/// paths starting at the lowest vertex of their set are kept.
fn fill(g: &WeightedDigraph, q: usize, agg: Aggregate, filter: &SubsetFilter<'_>, anchored: bool) -> Tables {
    let n = g.vertex_count();
    let incoming = in_lists(g);
    let mut t = Tables::new(n);
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size > q || !filter.admits_partial(set) {
            continue;
        }
        if size == 1 {
            let i = set.trailing_zeros() as usize;
            let at = t.at(set, i);
            t.cost[at] = g.vertex_cost(i);
            continue;
        }
        let low = set.trailing_zeros() as usize;
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if anchored && i == low {
                continue;
            }
            let prev = set & !(1 << i);
            let mut best = f64::INFINITY;
            let mut arg = NO_PARENT;
            for &id in &incoming[i] {
                let j = g.edge(id).from;
                if prev & (1 << j) == 0 {
                    continue;
                }
                let d = t.cost[t.at(prev, j)];
                if d.is_finite() {
                    let c = agg.apply(d, g.edge(id).weight);
                    if c < best {
                        best = c;
                        arg = j as u8;
                    }
                }
            }
            if arg != NO_PARENT {
                let at = t.at(set, i);
                t.cost[at] = agg.apply(g.vertex_cost(i), best);
                t.parent[at] = arg;
            }
        }
    }
    t
}

/// Cheapest simple path with exactly `q` vertices, or `None` if there is none.
pub fn min_q_path(
    g: &WeightedDigraph,
    q: usize,
    agg: Aggregate,
    filter: &SubsetFilter<'_>,
) -> Result<Option<SubsetPathResult>, SubsetPathError> {
    check(g, q, DEFAULT_MAX_VERTICES)?;
    let n = g.vertex_count();
    if q == 1 {
        return Ok((0..n)
            .filter(|&u| filter.admits(1 << u))
            .map(|u| (g.vertex_cost(u), u))
            .fold(None, |best: Option<(f64, usize)>, c| match best {
                Some(b) if b.0 <= c.0 => Some(b),
                _ => Some(c),
            })
            .map(|(cost, u)| SubsetPathResult {
                path: PathResult::single(u),
                cost,
                vertex_set: 1 << u,
            }));
    }
    let t = fill(g, q, agg, filter, false);
    let mut best: Option<(f64, u32, usize)> = None;
    for set in 1u32..(1u32 << n) {
        if set.count_ones() as usize != q || !filter.admits(set) {
            continue;
        }
        for i in 0..n {
            let c = t.cost[t.at(set, i)];
            if c.is_finite() && best.is_none_or(|b| c < b.0) {
                best = Some((c, set, i));
            }
        }
    }
    let matrix = edge_matrix(g);
    Ok(best.map(|(cost, set, end)| {
        let vertices = t.trace(set, end);
        let edges = edges_along(&matrix, n, &vertices);
        SubsetPathResult {
            path: PathResult { vertices, edges },
            cost,
            vertex_set: set,
        }
    }))
}

/// Cheapest cycle through exactly `q >= 2` distinct vertices.
pub fn min_q_cycle(
    g: &WeightedDigraph,
    q: usize,
    agg: Aggregate,
    filter: &SubsetFilter<'_>,
) -> Result<Option<SubsetPathResult>, SubsetPathError> {
    check(g, q, DEFAULT_MAX_VERTICES)?;
    if q < 2 {
        return Err(SubsetPathError::CycleTooShort(q));
    }
    let n = g.vertex_count();
    let t = fill(g, q, agg, filter, true);
    let matrix = edge_matrix(g);
    let mut best: Option<(f64, u32, usize)> = None;
    for set in 1u32..(1u32 << n) {
        if set.count_ones() as usize != q || !filter.admits(set) {
            continue;
        }
        let a = set.trailing_zeros() as usize;
        for j in 0..n {
            let Some(close) = matrix[j * n + a] else {
                continue;
            };
            let d = t.cost[t.at(set, j)];
            if j == a || !d.is_finite() {
                continue;
            }
            let c = agg.apply(d, g.edge(close).weight);
            if best.is_none_or(|b| c < b.0) {
                best = Some((c, set, j));
            }
        }
    }
    Ok(best.map(|(cost, set, end)| {
        let mut vertices = t.trace(set, end);
        vertices.push(vertices[0]);
        let edges = edges_along(&matrix, n, &vertices);
        SubsetPathResult {
            path: PathResult { vertices, edges },
            cost,
            vertex_set: set,
        }
    }))
}

/// Cycle optimum through the pairwise table `Cmin(i, j, S)`: cheapest path
/// from `i` to `j` visiting exactly `S`, extended at the `j` end. Needs
/// `O(n^2 2^n)` memory; kept as an independent check of [`min_q_cycle`].
pub fn min_q_cycle_pairwise(
    g: &WeightedDigraph,
    q: usize,
    agg: Aggregate,
    filter: &SubsetFilter<'_>,
) -> Result<Option<Cost>, SubsetPathError> {
    check(g, q, PAIRWISE_MAX_VERTICES)?;
    if q < 2 {
        return Err(SubsetPathError::CycleTooShort(q));
    }
    let n = g.vertex_count();
    let idx = |i: usize, j: usize, set: u32| (set as usize * n + i) * n + j;
    let incoming = in_lists(g);
    let mut cmin = vec![f64::INFINITY; (1usize << n) * n * n];
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size > q || !filter.admits_partial(set) {
            continue;
        }
        if size == 1 {
            let i = set.trailing_zeros() as usize;
            cmin[idx(i, i, set)] = g.vertex_cost(i);
            continue;
        }
        for j in (0..n).filter(|&j| set & (1 << j) != 0) {
            let prev = set & !(1 << j);
            for i in (0..n).filter(|&i| prev & (1 << i) != 0) {
                let mut best = f64::INFINITY;
                for &id in &incoming[j] {
                    let k = g.edge(id).from;
                    if prev & (1 << k) != 0 {
                        let d = cmin[idx(i, k, prev)];
                        if d.is_finite() {
                            best = best.min(agg.apply(d, g.edge(id).weight));
                        }
                    }
                }
                if best.is_finite() {
                    cmin[idx(i, j, set)] = agg.apply(g.vertex_cost(j), best);
                }
            }
        }
    }
    let mut best: Option<f64> = None;
    for set in 1u32..(1u32 << n) {
        if set.count_ones() as usize != q || !filter.admits(set) {
            continue;
        }
        for e in g.edges() {
            let (j, i) = (e.from, e.to);
            if set & (1 << i) == 0 || set & (1 << j) == 0 || i == j {
                continue;
            }
            let d = cmin[idx(i, j, set)];
            if d.is_finite() {
                let c = agg.apply(d, e.weight);
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedEdge;

    fn g(n: usize, edges: &[(usize, usize, f64)], cn: &[f64]) -> WeightedDigraph {
        WeightedDigraph::with_vertex_costs(
            n,
            edges
                .iter()
                .map(|&(from, to, weight)| WeightedEdge { from, to, weight })
                .collect(),
            Some(cn.to_vec()),
        )
        .unwrap()
    }

    fn triangle() -> WeightedDigraph {
        g(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], &[1.0, 1.0, 1.0])
    }

    #[test]
    fn single_vertex_picks_cheapest() {
        let gr = g(3, &[], &[5.0, 2.0, 7.0]);
        let r = min_q_path(&gr, 1, Aggregate::Sum, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.path, PathResult::single(1));
        assert_eq!(r.cost, 2.0);
        let r = min_q_path(&gr, 1, Aggregate::Sum, &SubsetFilter::within(0b101))
            .unwrap()
            .unwrap();
        assert_eq!(r.path.vertices, vec![0]);
    }

    #[test]
    fn single_edge() {
        let gr = g(2, &[(0, 1, 7.0)], &[1.0, 2.0]);
        let r = min_q_path(&gr, 2, Aggregate::Sum, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.path.vertices, vec![0, 1]);
        assert_eq!(r.path.edges, vec![0]);
        assert_eq!(r.cost, 10.0);
        assert_eq!(walk_cost(&gr, &r.path, Aggregate::Sum), 10.0);
        let r = min_q_path(&gr, 2, Aggregate::Max, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.cost, 7.0);
    }

    #[test]
    fn triangle_cycle() {
        let r = min_q_cycle(&triangle(), 3, Aggregate::Sum, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.cost, 6.0);
        assert_eq!(r.path.vertices, vec![0, 1, 2, 0]);
        assert_eq!(walk_cost(&triangle(), &r.path, Aggregate::Sum), 6.0);
        assert_eq!(
            min_q_cycle_pairwise(&triangle(), 3, Aggregate::Sum, &SubsetFilter::none()).unwrap(),
            Some(6.0)
        );
    }

    #[test]
    fn triangle_has_no_two_cycle() {
        assert_eq!(
            min_q_cycle(&triangle(), 2, Aggregate::Sum, &SubsetFilter::none()).unwrap(),
            None
        );
        assert_eq!(
            min_q_cycle_pairwise(&triangle(), 2, Aggregate::Sum, &SubsetFilter::none()).unwrap(),
            None
        );
    }

    #[test]
    fn two_cycle() {
        let gr = g(2, &[(0, 1, 3.0), (1, 0, 4.0)], &[0.0, 0.0]);
        let r = min_q_cycle(&gr, 2, Aggregate::Sum, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.cost, 7.0);
        assert_eq!(r.path.edges, vec![0, 1]);
    }

    #[test]
    fn rejects_bad_q() {
        assert_eq!(
            min_q_path(&triangle(), 0, Aggregate::Sum, &SubsetFilter::none()),
            Err(SubsetPathError::InvalidQ { q: 0, n: 3 })
        );
        assert_eq!(
            min_q_path(&triangle(), 4, Aggregate::Sum, &SubsetFilter::none()),
            Err(SubsetPathError::InvalidQ { q: 4, n: 3 })
        );
        assert_eq!(
            min_q_cycle(&triangle(), 1, Aggregate::Sum, &SubsetFilter::none()),
            Err(SubsetPathError::CycleTooShort(1))
        );
    }

    #[test]
    fn rejects_large_graphs() {
        let gr = WeightedDigraph::new(21, vec![]).unwrap();
        assert!(matches!(
            min_q_path(&gr, 2, Aggregate::Sum, &SubsetFilter::none()),
            Err(SubsetPathError::TooManyVertices { n: 21, .. })
        ));
    }

    #[test]
    fn filters_restrict_answers() {
        // 0->1 is cheap, 1->2 is expensive.
        let gr = g(3, &[(0, 1, 1.0), (1, 2, 9.0)], &[0.0; 3]);
        let r = min_q_path(&gr, 2, Aggregate::Sum, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.vertex_set, 0b011);
        let no01 = |s: u32| s != 0b011;
        let f = SubsetFilter {
            within: None,
            predicate: Some(&no01),
        };
        let r = min_q_path(&gr, 2, Aggregate::Sum, &f).unwrap().unwrap();
        assert_eq!(r.path.vertices, vec![1, 2]);
        assert_eq!(
            min_q_path(&gr, 2, Aggregate::Sum, &SubsetFilter::within(0b101)).unwrap(),
            None
        );
    }

    #[test]
    fn hamiltonian_path_with_max() {
        let gr = g(
            4,
            &[
                (0, 1, 5.0),
                (1, 2, 1.0),
                (2, 3, 1.0),
                (0, 2, 1.0),
                (2, 1, 1.0),
                (1, 3, 2.0),
            ],
            &[0.0; 4],
        );
        let r = min_q_path(&gr, 4, Aggregate::Max, &SubsetFilter::none())
            .unwrap()
            .unwrap();
        assert_eq!(r.path.vertices, vec![0, 2, 1, 3]);
        assert_eq!(r.cost, 2.0);
    }
}
