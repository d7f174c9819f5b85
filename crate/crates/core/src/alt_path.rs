//! Cheapest `s`-`t` walk whose consecutive edges have different colors.
//!
//! Two methods: a label-setting search over the color-expanded graph of pairs
//! (vertex, color of the last edge), and a lighter scheme keeping only the best
//! and second-best arrival label per vertex. The expanded search is exact; the
//! two-best scheme is exact on DAGs and a heuristic on graphs with cycles.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{Aggregate, ColoredDigraph, Cost, OrdCost, PathResult, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AltPathError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("graph has a cycle; topological mode needs a DAG")]
    Cyclic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AltPathResult {
    pub path: PathResult,
    pub cost: Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoBestMode {
    DagTopological,
    QueueRelaxation,
}

fn check_endpoints(g: &ColoredDigraph, s: Vertex, t: Vertex) -> Result<(), AltPathError> {
    let n = g.vertex_count();
    for v in [s, t] {
        if v >= n {
            return Err(AltPathError::VertexOutOfRange { vertex: v, n });
        }
    }
    Ok(())
}

fn result(g: &ColoredDigraph, s: Vertex, edges: Vec<usize>, cost: Cost) -> AltPathResult {
    let mut vertices = vec![s];
    vertices.extend(edges.iter().map(|&id| g.edge(id).to));
    AltPathResult {
        path: PathResult { vertices, edges },
        cost,
    }
}

/// Exact optimum over walks: Dijkstra on states `(v, k)` where `k` is the color
/// of the last edge (0 only at the start). Moving along `e` from `(u, k)`,
/// `k != col(e)`, costs `cost(e) agg cn(v(e))`; the answer is
/// `cn(s) agg min_k dist(t, k)`.
pub fn alt_path_expanded(
    g: &ColoredDigraph,
    s: Vertex,
    t: Vertex,
    agg: Aggregate,
) -> Result<Option<AltPathResult>, AltPathError> {
    check_endpoints(g, s, t)?;
    let width = g.color_count() as usize + 1;
    let states = g.vertex_count() * width;
    let mut dist = vec![f64::INFINITY; states];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; states];
    let start = s * width;
    dist[start] = agg.neutral();
    let mut heap = BinaryHeap::from([Reverse((OrdCost(dist[start]), start))]);
    while let Some(Reverse((OrdCost(d), state))) = heap.pop() {
        if d > dist[state] {
            continue;
        }
        let (u, k) = (state / width, state % width);
        for &id in g.out_edges(u) {
            let e = g.edge(id);
            if e.color as usize == k {
                continue;
            }
            let next = e.to * width + e.color as usize;
            let nd = agg.apply(d, agg.apply(e.cost, g.vertex_cost(e.to)));
            if nd < dist[next] {
                dist[next] = nd;
                parent[next] = Some((state, id));
                heap.push(Reverse((OrdCost(nd), next)));
            }
        }
    }
    let best = (0..width)
        .map(|k| t * width + k)
        .filter(|&st| dist[st].is_finite())
        .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
    Ok(best.map(|mut state| {
        let cost = agg.apply(g.vertex_cost(s), dist[state]);
        let mut edges = Vec::new();
        while let Some((prev, id)) = parent[state] {
            edges.push(id);
            state = prev;
        }
        edges.reverse();
        result(g, s, edges, cost)
    }))
}

/// An arrival label; immutable once created so predecessor chains stay valid.
#[derive(Debug, Clone, Copy)]
struct Record {
    cost: Cost,
    color: u32,
    pred: Option<usize>,
    edge: Option<usize>,
}

/// Best and second-best labels per vertex, as indices into a record arena.
struct TwoBest<'g> {
    g: &'g ColoredDigraph,
    agg: Aggregate,
    records: Vec<Record>,
    best: Vec<Option<usize>>,
    second: Vec<Option<usize>>,
}

impl<'g> TwoBest<'g> {
    fn new(g: &'g ColoredDigraph, s: Vertex, agg: Aggregate) -> Self {
        let n = g.vertex_count();
        let mut tb = Self {
            g,
            agg,
            records: Vec::new(),
            best: vec![None; n],
            second: vec![None; n],
        };
        tb.records.push(Record {
            cost: g.vertex_cost(s),
            color: 0,
            pred: None,
            edge: None,
        });
        tb.best[s] = Some(0);
        tb
    }

    fn cost(&self, slot: Option<usize>) -> Cost {
        slot.map_or(f64::INFINITY, |r| self.records[r].cost)
    }

    /// Color of a label; an unset label has color 0.
    fn color(&self, slot: Option<usize>) -> u32 {
        slot.map_or(0, |r| self.records[r].color)
    }

    /// Candidates carried by edge `id` out of its tail's two labels.
    fn candidates(&self, id: usize) -> impl Iterator<Item = Record> + '_ {
        let e = self.g.edge(id);
        let u = e.from;
        [self.best[u], self.second[u]].into_iter().filter_map(move |slot| {
            let r = slot?;
            let rec = self.records[r];
            (rec.color != e.color).then(|| Record {
                cost: self
                    .agg
                    .apply(self.agg.apply(rec.cost, e.cost), self.g.vertex_cost(e.to)),
                color: e.color,
                pred: Some(r),
                edge: Some(id),
            })
        })
    }

    /// Applies the two-label update to vertex `i`; returns whether a label changed.
    fn offer(&mut self, i: Vertex, cand: Record) -> bool {
        let cmin = self.cost(self.best[i]);
        let colmin = self.color(self.best[i]);
        if cand.cost < cmin {
            if cand.color != colmin {
                self.second[i] = self.best[i];
            }
            self.records.push(cand);
            self.best[i] = Some(self.records.len() - 1);
            return true;
        }
        if cand.cost < self.cost(self.second[i]) && cand.color != colmin {
            self.records.push(cand);
            self.second[i] = Some(self.records.len() - 1);
            return true;
        }
        false
    }

    fn relax_from(&mut self, id: usize) -> bool {
        let to = self.g.edge(id).to;
        let cands: Vec<Record> = self.candidates(id).collect();
        let mut changed = false;
        for c in cands {
            changed |= self.offer(to, c);
        }
        changed
    }

    fn answer(&self, s: Vertex, t: Vertex) -> Option<AltPathResult> {
        let r = [self.best[t], self.second[t]]
            .into_iter()
            .flatten()
            .min_by(|&a, &b| self.records[a].cost.total_cmp(&self.records[b].cost))?;
        let cost = self.records[r].cost;
        let mut edges = Vec::new();
        let mut cur = Some(r);
        while let Some(c) = cur {
            edges.extend(self.records[c].edge);
            cur = self.records[c].pred;
        }
        edges.reverse();
        Some(result(self.g, s, edges, cost))
    }
}

/// Two-label method. In `DagTopological` mode vertices are processed in
/// topological order over their incoming edges; in `QueueRelaxation` mode a
/// FIFO queue re-processes a vertex whenever one of its labels improves.
pub fn alt_path_two_best(
    g: &ColoredDigraph,
    s: Vertex,
    t: Vertex,
    agg: Aggregate,
    mode: TwoBestMode,
) -> Result<Option<AltPathResult>, AltPathError> {
    check_endpoints(g, s, t)?;
    let n = g.vertex_count();
    let mut tb = TwoBest::new(g, s, agg);
    match mode {
        TwoBestMode::DagTopological => {
            let order = g.topological_order().ok_or(AltPathError::Cyclic)?;
            let mut incoming = vec![Vec::new(); n];
            for (id, e) in g.edges().iter().enumerate() {
                incoming[e.to].push(id);
            }
            for i in order {
                for &id in &incoming[i] {
                    tb.relax_from(id);
                }
            }
        }
        TwoBestMode::QueueRelaxation => {
            let mut queued = vec![false; n];
            let mut queue = VecDeque::from([s]);
            queued[s] = true;
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &id in g.out_edges(u) {
                    let v = g.edge(id).to;
                    if tb.relax_from(id) && !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    Ok(tb.answer(s, t))
}

/// `cn(s) agg` the per-edge terms `cost(e) agg cn(v(e))`.
pub fn alt_walk_cost(g: &ColoredDigraph, path: &PathResult, agg: Aggregate) -> Cost {
    let first = path.vertices.first().map_or(agg.neutral(), |&s| g.vertex_cost(s));
    path.edges.iter().fold(first, |acc, &id| {
        let e = g.edge(id);
        agg.apply(acc, agg.apply(e.cost, g.vertex_cost(e.to)))
    })
}

/// True iff `path` is an `s`-`t` walk along existing edges with every pair of
/// consecutive edges differently colored.
pub fn verify_alt_path(g: &ColoredDigraph, s: Vertex, t: Vertex, path: &PathResult) -> bool {
    if path.vertices.len() != path.edges.len() + 1 || path.source() != Some(s) || path.target() != Some(t) {
        return false;
    }
    let m = g.edges().len();
    if path.edges.iter().any(|&id| id >= m) {
        return false;
    }
    let joined = path.edges.iter().enumerate().all(|(k, &id)| {
        let e = g.edge(id);
        e.from == path.vertices[k] && e.to == path.vertices[k + 1]
    });
    joined && path.edges.windows(2).all(|w| g.edge(w[0]).color != g.edge(w[1]).color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ColoredEdge;

    fn cg(n: usize, colors: u32, cn: &[f64], edges: &[(usize, usize, f64, u32)]) -> ColoredDigraph {
        ColoredDigraph::new(
            n,
            colors,
            cn.to_vec(),
            edges
                .iter()
                .map(|&(from, to, cost, color)| ColoredEdge { from, to, cost, color })
                .collect(),
        )
        .unwrap()
    }

    /// s=0, a=1, b=2, t=3; red=1, blue=2.
    fn two_route() -> ColoredDigraph {
        cg(
            4,
            2,
            &[0.0; 4],
            &[(0, 1, 1.0, 1), (1, 3, 1.0, 1), (0, 2, 3.0, 1), (2, 3, 3.0, 2)],
        )
    }

    fn all_methods(g: &ColoredDigraph, s: usize, t: usize, agg: Aggregate) -> Vec<Option<AltPathResult>> {
        let mut out = vec![
            alt_path_expanded(g, s, t, agg).unwrap(),
            alt_path_two_best(g, s, t, agg, TwoBestMode::QueueRelaxation).unwrap(),
        ];
        if g.is_acyclic() {
            out.push(alt_path_two_best(g, s, t, agg, TwoBestMode::DagTopological).unwrap());
        }
        out
    }

    #[test]
    fn two_route_example() {
        let g = two_route();
        for r in all_methods(&g, 0, 3, Aggregate::Sum) {
            let r = r.unwrap();
            assert_eq!(r.cost, 6.0);
            assert_eq!(r.path.vertices, vec![0, 2, 3]);
            assert!(verify_alt_path(&g, 0, 3, &r.path));
            assert_eq!(alt_walk_cost(&g, &r.path, Aggregate::Sum), 6.0);
        }
    }

    #[test]
    fn source_is_target() {
        let g = cg(2, 1, &[4.0, 0.0], &[(0, 1, 1.0, 1)]);
        for r in all_methods(&g, 0, 0, Aggregate::Sum) {
            let r = r.unwrap();
            assert_eq!(r.cost, 4.0);
            assert!(r.path.edges.is_empty());
        }
    }

    #[test]
    fn single_edge() {
        let g = cg(2, 1, &[0.0, 0.0], &[(0, 1, 5.0, 1)]);
        for r in all_methods(&g, 0, 1, Aggregate::Sum) {
            assert_eq!(r.unwrap().cost, 5.0);
        }
    }

    #[test]
    fn vertex_costs_and_max() {
        let g = cg(3, 2, &[2.0, 7.0, 1.0], &[(0, 1, 1.0, 1), (1, 2, 3.0, 2)]);
        for r in all_methods(&g, 0, 2, Aggregate::Sum) {
            assert_eq!(r.unwrap().cost, 14.0);
        }
        for r in all_methods(&g, 0, 2, Aggregate::Max) {
            assert_eq!(r.unwrap().cost, 7.0);
        }
    }

    #[test]
    fn infeasible() {
        let g = cg(3, 1, &[0.0; 3], &[(0, 1, 1.0, 1), (1, 2, 1.0, 1)]);
        for r in all_methods(&g, 0, 2, Aggregate::Sum) {
            assert!(r.is_none());
        }
    }

    #[test]
    fn walk_revisits_vertex_with_new_color() {
        // Reaching 1 by red forbids 1->3 (red); the detour 1->2->1 arrives blue.
        let g = cg(
            4,
            2,
            &[0.0; 4],
            &[(0, 1, 1.0, 1), (1, 2, 1.0, 2), (2, 1, 1.0, 1), (1, 3, 1.0, 1)],
        );
        let r = alt_path_expanded(&g, 0, 3, Aggregate::Sum).unwrap();
        assert!(r.is_none());
        let g = cg(
            4,
            3,
            &[0.0; 4],
            &[(0, 1, 1.0, 1), (1, 2, 1.0, 2), (2, 1, 1.0, 3), (1, 3, 1.0, 1)],
        );
        let r = alt_path_expanded(&g, 0, 3, Aggregate::Sum).unwrap().unwrap();
        assert_eq!(r.path.vertices, vec![0, 1, 2, 1, 3]);
        assert_eq!(r.cost, 4.0);
        assert!(verify_alt_path(&g, 0, 3, &r.path));
    }

    #[test]
    fn topological_mode_rejects_cycles() {
        let g = cg(2, 2, &[0.0; 2], &[(0, 1, 1.0, 1), (1, 0, 1.0, 2)]);
        assert_eq!(
            alt_path_two_best(&g, 0, 1, Aggregate::Sum, TwoBestMode::DagTopological),
            Err(AltPathError::Cyclic)
        );
    }

    #[test]
    fn second_label_is_needed() {
        // Cheapest arrival at 1 is red, but only a blue arrival can continue on red.
        let g = cg(
            4,
            2,
            &[0.0; 4],
            &[(0, 1, 1.0, 1), (0, 2, 1.0, 1), (2, 1, 1.0, 2), (1, 3, 1.0, 1)],
        );
        for r in all_methods(&g, 0, 3, Aggregate::Sum) {
            let r = r.unwrap();
            assert_eq!(r.cost, 3.0);
            assert_eq!(r.path.vertices, vec![0, 2, 1, 3]);
        }
    }

    #[test]
    fn verifier_rejects() {
        let g = two_route();
        let bad = PathResult {
            vertices: vec![0, 1, 3],
            edges: vec![0, 1],
        };
        assert!(!verify_alt_path(&g, 0, 3, &bad));
        let wrong_end = PathResult {
            vertices: vec![0, 2],
            edges: vec![2],
        };
        assert!(!verify_alt_path(&g, 0, 3, &wrong_end));
    }
}
