//! Brute-force reference implementations for checking the algorithms at small
//! scale. They deliberately share no traversal logic with the code they check
//! and refuse, rather than truncate, any enumeration beyond their budget.

use std::collections::HashMap;

use thiserror::Error;

use crate::bicriteria::{BudgetSense, ConstrainedQuery, Objective, WeightedPath};
use crate::graph::{
    Aggregate, BiweightedDigraph, ColoredDigraph, ColoredMultigraph, Cost, PathResult, Vertex, WeightedDigraph,
    WeightedGraph,
};
use crate::sensitivity::{Category, ElementClassification};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} exceeds the enumeration budget of {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

/// Caps on instance size and enumeration volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_vertices: usize,
    pub max_subsets: u64,
    pub max_paths: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_vertices: 12,
            max_subsets: 1 << 16,
            max_paths: 1_000_000,
        }
    }
}

impl EnumerationBudget {
    fn vertices(&self, n: usize) -> Result<(), OracleError> {
        if n > self.max_vertices {
            return Err(OracleError::BudgetExceeded {
                what: "vertex count",
                limit: self.max_vertices as u64,
            });
        }
        Ok(())
    }

    fn subsets(&self, items: usize) -> Result<(), OracleError> {
        if items >= 64 || (1u64 << items) > self.max_subsets {
            return Err(OracleError::BudgetExceeded {
                what: "subset count",
                limit: self.max_subsets,
            });
        }
        Ok(())
    }

    fn count_path(&self, seen: &mut u64) -> Result<(), OracleError> {
        *seen += 1;
        if *seen > self.max_paths {
            return Err(OracleError::BudgetExceeded {
                what: "path count",
                limit: self.max_paths,
            });
        }
        Ok(())
    }
}

fn check_vertex(v: Vertex, n: usize) -> Result<(), OracleError> {
    if v >= n {
        return Err(OracleError::VertexOutOfRange { vertex: v, n });
    }
    Ok(())
}

/// Every simple `s`-`t` path as an edge-id list, by depth-first search.
/// `s == t` yields the single empty path.
fn simple_paths(
    n: usize,
    out: impl Fn(Vertex) -> Vec<(usize, Vertex)>,
    s: Vertex,
    t: Vertex,
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<usize>>, OracleError> {
    budget.vertices(n)?;
    check_vertex(s, n)?;
    check_vertex(t, n)?;
    let mut found = Vec::new();
    let mut count = 0;
    let mut on_path = vec![false; n];
    let mut edges = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        u: Vertex,
        t: Vertex,
        out: &dyn Fn(Vertex) -> Vec<(usize, Vertex)>,
        on_path: &mut [bool],
        edges: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
        count: &mut u64,
        budget: &EnumerationBudget,
    ) -> Result<(), OracleError> {
        if u == t {
            budget.count_path(count)?;
            found.push(edges.clone());
            return Ok(());
        }
        on_path[u] = true;
        for (id, v) in out(u) {
            if !on_path[v] {
                edges.push(id);
                go(v, t, out, on_path, edges, found, count, budget)?;
                edges.pop();
            }
        }
        on_path[u] = false;
        Ok(())
    }
    go(s, t, &out, &mut on_path, &mut edges, &mut found, &mut count, budget)?;
    Ok(found)
}

fn vertex_list(s: Vertex, edges: &[usize], head: impl Fn(usize) -> Vertex) -> Vec<Vertex> {
    std::iter::once(s).chain(edges.iter().map(|&id| head(id))).collect()
}

/// All simple `s`-`t` paths with their weight sums.
pub fn enumerate_constrained_paths(
    g: &BiweightedDigraph,
    s: Vertex,
    t: Vertex,
    budget: &EnumerationBudget,
) -> Result<Vec<WeightedPath>, OracleError> {
    let out = |u: Vertex| {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == u)
            .map(|(id, e)| (id, e.to))
            .collect()
    };
    let paths = simple_paths(g.vertex_count(), out, s, t, budget)?;
    Ok(paths
        .into_iter()
        .map(|edges| WeightedPath {
            path: PathResult {
                vertices: vertex_list(s, &edges, |id| g.edges()[id].to),
                edges: edges.clone(),
            },
            w1sum: edges.iter().map(|&id| g.edges()[id].w1).sum(),
            w2sum: edges.iter().map(|&id| g.edges()[id].w2).sum(),
        })
        .collect())
}

/// Best `w1sum` over simple paths meeting the query's budget.
pub fn constrained_optimum(
    g: &BiweightedDigraph,
    q: &ConstrainedQuery,
    budget: &EnumerationBudget,
) -> Result<Option<u64>, OracleError> {
    let paths = enumerate_constrained_paths(g, q.source, q.target, budget)?;
    let admitted = paths.iter().filter(|p| match q.sense {
        BudgetSense::AtMost => p.w2sum <= q.budget,
        BudgetSense::AtLeast => p.w2sum >= q.budget,
    });
    let w1 = admitted.map(|p| p.w1sum);
    Ok(match q.objective {
        Objective::Minimize => w1.min(),
        Objective::Maximize => w1.max(),
    })
}

/// Categories from membership counts over the optimal paths.
fn categories_from_paths(n: usize, m: usize, optimal: &[(Vec<Vertex>, Vec<usize>)]) -> ElementClassification {
    let total = optimal.len();
    let mut vc = vec![0usize; n];
    let mut ec = vec![0usize; m];
    for (vs, es) in optimal {
        for &v in vs {
            vc[v] += 1;
        }
        for &e in es {
            ec[e] += 1;
        }
    }
    let cat = |c: usize| match c {
        0 => Category::None,
        c if c == total => Category::Every,
        _ => Category::Some,
    };
    ElementClassification {
        vertex: vc.into_iter().map(cat).collect(),
        edge: ec.into_iter().map(cat).collect(),
    }
}

fn same_cost(a: Cost, b: Cost) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn optimal_by_cost(paths: Vec<(Vec<Vertex>, Vec<usize>, Cost)>) -> Vec<(Vec<Vertex>, Vec<usize>)> {
    let best = paths.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    paths
        .into_iter()
        .filter(|p| same_cost(p.2, best))
        .map(|(v, e, _)| (v, e))
        .collect()
}

/// Shortest-path membership of every vertex and edge, from the full list of
/// simple `s`-`t` paths.
pub fn classify_by_paths(
    g: &WeightedDigraph,
    s: Vertex,
    t: Vertex,
    budget: &EnumerationBudget,
) -> Result<ElementClassification, OracleError> {
    let out = |u: Vertex| {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == u)
            .map(|(id, e)| (id, e.to))
            .collect()
    };
    let paths = simple_paths(g.vertex_count(), out, s, t, budget)?;
    let costed = paths
        .into_iter()
        .map(|es| {
            let cost = es.iter().map(|&id| g.edges()[id].weight).sum();
            (vertex_list(s, &es, |id| g.edges()[id].to), es, cost)
        })
        .collect();
    Ok(categories_from_paths(
        g.vertex_count(),
        g.edge_count(),
        &optimal_by_cost(costed),
    ))
}

/// Undirected version of [`classify_by_paths`].
pub fn classify_undirected_by_paths(
    ug: &WeightedGraph,
    s: Vertex,
    t: Vertex,
    budget: &EnumerationBudget,
) -> Result<ElementClassification, OracleError> {
    let out = |u: Vertex| {
        ug.edges()
            .iter()
            .enumerate()
            .filter_map(|(id, e)| match (e.from == u, e.to == u) {
                (true, _) => Some((id, e.to)),
                (_, true) => Some((id, e.from)),
                _ => None,
            })
            .collect()
    };
    let paths = simple_paths(ug.vertex_count(), out, s, t, budget)?;
    let costed = paths
        .into_iter()
        .map(|es| {
            let mut vs = vec![s];
            for &id in &es {
                let e = &ug.edges()[id];
                let last = *vs.last().expect("starts with s");
                vs.push(if e.from == last { e.to } else { e.from });
            }
            let cost = es.iter().map(|&id| ug.edges()[id].weight).sum();
            (vs, es, cost)
        })
        .collect();
    Ok(categories_from_paths(
        ug.vertex_count(),
        ug.edge_count(),
        &optimal_by_cost(costed),
    ))
}

/// Bitmasks of all item subsets whose weights sum exactly to `target`.
pub fn enumerate_subsets(weights: &[u64], target: u64, budget: &EnumerationBudget) -> Result<Vec<u64>, OracleError> {
    budget.subsets(weights.len())?;
    Ok((0..1u64 << weights.len())
        .filter(|&mask| {
            let sum: u64 = (0..weights.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| weights[i])
                .sum();
            sum == target
        })
        .collect())
}

/// Item categories over the exact-sum subsets, or over the cheapest of them
/// when `costs` is given.
pub fn classify_subsets(
    weights: &[u64],
    costs: Option<&[u64]>,
    target: u64,
    budget: &EnumerationBudget,
) -> Result<Vec<Category>, OracleError> {
    let n = weights.len();
    let mut solutions = enumerate_subsets(weights, target, budget)?;
    if let Some(costs) = costs {
        let cost = |mask: u64| -> u64 { (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| costs[i]).sum() };
        if let Some(best) = solutions.iter().map(|&m| cost(m)).min() {
            solutions.retain(|&m| cost(m) == best);
        }
    }
    Ok((0..n)
        .map(|i| {
            let with = solutions.iter().filter(|&&m| m >> i & 1 == 1).count();
            match with {
                0 => Category::None,
                w if w == solutions.len() => Category::Every,
                _ => Category::Some,
            }
        })
        .collect())
}

/// Advances `perm` to the next lexicographic permutation; false after the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len())
        .rev()
        .find(|&j| perm[j] > perm[i - 1])
        .expect("perm[i] qualifies");
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Calls `f` on every ordered sequence of `q` distinct vertices out of `n`.
fn for_each_arrangement(n: usize, q: usize, mut f: impl FnMut(&[usize])) {
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != q {
            continue;
        }
        let mut perm: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        loop {
            f(&perm);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
}

/// Optimum over all simple paths (or cycles, when `cycle`) with exactly `q`
/// distinct vertices, by checking every ordered `q`-tuple for edges.
pub fn enumerate_q_paths_cycles(
    g: &WeightedDigraph,
    q: usize,
    agg: Aggregate,
    cycle: bool,
    budget: &EnumerationBudget,
) -> Result<Option<Cost>, OracleError> {
    let n = g.vertex_count();
    budget.vertices(n)?;
    let weight: HashMap<(Vertex, Vertex), Cost> = g.edges().iter().map(|e| ((e.from, e.to), e.weight)).collect();
    let mut best: Option<Cost> = None;
    if q == 0 || q > n || (cycle && q < 2) {
        return Ok(None);
    }
    for_each_arrangement(n, q, |seq| {
        let mut terms: Vec<Cost> = seq.iter().map(|&v| g.vertex_cost(v)).collect();
        let mut hops: Vec<(Vertex, Vertex)> = seq.windows(2).map(|w| (w[0], w[1])).collect();
        if cycle {
            hops.push((seq[q - 1], seq[0]));
        }
        for h in hops {
            match weight.get(&h) {
                Some(&w) => terms.push(w),
                None => return,
            }
        }
        let c = agg.fold(terms);
        if best.is_none_or(|b| c < b) {
            best = Some(c);
        }
    });
    Ok(best)
}

/// Cheapest color-alternating `s`-`t` walk by repeated full relaxation over
/// (vertex, last color) states until nothing changes.
pub fn alt_walk_optimum(g: &ColoredDigraph, s: Vertex, t: Vertex, agg: Aggregate) -> Option<Cost> {
    let width = g.color_count() as usize + 1;
    let mut best = vec![vec![f64::INFINITY; width]; g.vertex_count()];
    best[s][0] = g.vertex_cost(s);
    loop {
        let mut changed = false;
        for e in g.edges() {
            for k in 0..width {
                if k == e.color as usize || !best[e.from][k].is_finite() {
                    continue;
                }
                let c = agg.apply(agg.apply(best[e.from][k], e.cost), g.vertex_cost(e.to));
                if c < best[e.to][e.color as usize] {
                    best[e.to][e.color as usize] = c;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let m = best[t].iter().copied().fold(f64::INFINITY, f64::min);
    m.is_finite().then_some(m)
}

/// Cheapest color-alternating simple `s`-`t` path.
pub fn alt_simple_path_optimum(
    g: &ColoredDigraph,
    s: Vertex,
    t: Vertex,
    agg: Aggregate,
    budget: &EnumerationBudget,
) -> Result<Option<Cost>, OracleError> {
    let out = |u: Vertex| {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == u)
            .map(|(id, e)| (id, e.to))
            .collect()
    };
    let paths = simple_paths(g.vertex_count(), out, s, t, budget)?;
    Ok(paths
        .into_iter()
        .filter(|es| es.windows(2).all(|w| g.edges()[w[0]].color != g.edges()[w[1]].color))
        .map(|es| {
            let terms = es
                .iter()
                .flat_map(|&id| [g.edges()[id].cost, g.vertex_cost(g.edges()[id].to)]);
            agg.fold(std::iter::once(g.vertex_cost(s)).chain(terms))
        })
        .reduce(f64::min))
}

/// Whether a color-alternating Euler cycle exists, by exhaustive backtracking.
/// Edge count is limited by `budget.max_vertices` as well.
pub fn alt_euler_exists(g: &ColoredMultigraph, budget: &EnumerationBudget) -> Result<bool, OracleError> {
    let m = g.edge_count();
    budget.vertices(m)?;
    if m == 0 {
        return Ok(true);
    }
    let edges = g.edges();
    struct Search<'a> {
        edges: &'a [crate::graph::MultiEdge],
        used: Vec<bool>,
        start: Vertex,
        first_color: u32,
        steps: u64,
        budget: &'a EnumerationBudget,
    }
    impl Search<'_> {
        fn go(&mut self, at: Vertex, last_color: u32, depth: usize) -> Result<bool, OracleError> {
            self.budget.count_path(&mut self.steps)?;
            if depth == self.edges.len() {
                return Ok(at == self.start && last_color != self.first_color);
            }
            for k in 0..self.edges.len() {
                let e = self.edges[k];
                if self.used[k] || e.color == last_color || (e.u != at && e.v != at) {
                    continue;
                }
                let next = if e.u == at { e.v } else { e.u };
                self.used[k] = true;
                if self.go(next, e.color, depth + 1)? {
                    return Ok(true);
                }
                self.used[k] = false;
            }
            Ok(false)
        }
    }
    // Every Euler cycle can be rotated to start with edge 0, in one of two directions.
    let e0 = edges[0];
    for (from, to) in [(e0.u, e0.v), (e0.v, e0.u)] {
        let mut search = Search {
            edges,
            used: vec![false; m],
            start: from,
            first_color: e0.color,
            steps: 0,
            budget,
        };
        search.used[0] = true;
        if search.go(to, e0.color, 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All-pairs hop distances by breadth-first search from every vertex;
/// `usize::MAX` marks unreachable pairs.
pub fn all_pairs_hops(ug: &WeightedGraph) -> Vec<Vec<usize>> {
    let n = ug.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in ug.edges() {
        adj[e.from].push(e.to);
        adj[e.to].push(e.from);
    }
    (0..n)
        .map(|src| {
            let mut d = vec![usize::MAX; n];
            d[src] = 0;
            let mut frontier = vec![src];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for u in frontier {
                    for &v in &adj[u] {
                        if d[v] == usize::MAX {
                            d[v] = d[u] + 1;
                            next.push(v);
                        }
                    }
                }
                frontier = next;
            }
            d
        })
        .collect()
}
