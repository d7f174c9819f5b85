//! Seeded instance generators for the benchmarks.

use qospath::{
    BiEdge, BiweightedDigraph, ColoredDigraph, ColoredEdge, ColoredMultigraph, MultiEdge, WeightedDigraph,
    WeightedEdge, WeightedGraph,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct loop-free ordered pairs; forward in vertex order with `dag`.
/// Needs `m` well below `n * (n - 1)`.
fn sparse_pairs(r: &mut ChaCha8Rng, n: usize, m: usize, dag: bool) -> Vec<(usize, usize)> {
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        let (u, v) = if dag { (a.min(b), a.max(b)) } else { (a, b) };
        if u != v && seen.insert((u, v)) {
            out.push((u, v));
        }
    }
    out
}

pub fn biweighted(seed: u64, n: usize, m: usize, wmax: u64, dag: bool) -> BiweightedDigraph {
    let mut r = rng(seed);
    let edges = sparse_pairs(&mut r, n, m, dag)
        .into_iter()
        .map(|(from, to)| BiEdge {
            from,
            to,
            w1: r.gen_range(0..=wmax),
            w2: r.gen_range(0..=wmax),
        })
        .collect();
    BiweightedDigraph::new(n, edges).unwrap()
}

/// Integer weights in `1..=wmax`; `wmax == 1` gives a unit-weight graph.
pub fn weighted(seed: u64, n: usize, m: usize, wmax: u32) -> WeightedDigraph {
    let mut r = rng(seed);
    let edges = sparse_pairs(&mut r, n, m, false)
        .into_iter()
        .map(|(from, to)| WeightedEdge {
            from,
            to,
            weight: r.gen_range(1..=wmax) as f64,
        })
        .collect();
    WeightedDigraph::new(n, edges).unwrap()
}

/// Dense digraph with vertex costs, for the subset DP.
pub fn costed_dense(seed: u64, n: usize) -> WeightedDigraph {
    let mut r = rng(seed);
    let edges = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .map(|(from, to)| WeightedEdge {
            from,
            to,
            weight: r.gen_range(0..100) as f64,
        })
        .collect();
    let costs = (0..n).map(|_| r.gen_range(0..100) as f64).collect();
    WeightedDigraph::with_vertex_costs(n, edges, Some(costs)).unwrap()
}

/// Random spanning tree plus `extra` edges.
pub fn connected(seed: u64, n: usize, extra: usize) -> WeightedGraph {
    let mut r = rng(seed);
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for v in 1..n {
        let u = r.gen_range(0..v);
        seen.insert((u, v));
        edges.push(WeightedEdge {
            from: u,
            to: v,
            weight: 1.0,
        });
    }
    while edges.len() < n - 1 + extra {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b && seen.insert((a.min(b), a.max(b))) {
            edges.push(WeightedEdge {
                from: a,
                to: b,
                weight: 1.0,
            });
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn colored(seed: u64, n: usize, m: usize, colors: u32, dag: bool) -> ColoredDigraph {
    let mut r = rng(seed);
    let edges = sparse_pairs(&mut r, n, m, dag)
        .into_iter()
        .map(|(from, to)| ColoredEdge {
            from,
            to,
            cost: r.gen_range(0..100) as f64,
            color: r.gen_range(1..=colors),
        })
        .collect();
    let cn = (0..n).map(|_| r.gen_range(0..10) as f64).collect();
    ColoredDigraph::new(n, colors, cn, edges).unwrap()
}

/// Union of closed trails with no two cyclically adjacent edges alike, the
/// first through every vertex; always has a color-alternating Euler cycle.
pub fn alternating_multigraph(seed: u64, n: usize, m: usize, colors: u32) -> ColoredMultigraph {
    assert!(n >= 2 && colors >= 3 && m >= n);
    let mut r = rng(seed);
    let mut edges: Vec<(usize, usize, u32)> = Vec::with_capacity(m);
    let mut trail: Vec<usize> = (0..n).collect();
    trail.shuffle(&mut r);
    loop {
        let len = trail.len();
        let mut cs: Vec<u32> = Vec::with_capacity(len);
        for i in 0..len {
            let avoid = [cs.last().copied(), (i + 1 == len).then(|| cs[0])];
            let c = loop {
                let c = r.gen_range(1..=colors);
                if !avoid.contains(&Some(c)) {
                    break c;
                }
            };
            cs.push(c);
        }
        for i in 0..len {
            edges.push((trail[i], trail[(i + 1) % len], cs[i]));
        }
        let left = m.saturating_sub(edges.len());
        if left < 2 {
            break;
        }
        let len = r.gen_range(2..=left.min(8));
        trail = (0..len).map(|_| r.gen_range(0..n)).collect();
    }
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(i, (u, v, color))| MultiEdge {
            id: i as u32 + 1,
            u,
            v,
            color,
        })
        .collect();
    ColoredMultigraph::new(n, colors, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        assert_eq!(weighted(1, 50, 200, 9), weighted(1, 50, 200, 9));
        assert_eq!(biweighted(2, 30, 100, 9, true).edge_count(), 100);
        assert!(biweighted(2, 30, 100, 9, true).is_acyclic());
        assert_eq!(connected(3, 40, 10).edge_count(), 49);
    }

    #[test]
    fn alternating_multigraph_is_feasible() {
        let g = alternating_multigraph(4, 100, 1000, 3);
        assert!(g.edge_count() >= 999);
        let cycle = qospath::alt_euler::build_alt_euler(&g).unwrap();
        assert!(qospath::alt_euler::verify_alt_euler(&g, &cycle));
    }
}
