//! Seeded random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use qospath::graph::{BiEdge, ColoredEdge, MultiEdge, WeightedEdge};
use qospath::{BiweightedDigraph, ColoredDigraph, ColoredMultigraph, WeightedDigraph, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `m` distinct ordered pairs without loops. With `dag`, every pair goes
/// forward in a random vertex order.
pub fn random_pairs(rng: &mut TestRng, n: usize, m: usize, dag: bool) -> Vec<(usize, usize)> {
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let mut all: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && (!dag || rank[u] < rank[v]))
        .collect();
    all.shuffle(rng);
    all.truncate(m);
    all
}

pub fn biweighted(rng: &mut TestRng, n: usize, m: usize, wmax: u64, dag: bool) -> BiweightedDigraph {
    let edges = random_pairs(rng, n, m, dag)
        .into_iter()
        .map(|(from, to)| BiEdge {
            from,
            to,
            w1: rng.gen_range(0..=wmax),
            w2: rng.gen_range(0..=wmax),
        })
        .collect();
    BiweightedDigraph::new(n, edges).unwrap()
}

/// Integer edge weights in `1..=wmax`, or all equal to `unit` when given.
pub fn weighted_digraph(rng: &mut TestRng, n: usize, m: usize, wmax: u32, unit: Option<f64>) -> WeightedDigraph {
    let edges = random_pairs(rng, n, m, false)
        .into_iter()
        .map(|(from, to)| WeightedEdge {
            from,
            to,
            weight: unit.unwrap_or_else(|| rng.gen_range(1..=wmax) as f64),
        })
        .collect();
    WeightedDigraph::new(n, edges).unwrap()
}

/// Digraph with vertex costs, integer costs in `0..=cmax`.
pub fn costed_digraph(rng: &mut TestRng, n: usize, m: usize, cmax: u32) -> WeightedDigraph {
    let edges = random_pairs(rng, n, m, false)
        .into_iter()
        .map(|(from, to)| WeightedEdge {
            from,
            to,
            weight: rng.gen_range(0..=cmax) as f64,
        })
        .collect();
    let costs = (0..n).map(|_| rng.gen_range(0..=cmax) as f64).collect();
    WeightedDigraph::with_vertex_costs(n, edges, Some(costs)).unwrap()
}

pub fn undirected(rng: &mut TestRng, n: usize, m: usize, wmax: u32) -> WeightedGraph {
    let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    all.shuffle(rng);
    all.truncate(m);
    let edges = all
        .into_iter()
        .map(|(from, to)| WeightedEdge {
            from,
            to,
            weight: rng.gen_range(1..=wmax) as f64,
        })
        .collect();
    WeightedGraph::new(n, edges).unwrap()
}

/// Random spanning tree plus `extra` additional distinct edges.
pub fn connected(rng: &mut TestRng, n: usize, extra: usize) -> WeightedGraph {
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut push = |u: usize, v: usize, edges: &mut Vec<WeightedEdge>| {
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push(WeightedEdge {
                from: u,
                to: v,
                weight: 1.0,
            });
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        push(order[i], parent, &mut edges);
    }
    if n > 1 {
        for _ in 0..extra {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            push(u, v, &mut edges);
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn colored(rng: &mut TestRng, n: usize, m: usize, colors: u32, dag: bool, cmax: u32) -> ColoredDigraph {
    let edges = random_pairs(rng, n, m, dag)
        .into_iter()
        .map(|(from, to)| ColoredEdge {
            from,
            to,
            cost: rng.gen_range(0..=cmax) as f64,
            color: rng.gen_range(1..=colors),
        })
        .collect();
    let cn = (0..n).map(|_| rng.gen_range(0..=cmax) as f64).collect();
    ColoredDigraph::new(n, colors, cn, edges).unwrap()
}

/// Colors for a closed trail of `len` edges with no two cyclically adjacent
/// edges alike. Needs `len >= 2`, and three colors when `len` is odd.
fn alternating_colors(rng: &mut TestRng, len: usize, colors: u32) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(len);
    for i in 0..len {
        let prev = out.last().copied();
        let first = (i + 1 == len).then(|| out[0]);
        let choices: Vec<u32> = (1..=colors).filter(|&c| Some(c) != prev && Some(c) != first).collect();
        out.push(*choices.choose(rng).expect("enough colors"));
    }
    out
}

/// Feasible instance: union of properly colored closed trails. The first
/// trail visits every vertex; later trails start on a visited vertex, so the
/// result is connected.
pub fn feasible_multigraph(rng: &mut TestRng, n: usize, target_m: usize, colors: u32) -> ColoredMultigraph {
    assert!(n >= 2 && colors >= 3);
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    let add_trail = |vertices: &[usize], edges: &mut Vec<(usize, usize, u32)>, rng: &mut TestRng| {
        let len = vertices.len();
        let cs = alternating_colors(rng, len, colors);
        for i in 0..len {
            edges.push((vertices[i], vertices[(i + 1) % len], cs[i]));
        }
    };
    let mut tour: Vec<usize> = (0..n).collect();
    tour.shuffle(rng);
    add_trail(&tour, &mut edges, rng);
    while edges.len() < target_m {
        let len = rng.gen_range(2..=(target_m - edges.len()).clamp(2, 8));
        let mut trail = vec![rng.gen_range(0..n)];
        for _ in 1..len {
            trail.push(rng.gen_range(0..n));
        }
        add_trail(&trail, &mut edges, rng);
    }
    multigraph(n, colors, &edges)
}

pub fn multigraph(n: usize, colors: u32, edges: &[(usize, usize, u32)]) -> ColoredMultigraph {
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v, color))| MultiEdge {
            id: i as u32 + 1,
            u,
            v,
            color,
        })
        .collect();
    ColoredMultigraph::new(n, colors, edges).unwrap()
}

/// Arbitrary multigraph, loops and parallel edges included.
pub fn any_multigraph(rng: &mut TestRng, n: usize, m: usize, colors: u32) -> ColoredMultigraph {
    let edges: Vec<_> = (0..m)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=colors)))
        .collect();
    multigraph(n, colors, &edges)
}
