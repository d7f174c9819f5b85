//! Euler cycle of an edge-colored multigraph in which no two consecutive edges,
//! including the last and the first, share a color.
//!
//! At every vertex the incident edge slots are paired so that partners differ in
//! color. Following "arrive by a slot, leave by its partner" decomposes the edges
//! into closed color-alternating trails, which are spliced one by one into a
//! main cycle kept as a circular doubly linked list. Total time is linear in
//! `n + m + C` for `C` colors.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{ColoredMultigraph, Vertex};

/// Why a multigraph has no color-alternating Euler cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityReason {
    OddDegree(Vertex),
    ColorMajority { vertex: Vertex, color: u32 },
    Disconnected,
}

impl FeasibilityReason {
    pub fn name(self) -> &'static str {
        match self {
            Self::OddDegree(_) => "oddDegree",
            Self::ColorMajority { .. } => "colorMajority",
            Self::Disconnected => "disconnected",
        }
    }
}

impl fmt::Display for FeasibilityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::OddDegree(v) => write!(f, "oddDegree({v})"),
            Self::ColorMajority { vertex, color } => write!(f, "colorMajority({vertex}, {color})"),
            Self::Disconnected => f.write_str("disconnected"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("an odd number of objects ({0}) cannot be paired")]
    OddCount(usize),
    #[error("color {color} occurs {count} times, more than half of {total}")]
    ColorMajority { color: u32, count: usize, total: usize },
}

/// Closed walk: `edges[i]` (an edge id) joins `vertices[i]` and `vertices[i + 1]`,
/// and the last vertex repeats the first. Both lists are empty for a graph
/// without edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EulerCycle {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<u32>,
}

/// Checks, in this order: every degree is even; no color covers more than half
/// of any vertex's incidences; the edges form one connected component.
pub fn check_feasible(g: &ColoredMultigraph) -> Result<(), FeasibilityReason> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.degree(v) % 2 == 1) {
        return Err(FeasibilityReason::OddDegree(v));
    }
    let mut count = vec![0usize; g.color_count() as usize + 1];
    for v in 0..n {
        let half = g.degree(v) / 2;
        for &k in g.incident(v) {
            let color = g.edges()[k].color;
            count[color as usize] += 1;
            if count[color as usize] > half {
                return Err(FeasibilityReason::ColorMajority { vertex: v, color });
            }
        }
        for &k in g.incident(v) {
            count[g.edges()[k].color as usize] = 0;
        }
    }
    let Some(start) = (0..n).find(|&v| g.degree(v) > 0) else {
        return Ok(());
    };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &k in g.incident(u) {
            let e = &g.edges()[k];
            let w = if e.u == u { e.v } else { e.u };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if (0..n).any(|v| g.degree(v) > 0 && !seen[v]) {
        return Err(FeasibilityReason::Disconnected);
    }
    Ok(())
}

/// Splits `2P` colored objects into `P` pairs of differently colored objects.
///
/// Colors are renumbered densely in order of first appearance, the classes are
/// count-sorted by non-increasing size and laid out contiguously as
/// `Ob(0..2P)`; pair `i` is `(Ob(i), Ob(P + i))`. A class of size at most `P`
/// cannot hold two positions `P` apart, so every pair is bichromatic.
pub fn pair_objects(colors: &[u32]) -> Result<Vec<(usize, usize)>, PairError> {
    let total = colors.len();
    if total % 2 == 1 {
        return Err(PairError::OddCount(total));
    }
    let mut dense: HashMap<u32, usize> = HashMap::new();
    let mut original = Vec::new();
    let mut class = Vec::with_capacity(total);
    for &c in colors {
        let next = dense.len();
        let d = *dense.entry(c).or_insert(next);
        if d == original.len() {
            original.push(c);
        }
        class.push(d);
    }
    let mut scratch = Pairing::default();
    let mut pairs = Vec::with_capacity(total / 2);
    scratch
        .pair(&class, original.len(), &mut pairs)
        .map_err(|(d, count)| PairError::ColorMajority {
            color: original[d],
            count,
            total,
        })?;
    Ok(pairs)
}

/// Buffers for pairing many small lists of dense class ids without
/// reallocating.
#[derive(Default)]
struct Pairing {
    nob: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    ob: Vec<usize>,
}

impl Pairing {
    /// Pairs positions of `class` (ids in `0..classes`, even length) into
    /// `out`. Fails with `(class, count)` when a class holds more than half.
    fn pair(&mut self, class: &[usize], classes: usize, out: &mut Vec<(usize, usize)>) -> Result<(), (usize, usize)> {
        let total = class.len();
        let p = total / 2;
        self.nob.clear();
        self.nob.resize(classes, 0);
        for &d in class {
            self.nob[d] += 1;
        }
        if let Some(d) = (0..classes).find(|&d| self.nob[d] > p) {
            return Err((d, self.nob[d]));
        }
        // Count sort by size, largest first: `first[k]` is where classes of
        // size `k` begin in the layout.
        self.first.clear();
        self.first.resize(p + 2, 0);
        for &c in &self.nob {
            self.first[c] += c;
        }
        let mut acc = 0;
        for k in (0..=p).rev() {
            let len = self.first[k];
            self.first[k] = acc;
            acc += len;
        }
        self.start.clear();
        for &c in &self.nob {
            self.start.push(self.first[c]);
            self.first[c] += c;
        }
        self.ob.clear();
        self.ob.resize(total, 0);
        for (i, &d) in class.iter().enumerate() {
            self.ob[self.start[d]] = i;
            self.start[d] += 1;
        }
        out.clear();
        out.extend((0..p).map(|i| (self.ob[i], self.ob[p + i])));
        Ok(())
    }
}

/// End `2k` of edge `k` sits at `u` and end `2k + 1` at `v`, so the far end of
/// slot `s` is `s ^ 1` and its edge is `s / 2`. Records are 8 bytes; the walk
/// below is bound by one random access into this table per edge.
#[derive(Debug, Clone, Copy)]
struct Slot {
    owner: u32,
    /// Slot at the same vertex whose edge has a different color.
    partner: u32,
}

/// Slot table plus the slots of each vertex in the order of `g.incident(x)`:
/// vertex `x` owns `incident[offset[x]..offset[x + 1]]`.
struct Slots {
    slot: Vec<Slot>,
    offset: Vec<usize>,
    incident: Vec<u32>,
}

/// Fills the per-vertex lists in one pass over the edges, so colors are read
/// in edge order and regrouped by vertex instead of looked up per incidence.
fn build_slots(g: &ColoredMultigraph) -> Slots {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut offset = vec![0usize; n + 1];
    for x in 0..n {
        offset[x + 1] = offset[x] + g.degree(x);
    }
    let mut fill = offset[..n].to_vec();
    let mut incident = vec![0u32; 2 * m];
    let mut incident_color = vec![0u32; 2 * m];
    let mut slot = Vec::with_capacity(2 * m);
    for (k, e) in g.edges().iter().enumerate() {
        for (end, x) in [(2 * k, e.u), (2 * k + 1, e.v)] {
            incident[fill[x]] = end as u32;
            incident_color[fill[x]] = e.color;
            fill[x] += 1;
            slot.push(Slot {
                owner: x as u32,
                partner: u32::MAX,
            });
        }
    }
    // Colors are bounded by the color count, so a plain array serves as the
    // renumbering table; only touched entries are reset.
    let mut dense = vec![usize::MAX; g.color_count() as usize + 1];
    let mut touched = Vec::new();
    let mut class = Vec::new();
    let mut pairs = Vec::new();
    let mut scratch = Pairing::default();
    for x in 0..n {
        let (base, end) = (offset[x], offset[x + 1]);
        class.clear();
        for &c in &incident_color[base..end] {
            let c = c as usize;
            if dense[c] == usize::MAX {
                dense[c] = touched.len();
                touched.push(c);
            }
            class.push(dense[c]);
        }
        scratch
            .pair(&class, touched.len(), &mut pairs)
            .expect("feasibility checked before pairing");
        for &(a, b) in &pairs {
            let (sa, sb) = (incident[base + a], incident[base + b]);
            slot[sa as usize].partner = sb;
            slot[sb as usize].partner = sa;
        }
        for c in touched.drain(..) {
            dense[c] = usize::MAX;
        }
    }
    Slots { slot, offset, incident }
}

/// List element: a vertex, or an edge index with the top bit set.
#[derive(Debug, Clone, Copy)]
struct Node {
    item: u32,
    prev: u32,
    next: u32,
}

const EDGE: u32 = 1 << 31;

/// Circular list alternating vertex and edge nodes.
struct CycleList {
    nodes: Vec<Node>,
}

impl CycleList {
    fn push(&mut self, item: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            item,
            prev: id,
            next: id,
        });
        id
    }

    fn next(&self, node: u32) -> u32 {
        self.nodes[node as usize].next
    }

    fn edge_at(&self, node: u32) -> Option<usize> {
        let item = self.nodes[node as usize].item;
        (item & EDGE != 0).then_some((item & !EDGE) as usize)
    }

    /// Links `chain` (already alternating) between `after` and its successor.
    fn link_after(&mut self, after: u32, chain: &[u32]) {
        let succ = self.next(after);
        let mut prev = after;
        for &c in chain {
            self.nodes[prev as usize].next = c;
            self.nodes[c as usize].prev = prev;
            prev = c;
        }
        self.nodes[prev as usize].next = succ;
        self.nodes[succ as usize].prev = prev;
    }
}

/// Builds a color-alternating Euler cycle, or reports why none exists.
pub fn build_alt_euler(g: &ColoredMultigraph) -> Result<EulerCycle, FeasibilityReason> {
    check_feasible(g)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let Some(head) = (0..n).find(|&v| g.degree(v) > 0) else {
        return Ok(EulerCycle::default());
    };
    assert!(
        2 * m <= u32::MAX as usize && n < EDGE as usize,
        "graph too large for 32-bit slots"
    );
    let colors: Vec<u32> = g.edges().iter().map(|e| e.color).collect();
    let Slots { slot, offset, incident } = build_slots(g);
    // One bit per edge; small enough to stay cached while the slots are not.
    let mut used = vec![0u64; m.div_ceil(64)];
    let mut scan = offset[..n].to_vec();
    let mut list = CycleList {
        nodes: Vec::with_capacity(2 * m + 1),
    };
    let head_node = list.push(head as u32);
    let mut trail: Vec<(u32, u32)> = Vec::new();
    let mut chain: Vec<u32> = Vec::new();

    let mut cursor = head_node;
    loop {
        let x = list.nodes[cursor as usize].item as usize;
        while scan[x] < offset[x + 1] {
            let first = incident[scan[x]] as usize;
            scan[x] += 1;
            let k = first / 2;
            if used[k / 64] & (1 << (k % 64)) != 0 {
                continue;
            }
            // Walk the closed trail leaving x by `first`, until it comes back
            // into x through the partner slot of `first`.
            trail.clear();
            let closing = slot[first].partner as usize;
            let mut s = first;
            loop {
                let k = s / 2;
                debug_assert!(used[k / 64] & (1 << (k % 64)) == 0);
                used[k / 64] |= 1 << (k % 64);
                let arrive = slot[s ^ 1];
                trail.push((k as u32, arrive.owner));
                if s ^ 1 == closing {
                    break;
                }
                s = arrive.partner as usize;
            }
            let f = trail[0].0 as usize;
            let l = trail[trail.len() - 1].0 as usize;
            let node = list.nodes[cursor as usize];
            let lone = node.next == cursor;
            let (before, after) = (list.edge_at(node.prev), list.edge_at(node.next));
            let forward = match (before, after) {
                (Some(a), Some(b)) => colors[a] != colors[f] && colors[l] != colors[b],
                _ => true,
            };
            debug_assert!(
                forward
                    || matches!((before, after), (Some(a), Some(b)) if colors[a] != colors[l] && colors[f] != colors[b]),
                "partner edges differ in color, so one orientation fits"
            );
            chain.clear();
            if forward {
                for (i, &(k, w)) in trail.iter().enumerate() {
                    chain.push(list.push(k | EDGE));
                    if i + 1 < trail.len() || !lone {
                        chain.push(list.push(w));
                    }
                }
            } else {
                // Reversed trail: l, ..., f; the vertex after edge i is the
                // vertex before it in forward order.
                for i in (0..trail.len()).rev() {
                    chain.push(list.push(trail[i].0 | EDGE));
                    let w = if i == 0 { x as u32 } else { trail[i - 1].1 };
                    if i > 0 || !lone {
                        chain.push(list.push(w));
                    }
                }
            }
            list.link_after(cursor, &chain);
        }
        cursor = list.next(list.next(cursor));
        if cursor == head_node {
            break;
        }
    }

    let mut cycle = EulerCycle {
        vertices: Vec::with_capacity(m + 1),
        edges: Vec::with_capacity(m),
    };
    cycle.vertices.push(head);
    let mut node = list.next(head_node);
    while node != head_node {
        match list.edge_at(node) {
            // Edge ids are positions plus one.
            Some(k) => cycle.edges.push(k as u32 + 1),
            None => cycle.vertices.push(list.nodes[node as usize].item as Vertex),
        }
        node = list.next(node);
    }
    cycle.vertices.push(head);
    debug_assert_eq!(cycle.edges.len(), m);
    Ok(cycle)
}

/// True iff `cycle` is a closed walk using every edge id of `g` exactly once
/// with cyclically alternating colors.
pub fn verify_alt_euler(g: &ColoredMultigraph, cycle: &EulerCycle) -> bool {
    let m = g.edge_count();
    if m == 0 {
        return cycle.edges.is_empty() && cycle.vertices.len() <= 1;
    }
    if cycle.edges.len() != m || cycle.vertices.len() != m + 1 || cycle.vertices.first() != cycle.vertices.last() {
        return false;
    }
    let mut used = vec![false; m];
    for (i, &id) in cycle.edges.iter().enumerate() {
        let Some(e) = g.edge_by_id(id) else {
            return false;
        };
        if std::mem::replace(&mut used[id as usize - 1], true) {
            return false;
        }
        let (a, b) = (cycle.vertices[i], cycle.vertices[i + 1]);
        if !((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
            return false;
        }
    }
    let color = |i: usize| g.edge_by_id(cycle.edges[i]).map(|e| e.color);
    (0..m).all(|i| color(i) != color((i + 1) % m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiEdge;

    const R: u32 = 1;
    const B: u32 = 2;

    fn mg(n: usize, colors: u32, edges: &[(usize, usize, u32)]) -> ColoredMultigraph {
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

    #[test]
    fn square() {
        let g = mg(4, 2, &[(0, 1, R), (1, 2, B), (2, 3, R), (3, 0, B)]);
        assert_eq!(check_feasible(&g), Ok(()));
        let c = build_alt_euler(&g).unwrap();
        assert!(verify_alt_euler(&g, &c));
        assert_eq!(c.edges.len(), 4);
        let mut sorted = c.edges.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3, 4]);
    }

    #[test]
    fn infeasible_reasons() {
        let tri = mg(3, 1, &[(0, 1, R), (1, 2, R), (2, 0, R)]);
        assert_eq!(
            check_feasible(&tri),
            Err(FeasibilityReason::ColorMajority { vertex: 0, color: R })
        );
        assert_eq!(
            build_alt_euler(&tri),
            Err(FeasibilityReason::ColorMajority { vertex: 0, color: R })
        );
        let two = mg(4, 2, &[(0, 1, R), (1, 0, B), (2, 3, R), (3, 2, B)]);
        assert_eq!(check_feasible(&two), Err(FeasibilityReason::Disconnected));
        let odd = mg(3, 2, &[(0, 1, R), (1, 2, B)]);
        assert_eq!(check_feasible(&odd), Err(FeasibilityReason::OddDegree(0)));
    }

    #[test]
    fn theta() {
        // Vertices 0 and 1 joined by three two-edge paths through 2, 3, 4.
        let g = mg(
            5,
            3,
            &[(0, 2, R), (2, 1, B), (0, 3, B), (3, 1, 3), (0, 4, 3), (4, 1, R)],
        );
        assert_eq!(check_feasible(&g), Err(FeasibilityReason::OddDegree(0)));
        let g = mg(
            4,
            2,
            &[(0, 2, R), (2, 1, B), (0, 3, B), (3, 1, R), (0, 1, R), (1, 0, B)],
        );
        let c = build_alt_euler(&g).unwrap();
        assert!(verify_alt_euler(&g, &c), "{c:?}");
    }

    #[test]
    fn empty_and_isolated() {
        let g = mg(1, 1, &[]);
        let c = build_alt_euler(&g).unwrap();
        assert_eq!(c, EulerCycle::default());
        assert!(verify_alt_euler(&g, &c));
        let g = mg(3, 2, &[(1, 2, R), (2, 1, B)]);
        let c = build_alt_euler(&g).unwrap();
        assert_eq!(c.vertices[0], 1);
        assert!(verify_alt_euler(&g, &c));
    }

    #[test]
    fn self_loops_and_parallel_edges() {
        let g = mg(2, 3, &[(0, 0, R), (0, 1, B), (1, 0, 3), (0, 1, B), (1, 0, 3)]);
        assert_eq!(check_feasible(&g), Ok(()));
        let c = build_alt_euler(&g).unwrap();
        assert!(verify_alt_euler(&g, &c), "{c:?}");
    }

    #[test]
    fn reversed_splice_needed() {
        // Figure-eight at vertex 0 with many short bichromatic loops in varied colors.
        let mut edges = Vec::new();
        for (i, &(a, b)) in [(1, 2), (2, 1), (1, 3), (3, 2), (2, 3), (3, 1)].iter().enumerate() {
            edges.push((0, i + 1, a));
            edges.push((i + 1, 0, b));
        }
        let g = mg(7, 3, &edges);
        let c = build_alt_euler(&g).unwrap();
        assert!(verify_alt_euler(&g, &c), "{c:?}");
    }

    #[test]
    fn verifier_rejects() {
        let red_square = mg(4, 1, &[(0, 1, R), (1, 2, R), (2, 3, R), (3, 0, R)]);
        let c = EulerCycle {
            vertices: vec![0, 1, 2, 3, 0],
            edges: vec![1, 2, 3, 4],
        };
        assert!(!verify_alt_euler(&red_square, &c));
        let g = mg(4, 2, &[(0, 1, R), (1, 2, B), (2, 3, R), (3, 0, B)]);
        assert!(verify_alt_euler(&g, &c));
        let short = EulerCycle {
            vertices: vec![0, 1, 2, 3],
            edges: vec![1, 2, 3],
        };
        assert!(!verify_alt_euler(&g, &short));
        let twice = EulerCycle {
            vertices: vec![0, 1, 0, 1, 0],
            edges: vec![1, 1, 1, 1],
        };
        assert!(!verify_alt_euler(&g, &twice));
    }

    #[test]
    fn pairing() {
        let pairs = pair_objects(&[R, R, B, B]).unwrap();
        assert_eq!(pairs, vec![(0, 2), (1, 3)]);
        let pairs = pair_objects(&[5, 7, 5, 9, 7, 5]).unwrap();
        let colors = [5, 7, 5, 9, 7, 5];
        let mut used = [false; 6];
        for (a, b) in pairs {
            assert_ne!(colors[a], colors[b]);
            used[a] = true;
            used[b] = true;
        }
        assert!(used.iter().all(|&u| u));
        assert_eq!(
            pair_objects(&[R, R, R, B]),
            Err(PairError::ColorMajority {
                color: R,
                count: 3,
                total: 4
            })
        );
        assert_eq!(pair_objects(&[R, B, 3]), Err(PairError::OddCount(3)));
        assert_eq!(pair_objects(&[]), Ok(vec![]));
    }
}
