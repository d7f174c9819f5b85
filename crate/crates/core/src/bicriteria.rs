//! Bicriteria constrained paths.
//!
//! Every edge gets the blended cost `c(e, x) = w1(e) + x * w2(e)`. For a fixed
//! multiplier `x` an ordinary shortest (or, on DAGs, longest) path is computed
//! and its `w2` sum is read back; because that sum is monotone in `x`, a binary
//! search over `x` finds a path that meets the `w2` budget. The search is a
//! heuristic: the returned path is feasible but not always `w1`-optimal.
//! [`exact_constrained`] solves the same query exactly on the budget-layered
//! product graph and is used as the reference.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::{BiweightedDigraph, PathResult, Vertex, WeightedDigraph};

/// Interval halvings per binary search.
pub const SEARCH_ITERATIONS: usize = 64;
/// Growth factor when bracketing the multiplier.
pub const GROWTH_FACTOR: f64 = 2.0;
/// Upper limit on bracketing steps; `2^1100` overflows `f64`, so the limit is
/// never reached on finite weights.
const MAX_BRACKET_STEPS: usize = 1100;
/// Default cap on product-graph states for [`exact_constrained`].
pub const DEFAULT_PRODUCT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BicriteriaError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("negative cycle at multiplier {0:?}")]
    NegativeCycle(Multiplier),
    #[error("maximizing w1 is only supported on acyclic graphs")]
    MaximizeRequiresDag,
    #[error("product graph needs {states} states, above the cap of {cap}")]
    ProductGraphTooLarge { states: usize, cap: usize },
    #[error("graph has a cycle through vertex {0}")]
    Cycle(Vertex),
}

/// The Lagrangian multiplier `x`. The infinite values substitute the edge costs
/// `w2(e)` and `-w2(e)` directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl Multiplier {
    /// `c(e, x)` for one edge.
    pub fn edge_cost(self, w1: u64, w2: u64) -> f64 {
        self.path_cost(w1, w2)
    }

    /// Blended cost of a path with sums `w1sum`, `w2sum`. Evaluated on the sums
    /// rather than accumulated edge by edge so that equal paths compare equal.
    pub fn path_cost(self, w1sum: u64, w2sum: u64) -> f64 {
        match self {
            Multiplier::Finite(x) => w1sum as f64 + x * w2sum as f64,
            Multiplier::PlusInfinity => w2sum as f64,
            Multiplier::MinusInfinity => -(w2sum as f64),
        }
    }

    fn is_nonnegative(self) -> bool {
        match self {
            Multiplier::Finite(x) => x >= 0.0,
            Multiplier::PlusInfinity => true,
            Multiplier::MinusInfinity => false,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Multiplier::Finite(x) => x,
            Multiplier::PlusInfinity => f64::INFINITY,
            Multiplier::MinusInfinity => f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetSense {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstrainedQuery {
    pub source: Vertex,
    pub target: Vertex,
    pub budget: u64,
    pub sense: BudgetSense,
    pub objective: Objective,
}

impl ConstrainedQuery {
    fn admits(&self, w2sum: u64) -> bool {
        match self.sense {
            BudgetSense::AtMost => w2sum <= self.budget,
            BudgetSense::AtLeast => w2sum >= self.budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPath {
    pub path: PathResult,
    pub w1sum: u64,
    pub w2sum: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// The unconstrained optimum (`x = 0`) already meets the budget.
    ExactAtZero,
    /// Found by the multiplier search.
    FoundBySearch,
    /// Proven optimal by the product-graph method.
    Optimal,
    Infeasible,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::ExactAtZero => "exactAtX0",
            SearchStatus::FoundBySearch => "foundBySearch",
            SearchStatus::Optimal => "optimal",
            SearchStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BicriteriaAnswer {
    pub status: SearchStatus,
    pub path: Option<WeightedPath>,
    /// Multiplier at which the reported path was found.
    pub multiplier: Option<Multiplier>,
}

impl BicriteriaAnswer {
    fn infeasible() -> Self {
        Self {
            status: SearchStatus::Infeasible,
            path: None,
            multiplier: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Single-multiplier path search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Label {
    w1: u64,
    w2: u64,
    hops: usize,
}

/// Total order on labels at a fixed multiplier: blended cost first (lower for
/// minimization, higher for maximization), then `w2` per the budget sense,
/// then `w1` per the objective.
#[derive(Debug, Clone, Copy)]
struct LabelOrder {
    x: Multiplier,
    objective: Objective,
    prefer_low_w2: bool,
}

/// Rank of a label; smaller is better. The blended cost is compared exactly:
/// rounding in `w1 + x * w2` would make the order inconsistent under path
/// extension and let parent pointers close into cycles near a breakpoint.
#[derive(Debug, Clone, Copy)]
struct Rank {
    x: Multiplier,
    /// `-1` for maximization, where a larger blended cost ranks first.
    sign: i8,
    w1: i128,
    w2: i128,
    secondary: i128,
    tertiary: i128,
}

/// Sign of `d1 + x * d2`, exact for every finite `x`.
fn blended_sign(x: f64, d1: i128, d2: i128) -> Ordering {
    if d2 == 0 || x == 0.0 {
        return d1.cmp(&0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let fraction = (bits & ((1u64 << 52) - 1)) as i128;
    let (mantissa, exp) = if biased == 0 {
        (fraction, -1074)
    } else {
        (fraction | 1 << 52, biased - 1075)
    };
    let mantissa = if x < 0.0 { -mantissa } else { mantissa };
    // |p| < 2^118 for |d2| < 2^65; x * d2 = p * 2^exp.
    let p = mantissa * d2;
    let width = |v: i128| 128 - v.unsigned_abs().leading_zeros() as i32;
    if exp >= 0 {
        if width(p) + exp > 125 {
            return p.cmp(&0);
        }
        (d1 + (p << exp)).cmp(&0)
    } else {
        let k = -exp;
        if d1 == 0 {
            return p.cmp(&0);
        }
        if width(d1) + k > 125 {
            return d1.cmp(&0);
        }
        ((d1 << k) + p).cmp(&0)
    }
}

impl Rank {
    fn primary_cmp(&self, other: &Self) -> Ordering {
        let (d1, d2) = (self.w1 - other.w1, self.w2 - other.w2);
        let ord = match self.x {
            Multiplier::Finite(x) => blended_sign(x, d1, d2),
            Multiplier::PlusInfinity => d2.cmp(&0),
            Multiplier::MinusInfinity => 0.cmp(&d2),
        };
        if self.sign < 0 {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl PartialEq for Rank {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rank {}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary_cmp(other)
            .then(self.secondary.cmp(&other.secondary))
            .then(self.tertiary.cmp(&other.tertiary))
    }
}

impl LabelOrder {
    fn new(x: Multiplier, sense: BudgetSense, objective: Objective) -> Self {
        Self {
            x,
            objective,
            prefer_low_w2: sense == BudgetSense::AtMost,
        }
    }

    fn rank(&self, l: &Label) -> Rank {
        let (w1, w2) = (l.w1 as i128, l.w2 as i128);
        let (sign, tertiary) = match self.objective {
            Objective::Minimize => (1, w1),
            Objective::Maximize => (-1, -w1),
        };
        let secondary = if self.prefer_low_w2 { w2 } else { -w2 };
        Rank {
            x: self.x,
            sign,
            w1,
            w2,
            secondary,
            tertiary,
        }
    }
}

/// Per-graph state reused across the probes of one search.
struct Searcher<'g> {
    g: &'g BiweightedDigraph,
    topo: Option<Vec<Vertex>>,
}

struct Tree {
    label: Vec<Option<Label>>,
    parent: Vec<Option<usize>>,
}

impl<'g> Searcher<'g> {
    fn new(g: &'g BiweightedDigraph) -> Self {
        Self {
            g,
            topo: g.topological_order(),
        }
    }

    fn extend(&self, l: &Label, edge: usize) -> Label {
        let e = self.g.edge(edge);
        Label {
            w1: l.w1 + e.w1,
            w2: l.w2 + e.w2,
            hops: l.hops + 1,
        }
    }

    fn path(&self, s: Vertex, t: Vertex, order: LabelOrder) -> Result<Option<WeightedPath>, BicriteriaError> {
        let tree = match (&self.topo, order.objective) {
            (Some(topo), _) => self.dag_relax(s, topo, order),
            (None, Objective::Maximize) => return Err(BicriteriaError::MaximizeRequiresDag),
            (None, Objective::Minimize) if order.x.is_nonnegative() => self.label_setting(s, order),
            (None, Objective::Minimize) => self.label_correcting(&[s], order)?,
        };
        if tree.label[t].is_none() {
            return Ok(None);
        }
        let mut edges = Vec::new();
        let mut v = t;
        while v != s {
            let id = tree.parent[v].expect("parent chain reaches the source");
            edges.push(id);
            v = self.g.edge(id).from;
            assert!(edges.len() <= self.g.vertex_count(), "parent pointers form a cycle");
        }
        edges.reverse();
        Ok(Some(weighted_path(self.g, s, edges)))
    }

    /// Topological-order relaxation; handles any sign of costs and both objectives.
    fn dag_relax(&self, s: Vertex, topo: &[Vertex], order: LabelOrder) -> Tree {
        let n = self.g.vertex_count();
        let mut tree = Tree {
            label: vec![None; n],
            parent: vec![None; n],
        };
        tree.label[s] = Some(Label { w1: 0, w2: 0, hops: 0 });
        for &u in topo {
            let Some(lu) = tree.label[u] else { continue };
            for &id in self.g.out_edges(u) {
                let v = self.g.edge(id).to;
                let cand = self.extend(&lu, id);
                if tree.label[v].is_none_or(|old| order.rank(&cand) < order.rank(&old)) {
                    tree.label[v] = Some(cand);
                    tree.parent[v] = Some(id);
                }
            }
        }
        tree
    }

    /// Priority-queue label setting for non-negative multipliers. Each vertex is
    /// settled once, so the result is a tree even when equal-cost ties are
    /// broken toward larger `w2`.
    fn label_setting(&self, s: Vertex, order: LabelOrder) -> Tree {
        let n = self.g.vertex_count();
        let mut tree = Tree {
            label: vec![None; n],
            parent: vec![None; n],
        };
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        let start = Label { w1: 0, w2: 0, hops: 0 };
        tree.label[s] = Some(start);
        heap.push(Reverse((order.rank(&start), s)));
        while let Some(Reverse((rank, u))) = heap.pop() {
            if settled[u] {
                continue;
            }
            let lu = tree.label[u].expect("queued vertices carry a label");
            if order.rank(&lu) != rank {
                continue;
            }
            settled[u] = true;
            for &id in self.g.out_edges(u) {
                let v = self.g.edge(id).to;
                if settled[v] {
                    continue;
                }
                let cand = self.extend(&lu, id);
                let r = order.rank(&cand);
                if tree.label[v].is_none_or(|old| r < order.rank(&old)) {
                    tree.label[v] = Some(cand);
                    tree.parent[v] = Some(id);
                    heap.push(Reverse((r, v)));
                }
            }
        }
        tree
    }

    /// Queue-based label correcting (Bellman-Ford-Moore). A label whose path
    /// reaches `n` edges proves an improving cycle.
    fn label_correcting(&self, sources: &[Vertex], order: LabelOrder) -> Result<Tree, BicriteriaError> {
        let n = self.g.vertex_count();
        let mut tree = Tree {
            label: vec![None; n],
            parent: vec![None; n],
        };
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        for &s in sources {
            tree.label[s] = Some(Label { w1: 0, w2: 0, hops: 0 });
            queued[s] = true;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let lu = tree.label[u].expect("queued vertices carry a label");
            for &id in self.g.out_edges(u) {
                let v = self.g.edge(id).to;
                let cand = self.extend(&lu, id);
                if tree.label[v].is_none_or(|old| order.rank(&cand) < order.rank(&old)) {
                    if cand.hops >= n {
                        return Err(BicriteriaError::NegativeCycle(order.x));
                    }
                    tree.label[v] = Some(cand);
                    tree.parent[v] = Some(id);
                    if !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        Ok(tree)
    }

    /// Whether some cycle is improving under the `AtLeast` label order: blended
    /// cost below zero, or exactly zero with positive `w2`.
    fn has_negative_cycle(&self, x: Multiplier) -> bool {
        if self.topo.is_some() {
            return false;
        }
        let order = LabelOrder::new(x, BudgetSense::AtLeast, Objective::Minimize);
        let all: Vec<Vertex> = (0..self.g.vertex_count()).collect();
        self.label_correcting(&all, order).is_err()
    }
}

fn weighted_path(g: &BiweightedDigraph, s: Vertex, edges: Vec<usize>) -> WeightedPath {
    let mut vertices = Vec::with_capacity(edges.len() + 1);
    vertices.push(s);
    vertices.extend(edges.iter().map(|&id| g.edge(id).to));
    let w1sum = edges.iter().map(|&id| g.edge(id).w1).sum();
    let w2sum = edges.iter().map(|&id| g.edge(id).w2).sum();
    WeightedPath {
        path: PathResult { vertices, edges },
        w1sum,
        w2sum,
    }
}

fn check_endpoints(g: &BiweightedDigraph, s: Vertex, t: Vertex) -> Result<(), BicriteriaError> {
    let n = g.vertex_count();
    for v in [s, t] {
        if v >= n {
            return Err(BicriteriaError::VertexOutOfRange { vertex: v, n });
        }
    }
    Ok(())
}

/// Minimum-`c(·, x)` path from `s` to `t`, ties broken toward the smaller `w2`
/// sum. `Ok(None)` when `t` is unreachable. For negative `x` on a cyclic graph
/// the caller must stay at or above [`probe_x_min`].
pub fn shortest_path_at_x(
    g: &BiweightedDigraph,
    s: Vertex,
    t: Vertex,
    x: Multiplier,
) -> Result<Option<WeightedPath>, BicriteriaError> {
    path_at_multiplier(g, s, t, x, BudgetSense::AtMost, Objective::Minimize)
}

/// Optimal path at a fixed multiplier with the tie-breaking used for `sense`
/// (`AtMost`: smaller `w2` first; `AtLeast`: larger `w2` first). `Maximize`
/// requires an acyclic graph.
pub fn path_at_multiplier(
    g: &BiweightedDigraph,
    s: Vertex,
    t: Vertex,
    x: Multiplier,
    sense: BudgetSense,
    objective: Objective,
) -> Result<Option<WeightedPath>, BicriteriaError> {
    check_endpoints(g, s, t)?;
    Searcher::new(g).path(s, t, LabelOrder::new(x, sense, objective))
}

/// Smallest multiplier (approximately, from above) at which no cycle has
/// negative blended cost, or `MinusInfinity` when even `c(e) = -w2(e)` admits
/// no negative cycle. Bracketed by doubling from `-1`, then refined by binary
/// search.
pub fn probe_x_min(g: &BiweightedDigraph) -> Multiplier {
    probe_with(&Searcher::new(g))
}

fn probe_with(searcher: &Searcher<'_>) -> Multiplier {
    if !searcher.has_negative_cycle(Multiplier::MinusInfinity) {
        return Multiplier::MinusInfinity;
    }
    let (mut lo, mut hi) = (-1.0f64, 0.0f64);
    while !searcher.has_negative_cycle(Multiplier::Finite(lo)) {
        hi = lo;
        lo *= GROWTH_FACTOR;
    }
    for _ in 0..SEARCH_ITERATIONS {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if searcher.has_negative_cycle(Multiplier::Finite(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Multiplier::Finite(hi)
}

/// Evaluates multipliers and remembers the best budget-feasible path seen.
struct Probe<'g> {
    searcher: Searcher<'g>,
    query: ConstrainedQuery,
    order_sense: BudgetSense,
    best: Option<(WeightedPath, Multiplier)>,
}

impl<'g> Probe<'g> {
    /// Path at `x` and whether it meets the budget.
    fn eval(&mut self, x: Multiplier) -> Result<Option<(WeightedPath, bool)>, BicriteriaError> {
        let order = LabelOrder::new(x, self.order_sense, self.query.objective);
        let Some(p) = self.searcher.path(self.query.source, self.query.target, order)? else {
            return Ok(None);
        };
        let ok = self.query.admits(p.w2sum);
        if ok {
            let improves = match &self.best {
                None => true,
                Some((b, _)) => match self.query.objective {
                    Objective::Minimize => p.w1sum < b.w1sum,
                    Objective::Maximize => p.w1sum > b.w1sum,
                },
            };
            if improves {
                self.best = Some((p.clone(), x));
            }
        }
        Ok(Some((p, ok)))
    }

    fn feasible_at(&mut self, x: f64) -> Result<bool, BicriteriaError> {
        Ok(self.eval(Multiplier::Finite(x))?.is_some_and(|(_, ok)| ok))
    }

    fn finish(self) -> BicriteriaAnswer {
        match self.best {
            Some((path, x)) => BicriteriaAnswer {
                status: SearchStatus::FoundBySearch,
                path: Some(path),
                multiplier: Some(x),
            },
            None => BicriteriaAnswer::infeasible(),
        }
    }

    /// Grow `x` geometrically from `start` (sign gives direction) until the
    /// probe is feasible. Returns the bracketing point, or `None` if the
    /// bracket could not be closed.
    fn bracket(&mut self, start: f64) -> Result<Option<f64>, BicriteriaError> {
        let mut x = start;
        for _ in 0..MAX_BRACKET_STEPS {
            if self.feasible_at(x)? {
                return Ok(Some(x));
            }
            x *= GROWTH_FACTOR;
        }
        Ok(None)
    }

    /// Binary search between a feasible end and an infeasible end; leaves the
    /// best feasible probe in `self.best`.
    fn bisect(&mut self, mut feasible: f64, mut infeasible: f64) -> Result<(), BicriteriaError> {
        for _ in 0..SEARCH_ITERATIONS {
            let mid = feasible + (infeasible - feasible) / 2.0;
            if mid == feasible || mid == infeasible {
                break;
            }
            if self.feasible_at(mid)? {
                feasible = mid;
            } else {
                infeasible = mid;
            }
        }
        Ok(())
    }
}

/// Lagrangian binary-search heuristic for all four query variants.
///
/// * minimize / at most `B`: search the smallest `x >= 0` with `w2sum(x) <= B`;
///   infeasible iff `w2sum(+inf) > B`.
/// * minimize / at least `B`: search the largest `x` in `[x_min, 0]` with
///   `w2sum(x) >= B`, where `x_min` comes from [`probe_x_min`].
/// * maximize (DAG only) / at most `B`: longest paths, search the largest
///   `x <= 0` with `w2sum(x) <= B`.
/// * maximize (DAG only) / at least `B`: search the smallest `x >= 0` with
///   `w2sum(x) >= B`, bracketing upward from `x = 1`.
///
/// The reported path is the best budget-feasible path over all probed
/// multipliers.
pub fn solve_constrained(g: &BiweightedDigraph, q: &ConstrainedQuery) -> Result<BicriteriaAnswer, BicriteriaError> {
    check_endpoints(g, q.source, q.target)?;
    let searcher = Searcher::new(g);
    if q.objective == Objective::Maximize && searcher.topo.is_none() {
        return Err(BicriteriaError::MaximizeRequiresDag);
    }
    let mut probe = Probe {
        searcher,
        query: *q,
        order_sense: q.sense,
        best: None,
    };

    let zero = Multiplier::Finite(0.0);
    match probe.eval(zero)? {
        None => return Ok(BicriteriaAnswer::infeasible()),
        Some((p, true)) => {
            return Ok(BicriteriaAnswer {
                status: SearchStatus::ExactAtZero,
                path: Some(p),
                multiplier: Some(zero),
            })
        }
        Some((_, false)) => {}
    }

    match (q.objective, q.sense) {
        (Objective::Minimize, BudgetSense::AtMost) | (Objective::Maximize, BudgetSense::AtLeast) => {
            // Feasibility improves as x grows.
            if !probe.eval(Multiplier::PlusInfinity)?.is_some_and(|(_, ok)| ok) {
                return Ok(BicriteriaAnswer::infeasible());
            }
            if let Some(hi) = probe.bracket(1.0)? {
                probe.bisect(hi, 0.0)?;
            }
        }
        (Objective::Minimize, BudgetSense::AtLeast) => {
            let lo = match probe_with(&probe.searcher) {
                Multiplier::Finite(x_min) => {
                    if !probe.feasible_at(x_min)? {
                        return Ok(BicriteriaAnswer::infeasible());
                    }
                    Some(x_min)
                }
                _ => {
                    if !probe.eval(Multiplier::MinusInfinity)?.is_some_and(|(_, ok)| ok) {
                        return Ok(BicriteriaAnswer::infeasible());
                    }
                    probe.bracket(-1.0)?
                }
            };
            if let Some(lo) = lo {
                probe.bisect(lo, 0.0)?;
            }
        }
        (Objective::Maximize, BudgetSense::AtMost) => {
            if !probe.eval(Multiplier::MinusInfinity)?.is_some_and(|(_, ok)| ok) {
                return Ok(BicriteriaAnswer::infeasible());
            }
            if let Some(lo) = probe.bracket(-1.0)? {
                probe.bisect(lo, 0.0)?;
            }
        }
    }
    Ok(probe.finish())
}

// ---------------------------------------------------------------------------
// Exact method on the budget-layered product graph
// ---------------------------------------------------------------------------

pub fn exact_constrained(g: &BiweightedDigraph, q: &ConstrainedQuery) -> Result<BicriteriaAnswer, BicriteriaError> {
    exact_constrained_with_cap(g, q, DEFAULT_PRODUCT_CAP)
}

/// Exact optimum over walks in the graph of pairs `(vertex, accumulated w2)`.
///
/// Layers run to `min(B, sum of all w2)`. For "at most" queries transitions past
/// the top layer are dropped; for "at least" queries the top layer saturates,
/// so it stands for "accumulated `w2 >= B`". Maximization requires a DAG.
pub fn exact_constrained_with_cap(
    g: &BiweightedDigraph,
    q: &ConstrainedQuery,
    cap: usize,
) -> Result<BicriteriaAnswer, BicriteriaError> {
    check_endpoints(g, q.source, q.target)?;
    let topo = g.topological_order();
    if q.objective == Objective::Maximize && topo.is_none() {
        return Err(BicriteriaError::MaximizeRequiresDag);
    }
    let total = g.total_w2();
    if q.sense == BudgetSense::AtLeast && q.budget > total {
        return Ok(BicriteriaAnswer::infeasible());
    }
    let top = q.budget.min(total) as usize;
    let layers = top + 1;
    let n = g.vertex_count();
    let states = n.saturating_mul(layers);
    if states > cap {
        return Err(BicriteriaError::ProductGraphTooLarge { states, cap });
    }
    let idx = |v: Vertex, j: usize| v * layers + j;
    let step = |j: usize, w2: u64| -> Option<usize> {
        let next = (j as u64).saturating_add(w2);
        match q.sense {
            BudgetSense::AtMost => (next <= top as u64).then_some(next as usize),
            BudgetSense::AtLeast => Some(next.min(top as u64) as usize),
        }
    };

    let mut best: Vec<Option<u64>> = vec![None; states];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; states];
    best[idx(q.source, 0)] = Some(0);

    match q.objective {
        Objective::Minimize => {
            let mut done = vec![false; states];
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0u64, idx(q.source, 0))));
            while let Some(Reverse((d, state))) = heap.pop() {
                if done[state] {
                    continue;
                }
                done[state] = true;
                let (u, j) = (state / layers, state % layers);
                for &id in g.out_edges(u) {
                    let e = g.edge(id);
                    let Some(nj) = step(j, e.w2) else { continue };
                    let next = idx(e.to, nj);
                    let nd = d + e.w1;
                    if best[next].is_none_or(|old| nd < old) {
                        best[next] = Some(nd);
                        parent[next] = Some((state, id));
                        heap.push(Reverse((nd, next)));
                    }
                }
            }
        }
        Objective::Maximize => {
            // Edges go forward in topological order and layers never decrease,
            // so vertex-major order over the layers is a topological order of
            // the product DAG.
            for &u in topo.as_deref().expect("checked above") {
                for j in 0..layers {
                    let state = idx(u, j);
                    let Some(d) = best[state] else { continue };
                    for &id in g.out_edges(u) {
                        let e = g.edge(id);
                        let Some(nj) = step(j, e.w2) else { continue };
                        let next = idx(e.to, nj);
                        let nd = d + e.w1;
                        if best[next].is_none_or(|old| nd > old) {
                            best[next] = Some(nd);
                            parent[next] = Some((state, id));
                        }
                    }
                }
            }
        }
    }

    let targets: Vec<usize> = match q.sense {
        BudgetSense::AtMost => (0..layers).collect(),
        BudgetSense::AtLeast => vec![top],
    };
    let winner = targets
        .into_iter()
        .filter_map(|j| best[idx(q.target, j)].map(|d| (d, j)))
        .reduce(|a, b| {
            let better = match q.objective {
                Objective::Minimize => b.0 < a.0,
                Objective::Maximize => b.0 > a.0,
            };
            if better {
                b
            } else {
                a
            }
        });
    let Some((_, j)) = winner else {
        return Ok(BicriteriaAnswer::infeasible());
    };

    let mut edges = Vec::new();
    let mut state = idx(q.target, j);
    while let Some((prev, id)) = parent[state] {
        edges.push(id);
        state = prev;
    }
    edges.reverse();
    Ok(BicriteriaAnswer {
        status: SearchStatus::Optimal,
        path: Some(weighted_path(g, q.source, edges)),
        multiplier: None,
    })
}

// ---------------------------------------------------------------------------
// Memoized optimal paths to a fixed target on a DAG
// ---------------------------------------------------------------------------

/// Per-vertex optimum toward the target and the first edge achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct DagOptimum {
    pub value: Vec<Option<f64>>,
    pub next_edge: Vec<Option<usize>>,
}

/// `pop(u) = aggf(wv(u), opt over u->v of aggf(we(e), pop(v)))` with
/// `pop(t) = wv(t)`. Each vertex is evaluated once; `None` marks vertices
/// from which `t` is unreachable. Revisiting a vertex whose evaluation is in
/// progress reports a cycle.
pub fn dag_optimal_path<F>(
    g: &WeightedDigraph,
    t: Vertex,
    aggf: F,
    opt: Objective,
) -> Result<DagOptimum, BicriteriaError>
where
    F: Fn(f64, f64) -> f64,
{
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Fresh,
        Active,
        Done,
    }

    let n = g.vertex_count();
    if t >= n {
        return Err(BicriteriaError::VertexOutOfRange { vertex: t, n });
    }
    let mut state = vec![State::Fresh; n];
    let mut out = DagOptimum {
        value: vec![None; n],
        next_edge: vec![None; n],
    };
    out.value[t] = Some(g.vertex_cost(t));
    state[t] = State::Done;

    let better = |a: f64, b: f64| match opt {
        Objective::Minimize => a < b,
        Objective::Maximize => a > b,
    };

    for root in 0..n {
        if state[root] != State::Fresh {
            continue;
        }
        // (vertex, index of the next out-edge to examine)
        let mut stack = vec![(root, 0usize)];
        state[root] = State::Active;
        while let Some(&mut (u, ref mut k)) = stack.last_mut() {
            let out_edges = g.out_edges(u);
            if let Some(&id) = out_edges.get(*k) {
                *k += 1;
                let v = g.edge(id).to;
                match state[v] {
                    State::Fresh => {
                        state[v] = State::Active;
                        stack.push((v, 0));
                    }
                    State::Active => return Err(BicriteriaError::Cycle(v)),
                    State::Done => {}
                }
                continue;
            }
            let mut best: Option<(f64, usize)> = None;
            for &id in out_edges {
                let e = g.edge(id);
                if let Some(pv) = out.value[e.to] {
                    let cand = aggf(e.weight, pv);
                    if best.is_none_or(|(b, _)| better(cand, b)) {
                        best = Some((cand, id));
                    }
                }
            }
            if let Some((b, id)) = best {
                out.value[u] = Some(aggf(g.vertex_cost(u), b));
                out.next_edge[u] = Some(id);
            }
            state[u] = State::Done;
            stack.pop();
        }
    }
    Ok(out)
}
