//! Graph types shared by every algorithm module, plus the whitespace-separated
//! text formats the CLI reads and writes.
//!
//! Vertices are dense 0-based indices everywhere, including in files. Costs are
//! `f64`; integer-valued inputs up to 2^53 are represented exactly, which keeps
//! oracle comparisons exact on integer test data.

use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

pub type Vertex = usize;
pub type Cost = f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} is not allowed in this graph kind")]
    SelfLoop(Vertex),
    #[error("parallel edge {from} -> {to} is not allowed in this graph kind")]
    ParallelEdge { from: Vertex, to: Vertex },
    #[error("cost {0} must be finite and non-negative")]
    InvalidCost(f64),
    #[error("color {color} outside 1..={colors}")]
    ColorOutOfRange { color: u32, colors: u32 },
    #[error("edge id {id} outside 1..={m}")]
    EdgeIdOutOfRange { id: u32, m: usize },
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(u32),
    #[error("expected {expected} vertex costs, found {found}")]
    VertexCostCount { expected: usize, found: usize },
}

fn check_vertex(v: usize, n: usize) -> Result<(), GraphError> {
    if v < n {
        Ok(())
    } else {
        Err(GraphError::VertexOutOfRange { vertex: v, n })
    }
}

fn check_cost(c: Cost) -> Result<(), GraphError> {
    if c.is_finite() && c >= 0.0 {
        Ok(())
    } else {
        Err(GraphError::InvalidCost(c))
    }
}

fn check_vertex_costs(costs: Option<&[Cost]>, n: usize) -> Result<(), GraphError> {
    let Some(costs) = costs else { return Ok(()) };
    if costs.len() != n {
        return Err(GraphError::VertexCostCount {
            expected: n,
            found: costs.len(),
        });
    }
    costs.iter().try_for_each(|&c| check_cost(c))
}

/// Rejects self-loops and repeated (ordered or unordered) endpoint pairs.
fn check_simple(pairs: impl Iterator<Item = (Vertex, Vertex)>, directed: bool) -> Result<(), GraphError> {
    let mut seen = HashSet::new();
    for (u, v) in pairs {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let key = if directed || u < v { (u, v) } else { (v, u) };
        if !seen.insert(key) {
            return Err(GraphError::ParallelEdge { from: u, to: v });
        }
    }
    Ok(())
}

fn out_index(n: usize, ends: impl Iterator<Item = (Vertex, Vertex)>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for (i, (u, _)) in ends.enumerate() {
        out[u].push(i);
    }
    out
}

/// Kahn's algorithm; `None` when the digraph has a cycle.
fn topological_order(n: usize, ends: impl Iterator<Item = (Vertex, Vertex)> + Clone) -> Option<Vec<Vertex>> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for (u, v) in ends {
        indeg[v] += 1;
        succ[u].push(v);
    }
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiEdge {
    pub from: Vertex,
    pub to: Vertex,
    pub w1: u64,
    pub w2: u64,
}

/// Directed graph whose edges carry two non-negative integer weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BiweightedDigraph {
    n: usize,
    edges: Vec<BiEdge>,
    out: Vec<Vec<usize>>,
}

impl BiweightedDigraph {
    pub fn new(n: usize, edges: Vec<BiEdge>) -> Result<Self, GraphError> {
        for e in &edges {
            check_vertex(e.from, n)?;
            check_vertex(e.to, n)?;
        }
        check_simple(edges.iter().map(|e| (e.from, e.to)), true)?;
        let out = out_index(n, edges.iter().map(|e| (e.from, e.to)));
        Ok(Self { n, edges, out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[BiEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &BiEdge {
        &self.edges[id]
    }

    /// Indices of the edges leaving `u`.
    pub fn out_edges(&self, u: Vertex) -> &[usize] {
        &self.out[u]
    }

    pub fn topological_order(&self) -> Option<Vec<Vertex>> {
        topological_order(self.n, self.edges.iter().map(|e| (e.from, e.to)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Sum of all `w2` weights.
    pub fn total_w2(&self) -> u64 {
        self.edges.iter().map(|e| e.w2).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    pub from: Vertex,
    pub to: Vertex,
    pub weight: Cost,
}

/// Single-weight directed graph with optional vertex costs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<WeightedEdge>,
    vertex_cost: Option<Vec<Cost>>,
    out: Vec<Vec<usize>>,
}

impl WeightedDigraph {
    pub fn new(n: usize, edges: Vec<WeightedEdge>) -> Result<Self, GraphError> {
        Self::with_vertex_costs(n, edges, None)
    }

    pub fn with_vertex_costs(
        n: usize,
        edges: Vec<WeightedEdge>,
        vertex_cost: Option<Vec<Cost>>,
    ) -> Result<Self, GraphError> {
        for e in &edges {
            check_vertex(e.from, n)?;
            check_vertex(e.to, n)?;
            check_cost(e.weight)?;
        }
        check_vertex_costs(vertex_cost.as_deref(), n)?;
        check_simple(edges.iter().map(|e| (e.from, e.to)), true)?;
        let out = out_index(n, edges.iter().map(|e| (e.from, e.to)));
        Ok(Self {
            n,
            edges,
            vertex_cost,
            out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &WeightedEdge {
        &self.edges[id]
    }

    pub fn out_edges(&self, u: Vertex) -> &[usize] {
        &self.out[u]
    }

    /// Vertex cost, 0 when the graph carries none.
    pub fn vertex_cost(&self, u: Vertex) -> Cost {
        self.vertex_cost.as_ref().map_or(0.0, |vc| vc[u])
    }

    pub fn vertex_costs(&self) -> Option<&[Cost]> {
        self.vertex_cost.as_deref()
    }

    pub fn topological_order(&self) -> Option<Vec<Vertex>> {
        topological_order(self.n, self.edges.iter().map(|e| (e.from, e.to)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// True when every edge weight is an integer (so sums are exact).
    pub fn has_integral_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight.fract() == 0.0)
    }
}

/// Reverses every edge, keeping edge indices and vertex costs.
pub fn transpose(g: &WeightedDigraph) -> WeightedDigraph {
    let edges: Vec<WeightedEdge> = g
        .edges
        .iter()
        .map(|e| WeightedEdge {
            from: e.to,
            to: e.from,
            weight: e.weight,
        })
        .collect();
    let out = out_index(g.n, edges.iter().map(|e| (e.from, e.to)));
    WeightedDigraph {
        n: g.n,
        edges,
        vertex_cost: g.vertex_cost.clone(),
        out,
    }
}

/// Undirected single-weight graph with optional vertex costs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<WeightedEdge>,
    vertex_cost: Option<Vec<Cost>>,
    incident: Vec<Vec<usize>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<WeightedEdge>) -> Result<Self, GraphError> {
        Self::with_vertex_costs(n, edges, None)
    }

    pub fn with_vertex_costs(
        n: usize,
        edges: Vec<WeightedEdge>,
        vertex_cost: Option<Vec<Cost>>,
    ) -> Result<Self, GraphError> {
        check_vertex_costs(vertex_cost.as_deref(), n)?;
        for e in &edges {
            check_vertex(e.from, n)?;
            check_vertex(e.to, n)?;
            check_cost(e.weight)?;
        }
        check_simple(edges.iter().map(|e| (e.from, e.to)), false)?;
        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            incident[e.from].push(i);
            incident[e.to].push(i);
        }
        Ok(Self {
            n,
            edges,
            vertex_cost,
            incident,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    /// Edge indices incident to `u`.
    pub fn incident(&self, u: Vertex) -> &[usize] {
        &self.incident[u]
    }

    /// Endpoint of edge `id` opposite to `u`.
    pub fn other_end(&self, id: usize, u: Vertex) -> Vertex {
        let e = &self.edges[id];
        if e.from == u {
            e.to
        } else {
            e.from
        }
    }

    /// Sorted neighbor lists.
    pub fn neighbors(&self) -> Vec<Vec<Vertex>> {
        (0..self.n)
            .map(|u| {
                let mut nb: Vec<Vertex> = self.incident[u].iter().map(|&id| self.other_end(id, u)).collect();
                nb.sort_unstable();
                nb
            })
            .collect()
    }

    pub fn vertex_costs(&self) -> Option<&[Cost]> {
        self.vertex_cost.as_deref()
    }
}

/// Totally ordered cost for priority queues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OrdCost(pub Cost);

impl Eq for OrdCost {}

impl PartialOrd for OrdCost {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdCost {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Associative, commutative, monotone combination of non-negative costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Aggregate {
    Sum,
    Max,
}

impl Aggregate {
    pub fn apply(self, a: Cost, b: Cost) -> Cost {
        match self {
            Aggregate::Sum => a + b,
            Aggregate::Max => a.max(b),
        }
    }

    /// Identity element on non-negative costs.
    pub fn neutral(self) -> Cost {
        0.0
    }

    pub fn fold(self, costs: impl IntoIterator<Item = Cost>) -> Cost {
        costs.into_iter().fold(self.neutral(), |acc, c| self.apply(acc, c))
    }

    pub fn name(self) -> &'static str {
        match self {
            Aggregate::Sum => "sum",
            Aggregate::Max => "max",
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Aggregate::Sum),
            "max" => Ok(Aggregate::Max),
            _ => Err(format!("unknown aggregate {s:?}, expected sum or max")),
        }
    }
}

/// Result of doubling an undirected graph: directed edges `2i` and `2i + 1`
/// both originate from undirected edge `origin[2i] == origin[2i + 1] == i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledGraph {
    pub digraph: WeightedDigraph,
    pub origin: Vec<usize>,
}

pub fn undirected_to_directed(ug: &WeightedGraph) -> DoubledGraph {
    let mut edges = Vec::with_capacity(2 * ug.edges.len());
    let mut origin = Vec::with_capacity(2 * ug.edges.len());
    for (i, e) in ug.edges.iter().enumerate() {
        edges.push(*e);
        edges.push(WeightedEdge {
            from: e.to,
            to: e.from,
            weight: e.weight,
        });
        origin.extend([i, i]);
    }
    let out = out_index(ug.n, edges.iter().map(|e| (e.from, e.to)));
    let digraph = WeightedDigraph {
        n: ug.n,
        edges,
        vertex_cost: ug.vertex_cost.clone(),
        out,
    };
    DoubledGraph { digraph, origin }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColoredEdge {
    pub from: Vertex,
    pub to: Vertex,
    pub cost: Cost,
    pub color: u32,
}

/// Directed graph with edge costs, edge colors in `1..=colors` and vertex costs.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredDigraph {
    n: usize,
    colors: u32,
    vertex_cost: Vec<Cost>,
    edges: Vec<ColoredEdge>,
    out: Vec<Vec<usize>>,
}

impl ColoredDigraph {
    pub fn new(n: usize, colors: u32, vertex_cost: Vec<Cost>, edges: Vec<ColoredEdge>) -> Result<Self, GraphError> {
        check_vertex_costs(Some(&vertex_cost), n)?;
        for e in &edges {
            check_vertex(e.from, n)?;
            check_vertex(e.to, n)?;
            check_cost(e.cost)?;
            if e.color == 0 || e.color > colors {
                return Err(GraphError::ColorOutOfRange { color: e.color, colors });
            }
        }
        check_simple(edges.iter().map(|e| (e.from, e.to)), true)?;
        let out = out_index(n, edges.iter().map(|e| (e.from, e.to)));
        Ok(Self {
            n,
            colors,
            vertex_cost,
            edges,
            out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> u32 {
        self.colors
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &ColoredEdge {
        &self.edges[id]
    }

    pub fn out_edges(&self, u: Vertex) -> &[usize] {
        &self.out[u]
    }

    pub fn vertex_cost(&self, u: Vertex) -> Cost {
        self.vertex_cost[u]
    }

    pub fn topological_order(&self) -> Option<Vec<Vertex>> {
        topological_order(self.n, self.edges.iter().map(|e| (e.from, e.to)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiEdge {
    pub id: u32,
    pub u: Vertex,
    pub v: Vertex,
    pub color: u32,
}

/// Undirected edge-colored multigraph. Parallel edges and self-loops are allowed;
/// edge ids are exactly `1..=m` and `edges()[k].id == k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredMultigraph {
    n: usize,
    colors: u32,
    edges: Vec<MultiEdge>,
    incident: Vec<Vec<usize>>,
}

impl ColoredMultigraph {
    pub fn new(n: usize, colors: u32, edges: Vec<MultiEdge>) -> Result<Self, GraphError> {
        let m = edges.len();
        let mut slots: Vec<Option<MultiEdge>> = vec![None; m];
        for e in edges {
            check_vertex(e.u, n)?;
            check_vertex(e.v, n)?;
            if e.color == 0 || e.color > colors {
                return Err(GraphError::ColorOutOfRange { color: e.color, colors });
            }
            if e.id == 0 || e.id as usize > m {
                return Err(GraphError::EdgeIdOutOfRange { id: e.id, m });
            }
            let slot = &mut slots[e.id as usize - 1];
            if slot.is_some() {
                return Err(GraphError::DuplicateEdgeId(e.id));
            }
            *slot = Some(e);
        }
        // m distinct ids in 1..=m fill every slot.
        let edges: Vec<MultiEdge> = slots.into_iter().flatten().collect();
        let mut incident = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            incident[e.u].push(k);
            incident[e.v].push(k);
        }
        Ok(Self {
            n,
            colors,
            edges,
            incident,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn color_count(&self) -> u32 {
        self.colors
    }

    /// Edges in id order.
    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    pub fn edge_by_id(&self, id: u32) -> Option<&MultiEdge> {
        id.checked_sub(1).and_then(|k| self.edges.get(k as usize))
    }

    /// Edge indices incident to `u`; a self-loop appears twice.
    pub fn incident(&self, u: Vertex) -> &[usize] {
        &self.incident[u]
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.incident[u].len()
    }
}

/// An ordered walk: `edges[i]` joins `vertices[i]` to `vertices[i + 1]`.
/// For a closed walk the last vertex repeats the first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathResult {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<usize>,
}

impl PathResult {
    pub fn single(v: Vertex) -> Self {
        Self {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.edges.is_empty() && self.vertices.first() == self.vertices.last()
    }

    pub fn source(&self) -> Option<Vertex> {
        self.vertices.first().copied()
    }

    pub fn target(&self) -> Option<Vertex> {
        self.vertices.last().copied()
    }
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Biweighted,
    Weighted,
    ColoredDigraph,
    ColoredMultigraph,
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "biweighted" => Ok(Self::Biweighted),
            "weighted" => Ok(Self::Weighted),
            "colored-digraph" => Ok(Self::ColoredDigraph),
            "colored-multigraph" => Ok(Self::ColoredMultigraph),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

/// Any of the parsed graph kinds. The `weighted` format parses as a digraph;
/// callers that need the undirected reading use [`WeightedGraph::parse`].
#[derive(Debug, Clone, PartialEq)]
pub enum AnyGraph {
    Biweighted(BiweightedDigraph),
    Weighted(WeightedDigraph),
    ColoredDigraph(ColoredDigraph),
    ColoredMultigraph(ColoredMultigraph),
}

pub fn parse_graph(text: &str, kind: GraphKind) -> Result<AnyGraph, GraphError> {
    Ok(match kind {
        GraphKind::Biweighted => AnyGraph::Biweighted(BiweightedDigraph::parse(text)?),
        GraphKind::Weighted => AnyGraph::Weighted(WeightedDigraph::parse(text)?),
        GraphKind::ColoredDigraph => AnyGraph::ColoredDigraph(ColoredDigraph::parse(text)?),
        GraphKind::ColoredMultigraph => AnyGraph::ColoredMultigraph(ColoredMultigraph::parse(text)?),
    })
}

pub fn serialize_graph(g: &AnyGraph) -> String {
    match g {
        AnyGraph::Biweighted(g) => g.serialize(),
        AnyGraph::Weighted(g) => g.serialize(),
        AnyGraph::ColoredDigraph(g) => g.serialize(),
        AnyGraph::ColoredMultigraph(g) => g.serialize(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last_line: 0,
        }
    }

    fn next_record(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), GraphError> {
        for (i, line) in self.inner.by_ref() {
            self.last_line = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Ok((i + 1, trimmed.split_whitespace().collect()));
        }
        Err(GraphError::Parse {
            line: self.last_line + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }

    fn finish(mut self) -> Result<(), GraphError> {
        for (i, line) in self.inner.by_ref() {
            let trimmed = line.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                return Err(GraphError::Parse {
                    line: i + 1,
                    message: "unexpected trailing data".into(),
                });
            }
        }
        Ok(())
    }
}

fn field<T: FromStr>(line: usize, tok: &str, name: &str) -> Result<T, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid {name} '{tok}'"),
    })
}

fn arity(line: usize, toks: &[&str], expected: usize, what: &str) -> Result<(), GraphError> {
    if toks.len() == expected {
        Ok(())
    } else {
        Err(GraphError::Parse {
            line,
            message: format!("expected {expected} fields for {what}, found {}", toks.len()),
        })
    }
}

/// Attach a line number to a structural error raised while adding one record.
fn at_line(line: usize, err: GraphError) -> GraphError {
    match err {
        GraphError::Parse { .. } => err,
        other => GraphError::Parse {
            line,
            message: other.to_string(),
        },
    }
}

fn vertex_field(line: usize, tok: &str, n: usize) -> Result<Vertex, GraphError> {
    let v: Vertex = field(line, tok, "vertex")?;
    check_vertex(v, n).map_err(|e| at_line(line, e))?;
    Ok(v)
}

fn cost_field(line: usize, tok: &str) -> Result<Cost, GraphError> {
    let c: Cost = field(line, tok, "cost")?;
    check_cost(c).map_err(|e| at_line(line, e))?;
    Ok(c)
}

fn vertex_cost_line(lines: &mut Lines<'_>, n: usize) -> Result<Vec<Cost>, GraphError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let (line, toks) = lines.next_record("vertex costs")?;
    arity(line, &toks, n, "vertex costs")?;
    toks.iter().map(|t| cost_field(line, t)).collect()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    let mut s = String::new();
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x}").unwrap();
    }
    s
}

/// Map an "all records read" structural error (duplicate pair, etc.) to the
/// line of the offending edge.
fn locate_edge_error(err: GraphError, edge_lines: &[usize], ends: &[(Vertex, Vertex)]) -> GraphError {
    let line = match &err {
        GraphError::SelfLoop(v) => ends.iter().position(|&(a, b)| a == *v && b == *v),
        GraphError::ParallelEdge { from, to } => ends.iter().rposition(|&(a, b)| (a, b) == (*from, *to)),
        GraphError::DuplicateEdgeId(_) => None,
        _ => None,
    }
    .map(|k| edge_lines[k])
    .unwrap_or_else(|| edge_lines.last().copied().unwrap_or(1));
    at_line(line, err)
}

impl BiweightedDigraph {
    /// Format: header `n m`, then `m` lines `u v w1 w2`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = Lines::new(text);
        let (line, head) = lines.next_record("header 'n m'")?;
        arity(line, &head, 2, "header 'n m'")?;
        let n: usize = field(line, head[0], "vertex count")?;
        let m: usize = field(line, head[1], "edge count")?;
        let mut edges = Vec::with_capacity(m);
        let mut edge_lines = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, t) = lines.next_record("edge 'u v w1 w2'")?;
            arity(line, &t, 4, "edge 'u v w1 w2'")?;
            edges.push(BiEdge {
                from: vertex_field(line, t[0], n)?,
                to: vertex_field(line, t[1], n)?,
                w1: field(line, t[2], "w1")?,
                w2: field(line, t[3], "w2")?,
            });
            edge_lines.push(line);
        }
        lines.finish()?;
        let ends: Vec<_> = edges.iter().map(|e| (e.from, e.to)).collect();
        Self::new(n, edges).map_err(|e| locate_edge_error(e, &edge_lines, &ends))
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            writeln!(s, "{} {} {} {}", e.from, e.to, e.w1, e.w2).unwrap();
        }
        s
    }
}

/// Vertex count, edges, optional vertex costs and the line of each edge.
type WeightedRecords = (usize, Vec<WeightedEdge>, Option<Vec<Cost>>, Vec<usize>);

/// Shared reader for the `weighted` format: header `n m [V]`, optional line of
/// `n` vertex costs, then `m` lines `u v w`.
fn parse_weighted(text: &str) -> Result<WeightedRecords, GraphError> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next_record("header 'n m [V]'")?;
    if head.len() != 2 && head.len() != 3 {
        return Err(GraphError::Parse {
            line,
            message: format!("expected header 'n m [V]', found {} fields", head.len()),
        });
    }
    let n: usize = field(line, head[0], "vertex count")?;
    let m: usize = field(line, head[1], "edge count")?;
    let vertex_cost = match head.get(2) {
        None => None,
        Some(&"V") => Some(vertex_cost_line(&mut lines, n)?),
        Some(other) => {
            return Err(GraphError::Parse {
                line,
                message: format!("unknown header flag '{other}', expected 'V'"),
            })
        }
    };
    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, t) = lines.next_record("edge 'u v w'")?;
        arity(line, &t, 3, "edge 'u v w'")?;
        edges.push(WeightedEdge {
            from: vertex_field(line, t[0], n)?,
            to: vertex_field(line, t[1], n)?,
            weight: cost_field(line, t[2])?,
        });
        edge_lines.push(line);
    }
    lines.finish()?;
    Ok((n, edges, vertex_cost, edge_lines))
}

fn serialize_weighted(n: usize, edges: &[WeightedEdge], vertex_cost: Option<&[Cost]>) -> String {
    let mut s = match vertex_cost {
        Some(vc) => format!("{} {} V\n{}\n", n, edges.len(), join(vc)),
        None => format!("{} {}\n", n, edges.len()),
    };
    for e in edges {
        writeln!(s, "{} {} {}", e.from, e.to, e.weight).unwrap();
    }
    s
}

impl WeightedDigraph {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let (n, edges, vc, edge_lines) = parse_weighted(text)?;
        let ends: Vec<_> = edges.iter().map(|e| (e.from, e.to)).collect();
        Self::with_vertex_costs(n, edges, vc).map_err(|e| locate_edge_error(e, &edge_lines, &ends))
    }

    pub fn serialize(&self) -> String {
        serialize_weighted(self.n, &self.edges, self.vertex_costs())
    }
}

impl WeightedGraph {
    /// Same text format as [`WeightedDigraph`], read as undirected edges.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let (n, edges, vc, edge_lines) = parse_weighted(text)?;
        let ends: Vec<_> = edges.iter().map(|e| (e.from, e.to)).collect();
        Self::with_vertex_costs(n, edges, vc).map_err(|err| match err {
            GraphError::ParallelEdge { from, to } => {
                let k = ends
                    .iter()
                    .rposition(|&(a, b)| (a, b) == (from, to) || (a, b) == (to, from))
                    .unwrap_or(0);
                at_line(edge_lines[k], GraphError::ParallelEdge { from, to })
            }
            other => locate_edge_error(other, &edge_lines, &ends),
        })
    }

    pub fn serialize(&self) -> String {
        serialize_weighted(self.n, &self.edges, self.vertex_costs())
    }
}

impl ColoredDigraph {
    /// Format: header `n m C`, a line of `n` vertex costs, then `m` lines `u v cost color`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = Lines::new(text);
        let (line, head) = lines.next_record("header 'n m C'")?;
        arity(line, &head, 3, "header 'n m C'")?;
        let n: usize = field(line, head[0], "vertex count")?;
        let m: usize = field(line, head[1], "edge count")?;
        let colors: u32 = field(line, head[2], "color count")?;
        let vertex_cost = vertex_cost_line(&mut lines, n)?;
        let mut edges = Vec::with_capacity(m);
        let mut edge_lines = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, t) = lines.next_record("edge 'u v cost color'")?;
            arity(line, &t, 4, "edge 'u v cost color'")?;
            let color: u32 = field(line, t[3], "color")?;
            if color == 0 || color > colors {
                return Err(at_line(line, GraphError::ColorOutOfRange { color, colors }));
            }
            edges.push(ColoredEdge {
                from: vertex_field(line, t[0], n)?,
                to: vertex_field(line, t[1], n)?,
                cost: cost_field(line, t[2])?,
                color,
            });
            edge_lines.push(line);
        }
        lines.finish()?;
        let ends: Vec<_> = edges.iter().map(|e| (e.from, e.to)).collect();
        Self::new(n, colors, vertex_cost, edges).map_err(|e| locate_edge_error(e, &edge_lines, &ends))
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.edges.len(), self.colors);
        if self.n > 0 {
            writeln!(s, "{}", join(&self.vertex_cost)).unwrap();
        }
        for e in &self.edges {
            writeln!(s, "{} {} {} {}", e.from, e.to, e.cost, e.color).unwrap();
        }
        s
    }
}

impl ColoredMultigraph {
    /// Format: header `n m C`, then `m` lines `id u v color`.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = Lines::new(text);
        let (line, head) = lines.next_record("header 'n m C'")?;
        arity(line, &head, 3, "header 'n m C'")?;
        let n: usize = field(line, head[0], "vertex count")?;
        let m: usize = field(line, head[1], "edge count")?;
        let colors: u32 = field(line, head[2], "color count")?;
        let mut edges = Vec::with_capacity(m);
        let mut seen = HashSet::with_capacity(m);
        for _ in 0..m {
            let (line, t) = lines.next_record("edge 'id u v color'")?;
            arity(line, &t, 4, "edge 'id u v color'")?;
            let id: u32 = field(line, t[0], "edge id")?;
            if id == 0 || id as usize > m {
                return Err(at_line(line, GraphError::EdgeIdOutOfRange { id, m }));
            }
            if !seen.insert(id) {
                return Err(at_line(line, GraphError::DuplicateEdgeId(id)));
            }
            let color: u32 = field(line, t[3], "color")?;
            if color == 0 || color > colors {
                return Err(at_line(line, GraphError::ColorOutOfRange { color, colors }));
            }
            edges.push(MultiEdge {
                id,
                u: vertex_field(line, t[1], n)?,
                v: vertex_field(line, t[2], n)?,
                color,
            });
        }
        lines.finish()?;
        Self::new(n, colors, edges)
    }

    pub fn serialize(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.edges.len(), self.colors);
        for e in &self.edges {
            writeln!(s, "{} {} {} {}", e.id, e.u, e.v, e.color).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_biweighted_example() {
        let g = BiweightedDigraph::parse("3 2\n0 1 1 5\n1 2 1 5\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(
            g.edges(),
            &[
                BiEdge {
                    from: 0,
                    to: 1,
                    w1: 1,
                    w2: 5
                },
                BiEdge {
                    from: 1,
                    to: 2,
                    w1: 1,
                    w2: 5
                }
            ]
        );
        assert_eq!(g.out_edges(0), &[0]);
    }

    #[test]
    fn parses_single_vertex() {
        let g = BiweightedDigraph::parse("1 0\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# two-route\n\n3 1\n# edge\n0 2 10 2\n";
        let g = BiweightedDigraph::parse(text).unwrap();
        assert_eq!(g.edge(0).w1, 10);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = BiweightedDigraph::parse("3 2\n0 1 1 5\n1 x 1 5\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = BiweightedDigraph::parse("3 2\n0 1 1 5\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = BiweightedDigraph::parse("3 1\n0 1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn out_of_range_vertex_is_rejected() {
        let err = BiweightedDigraph::parse("2 1\n0 2 1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        assert!(matches!(
            BiweightedDigraph::new(
                2,
                vec![BiEdge {
                    from: 0,
                    to: 5,
                    w1: 0,
                    w2: 0
                }]
            ),
            Err(GraphError::VertexOutOfRange { vertex: 5, n: 2 })
        ));
    }

    #[test]
    fn parallel_edges_and_loops_rejected_outside_multigraph() {
        let err = BiweightedDigraph::parse("2 2\n0 1 1 1\n0 1 2 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        assert!(WeightedDigraph::parse("2 1\n1 1 3\n").is_err());
        // antiparallel is fine for digraphs but a duplicate for undirected graphs
        assert!(WeightedDigraph::parse("2 2\n0 1 1\n1 0 1\n").is_ok());
        assert!(WeightedGraph::parse("2 2\n0 1 1\n1 0 1\n").is_err());
    }

    #[test]
    fn weighted_vertex_cost_flag() {
        let g = WeightedDigraph::parse("2 1 V\n1 2\n0 1 7\n").unwrap();
        assert_eq!(g.vertex_costs(), Some(&[1.0, 2.0][..]));
        assert_eq!(g.serialize(), "2 1 V\n1 2\n0 1 7\n");
        assert!(WeightedDigraph::parse("2 1 X\n0 1 7\n").is_err());
        assert!(WeightedDigraph::parse("2 1\n0 1 -1\n").is_err());
    }

    #[test]
    fn colored_formats() {
        let g = ColoredDigraph::parse("3 2 2\n0 0 1\n0 1 1.5 1\n1 2 2 2\n").unwrap();
        assert_eq!(g.edge(0).cost, 1.5);
        assert_eq!(g.vertex_cost(2), 1.0);
        assert!(ColoredDigraph::parse("2 1 1\n0 0\n0 1 1 2\n").is_err());

        let m = ColoredMultigraph::parse("2 3 2\n2 0 1 2\n1 0 1 1\n3 1 1 1\n").unwrap();
        assert_eq!(m.edges()[0].id, 1);
        assert_eq!(m.degree(1), 4);
        assert_eq!(m.degree(0), 2);
        let err = ColoredMultigraph::parse("2 2 1\n1 0 1 1\n1 0 1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        assert!(ColoredMultigraph::parse("2 1 1\n2 0 1 1\n").is_err());
    }

    #[test]
    fn transpose_reverses_edges() {
        let g = WeightedDigraph::new(
            2,
            vec![WeightedEdge {
                from: 0,
                to: 1,
                weight: 3.0,
            }],
        )
        .unwrap();
        let t = transpose(&g);
        assert_eq!(
            t.edges(),
            &[WeightedEdge {
                from: 1,
                to: 0,
                weight: 3.0
            }]
        );
        assert_eq!(t.out_edges(1), &[0]);
        let empty = WeightedDigraph::new(0, vec![]).unwrap();
        assert_eq!(transpose(&empty), empty);
    }

    #[test]
    fn doubling_one_edge() {
        let ug = WeightedGraph::new(
            2,
            vec![WeightedEdge {
                from: 0,
                to: 1,
                weight: 2.0,
            }],
        )
        .unwrap();
        let d = undirected_to_directed(&ug);
        assert_eq!(
            d.digraph.edges(),
            &[
                WeightedEdge {
                    from: 0,
                    to: 1,
                    weight: 2.0
                },
                WeightedEdge {
                    from: 1,
                    to: 0,
                    weight: 2.0
                }
            ]
        );
        assert_eq!(d.origin, vec![0, 0]);
    }

    #[test]
    fn any_graph_dispatch() {
        let text = "1 0\n";
        let g = parse_graph(text, "biweighted".parse().unwrap()).unwrap();
        assert_eq!(serialize_graph(&g), text);
        assert!("nope".parse::<GraphKind>().is_err());
    }

    #[test]
    fn topological_order_detects_cycles() {
        let dag = BiweightedDigraph::parse("3 2\n0 1 0 0\n1 2 0 0\n").unwrap();
        assert_eq!(dag.topological_order(), Some(vec![0, 1, 2]));
        let cyc = BiweightedDigraph::parse("2 2\n0 1 0 0\n1 0 0 0\n").unwrap();
        assert!(!cyc.is_acyclic());
    }
}
