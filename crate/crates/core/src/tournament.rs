//! Hamiltonian paths in tournaments that are only accessible through an edge
//! query `ask(u, v)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TournamentError {
    #[error("tournament has no vertices")]
    Empty,
    #[error("oracle queried with u = v = {0}")]
    SelfQuery(usize),
    #[error("oracle gave inconsistent answers for the pair ({0}, {1})")]
    Inconsistent(usize, usize),
    #[error("oracle answer {answer} for ({u}, {v}) is not +1 or -1")]
    InvalidAnswer { u: usize, v: usize, answer: i8 },
    #[error("bubble strategy still swapping after {0} passes")]
    PassLimit(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
}

/// A tournament on vertices `0..size()`. `ask(u, v)` is `+1` when the edge
/// goes `u -> v` and `-1` when it goes `v -> u`.
pub trait Tournament {
    fn size(&self) -> usize;
    fn ask(&self, u: usize, v: usize) -> i8;
}

/// `i -> j` iff `i < j`; its only Hamiltonian path is `0, 1, ..., n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitiveTournament {
    pub n: usize,
}

impl Tournament for TransitiveTournament {
    fn size(&self) -> usize {
        self.n
    }

    fn ask(&self, u: usize, v: usize) -> i8 {
        if u < v {
            1
        } else {
            -1
        }
    }
}

/// Pseudo-random tournament defined implicitly by a hash of the seed and the
/// unordered pair, so arbitrarily large `n` costs no memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomTournament {
    pub n: usize,
    pub seed: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl Tournament for RandomTournament {
    fn size(&self) -> usize {
        self.n
    }

    fn ask(&self, u: usize, v: usize) -> i8 {
        let (a, b) = (u.min(v) as u64, u.max(v) as u64);
        let low_to_high = splitmix64(self.seed ^ splitmix64(a.wrapping_mul(0x1_0000_0001) ^ (b << 21) ^ b)) & 1 == 1;
        if low_to_high == (u < v) {
            1
        } else {
            -1
        }
    }
}

/// Explicit sign matrix: entry `(u, v)` is `ask(u, v)`; the diagonal is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTournament {
    n: usize,
    sign: Vec<i8>,
}

impl MatrixTournament {
    pub fn new(n: usize, sign: Vec<i8>) -> Self {
        assert_eq!(sign.len(), n * n, "sign matrix must be n x n");
        Self { n, sign }
    }

    /// Random consistent tournament drawn from `bits`, one bit per pair `u < v`
    /// in row-major order.
    pub fn from_upper(n: usize, mut bits: impl FnMut() -> bool) -> Self {
        let mut sign = vec![0i8; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let s = if bits() { 1 } else { -1 };
                sign[u * n + v] = s;
                sign[v * n + u] = -s;
            }
        }
        Self { n, sign }
    }

    /// First non-comment line holds `n`, followed by `n` rows of `n` entries
    /// from `{-1, 0, 1}`. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, TournamentError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line, message: String| TournamentError::Parse { line, message };
        let (line, header) = lines.next().ok_or_else(|| err(0, "missing vertex count".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| err(line, format!("invalid vertex count {header:?}")))?;
        let mut sign = Vec::with_capacity(n * n);
        let mut last = line;
        for row in 0..n {
            let (line, text) = lines.next().ok_or_else(|| err(last, format!("missing row {row}")))?;
            last = line;
            let before = sign.len();
            for tok in text.split_whitespace() {
                match tok {
                    "1" | "+1" => sign.push(1),
                    "-1" => sign.push(-1),
                    "0" => sign.push(0),
                    _ => return Err(err(line, format!("invalid entry {tok:?}"))),
                }
            }
            if sign.len() - before != n {
                return Err(err(
                    line,
                    format!("expected {n} entries, found {}", sign.len() - before),
                ));
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "trailing data".into()));
        }
        Ok(Self { n, sign })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.sign.chunks(self.n.max(1)).take(self.n) {
            let cells: Vec<String> = row.iter().map(i8::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Tournament for MatrixTournament {
    fn size(&self) -> usize {
        self.n
    }

    fn ask(&self, u: usize, v: usize) -> i8 {
        self.sign[u * self.n + v]
    }
}

/// Adapts a closure `ask(u, v)`.
pub struct FnTournament<F> {
    pub n: usize,
    pub ask: F,
}

impl<F: Fn(usize, usize) -> i8> Tournament for FnTournament<F> {
    fn size(&self) -> usize {
        self.n
    }

    fn ask(&self, u: usize, v: usize) -> i8 {
        (self.ask)(u, v)
    }
}

/// Memoizing, validating wrapper. Each unordered pair is sent to the
/// tournament in both orientations the first time it is needed; later requests
/// are answered from the cache. `query_count` counts distinct pairs.
pub struct QueryOracle<'t, T: Tournament + ?Sized> {
    tournament: &'t T,
    memo: HashMap<(usize, usize), bool>,
}

impl<'t, T: Tournament + ?Sized> QueryOracle<'t, T> {
    pub fn new(tournament: &'t T) -> Self {
        Self {
            tournament,
            memo: HashMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.tournament.size()
    }

    /// Whether the edge goes `u -> v`.
    pub fn edge(&mut self, u: usize, v: usize) -> Result<bool, TournamentError> {
        if u == v {
            return Err(TournamentError::SelfQuery(u));
        }
        let key = (u.min(v), u.max(v));
        let low_to_high = match self.memo.get(&key) {
            Some(&d) => d,
            None => {
                let (a, b) = key;
                let forward = self.tournament.ask(a, b);
                let backward = self.tournament.ask(b, a);
                for (u, v, answer) in [(a, b, forward), (b, a, backward)] {
                    if answer != 1 && answer != -1 {
                        return Err(TournamentError::InvalidAnswer { u, v, answer });
                    }
                }
                if forward == backward {
                    return Err(TournamentError::Inconsistent(a, b));
                }
                self.memo.insert(key, forward == 1);
                forward == 1
            }
        };
        Ok(low_to_high == (u < v))
    }

    pub fn query_count(&self) -> usize {
        self.memo.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Insertion,
    Bubble,
    BinaryInsertion,
    MergeSort,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Insertion,
        Strategy::Bubble,
        Strategy::BinaryInsertion,
        Strategy::MergeSort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Insertion => "insertion",
            Strategy::Bubble => "bubble",
            Strategy::BinaryInsertion => "binaryInsertion",
            Strategy::MergeSort => "mergeSort",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = TournamentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "insertion" => Ok(Strategy::Insertion),
            "bubble" => Ok(Strategy::Bubble),
            "binaryinsertion" | "binary" => Ok(Strategy::BinaryInsertion),
            "mergesort" | "merge" => Ok(Strategy::MergeSort),
            _ => Err(TournamentError::UnknownStrategy(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianPath {
    pub order: Vec<usize>,
    /// Distinct pairs queried while building the path.
    pub queries: usize,
}

/// Passes allowed before the bubble strategy gives up. Every swap removes one
/// backward pair, so `n (n - 1) / 2 + 1` passes always suffice.
pub fn bubble_pass_limit(n: usize) -> usize {
    n * n.saturating_sub(1) / 2 + 1
}

pub fn ham_path<T: Tournament + ?Sized>(t: &T, strategy: Strategy) -> Result<HamiltonianPath, TournamentError> {
    let mut oracle = QueryOracle::new(t);
    let order = ham_path_with(&mut oracle, strategy)?;
    Ok(HamiltonianPath {
        order,
        queries: oracle.query_count(),
    })
}

pub fn ham_path_with<T: Tournament + ?Sized>(
    oracle: &mut QueryOracle<'_, T>,
    strategy: Strategy,
) -> Result<Vec<usize>, TournamentError> {
    if oracle.size() == 0 {
        return Err(TournamentError::Empty);
    }
    match strategy {
        Strategy::Insertion => insertion(oracle),
        Strategy::Bubble => bubble(oracle),
        Strategy::BinaryInsertion => binary_insertion(oracle),
        Strategy::MergeSort => {
            let mut order: Vec<usize> = (0..oracle.size()).collect();
            merge_sort(oracle, &mut order)?;
            Ok(order)
        }
    }
}

/// True iff `order` is a permutation of `0..n` and every consecutive pair is
/// an edge in path direction.
pub fn verify_ham_path<T: Tournament + ?Sized>(t: &T, order: &[usize]) -> bool {
    let n = t.size();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return false;
    }
    order.windows(2).all(|w| t.ask(w[0], w[1]) == 1)
}

fn insertion<T: Tournament + ?Sized>(oracle: &mut QueryOracle<'_, T>) -> Result<Vec<usize>, TournamentError> {
    let mut path = vec![0];
    for i in 1..oracle.size() {
        let mut at = path.len();
        for (j, &v) in path.iter().enumerate() {
            if oracle.edge(i, v)? {
                at = j;
                break;
            }
        }
        path.insert(at, i);
    }
    Ok(path)
}

fn bubble<T: Tournament + ?Sized>(oracle: &mut QueryOracle<'_, T>) -> Result<Vec<usize>, TournamentError> {
    let n = oracle.size();
    let mut p: Vec<usize> = (0..n).collect();
    let limit = bubble_pass_limit(n);
    for _ in 0..limit {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1) {
            if oracle.edge(p[i + 1], p[i])? {
                p.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            return Ok(p);
        }
    }
    Err(TournamentError::PassLimit(limit))
}

fn binary_insertion<T: Tournament + ?Sized>(oracle: &mut QueryOracle<'_, T>) -> Result<Vec<usize>, TournamentError> {
    let mut path = ImplicitTreap::with_capacity(oracle.size());
    path.insert(0, 0);
    for i in 1..oracle.size() {
        let len = path.len();
        if oracle.edge(i, path.get(0))? {
            path.insert(0, i);
            continue;
        }
        if oracle.edge(path.get(len - 1), i)? {
            path.insert(len, i);
            continue;
        }
        // v(a) -> i and i -> v(b), 0-based positions
        let (mut a, mut b) = (0, len - 1);
        while b > a + 1 {
            let c = (a + b) / 2;
            if oracle.edge(path.get(c), i)? {
                a = c;
            } else {
                b = c;
            }
        }
        path.insert(a + 1, i);
    }
    Ok(path.to_vec())
}

/// Top-down merge sort with "`u` before `v` iff `u -> v`". The relation need
/// not be transitive; each merge still joins two paths into one.
fn merge_sort<T: Tournament + ?Sized>(
    oracle: &mut QueryOracle<'_, T>,
    xs: &mut [usize],
) -> Result<(), TournamentError> {
    if xs.len() < 2 {
        return Ok(());
    }
    let mid = xs.len() / 2;
    merge_sort(oracle, &mut xs[..mid])?;
    merge_sort(oracle, &mut xs[mid..])?;
    let mut merged = Vec::with_capacity(xs.len());
    let (mut i, mut j) = (0, mid);
    while i < mid && j < xs.len() {
        if oracle.edge(xs[i], xs[j])? {
            merged.push(xs[i]);
            i += 1;
        } else {
            merged.push(xs[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&xs[i..mid]);
    merged.extend_from_slice(&xs[j..]);
    xs.copy_from_slice(&merged);
    Ok(())
}

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    value: usize,
    priority: u64,
    left: u32,
    right: u32,
    size: u32,
}

/// Sequence with `O(log n)` expected positional access and insertion.
/// Priorities come from a fixed hash of the node index, so runs are
/// reproducible.
#[derive(Debug, Clone)]
pub struct ImplicitTreap {
    nodes: Vec<Node>,
    root: u32,
}

impl Default for ImplicitTreap {
    fn default() -> Self {
        Self::with_capacity(0)
    }
}

impl ImplicitTreap {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            nodes: Vec::with_capacity(n),
            root: NIL,
        }
    }

    pub fn len(&self) -> usize {
        self.size(self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    fn size(&self, t: u32) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size as usize
        }
    }

    fn update(&mut self, t: u32) {
        let node = self.nodes[t as usize];
        self.nodes[t as usize].size = (1 + self.size(node.left) + self.size(node.right)) as u32;
    }

    pub fn get(&self, mut index: usize) -> usize {
        let mut t = self.root;
        loop {
            assert!(t != NIL, "index out of bounds");
            let node = &self.nodes[t as usize];
            let left = self.size(node.left);
            match index.cmp(&left) {
                std::cmp::Ordering::Less => t = node.left,
                std::cmp::Ordering::Equal => return node.value,
                std::cmp::Ordering::Greater => {
                    index -= left + 1;
                    t = node.right;
                }
            }
        }
    }

    /// Inserts `value` so that it ends up at position `index`.
    pub fn insert(&mut self, index: usize, value: usize) {
        assert!(index <= self.len(), "index out of bounds");
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            value,
            priority: splitmix64(id as u64),
            left: NIL,
            right: NIL,
            size: 1,
        });
        let (l, r) = self.split(self.root, index);
        let l = self.merge(l, id);
        self.root = self.merge(l, r);
    }

    /// First `k` elements of `t` go left.
    fn split(&mut self, t: u32, k: usize) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let node = self.nodes[t as usize];
        let left = self.size(node.left);
        if k <= left {
            let (a, b) = self.split(node.left, k);
            self.nodes[t as usize].left = b;
            self.update(t);
            (a, t)
        } else {
            let (a, b) = self.split(node.right, k - left - 1);
            self.nodes[t as usize].right = a;
            self.update(t);
            (t, b)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].priority > self.nodes[b as usize].priority {
            let r = self.nodes[a as usize].right;
            self.nodes[a as usize].right = self.merge(r, b);
            self.update(a);
            a
        } else {
            let l = self.nodes[b as usize].left;
            self.nodes[b as usize].left = self.merge(a, l);
            self.update(b);
            b
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut t = self.root;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let top = stack.pop().expect("stack is non-empty");
            out.push(self.nodes[top as usize].value);
            t = self.nodes[top as usize].right;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic3() -> MatrixTournament {
        MatrixTournament::parse("3\n0 1 -1\n-1 0 1\n1 -1 0\n").unwrap()
    }

    #[test]
    fn single_vertex() {
        for s in Strategy::ALL {
            let p = ham_path(&TransitiveTournament { n: 1 }, s).unwrap();
            assert_eq!(p.order, vec![0]);
            assert_eq!(p.queries, 0);
        }
    }

    #[test]
    fn empty_is_error() {
        assert_eq!(
            ham_path(&TransitiveTournament { n: 0 }, Strategy::Bubble),
            Err(TournamentError::Empty)
        );
    }

    #[test]
    fn three_cycle() {
        let t = cyclic3();
        for s in Strategy::ALL {
            let p = ham_path(&t, s).unwrap();
            assert!(verify_ham_path(&t, &p.order), "{s}: {:?}", p.order);
        }
    }

    #[test]
    fn transitive_gives_identity() {
        let t = TransitiveTournament { n: 40 };
        for s in Strategy::ALL {
            assert_eq!(ham_path(&t, s).unwrap().order, (0..40).collect::<Vec<_>>(), "{s}");
        }
    }

    #[test]
    fn reversed_transitive() {
        let t = FnTournament {
            n: 30,
            ask: |u: usize, v: usize| if u > v { 1 } else { -1 },
        };
        for s in Strategy::ALL {
            assert_eq!(ham_path(&t, s).unwrap().order, (0..30).rev().collect::<Vec<_>>(), "{s}");
        }
    }

    #[test]
    fn verify_rejects() {
        let t = TransitiveTournament { n: 3 };
        assert!(verify_ham_path(&t, &[0, 1, 2]));
        assert!(!verify_ham_path(&t, &[2, 1, 0]));
        assert!(!verify_ham_path(&t, &[0, 1]));
        assert!(!verify_ham_path(&t, &[0, 1, 1]));
    }

    #[test]
    fn random_tournaments_and_query_bounds() {
        for seed in 0..20 {
            let n = 1 + (seed as usize * 37) % 200;
            let t = RandomTournament { n, seed };
            let log = (n as f64).log2().ceil() as usize;
            for s in Strategy::ALL {
                let p = ham_path(&t, s).unwrap();
                assert!(verify_ham_path(&t, &p.order), "{s} n={n}");
                match s {
                    Strategy::BinaryInsertion => assert!(p.queries <= n * (log + 2)),
                    Strategy::MergeSort => assert!(p.queries <= n * log + n),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn random_tournament_is_antisymmetric_and_deterministic() {
        let t = RandomTournament { n: 50, seed: 9 };
        for u in 0..50 {
            for v in 0..50 {
                if u != v {
                    assert_eq!(t.ask(u, v), -t.ask(v, u));
                }
            }
        }
        let a = ham_path(&t, Strategy::MergeSort).unwrap();
        assert_eq!(a, ham_path(&t, Strategy::MergeSort).unwrap());
    }

    #[test]
    fn oracle_detects_inconsistency() {
        let t = FnTournament {
            n: 3,
            ask: |_: usize, _: usize| 1,
        };
        assert_eq!(
            ham_path(&t, Strategy::Insertion),
            Err(TournamentError::Inconsistent(0, 1))
        );
        let t = FnTournament {
            n: 2,
            ask: |_: usize, _: usize| 0,
        };
        assert!(matches!(
            ham_path(&t, Strategy::MergeSort),
            Err(TournamentError::InvalidAnswer { .. })
        ));
    }

    #[test]
    fn oracle_counts_distinct_pairs() {
        let t = TransitiveTournament { n: 4 };
        let mut o = QueryOracle::new(&t);
        assert!(o.edge(0, 1).unwrap());
        assert!(!o.edge(1, 0).unwrap());
        assert!(o.edge(2, 3).unwrap());
        assert_eq!(o.query_count(), 2);
        assert_eq!(o.edge(2, 2), Err(TournamentError::SelfQuery(2)));
    }

    #[test]
    fn matrix_round_trip_and_errors() {
        let t = cyclic3();
        assert_eq!(MatrixTournament::parse(&t.serialize()).unwrap(), t);
        assert!(matches!(
            MatrixTournament::parse("2\n0 1\n"),
            Err(TournamentError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            MatrixTournament::parse("2\n0 1\n-1 x\n"),
            Err(TournamentError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            MatrixTournament::parse("1\n0 1\n"),
            Err(TournamentError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn strategy_names() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert_eq!(
            "binary-insertion".parse::<Strategy>().unwrap(),
            Strategy::BinaryInsertion
        );
        assert!("quick".parse::<Strategy>().is_err());
    }

    #[test]
    fn treap_matches_vec() {
        let mut treap = ImplicitTreap::default();
        let mut vec = Vec::new();
        for i in 0..500usize {
            let at = (i * 7919) % (vec.len() + 1);
            treap.insert(at, i);
            vec.insert(at, i);
        }
        assert_eq!(treap.to_vec(), vec);
        assert_eq!(treap.get(123), vec[123]);
        assert_eq!(treap.len(), 500);
    }
}
