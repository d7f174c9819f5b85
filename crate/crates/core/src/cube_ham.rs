//! Hamiltonian path in the cube of a connected graph: consecutive vertices of
//! the returned order are at distance at most 3 in the original graph.
//!
//! A spanning tree is traversed depth-first; vertices on odd levels are
//! emitted when first entered and vertices on even levels after their whole
//! subtree is finished.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Vertex, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubeHamError {
    #[error("graph is not connected: vertex {0} is unreachable from the root")]
    Disconnected(Vertex),
    #[error("root {root} out of range for a graph with {n} vertices")]
    RootOutOfRange { root: Vertex, n: usize },
}

/// Spanning tree with `parent[root] == root` and `level[root] == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub root: Vertex,
    pub parent: Vec<Vertex>,
    pub level: Vec<usize>,
    /// Children in the order the traversal discovered them.
    pub children: Vec<Vec<Vertex>>,
}

/// Depth-first spanning tree; neighbors are tried in ascending id order.
pub fn dfs_spanning_tree(ug: &WeightedGraph, root: Vertex) -> Result<RootedTree, CubeHamError> {
    let n = ug.vertex_count();
    if root >= n {
        return Err(CubeHamError::RootOutOfRange { root, n });
    }
    let nb = ug.neighbors();
    let mut parent = vec![usize::MAX; n];
    let mut level = vec![0; n];
    let mut children = vec![Vec::new(); n];
    parent[root] = root;
    level[root] = 1;
    let mut stack = vec![(root, 0usize)];
    while let Some((u, k)) = stack.last_mut() {
        let u = *u;
        if let Some(&v) = nb[u].get(*k) {
            *k += 1;
            if parent[v] == usize::MAX {
                parent[v] = u;
                level[v] = level[u] + 1;
                children[u].push(v);
                stack.push((v, 0));
            }
        } else {
            stack.pop();
        }
    }
    if let Some(v) = (0..n).find(|&v| parent[v] == usize::MAX) {
        return Err(CubeHamError::Disconnected(v));
    }
    Ok(RootedTree {
        root,
        parent,
        level,
        children,
    })
}

/// Level-parity emission order of a rooted tree.
pub fn tree_cube_order(tree: &RootedTree) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(tree.parent.len());
    let mut stack = vec![(tree.root, 0usize)];
    if tree.level[tree.root] % 2 == 1 {
        out.push(tree.root);
    }
    while let Some((u, k)) = stack.last_mut() {
        let u = *u;
        if let Some(&c) = tree.children[u].get(*k) {
            *k += 1;
            if tree.level[c] % 2 == 1 {
                out.push(c);
            }
            stack.push((c, 0));
        } else {
            if tree.level[u].is_multiple_of(2) {
                out.push(u);
            }
            stack.pop();
        }
    }
    out
}

/// Hamiltonian path of the cube of `ug`, rooted at `root` (default 0).
/// An empty graph yields an empty path.
pub fn cube_ham_path(ug: &WeightedGraph, root: Option<Vertex>) -> Result<Vec<Vertex>, CubeHamError> {
    if ug.vertex_count() == 0 && root.is_none() {
        return Ok(Vec::new());
    }
    let tree = dfs_spanning_tree(ug, root.unwrap_or(0))?;
    Ok(tree_cube_order(&tree))
}

/// Distance from `from` to `to` if it is at most `limit`.
fn bounded_distance(nb: &[Vec<Vertex>], from: Vertex, to: Vertex, limit: usize) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([(from, 0usize)]);
    while let Some((u, d)) = queue.pop_front() {
        if d == limit {
            continue;
        }
        for &v in &nb[u] {
            if v == to {
                return Some(d + 1);
            }
            if seen.insert(v) {
                queue.push_back((v, d + 1));
            }
        }
    }
    None
}

/// Graph distance of each consecutive pair, `None` where it exceeds 3.
pub fn step_distances(ug: &WeightedGraph, hp: &[Vertex]) -> Vec<Option<usize>> {
    let nb = ug.neighbors();
    hp.windows(2).map(|w| bounded_distance(&nb, w[0], w[1], 3)).collect()
}

/// True iff `hp` is a permutation of the vertices and consecutive vertices are
/// at graph distance at most 3.
pub fn verify_cube_path(ug: &WeightedGraph, hp: &[Vertex]) -> bool {
    let n = ug.vertex_count();
    let mut seen = vec![false; n];
    if hp.len() != n || hp.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return false;
    }
    step_distances(ug, hp).iter().all(Option::is_some)
}
