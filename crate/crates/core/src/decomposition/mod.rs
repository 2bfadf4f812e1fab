//! Tree decompositions and tree-partitions, with optional ball covers per
//! bag.
//!
//! Node ids are positions in `nodes`; the JSON form repeats them as `id` so
//! files stay readable, and reading checks they match.

mod convert;
mod stats;
mod validate;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Ball;

pub use convert::{balanced_bag, layered_tree_partition, tree_partition_to_tree_decomposition, LayerShape};
pub(crate) use stats::decimal;
pub use stats::{coverability_stats, potential, BagStats, CoverStats};
pub use validate::{validate_tree_decomposition, validate_tree_partition, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub bag: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<Ball>>,
}

impl Node {
    pub fn new(id: usize, mut bag: Vec<usize>, cover: Option<Vec<Ball>>) -> Self {
        bag.sort_unstable();
        bag.dedup();
        Node { id, bag, cover }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub nodes: Vec<Node>,
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePartition {
    pub nodes: Vec<Node>,
    pub tree_edges: Vec<(usize, usize)>,
    pub spread: u64,
}

/// Adjacency lists of the underlying tree, after checking ids and shape.
pub(crate) fn tree_adjacency(nodes: &[Node], edges: &[(usize, usize)]) -> std::result::Result<Vec<Vec<usize>>, String> {
    let t = nodes.len();
    if let Some((i, n)) = nodes.iter().enumerate().find(|(i, n)| n.id != *i) {
        return Err(format!("node at position {i} has id {}", n.id));
    }
    let mut adj = vec![Vec::new(); t];
    for &(a, b) in edges {
        if a >= t || b >= t {
            return Err(format!("tree edge ({a}, {b}) names a missing node"));
        }
        if a == b {
            return Err(format!("tree edge ({a}, {b}) is a loop"));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if t == 0 {
        return Ok(adj);
    }
    if edges.len() != t - 1 {
        return Err(format!("{t} nodes need {} tree edges, found {}", t - 1, edges.len()));
    }
    let mut seen = vec![false; t];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(x) => Err(format!("node {x} is not connected to node 0")),
        None => {
            for list in &mut adj {
                list.sort_unstable();
            }
            Ok(adj)
        }
    }
}

/// Hop distances in the tree from `source`.
pub(crate) fn tree_distances(adj: &[Vec<usize>], source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn dot(name: &str, nodes: &[Node], edges: &[(usize, usize)]) -> String {
    let mut out = format!("graph {name} {{\n  node [shape=box];\n");
    for n in nodes {
        let bag: Vec<String> = n.bag.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  n{} [label=\"{}: {{{}}}\"];", n.id, n.id, bag.join(","));
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    out.push_str("}\n");
    out
}

impl TreeDecomposition {
    /// Reads JSON and checks that the tree is a tree.
    pub fn from_json(s: &str) -> Result<Self> {
        let td: TreeDecomposition = serde_json::from_str(s)?;
        tree_adjacency(&td.nodes, &td.tree_edges).map_err(Error::input)?;
        Ok(td)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        dot("td", &self.nodes, &self.tree_edges)
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn has_covers(&self) -> bool {
        !self.nodes.is_empty() && self.nodes.iter().all(|n| n.cover.is_some())
    }
}

impl TreePartition {
    pub fn from_json(s: &str) -> Result<Self> {
        let tp: TreePartition = serde_json::from_str(s)?;
        tree_adjacency(&tp.nodes, &tp.tree_edges).map_err(Error::input)?;
        Ok(tp)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        dot("tp", &self.nodes, &self.tree_edges)
    }

    /// Largest bag size.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Bag index of every vertex, for a graph on `n` vertices. `None` for
    /// vertices in no bag.
    pub fn owner(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for node in &self.nodes {
            for &v in node.bag.iter().filter(|&&v| v < n) {
                owner[v] = Some(node.id);
            }
        }
        owner
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let td = TreeDecomposition {
            nodes: vec![
                Node::new(0, vec![1, 0], Some(vec![Ball::new(0, 1)])),
                Node::new(1, vec![1, 2], None),
            ],
            tree_edges: vec![(0, 1)],
        };
        let s = serde_json::to_string(&td).unwrap();
        assert_eq!(
            s,
            r#"{"nodes":[{"id":0,"bag":[0,1],"cover":[{"center":0,"radius":1}]},{"id":1,"bag":[1,2]}],"tree_edges":[[0,1]]}"#
        );
        assert_eq!(TreeDecomposition::from_json(&s).unwrap(), td);
        assert!(td.to_dot().contains("n0 -- n1"));
    }

    #[test]
    fn rejects_non_trees() {
        let bad = r#"{"nodes":[{"id":0,"bag":[]},{"id":1,"bag":[]}],"tree_edges":[]}"#;
        assert!(TreeDecomposition::from_json(bad).is_err());
        let bad_id = r#"{"nodes":[{"id":3,"bag":[]}],"tree_edges":[]}"#;
        assert!(TreeDecomposition::from_json(bad_id).is_err());
    }
}
