use std::fmt;

use serde::Serialize;

use super::{tree_adjacency, Node, TreeDecomposition, TreePartition};
use crate::graph::{bounded_bfs, Ball, Graph};

/// One broken axiom, with the edge, vertex or node that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    TreeShape {
        reason: String,
    },
    VertexOutOfRange {
        node: usize,
        vertex: usize,
    },
    VertexMissing {
        vertex: usize,
    },
    EdgeUncovered {
        u: usize,
        v: usize,
    },
    SubtreeDisconnected {
        vertex: usize,
        nodes: Vec<usize>,
    },
    CoverBallInvalid {
        node: usize,
        ball: Ball,
    },
    CoverMissesVertex {
        node: usize,
        vertex: usize,
    },
    VertexInTwoBags {
        vertex: usize,
        nodes: (usize, usize),
    },
    EdgeAcrossNonAdjacentBags {
        u: usize,
        v: usize,
        nodes: (usize, usize),
    },
    SpreadBroken {
        u: usize,
        v: usize,
        dist: u64,
        nodes: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TreeShape { reason } => write!(f, "tree: {reason}"),
            Violation::VertexOutOfRange { node, vertex } => {
                write!(f, "node {node}: bag names vertex {vertex} outside the graph")
            }
            Violation::VertexMissing { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::EdgeUncovered { u, v } => write!(f, "edge ({u}, {v}) is in no bag"),
            Violation::SubtreeDisconnected { vertex, nodes } => {
                write!(
                    f,
                    "vertex {vertex}: bags at nodes {nodes:?} are not connected in the tree"
                )
            }
            Violation::CoverBallInvalid { node, ball } => {
                write!(
                    f,
                    "node {node}: cover ball centered at {} is outside the graph",
                    ball.center
                )
            }
            Violation::CoverMissesVertex { node, vertex } => {
                write!(f, "node {node}: cover misses bag vertex {vertex}")
            }
            Violation::VertexInTwoBags { vertex, nodes } => {
                write!(f, "vertex {vertex} is in bags {} and {}", nodes.0, nodes.1)
            }
            Violation::EdgeAcrossNonAdjacentBags { u, v, nodes } => write!(
                f,
                "edge ({u}, {v}) joins bags {} and {}, which are not adjacent",
                nodes.0, nodes.1
            ),
            Violation::SpreadBroken { u, v, dist, nodes } => write!(
                f,
                "vertices {u}, {v} at distance {dist} sit in bags {} and {}, which are not adjacent",
                nodes.0, nodes.1
            ),
        }
    }
}

/// Checks the tree shape, vertex and edge coverage, subtree connectivity
/// and, where present, the cover of every bag.
pub fn validate_tree_decomposition(graph: &Graph, td: &TreeDecomposition) -> Vec<Violation> {
    let n = graph.n();
    let adj = match tree_adjacency(&td.nodes, &td.tree_edges) {
        Ok(adj) => adj,
        Err(reason) => return vec![Violation::TreeShape { reason }],
    };
    let mut out = range_violations(n, &td.nodes);
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for node in &td.nodes {
        for &v in node.bag.iter().filter(|&&v| v < n) {
            holders[v].push(node.id);
        }
    }
    for (v, nodes) in holders.iter().enumerate() {
        if nodes.is_empty() {
            out.push(Violation::VertexMissing { vertex: v });
        } else if !induces_subtree(&adj, nodes) {
            out.push(Violation::SubtreeDisconnected {
                vertex: v,
                nodes: nodes.clone(),
            });
        }
    }
    for (u, v) in graph.edges() {
        if !holders[u].iter().any(|x| holders[v].binary_search(x).is_ok()) {
            out.push(Violation::EdgeUncovered { u, v });
        }
    }
    out.extend(cover_violations(graph, &td.nodes));
    out
}

/// Checks the partition and edge axioms, then the claimed spread by
/// exhaustive search over pairs within that distance.
pub fn validate_tree_partition(graph: &Graph, tp: &TreePartition) -> Vec<Violation> {
    let n = graph.n();
    let adj = match tree_adjacency(&tp.nodes, &tp.tree_edges) {
        Ok(adj) => adj,
        Err(reason) => return vec![Violation::TreeShape { reason }],
    };
    let mut out = range_violations(n, &tp.nodes);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for node in &tp.nodes {
        for &v in node.bag.iter().filter(|&&v| v < n) {
            match owner[v] {
                Some(first) => out.push(Violation::VertexInTwoBags {
                    vertex: v,
                    nodes: (first, node.id),
                }),
                None => owner[v] = Some(node.id),
            }
        }
    }
    for (v, o) in owner.iter().enumerate() {
        if o.is_none() {
            out.push(Violation::VertexMissing { vertex: v });
        }
    }
    let close = |a: usize, b: usize| a == b || adj[a].binary_search(&b).is_ok();
    for (u, v) in graph.edges() {
        if let (Some(a), Some(b)) = (owner[u], owner[v]) {
            if !close(a, b) {
                out.push(Violation::EdgeAcrossNonAdjacentBags { u, v, nodes: (a, b) });
            }
        }
    }
    if tp.spread >= 2 {
        for u in 0..n {
            let Some(a) = owner[u] else { continue };
            for (v, d) in bounded_bfs(graph, u, tp.spread).into_iter().enumerate() {
                let (Some(d), Some(b)) = (d, owner[v]) else {
                    continue;
                };
                if u < v && d >= 2 && !close(a, b) {
                    out.push(Violation::SpreadBroken {
                        u,
                        v,
                        dist: d,
                        nodes: (a, b),
                    });
                }
            }
        }
    }
    out.extend(cover_violations(graph, &tp.nodes));
    out
}

fn range_violations(n: usize, nodes: &[Node]) -> Vec<Violation> {
    nodes
        .iter()
        .flat_map(|node| {
            node.bag
                .iter()
                .filter(move |&&v| v >= n)
                .map(move |&v| Violation::VertexOutOfRange {
                    node: node.id,
                    vertex: v,
                })
        })
        .collect()
}

/// Whether `nodes` (sorted, non-empty) induce a connected subgraph of the
/// tree.
fn induces_subtree(adj: &[Vec<usize>], nodes: &[usize]) -> bool {
    let inside = |x: usize| nodes.binary_search(&x).is_ok();
    let mut seen = vec![nodes[0]];
    let mut stack = vec![nodes[0]];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if inside(y) && !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    seen.len() == nodes.len()
}

fn cover_violations(graph: &Graph, nodes: &[Node]) -> Vec<Violation> {
    let n = graph.n();
    let mut out = Vec::new();
    for node in nodes {
        let Some(cover) = &node.cover else { continue };
        let mut covered = vec![false; n];
        for ball in cover {
            if ball.center >= n {
                out.push(Violation::CoverBallInvalid {
                    node: node.id,
                    ball: *ball,
                });
                continue;
            }
            for (v, d) in bounded_bfs(graph, ball.center, ball.radius).into_iter().enumerate() {
                covered[v] |= d.is_some();
            }
        }
        for &v in node.bag.iter().filter(|&&v| v < n) {
            if !covered[v] {
                out.push(Violation::CoverMissesVertex {
                    node: node.id,
                    vertex: v,
                });
            }
        }
    }
    out
}
