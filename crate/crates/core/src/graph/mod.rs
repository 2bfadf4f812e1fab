//! Graphs, metric primitives and coverability.
//!
//! Vertices are dense ids `0..n`. Every set-valued result is returned sorted
//! ascending so outputs are stable and diffable.

mod cover;
mod doubling;
mod independent;
pub mod io;
mod metric;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use cover::{greedy_cover, is_coverable, min_cover_size, Cover, CoverMode, MinCover};
pub(crate) use doubling::ceil_log2;
pub use doubling::{estimate_doubling_dimension, DoublingEstimate, DoublingScales};
pub use independent::{is_maximal_distance_r_independent, maximal_distance_r_independent_set};
pub use metric::{ball, bfs, components, dijkstra, multi_source_nearest, weighted_ball, DistanceMap, DistanceMatrix};
pub(crate) use metric::{bounded_bfs, components_masked};

/// Finite simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "io::GraphJson", into = "io::GraphJson")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Self-loops and out-of-range ids are
    /// rejected; repeated edges collapse into one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex { vertex: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n() })
        }
    }

    pub(crate) fn check_vertices(&self, set: &[usize]) -> Result<()> {
        set.iter().try_for_each(|&v| self.check_vertex(v))
    }
}

/// Graph with nonnegative rational edge weights.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "io::WeightedGraphJson", into = "io::WeightedGraphJson")]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, Rational)>>,
}

impl WeightedGraph {
    /// Builds a weighted graph. A repeated edge must repeat its weight.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut adj: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            if w < Rational::from_integer(0) {
                return Err(Error::input(format!("negative weight on edge ({u}, {v})")));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            let mut ids: Vec<usize> = list.iter().map(|e| e.0).collect();
            ids.dedup();
            if ids.len() != list.len() {
                return Err(Error::input("edge listed twice with different weights"));
            }
            debug_assert!(list.len() <= before);
        }
        Ok(WeightedGraph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Rational)] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |e| u < e.0).map(move |&(v, w)| (u, v, w)))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<Rational> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |e| e.0).ok().map(|i| list[i].1)
    }

    /// The same graph with the weights forgotten.
    pub fn skeleton(&self) -> Graph {
        Graph {
            adj: self.adj.iter().map(|list| list.iter().map(|e| e.0).collect()).collect(),
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n() })
        }
    }
}

/// A ball `Ball(center, radius)` in the hop metric of an unweighted graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ball {
    pub center: usize,
    pub radius: u64,
}

impl Ball {
    pub fn new(center: usize, radius: u64) -> Self {
        Ball { center, radius }
    }
}

/// Sorted union of the vertex sets of `balls`.
pub fn ball_union(graph: &Graph, balls: &[Ball]) -> Result<Vec<usize>> {
    let mut seen = vec![false; graph.n()];
    for b in balls {
        for v in ball(graph, b.center, b.radius)? {
            seen[v] = true;
        }
    }
    Ok(seen.iter().enumerate().filter_map(|(v, &s)| s.then_some(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_normalises() {
        let g = Graph::from_edges(3, [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(matches!(Graph::from_edges(2, [(0, 0)]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::InvalidVertex { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn weighted_rejects_conflicting_weights() {
        let w = Rational::from_integer;
        assert!(WeightedGraph::from_edges(2, [(0, 1, w(1)), (1, 0, w(1))]).is_ok());
        assert!(WeightedGraph::from_edges(2, [(0, 1, w(1)), (1, 0, w(2))]).is_err());
        assert!(WeightedGraph::from_edges(2, [(0, 1, w(-1))]).is_err());
        let g = WeightedGraph::from_edges(3, [(0, 1, w(3)), (2, 1, w(3))]).unwrap();
        assert_eq!(g.weight(1, 2), Some(w(3)));
        assert_eq!(g.skeleton().num_edges(), 2);
    }
}
