use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{Graph, WeightedGraph};
use crate::error::Result;
use crate::rational::Rational;

/// Single-source distances; `None` marks unreachable vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap<D> {
    pub source: usize,
    pub dist: Vec<Option<D>>,
}

impl<D: Copy> DistanceMap<D> {
    pub fn get(&self, v: usize) -> Option<D> {
        self.dist[v]
    }
}

pub fn bfs(graph: &Graph, source: usize) -> Result<DistanceMap<u64>> {
    graph.check_vertex(source)?;
    Ok(DistanceMap {
        source,
        dist: bounded_bfs(graph, source, u64::MAX),
    })
}

/// BFS that stops expanding past `limit`.
pub(crate) fn bounded_bfs(graph: &Graph, source: usize, limit: u64) -> Vec<Option<u64>> {
    let mut dist = vec![None; graph.n()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if du >= limit {
            continue;
        }
        for &v in graph.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn dijkstra(graph: &WeightedGraph, source: usize) -> Result<DistanceMap<Rational>> {
    graph.check_vertex(source)?;
    let mut dist: Vec<Option<Rational>> = vec![None; graph.n()];
    let mut done = vec![false; graph.n()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(Rational::from_integer(0));
    heap.push(Reverse((Rational::from_integer(0), source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in graph.neighbors(u) {
            let nd = d + w;
            if dist[v].is_none_or(|old| nd < old) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Ok(DistanceMap { source, dist })
}

/// `Ball(center, radius)`: all vertices within `radius` hops, sorted.
pub fn ball(graph: &Graph, center: usize, radius: u64) -> Result<Vec<usize>> {
    graph.check_vertex(center)?;
    Ok(bounded_bfs(graph, center, radius)
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.is_some().then_some(v))
        .collect())
}

/// Ball in a weighted graph, with an exact rational radius.
pub fn weighted_ball(graph: &WeightedGraph, center: usize, radius: Rational) -> Result<Vec<usize>> {
    let dm = dijkstra(graph, center)?;
    Ok(dm
        .dist
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.filter(|d| *d <= radius).map(|_| v))
        .collect())
}

/// Connected components of `graph - removed`, each sorted, listed by minimum
/// element.
pub fn components(graph: &Graph, removed: &[usize]) -> Result<Vec<Vec<usize>>> {
    graph.check_vertices(removed)?;
    let mut blocked = vec![false; graph.n()];
    for &v in removed {
        blocked[v] = true;
    }
    Ok(components_masked(graph, &blocked))
}

pub(crate) fn components_masked(graph: &Graph, blocked: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = blocked.to_vec();
    let mut out = Vec::new();
    for s in 0..graph.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &v in graph.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// For each vertex, its nearest source and the distance to it; ties go to
/// the lowest source id. `sources` must be sorted ascending.
///
/// Multi-source BFS with sources enqueued in ascending order labels every
/// vertex with the smallest of its nearest sources: within each BFS layer the
/// queue is ordered by label.
pub fn multi_source_nearest(graph: &Graph, sources: &[usize]) -> Result<Vec<Option<(usize, u64)>>> {
    graph.check_vertices(sources)?;
    debug_assert!(sources.windows(2).all(|w| w[0] < w[1]));
    let mut label: Vec<Option<(usize, u64)>> = vec![None; graph.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        label[s] = Some((s, 0));
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let (src, d) = label[u].unwrap();
        for &v in graph.neighbors(u) {
            if label[v].is_none() {
                label[v] = Some((src, d + 1));
                queue.push_back(v);
            }
        }
    }
    Ok(label)
}

/// All-pairs hop distances, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    const INF: u32 = u32::MAX;

    pub fn new(graph: &Graph) -> Self {
        let n = graph.n();
        let mut d = vec![Self::INF; n * n];
        for s in 0..n {
            for (v, dist) in bounded_bfs(graph, s, u64::MAX).into_iter().enumerate() {
                if let Some(x) = dist {
                    d[s * n + v] = x as u32;
                }
            }
        }
        DistanceMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u64> {
        let x = self.d[u * self.n + v];
        (x != Self::INF).then_some(x as u64)
    }

    pub fn within(&self, u: usize, v: usize, r: u64) -> bool {
        let x = self.d[u * self.n + v];
        x != Self::INF && (x as u64) <= r
    }

    pub fn row(&self, u: usize) -> impl Iterator<Item = Option<u64>> + '_ {
        self.d[u * self.n..(u + 1) * self.n]
            .iter()
            .map(|&x| (x != Self::INF).then_some(x as u64))
    }

    /// Eccentricity of `u` inside its component.
    pub fn eccentricity(&self, u: usize) -> u64 {
        self.row(u).flatten().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn path(n: usize) -> Graph {
        generate(&FamilySpec::Path { n }).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        generate(&FamilySpec::Cycle { n }).unwrap()
    }

    #[test]
    fn ball_examples() {
        assert_eq!(ball(&path(5), 2, 1).unwrap(), vec![1, 2, 3]);
        assert_eq!(ball(&cycle(8), 0, 2).unwrap(), vec![0, 1, 2, 6, 7]);
        assert_eq!(ball(&cycle(8), 5, 0).unwrap(), vec![5]);
        assert!(ball(&path(5), 5, 1).is_err());
    }

    #[test]
    fn components_examples() {
        let p5 = path(5);
        assert_eq!(components(&p5, &[2]).unwrap(), vec![vec![0, 1], vec![3, 4]]);
        assert_eq!(components(&p5, &[]).unwrap(), vec![vec![0, 1, 2, 3, 4]]);
        let k4 = generate(&FamilySpec::Complete { n: 4 }).unwrap();
        assert!(components(&k4, &[0, 1, 2, 3]).unwrap().is_empty());
        assert!(components(&p5, &[7]).is_err());
    }

    #[test]
    fn dijkstra_matches_scaled_bfs() {
        let c = cycle(9);
        let w = WeightedGraph::from_edges(9, c.edges().map(|(u, v)| (u, v, Rational::new(3, 2)))).unwrap();
        let hops = bfs(&c, 4).unwrap();
        let dm = dijkstra(&w, 4).unwrap();
        for v in 0..9 {
            assert_eq!(
                dm.get(v).unwrap(),
                Rational::from_integer(hops.get(v).unwrap() as i64) * Rational::new(3, 2)
            );
        }
        assert_eq!(
            weighted_ball(&w, 0, Rational::from_integer(3)).unwrap(),
            vec![0, 1, 2, 7, 8]
        );
    }

    #[test]
    fn nearest_source_breaks_ties_low() {
        // 0 - 1 - 2 - 3 - 4 with sources 0 and 4: vertex 2 is equidistant.
        let label = multi_source_nearest(&path(5), &[0, 4]).unwrap();
        assert_eq!(label[2], Some((0, 2)));
        assert_eq!(label[3], Some((4, 1)));
    }

    #[test]
    fn unreachable_is_none() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let m = DistanceMatrix::new(&g);
        assert_eq!(m.get(0, 3), None);
        assert_eq!(m.get(0, 1), Some(1));
        assert!(!m.within(0, 2, 100));
        assert_eq!(m.eccentricity(0), 1);
    }
}
