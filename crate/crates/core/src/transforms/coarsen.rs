use serde::{Deserialize, Serialize};

use crate::builders::BoundCheck;
use crate::decomposition::{tree_adjacency, tree_distances, validate_tree_partition, Node, TreePartition};
use crate::error::{Error, Result};
use crate::graph::{bfs, dijkstra, Ball, Graph, WeightedGraph};
use crate::rational::{self, Rational};

/// Quasi-isometry constants of `phi` (an `(alpha, beta r)`-quasi-isometry)
/// and the least edge weight `gamma r` of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseningParams {
    #[serde(with = "rational")]
    pub alpha: Rational,
    #[serde(with = "rational")]
    pub beta: Rational,
    #[serde(with = "rational")]
    pub gamma: Rational,
    pub r: u64,
}

impl CoarseningParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, r: u64) -> Result<Self> {
        let one = rational::int(1);
        if alpha < one || beta < one {
            return Err(Error::input("alpha and beta must be at least 1"));
        }
        if gamma <= rational::int(0) {
            return Err(Error::input("gamma must be positive"));
        }
        if r == 0 {
            return Err(Error::input("r must be positive"));
        }
        Ok(CoarseningParams { alpha, beta, gamma, r })
    }

    /// `ceil((alpha + beta) / gamma)`.
    pub fn p(&self) -> u64 {
        rational::ceil_to_u64(&((self.alpha + self.beta) / self.gamma))
    }
}

/// How a level node `y` other than the root picks its cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterRule {
    /// `{x : p <= dist(x, y) < 2p, depth(x) > depth(y)}`. On trees with
    /// branching this can put a node in two clusters, which is reported as
    /// an invariant violation.
    #[default]
    Verbatim,
    /// Descendants of `y` whose depth exceeds that of `y` by `p..2p`.
    Descendant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelClusters {
    pub root: usize,
    pub p: u64,
    /// Nodes of depth divisible by `p`, ascending.
    pub levels: Vec<usize>,
    /// `clusters[i]` belongs to `levels[i]`.
    pub clusters: Vec<Vec<usize>>,
    /// Coarse tree edges as positions in `levels`.
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarseningReport {
    pub p: u64,
    pub rule: ClusterRule,
    pub qi_pairs: u64,
    pub farness_pairs: u64,
    pub max_fiber_dist: u64,
    pub checks: Vec<BoundCheck>,
}

impl CoarseningReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coarsened {
    pub tp: TreePartition,
    pub clusters: LevelClusters,
    pub report: CoarseningReport,
}

/// Groups the nodes of a rooted tree into clusters around the nodes whose
/// depth is a multiple of `p`, and joins level nodes `p` apart.
pub fn level_clusters(adj: &[Vec<usize>], root: usize, p: u64, rule: ClusterRule) -> Result<LevelClusters> {
    if p == 0 {
        return Err(Error::input("p must be positive"));
    }
    let t = adj.len();
    let p = p as usize;
    let dist: Vec<Vec<usize>> = (0..t).map(|x| tree_distances(adj, x)).collect();
    let depth = &dist[root];
    let levels: Vec<usize> = (0..t).filter(|&x| depth[x].is_multiple_of(p)).collect();
    let clusters: Vec<Vec<usize>> = levels
        .iter()
        .map(|&y| {
            (0..t)
                .filter(|&x| {
                    if y == root {
                        return depth[x] < 2 * p;
                    }
                    let d = dist[x][y];
                    match rule {
                        ClusterRule::Verbatim => (p..2 * p).contains(&d) && depth[x] > depth[y],
                        ClusterRule::Descendant => depth[x] == depth[y] + d && (p..2 * p).contains(&d),
                    }
                })
                .collect()
        })
        .collect();

    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); t];
    for (i, c) in clusters.iter().enumerate() {
        for &x in c {
            owner[x].push(levels[i]);
        }
    }
    if let Some(x) = owner.iter().position(|o| o.len() != 1) {
        return Err(Error::violation(
            "level clusters partition the tree",
            format!("node {x} (depth {}) lies in the clusters of {:?}", depth[x], owner[x]),
        ));
    }

    let mut tree_edges = Vec::new();
    for (i, &y) in levels.iter().enumerate() {
        for (j, &w) in levels.iter().enumerate().skip(i + 1) {
            if dist[y][w] == p && depth[y].abs_diff(depth[w]) == p {
                tree_edges.push((i, j));
            }
        }
    }
    Ok(LevelClusters {
        root,
        p: p as u64,
        levels,
        clusters,
        tree_edges,
    })
}

/// All-pairs distances in `H` as `None` for unreachable pairs.
fn h_distances(h: &WeightedGraph) -> Result<Vec<Vec<Option<Rational>>>> {
    (0..h.n()).map(|x| dijkstra(h, x).map(|m| m.dist)).collect()
}

/// Checks `phi` is an `(alpha, beta r)`-quasi-isometry including density,
/// returning the number of pairs compared.
fn check_quasi_isometry(
    graph: &Graph,
    phi: &[usize],
    h_dist: &[Vec<Option<Rational>>],
    params: &CoarseningParams,
) -> Result<u64> {
    let n = graph.n();
    let (a, br) = (params.alpha, params.beta * rational::int(params.r as i64));
    let mut pairs = 0;
    for u in 0..n {
        let from_u = bfs(graph, u)?;
        for v in u..n {
            let ok = match (from_u.get(v), h_dist[phi[u]][phi[v]]) {
                (None, None) => true,
                (Some(d), Some(dh)) => {
                    let d = rational::int(d as i64);
                    d / a - br <= dh && dh <= a * d + br
                }
                _ => false,
            };
            if !ok {
                return Err(Error::input(format!(
                    "phi is not an ({}, {})-quasi-isometry at the pair ({u}, {v})",
                    rational::format(&a),
                    rational::format(&br)
                )));
            }
            pairs += 1;
        }
    }
    let mut hit = vec![false; h_dist.len()];
    phi.iter().for_each(|&x| hit[x] = true);
    for (w, row) in h_dist.iter().enumerate() {
        let near = row
            .iter()
            .enumerate()
            .any(|(x, d)| hit[x] && d.is_some_and(|d| d <= br));
        if !near {
            return Err(Error::input(format!(
                "H vertex {w} is farther than {} from the image of phi",
                rational::format(&br)
            )));
        }
    }
    Ok(pairs)
}

/// Turns a tree-partition of `H` into a tree-partition of `G` with spread
/// `r`, given an `(alpha, beta r)`-quasi-isometry `phi: G -> H` and edge
/// weights of at least `gamma r`.
///
/// Bags are pulled back through `phi` and merged along the level clusters
/// of the tree rooted at node 0. Each new bag is covered by one ball of
/// radius `floor(alpha beta r)` per nonempty fiber. The cluster partition,
/// the farness of non-adjacent clusters, the fiber diameters and the final
/// tree-partition are all checked; the degree and cluster-size bounds are
/// reported.
pub fn coarsen_tree_partition(
    graph: &Graph,
    h: &WeightedGraph,
    phi: &[usize],
    tp_h: &TreePartition,
    params: &CoarseningParams,
    rule: ClusterRule,
) -> Result<Coarsened> {
    let params = CoarseningParams::new(params.alpha, params.beta, params.gamma, params.r)?;
    let n = graph.n();
    if phi.len() != n {
        return Err(Error::input(format!(
            "phi has {} entries, G has {n} vertices",
            phi.len()
        )));
    }
    if let Some(&x) = phi.iter().find(|&&x| x >= h.n()) {
        return Err(Error::InvalidVertex { vertex: x, n: h.n() });
    }
    let min_weight = params.gamma * rational::int(params.r as i64);
    if let Some((u, v, w)) = h.edges().find(|&(_, _, w)| w < min_weight) {
        return Err(Error::input(format!(
            "H edge ({u}, {v}) weighs {}, below gamma r = {}",
            rational::format(&w),
            rational::format(&min_weight)
        )));
    }
    let skeleton = h.skeleton();
    if let Some(v) = validate_tree_partition(&skeleton, tp_h).first() {
        return Err(Error::input(format!("tree-partition of H is invalid: {v}")));
    }
    let h_dist = h_distances(h)?;
    let qi_pairs = check_quasi_isometry(graph, phi, &h_dist, &params)?;

    let adj = tree_adjacency(&tp_h.nodes, &tp_h.tree_edges).map_err(Error::input)?;
    let p = params.p();
    let lc = level_clusters(&adj, 0, p, rule)?;
    let t_dist: Vec<Vec<usize>> = (0..adj.len()).map(|x| tree_distances(&adj, x)).collect();

    let coarse_adj = {
        let mut a = vec![Vec::new(); lc.levels.len()];
        for &(i, j) in &lc.tree_edges {
            a[i].push(j);
            a[j].push(i);
        }
        a
    };
    let mut farness_pairs = 0;
    for i in 0..lc.levels.len() {
        for j in i + 1..lc.levels.len() {
            if coarse_adj[i].contains(&j) {
                continue;
            }
            for &x in &lc.clusters[i] {
                for &y in &lc.clusters[j] {
                    farness_pairs += 1;
                    if t_dist[x][y] <= p as usize {
                        return Err(Error::violation(
                            "nodes of non-adjacent clusters are more than p apart",
                            format!("nodes {x} and {y} at distance {}", t_dist[x][y]),
                        ));
                    }
                }
            }
        }
    }

    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    for (u, &x) in phi.iter().enumerate() {
        fibers[x].push(u);
    }
    let ab_r = params.alpha * params.beta * rational::int(params.r as i64);
    let radius = rational::floor_to_u64(&ab_r);
    let mut max_fiber_dist = 0;
    for fiber in fibers.iter().filter(|f| f.len() > 1) {
        for &u in fiber {
            let from_u = bfs(graph, u)?;
            for &v in fiber {
                let d = from_u.get(v).unwrap_or(u64::MAX);
                if rational::int(d.min(i64::MAX as u64) as i64) > ab_r {
                    return Err(Error::violation(
                        "fibers of phi have diameter at most alpha beta r",
                        format!("vertices {u} and {v} at distance {d}"),
                    ));
                }
                max_fiber_dist = max_fiber_dist.max(d);
            }
        }
    }

    let nodes: Vec<Node> = lc
        .clusters
        .iter()
        .enumerate()
        .map(|(i, cluster)| {
            let h_bag: Vec<usize> = cluster
                .iter()
                .flat_map(|&x| tp_h.nodes[x].bag.iter().copied())
                .collect();
            let bag: Vec<usize> = h_bag.iter().flat_map(|&x| fibers[x].iter().copied()).collect();
            let mut cover: Vec<Ball> = h_bag
                .iter()
                .filter_map(|&x| fibers[x].first().map(|&u| Ball::new(u, radius)))
                .collect();
            cover.sort_unstable();
            Node::new(i, bag, Some(cover))
        })
        .collect();
    let tp = TreePartition {
        nodes,
        tree_edges: lc.tree_edges.clone(),
        spread: params.r,
    };
    if let Some(v) = validate_tree_partition(graph, &tp).first() {
        return Err(Error::violation(
            "coarsened tree-partition is valid with spread r",
            v.to_string(),
        ));
    }

    let width = tp_h.width() as u128;
    let delta5 = width * skeleton.max_degree() as u128;
    let tree_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    let coarse_degree = coarse_adj.iter().map(Vec::len).max().unwrap_or(0);
    let degree_bound = delta5.checked_pow(p as u32).map_or(u128::MAX, |x| x.saturating_add(1));
    let cluster_bound = (0..2 * p as u32).fold(0u128, |acc, i| {
        acc.saturating_add(delta5.checked_pow(i).unwrap_or(u128::MAX))
    });
    let max_cluster = lc.clusters.iter().map(Vec::len).max().unwrap_or(0);
    let checks = vec![
        BoundCheck::new(
            "tree_degree",
            tree_degree,
            format!("width * max degree of H = {delta5}"),
            tree_degree as u128 <= delta5 || adj.len() == 1,
        ),
        BoundCheck::new(
            "coarse_degree",
            coarse_degree,
            format!("1 + {delta5}^{p} = {degree_bound}"),
            coarse_degree as u128 <= degree_bound,
        ),
        BoundCheck::new(
            "cluster_size",
            max_cluster,
            format!("sum of {delta5}^i for i < {} = {cluster_bound}", 2 * p),
            max_cluster as u128 <= cluster_bound,
        ),
    ];
    Ok(Coarsened {
        tp,
        clusters: lc,
        report: CoarseningReport {
            p,
            rule,
            qi_pairs,
            farness_pairs,
            max_fiber_dist,
            checks,
        },
    })
}
