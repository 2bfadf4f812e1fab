use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{
    tree_adjacency, validate_tree_decomposition, validate_tree_partition, Node, TreeDecomposition, TreePartition,
};
use crate::error::{Error, Result};
use crate::graph::{bfs, components, components_masked, Graph};
use crate::rational::Rational;
use crate::separator::{is_balanced_separator, WeightFn};

fn reject<V: std::fmt::Display>(what: &str, violations: &[V]) -> Result<()> {
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::input(format!(
            "{what} is invalid ({} violations, first: {v})",
            violations.len()
        ))),
    }
}

/// Subdivides every tree edge `xy` with a node whose bag is
/// `bag(x) ∪ bag(y)`. Original nodes keep their ids; the node for the
/// `i`-th tree edge gets id `nodes + i`.
pub fn tree_partition_to_tree_decomposition(graph: &Graph, tp: &TreePartition) -> Result<TreeDecomposition> {
    reject("tree-partition", &validate_tree_partition(graph, tp))?;
    let t = tp.nodes.len();
    let mut nodes = tp.nodes.clone();
    let mut tree_edges = Vec::with_capacity(2 * tp.tree_edges.len());
    for (i, &(a, b)) in tp.tree_edges.iter().enumerate() {
        let (x, y) = (&tp.nodes[a], &tp.nodes[b]);
        let bag = x.bag.iter().chain(&y.bag).copied().collect();
        let cover = match (&x.cover, &y.cover) {
            (Some(cx), Some(cy)) => Some(cx.iter().chain(cy).copied().collect()),
            _ => None,
        };
        nodes.push(Node::new(t + i, bag, cover));
        tree_edges.push((a, t + i));
        tree_edges.push((t + i, b));
    }
    Ok(TreeDecomposition { nodes, tree_edges })
}

/// Orients every tree edge toward the side whose bags carry more weight
/// (ties toward the lower node id) and returns the lowest-id sink. Its bag is
/// checked to be a balanced separator before returning.
pub fn balanced_bag(graph: &Graph, td: &TreeDecomposition, mu: &WeightFn) -> Result<usize> {
    reject("tree decomposition", &validate_tree_decomposition(graph, td))?;
    mu.check_len(graph)?;
    let t = td.nodes.len();
    if t == 0 {
        return Err(Error::input("tree decomposition has no nodes"));
    }
    let n = graph.n();
    let adj = tree_adjacency(&td.nodes, &td.tree_edges).map_err(Error::input)?;
    let bag_set = |x: usize| {
        let mut s = FixedBitSet::with_capacity(n);
        td.nodes[x].bag.iter().for_each(|&v| s.insert(v));
        s
    };
    let weight = |s: &FixedBitSet| s.ones().fold(Rational::from_integer(0), |acc, v| acc + mu.weight(v));

    // Root at 0; `order` lists nodes parents-first.
    let mut parent = vec![usize::MAX; t];
    let mut order = vec![0];
    parent[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut below: Vec<FixedBitSet> = (0..t).map(bag_set).collect();
    for &x in order.iter().skip(1).rev() {
        let child = below[x].clone();
        below[parent[x]].union_with(&child);
    }
    let mut out_degree = vec![0usize; t];
    for &c in order.iter().skip(1) {
        let p = parent[c];
        let mut inside = vec![false; t];
        let mut stack = vec![c];
        inside[c] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if y != parent[x] && !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        let mut rest = FixedBitSet::with_capacity(n);
        for x in (0..t).filter(|&x| !inside[x]) {
            rest.union_with(&bag_set(x));
        }
        let (wc, wp) = (weight(&below[c]), weight(&rest));
        let toward_child = wc > wp || (wc == wp && c < p);
        out_degree[if toward_child { p } else { c }] += 1;
    }
    let sink = (0..t)
        .find(|&x| out_degree[x] == 0)
        .expect("every oriented tree has a sink");
    if !is_balanced_separator(graph, mu, &td.nodes[sink].bag)? {
        return Err(Error::violation(
            "sink bag is not a balanced separator",
            format!("node {sink}"),
        ));
    }
    Ok(sink)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerShape {
    /// One bag per BFS layer, on a path.
    Path,
    /// One bag per component of `G[layers >= i]`, cut down to layer `i`.
    Branching,
}

/// Tree-partition of spread 1 from BFS layers. Each component is layered
/// from its lowest vertex; on a path the layers of equal depth share a bag,
/// with branching the components hang off node 0.
pub fn layered_tree_partition(graph: &Graph, shape: LayerShape) -> Result<TreePartition> {
    let n = graph.n();
    if n == 0 {
        return Err(Error::input("graph has no vertices"));
    }
    let mut depth = vec![0; n];
    for comp in components(graph, &[])? {
        let dist = bfs(graph, comp[0])?;
        for v in comp {
            depth[v] = dist.get(v).expect("same component") as usize;
        }
    }
    let levels = depth.iter().max().unwrap() + 1;
    let mut nodes = Vec::new();
    let mut tree_edges = Vec::new();
    match shape {
        LayerShape::Path => {
            for i in 0..levels {
                let bag = (0..n).filter(|&v| depth[v] == i).collect();
                nodes.push(Node::new(i, bag, None));
                if i > 0 {
                    tree_edges.push((i - 1, i));
                }
            }
        }
        LayerShape::Branching => {
            let mut node_of = vec![usize::MAX; n];
            for i in 0..levels {
                let blocked: Vec<bool> = depth.iter().map(|&d| d < i).collect();
                for comp in components_masked(graph, &blocked) {
                    let bag: Vec<usize> = comp.iter().copied().filter(|&v| depth[v] == i).collect();
                    let id = nodes.len();
                    if i > 0 {
                        tree_edges.push((node_of[comp[0]], id));
                    } else if id > 0 {
                        tree_edges.push((0, id));
                    }
                    comp.iter().for_each(|&v| node_of[v] = id);
                    nodes.push(Node::new(id, bag, None));
                }
            }
        }
    }
    Ok(TreePartition {
        nodes,
        tree_edges,
        spread: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_tree_partition;
    use crate::generators::{generate, FamilySpec};
    use crate::graph::Ball;

    fn path(n: usize) -> Graph {
        generate(&FamilySpec::Path { n }).unwrap()
    }

    #[test]
    fn subdivision() {
        let g = path(4);
        let tp = TreePartition {
            nodes: vec![
                Node::new(0, vec![0, 1], Some(vec![Ball::new(0, 1), Ball::new(1, 1)])),
                Node::new(
                    1,
                    vec![2, 3],
                    Some(vec![Ball::new(2, 1), Ball::new(3, 1), Ball::new(3, 0)]),
                ),
            ],
            tree_edges: vec![(0, 1)],
            spread: 1,
        };
        let td = tree_partition_to_tree_decomposition(&g, &tp).unwrap();
        let bags: Vec<_> = td.nodes.iter().map(|x| x.bag.clone()).collect();
        assert_eq!(bags, vec![vec![0, 1], vec![2, 3], vec![0, 1, 2, 3]]);
        assert_eq!(td.nodes[2].cover.as_ref().unwrap().len(), 5);
        assert!(validate_tree_decomposition(&g, &td).is_empty());

        let single = TreePartition {
            nodes: vec![Node::new(0, vec![0, 1, 2, 3], None)],
            tree_edges: vec![],
            spread: 1,
        };
        let td = tree_partition_to_tree_decomposition(&g, &single).unwrap();
        assert_eq!(td.nodes, single.nodes);
    }

    #[test]
    fn sink_examples() {
        let g = path(4);
        let td = TreeDecomposition {
            nodes: vec![
                Node::new(0, vec![0, 1], None),
                Node::new(1, vec![1, 2], None),
                Node::new(2, vec![2, 3], None),
            ],
            tree_edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(balanced_bag(&g, &td, &WeightFn::uniform(4)).unwrap(), 1);
        let heavy = WeightFn::indicator(4, &[3]);
        let sink = balanced_bag(&g, &td, &heavy).unwrap();
        assert!(td.nodes[sink].bag.contains(&3));

        let one = TreeDecomposition {
            nodes: vec![Node::new(0, vec![0, 1, 2, 3], None)],
            tree_edges: vec![],
        };
        assert_eq!(balanced_bag(&g, &one, &WeightFn::uniform(4)).unwrap(), 0);
    }

    #[test]
    fn invalid_decomposition_is_an_input_error() {
        let g = path(3);
        let td = TreeDecomposition {
            nodes: vec![Node::new(0, vec![0, 1], None)],
            tree_edges: vec![],
        };
        assert!(matches!(
            balanced_bag(&g, &td, &WeightFn::uniform(3)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn layered_partitions_are_valid() {
        for spec in [
            FamilySpec::Grid { rows: 4, cols: 5 },
            FamilySpec::BinaryTree { depth: 3 },
            FamilySpec::Cycle { n: 9 },
        ] {
            let g = generate(&spec).unwrap();
            for shape in [LayerShape::Path, LayerShape::Branching] {
                let tp = layered_tree_partition(&g, shape).unwrap();
                assert!(validate_tree_partition(&g, &tp).is_empty(), "{spec:?} {shape:?}");
            }
        }
        let t = generate(&FamilySpec::BinaryTree { depth: 2 }).unwrap();
        let tp = layered_tree_partition(&t, LayerShape::Branching).unwrap();
        assert_eq!(tp.nodes.len(), 7);
        let c = generate(&FamilySpec::Cycle { n: 6 }).unwrap();
        let tp = layered_tree_partition(&c, LayerShape::Branching).unwrap();
        let bags: Vec<_> = tp.nodes.iter().map(|x| x.bag.clone()).collect();
        assert_eq!(bags, vec![vec![0], vec![1, 5], vec![2, 4], vec![3]]);
    }

    #[test]
    fn layered_partitions_of_disconnected_graphs() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let tp = layered_tree_partition(&g, LayerShape::Path).unwrap();
        let bags: Vec<_> = tp.nodes.iter().map(|x| x.bag.clone()).collect();
        assert_eq!(bags, vec![vec![0, 2], vec![1, 3], vec![4]]);
        let tp = layered_tree_partition(&g, LayerShape::Branching).unwrap();
        assert_eq!(tp.tree_edges[0], (0, 1));
        assert!(validate_tree_partition(&g, &tp).is_empty());
    }
}
