use serde::Serialize;

use crate::decomposition::{validate_tree_decomposition, Node, TreeDecomposition};
use crate::distance_graph::DistanceGraph;
use crate::error::{Error, Result};
use crate::graph::{Ball, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lifted {
    pub td: TreeDecomposition,
    /// Largest cover radius in the decomposition of `H`.
    pub s: u64,
    /// Radius of every lifted ball, `(4s + 1) r`.
    pub radius: u64,
}

/// Pulls a covered tree decomposition of the unweighted distance graph
/// back to the host: bag `t` becomes every host vertex whose image lies in
/// the old bag, and each cover ball keeps its center and grows to radius
/// `(4s + 1) r`.
pub fn lift_decomposition(graph: &Graph, dg: &DistanceGraph, td_h: &TreeDecomposition) -> Result<Lifted> {
    if dg.weighted || dg.sigma != 4 {
        return Err(Error::input("lifting needs the unweighted distance graph with sigma 4"));
    }
    if dg.host_n() != graph.n() {
        return Err(Error::input("distance graph was built for a different host"));
    }
    if let Some(v) = validate_tree_decomposition(&dg.h, td_h).first() {
        return Err(Error::input(format!("tree decomposition of H is invalid: {v}")));
    }
    if !td_h.has_covers() {
        return Err(Error::input("tree decomposition of H carries no covers"));
    }
    let s = td_h
        .nodes
        .iter()
        .flat_map(|t| t.cover.iter().flatten())
        .map(|b| b.radius)
        .max()
        .unwrap_or(0);
    let radius = (4 * s + 1) * dg.r;

    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); dg.h.n()];
    for u in 0..graph.n() {
        fibers[dg.phi_h(u)].push(u);
    }
    let nodes = td_h
        .nodes
        .iter()
        .map(|t| {
            let bag = t.bag.iter().flat_map(|&x| fibers[x].iter().copied()).collect();
            let cover = t
                .cover
                .iter()
                .flatten()
                .map(|b| Ball::new(dg.host_of(b.center), radius))
                .collect();
            Node::new(t.id, bag, Some(cover))
        })
        .collect();
    let td = TreeDecomposition {
        nodes,
        tree_edges: td_h.tree_edges.clone(),
    };
    if let Some(v) = validate_tree_decomposition(graph, &td).first() {
        return Err(Error::violation(
            "lifted decomposition is valid with covers",
            v.to_string(),
        ));
    }
    Ok(Lifted { td, s, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{decompose_simple, BuilderParams};
    use crate::distance_graph::build_distance_graph;
    use crate::generators::{generate, FamilySpec};

    #[test]
    fn single_bag_cycle() {
        let g = generate(&FamilySpec::Cycle { n: 12 }).unwrap();
        let dg = build_distance_graph(&g, 2, 4, false, Some(&[0, 3, 6, 9])).unwrap();
        let td_h = TreeDecomposition {
            nodes: vec![Node::new(0, (0..4).collect(), Some(vec![Ball::new(0, 1)]))],
            tree_edges: vec![],
        };
        let l = lift_decomposition(&g, &dg, &td_h).unwrap();
        assert_eq!(l.radius, 10);
        assert_eq!(l.td.nodes[0].bag, (0..12).collect::<Vec<_>>());
        assert_eq!(l.td.nodes[0].cover, Some(vec![Ball::new(0, 10)]));
    }

    #[test]
    fn simple_builder_on_h() {
        let g = generate(&FamilySpec::Grid { rows: 5, cols: 5 }).unwrap();
        let dg = build_distance_graph(&g, 1, 4, false, None).unwrap();
        let built = decompose_simple(&dg.h, &BuilderParams::new(2, 1)).unwrap();
        let l = lift_decomposition(&g, &dg, &built.td).unwrap();
        assert_eq!(l.radius, 5);
        assert_eq!(l.td.nodes.len(), built.td.nodes.len());
    }

    #[test]
    fn rejects_missing_covers() {
        let g = generate(&FamilySpec::Path { n: 3 }).unwrap();
        let dg = build_distance_graph(&g, 1, 4, false, None).unwrap();
        let td_h = TreeDecomposition {
            nodes: vec![Node::new(0, (0..dg.h.n()).collect(), None)],
            tree_edges: vec![],
        };
        assert!(matches!(
            lift_decomposition(&g, &dg, &td_h),
            Err(Error::InvalidInput(_))
        ));
    }
}
