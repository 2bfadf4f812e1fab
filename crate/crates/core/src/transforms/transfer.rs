use serde::Serialize;

use crate::budget::Budget;
use crate::distance_graph::DistanceGraph;
use crate::error::{Error, Result};
use crate::graph::{bounded_bfs, Ball, Graph};
use crate::rational::Rational;
use crate::separator::{find_separator, is_balanced_separator, OracleMode, SeparatorWitness, WeightFn};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedTransfer {
    /// Balls in the host, balanced for the host weights.
    pub host_witness: SeparatorWitness,
    /// For each host ball, the `H` vertex nearest to its center.
    pub anchors: Vec<usize>,
    /// Union of the second neighbourhoods of the anchors, in `H` ids.
    pub separator: Vec<usize>,
    /// `k * 2^(6 m)` for the supplied dimension estimate.
    pub size_bound: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnweightedTransfer {
    pub host_witness: SeparatorWitness,
    /// Radius-1 balls of `H` around the images of the host centers.
    pub witness: SeparatorWitness,
}

/// Host weights: `mu_h` on the members of `I`, zero elsewhere.
fn host_weights(dg: &DistanceGraph, mu_h: &WeightFn) -> Result<WeightFn> {
    if mu_h.len() != dg.h.n() {
        return Err(Error::input(format!(
            "weight function has {} entries, H has {} vertices",
            mu_h.len(),
            dg.h.n()
        )));
    }
    let mut w = vec![Rational::from_integer(0); dg.host_n()];
    for x in 0..dg.h.n() {
        w[dg.host_of(x)] = mu_h.weight(x);
    }
    WeightFn::new(w)
}

fn host_separator(
    graph: &Graph,
    dg: &DistanceGraph,
    mu_h: &WeightFn,
    k: usize,
    oracle: OracleMode,
    budget: &Budget,
) -> Result<SeparatorWitness> {
    if dg.host_n() != graph.n() {
        return Err(Error::input("distance graph was built for a different host"));
    }
    let mu = host_weights(dg, mu_h)?;
    find_separator(graph, &mu, k, dg.r, oracle, budget)?.ok_or_else(|| {
        Error::input(format!(
            "the host has no balanced separator of {k} balls of radius {} for these weights",
            dg.r
        ))
    })
}

/// Moves a host separator of `k` radius-`r` balls into the weighted
/// distance graph (`sigma = 3`): each center goes to its nearest member of
/// `I`, and the separator is the union of the second neighbourhoods of those
/// members. The result is checked to be balanced for `mu_h`, and when a
/// dimension estimate `m` is given, to have at most `k * 2^(6m)` vertices.
pub fn separator_transfer_weighted(
    graph: &Graph,
    dg: &DistanceGraph,
    mu_h: &WeightFn,
    k: usize,
    oracle: OracleMode,
    m_estimate: Option<u32>,
    budget: &Budget,
) -> Result<WeightedTransfer> {
    if !dg.weighted || dg.sigma != 3 {
        return Err(Error::input(
            "weighted transfer needs the weighted distance graph with sigma 3",
        ));
    }
    let host_witness = host_separator(graph, dg, mu_h, k, oracle, budget)?;
    let anchors: Vec<usize> = host_witness.balls.iter().map(|b| dg.phi_h(b.center)).collect();
    let mut inside = vec![false; dg.h.n()];
    for &a in &anchors {
        for (x, d) in bounded_bfs(&dg.h, a, 2).into_iter().enumerate() {
            inside[x] |= d.is_some();
        }
    }
    let separator: Vec<usize> = (0..dg.h.n()).filter(|&x| inside[x]).collect();
    if !is_balanced_separator(&dg.h, mu_h, &separator)? {
        return Err(Error::violation(
            "transferred separator is balanced in H",
            format!("anchors {anchors:?}"),
        ));
    }
    let size_bound = m_estimate.map(|m| (k as u128).saturating_mul(1u128.checked_shl(6 * m).unwrap_or(u128::MAX)));
    if let Some(bound) = size_bound {
        if separator.len() as u128 > bound {
            return Err(Error::violation(
                "transferred separator has at most k 2^(6m) vertices",
                format!("{} > {bound}", separator.len()),
            ));
        }
    }
    Ok(WeightedTransfer {
        host_witness,
        anchors,
        separator,
        size_bound,
    })
}

/// Moves a host separator of `d` radius-`r` balls into the unweighted
/// distance graph (`sigma = 4`) as radius-1 balls around the images of the
/// centers, and checks that it is balanced for `mu_h`.
pub fn separator_transfer_unweighted(
    graph: &Graph,
    dg: &DistanceGraph,
    mu_h: &WeightFn,
    d: usize,
    oracle: OracleMode,
    budget: &Budget,
) -> Result<UnweightedTransfer> {
    if dg.weighted || dg.sigma != 4 {
        return Err(Error::input(
            "unweighted transfer needs the unweighted distance graph with sigma 4",
        ));
    }
    let host_witness = host_separator(graph, dg, mu_h, d, oracle, budget)?;
    let mut centers: Vec<usize> = host_witness.balls.iter().map(|b| dg.phi_h(b.center)).collect();
    centers.sort_unstable();
    centers.dedup();
    let balls: Vec<Ball> = centers.iter().map(|&y| Ball::new(y, 1)).collect();
    let union = crate::graph::ball_union(&dg.h, &balls)?;
    let mut blocked = fixedbitset::FixedBitSet::with_capacity(dg.h.n());
    union.iter().for_each(|&x| blocked.insert(x));
    let heaviest = crate::separator::heaviest_component(&dg.h, &blocked, mu_h);
    if heaviest * 2 > mu_h.total() || balls.len() > d {
        return Err(Error::violation(
            "transferred separator is a balanced union of at most d radius-1 balls in H",
            format!("centers {centers:?}"),
        ));
    }
    Ok(UnweightedTransfer {
        witness: SeparatorWitness {
            balls,
            union,
            heaviest,
            total: mu_h.total(),
            exact: host_witness.exact,
        },
        host_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance_graph::build_distance_graph;
    use crate::generators::{generate, FamilySpec};

    fn c12() -> Graph {
        generate(&FamilySpec::Cycle { n: 12 }).unwrap()
    }

    #[test]
    fn cycle_weighted() {
        let g = c12();
        let dg = build_distance_graph(&g, 2, 3, true, Some(&[0, 3, 6, 9])).unwrap();
        let t = separator_transfer_weighted(
            &g,
            &dg,
            &WeightFn::uniform(4),
            1,
            OracleMode::Exact,
            Some(1),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(t.separator, vec![0, 1, 2, 3]);
        assert_eq!(t.size_bound, Some(64));
    }

    #[test]
    fn zero_weights_and_single_vertex() {
        let g = c12();
        let dg = build_distance_graph(&g, 2, 3, true, Some(&[0, 3, 6, 9])).unwrap();
        let t = separator_transfer_weighted(
            &g,
            &dg,
            &WeightFn::zero(4),
            1,
            OracleMode::Exact,
            None,
            &Budget::default(),
        )
        .unwrap();
        assert!(t.separator.is_empty());

        let p2 = generate(&FamilySpec::Path { n: 2 }).unwrap();
        let dg = build_distance_graph(&p2, 1, 3, true, None).unwrap();
        let t = separator_transfer_weighted(
            &p2,
            &dg,
            &WeightFn::uniform(1),
            1,
            OracleMode::Exact,
            None,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(t.separator, vec![0]);
        let dg = build_distance_graph(&p2, 1, 4, false, None).unwrap();
        let t = separator_transfer_unweighted(
            &p2,
            &dg,
            &WeightFn::uniform(1),
            1,
            OracleMode::Exact,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(t.witness.balls, vec![Ball::new(0, 1)]);
    }

    #[test]
    fn cycle_unweighted() {
        let g = c12();
        let dg = build_distance_graph(&g, 2, 4, false, Some(&[0, 3, 6, 9])).unwrap();
        assert_eq!(dg.h.num_edges(), 6);
        let t = separator_transfer_unweighted(&g, &dg, &WeightFn::uniform(4), 1, OracleMode::Exact, &Budget::default())
            .unwrap();
        assert_eq!(t.witness.union, vec![0, 1, 2, 3]);
        assert_eq!(t.witness.balls.len(), 1);
    }

    #[test]
    fn variants_are_checked() {
        let g = c12();
        let dg = build_distance_graph(&g, 2, 4, false, None).unwrap();
        assert!(separator_transfer_weighted(
            &g,
            &dg,
            &WeightFn::uniform(4),
            1,
            OracleMode::Exact,
            None,
            &Budget::default()
        )
        .is_err());
    }
}
