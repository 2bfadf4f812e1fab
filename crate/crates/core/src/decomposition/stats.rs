use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::TreeDecomposition;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{greedy_cover, is_coverable, Ball, CoverMode, Graph};

/// `Σ 2^(radius / r)` over `balls`, or `None` if some radius is not a
/// positive multiple of `r`.
pub fn potential(balls: &[Ball], r: u64) -> Option<BigUint> {
    if r == 0 {
        return None;
    }
    balls.iter().try_fold(BigUint::from(0u32), |acc, b| {
        (b.radius > 0 && b.radius % r == 0).then(|| acc + (BigUint::from(1u32) << (b.radius / r)))
    })
}

pub(crate) fn decimal<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BagStats {
    pub node: usize,
    pub bag_size: usize,
    /// Size of the cover found for the bag at the requested radius.
    pub cover_size: usize,
    /// Whether `cover_size` is known to be minimal.
    pub exact: bool,
    pub attached_size: Option<usize>,
    pub attached_max_radius: Option<u64>,
    #[serde(serialize_with = "decimal")]
    pub attached_potential: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverStats {
    pub r: u64,
    pub bags: Vec<BagStats>,
    /// Largest computed cover over all bags.
    pub max_cover: usize,
    /// Largest radius in any computed or attached cover.
    pub max_radius: u64,
    /// Largest potential of an attached cover, when every attached cover is
    /// round.
    #[serde(serialize_with = "decimal")]
    pub potential: Option<BigUint>,
}

/// Per-bag covers by radius-`r` balls (minimal when a cover of at most
/// `k_budget` balls exists and enumeration fits the budget, greedy
/// otherwise), plus figures for any covers attached to the decomposition.
pub fn coverability_stats(
    graph: &Graph,
    td: &TreeDecomposition,
    r: u64,
    k_budget: usize,
    budget: &Budget,
) -> Result<CoverStats> {
    if r == 0 {
        return Err(Error::input("radius must be positive"));
    }
    let mut bags = Vec::with_capacity(td.nodes.len());
    for node in &td.nodes {
        let (cover_size, exact) = match is_coverable(graph, &node.bag, k_budget, r, CoverMode::Auto, budget)? {
            Some(c) => (c.balls.len(), c.exact),
            None => (greedy_cover(graph, &node.bag, r)?.len(), false),
        };
        let attached = node.cover.as_deref();
        bags.push(BagStats {
            node: node.id,
            bag_size: node.bag.len(),
            cover_size,
            exact,
            attached_size: attached.map(<[Ball]>::len),
            attached_max_radius: attached.map(|c| c.iter().map(|b| b.radius).max().unwrap_or(0)),
            attached_potential: attached.and_then(|c| potential(c, r)),
        });
    }
    let max_cover = bags.iter().map(|b| b.cover_size).max().unwrap_or(0);
    let computed_radius = if bags.iter().any(|b| b.cover_size > 0) { r } else { 0 };
    let max_radius = bags
        .iter()
        .filter_map(|b| b.attached_max_radius)
        .fold(computed_radius, u64::max);
    let potential = if td.has_covers() && bags.iter().all(|b| b.attached_potential.is_some()) {
        bags.iter().filter_map(|b| b.attached_potential.clone()).max()
    } else {
        None
    };
    Ok(CoverStats {
        r,
        bags,
        max_cover,
        max_radius,
        potential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::Node;
    use crate::generators::{generate, FamilySpec};

    #[test]
    fn potential_examples() {
        assert_eq!(
            potential(&[Ball::new(0, 3), Ball::new(1, 6)], 3),
            Some(BigUint::from(6u32))
        );
        assert_eq!(potential(&[], 1), Some(BigUint::from(0u32)));
        assert_eq!(potential(&[Ball::new(0, 2)], 3), None);
        assert_eq!(potential(&[Ball::new(0, 0)], 1), None);
        assert_eq!(potential(&[Ball::new(0, 100)], 1).unwrap().bits(), 101);
    }

    #[test]
    fn single_bag_path() {
        let g = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let td = TreeDecomposition {
            nodes: vec![Node::new(0, (0..5).collect(), None)],
            tree_edges: vec![],
        };
        let s = coverability_stats(&g, &td, 2, 3, &Budget::default()).unwrap();
        assert_eq!((s.max_cover, s.max_radius), (1, 2));
        assert!(s.bags[0].exact);
        assert_eq!(s.potential, None);
    }

    #[test]
    fn empty_bag_and_round_covers() {
        let g = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let td = TreeDecomposition {
            nodes: vec![
                Node::new(0, vec![], Some(vec![])),
                Node::new(1, (0..5).collect(), Some(vec![Ball::new(1, 1), Ball::new(3, 2)])),
            ],
            tree_edges: vec![(0, 1)],
        };
        let s = coverability_stats(&g, &td, 1, 3, &Budget::default()).unwrap();
        assert_eq!(s.bags[0].cover_size, 0);
        assert_eq!(s.bags[1].attached_potential, Some(BigUint::from(6u32)));
        assert_eq!(s.potential, Some(BigUint::from(6u32)));
        assert_eq!(s.max_radius, 2);
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["potential"], "6");
    }
}
