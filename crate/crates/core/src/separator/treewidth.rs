use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact treewidth by dynamic programming over vertex subsets.
///
/// `TW(S)` is the best width of an elimination ordering that starts with
/// the vertices of `S`; eliminating `v` after `S` costs `|Q(S, v)|`, the
/// number of vertices outside `S + v` reachable from `v` through `S`.
pub fn exact_treewidth(graph: &Graph, budget: &Budget) -> Result<usize> {
    let n = graph.n();
    if n > budget.treewidth_vertices || n > 30 {
        return Err(Error::BudgetExceeded {
            what: format!("exact treewidth on {n} vertices"),
            required: format!("2^{n}"),
            budget: 1u64 << budget.treewidth_vertices.min(63),
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full: u32 = (1 << n) - 1;
    let mut tw = vec![u32::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost = tw[prev as usize].max(q_size(&adj, prev, v));
            best = best.min(cost);
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Vertices outside `s` and `v` reachable from `v` by paths whose inner
/// vertices lie in `s`.
fn q_size(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut reached_inside = 1u32 << v;
    let mut frontier = 1u32 << v;
    let mut outside = 0u32;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[u];
        outside |= nb & !s & !(1 << v);
        let fresh = nb & s & !reached_inside;
        reached_inside |= fresh;
        frontier |= fresh;
    }
    outside.count_ones()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn tw(spec: FamilySpec) -> usize {
        exact_treewidth(&generate(&spec).unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(tw(FamilySpec::Path { n: 5 }), 1);
        assert_eq!(tw(FamilySpec::Complete { n: 4 }), 3);
        assert_eq!(tw(FamilySpec::Cycle { n: 5 }), 2);
        assert_eq!(tw(FamilySpec::PathUniversal { n: 5 }), 2);
        assert_eq!(tw(FamilySpec::Grid { rows: 3, cols: 3 }), 3);
        assert_eq!(tw(FamilySpec::Grid { rows: 3, cols: 4 }), 3);
        assert_eq!(tw(FamilySpec::Path { n: 1 }), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let g = generate(&FamilySpec::Path { n: 13 }).unwrap();
        assert!(matches!(
            exact_treewidth(&g, &Budget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
