use num_bigint::BigUint;

use super::{gamma, Algorithm, BoundCheck};
use crate::decomposition::{potential, TreeDecomposition};
use crate::graph::{ceil_log2, Ball};

/// Cover bounds promised by a builder, evaluated on any covered
/// decomposition of a graph on `n` vertices. The recursion depth is not
/// visible in a finished decomposition, so it is left to the builders.
///
/// The round bounds use `max(k, 2)` and `gamma_cap` in place of the
/// constant when given.
pub fn cover_bounds(
    algorithm: Algorithm,
    n: usize,
    k: usize,
    r: u64,
    gamma_cap: Option<u64>,
    td: &TreeDecomposition,
) -> Vec<BoundCheck> {
    let covers: Vec<&[Ball]> = td.nodes.iter().map(|x| x.cover.as_deref().unwrap_or(&[])).collect();
    let max_size = covers.iter().map(|c| c.len()).max().unwrap_or(0);
    let max_radius = covers
        .iter()
        .flat_map(|c| c.iter())
        .map(|b| b.radius)
        .max()
        .unwrap_or(0);
    let log_n = ceil_log2(n as u64) as usize;
    let mut checks = Vec::new();
    if !td.has_covers() {
        checks.push(BoundCheck::new("covers", "missing", "one per bag", false));
    }
    match algorithm {
        Algorithm::Simple => {
            let size_bound = k * (log_n + 2);
            let exact = covers.iter().flat_map(|c| c.iter()).all(|b| b.radius == r);
            checks.push(BoundCheck::new(
                "cover_size",
                max_size,
                format!("k(ceil(log2 n) + 2) = {size_bound}"),
                max_size <= size_bound,
            ));
            checks.push(BoundCheck::new(
                "radius",
                if exact { format!("all {r}") } else { "mixed".into() },
                format!("exactly {r}"),
                exact,
            ));
        }
        Algorithm::Round => {
            let k = k.max(2);
            let size_bound = gamma_cap.unwrap_or_else(|| gamma(k)) + 2 * k as u64;
            checks.push(BoundCheck::new(
                "cover_size",
                max_size,
                format!("gamma + 2k = {size_bound}"),
                max_size as u64 <= size_bound,
            ));
            let phi_bound = BigUint::from(4 * k * (log_n + 1));
            let potentials: Option<Vec<BigUint>> = covers.iter().map(|c| potential(c, r)).collect();
            let max_phi = potentials.map(|p| p.into_iter().max().unwrap_or_default());
            checks.push(BoundCheck::new(
                "potential",
                max_phi.as_ref().map_or("covers not round".into(), BigUint::to_string),
                format!("4k(ceil(log2 n) + 1) = {phi_bound}"),
                max_phi.is_some_and(|p| p <= phi_bound),
            ));
            if n >= 2 {
                // 2^(R/r) <= 12 k log2 n  iff  R/r <= floor(log2 floor(log2 n^(12k))).
                let floor_log = BigUint::from(n).pow(12 * k as u32).bits() - 1;
                let steps = floor_log.ilog2() as u64;
                checks.push(BoundCheck::new(
                    "radius",
                    max_radius,
                    format!("r(log2 k + log2 log2 n + log2 12), so at most {}", steps * r),
                    max_radius <= steps * r,
                ));
            }
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::Node;

    #[test]
    fn simple_table_for_p8() {
        let td = TreeDecomposition {
            nodes: vec![Node::new(0, (0..8).collect(), Some(vec![Ball::new(3, 1); 5]))],
            tree_edges: vec![],
        };
        let checks = cover_bounds(Algorithm::Simple, 8, 1, 1, None, &td);
        assert_eq!(checks[0].bound, "k(ceil(log2 n) + 2) = 5");
        assert!(checks.iter().all(|c| c.holds));
        let checks = cover_bounds(Algorithm::Simple, 8, 1, 2, None, &td);
        assert!(!checks[1].holds);
    }

    #[test]
    fn round_table_flags_non_round_covers() {
        let td = TreeDecomposition {
            nodes: vec![Node::new(0, vec![0], Some(vec![Ball::new(0, 3)]))],
            tree_edges: vec![],
        };
        let checks = cover_bounds(Algorithm::Round, 16, 2, 2, None, &td);
        assert!(!checks.iter().find(|c| c.name == "potential").unwrap().holds);
    }
}
