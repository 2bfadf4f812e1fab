use serde::Serialize;

use super::cover::CoverInstance;
use super::{DistanceMatrix, Graph};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Which pairs of radii the estimator compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DoublingScales {
    /// `Ball(u, 2t)` by radius-`t` balls for integers `t` in `[1, cap]`.
    #[default]
    Integer,
    /// `Ball(u, 2t + 1)` by radius-`t` balls for `t` in `[0, cap]`. In a hop
    /// metric this is the worst case over all real radii in `[t, t + 1)`, so
    /// it sees the `t = 0` scale where a ball of radius 1 must be covered by
    /// single vertices. Bounds that quantify over every real radius need
    /// this variant; the integer one can undershoot them.
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoublingEstimate {
    /// Least `m` with every sampled cover using at most `2^m` balls.
    pub m: u32,
    /// Largest cover seen, as `(vertex, small radius, balls)`.
    pub worst: Option<(usize, u64, usize)>,
    /// Every cover count was a proven minimum. When false some counts are
    /// greedy upper bounds.
    pub exact_covers: bool,
    pub scales: DoublingScales,
    pub radius_cap: u64,
}

/// Estimates the doubling dimension by covering balls around every vertex.
///
/// Cover counts are minimum covers when the branch-and-bound search fits
/// `budget.search_nodes`, otherwise greedy upper bounds. Because only
/// finitely many radii are sampled the result estimates the dimension; it is
/// not a certificate for it.
pub fn estimate_doubling_dimension(
    graph: &Graph,
    radius_cap: u64,
    scales: DoublingScales,
    budget: &Budget,
) -> Result<DoublingEstimate> {
    if radius_cap < 1 {
        return Err(Error::input("radius cap must be at least 1"));
    }
    let dm = DistanceMatrix::new(graph);
    let radii: Vec<(u64, u64)> = match scales {
        DoublingScales::Integer => (1..=radius_cap).map(|t| (2 * t, t)).collect(),
        DoublingScales::Real => (0..=radius_cap).map(|t| (2 * t + 1, t)).collect(),
    };
    let mut worst: Option<(usize, u64, usize)> = None;
    let mut exact_covers = true;
    for u in 0..graph.n() {
        for &(big, small) in &radii {
            let target: Vec<usize> = (0..graph.n()).filter(|&v| dm.within(u, v, big)).collect();
            let inst = CoverInstance::build(graph.n(), &target, |a| {
                (0..graph.n()).filter(|&c| dm.within(a, c, small)).collect()
            });
            let (count, exact) = inst.minimum_size(budget.search_nodes);
            exact_covers &= exact;
            if worst.is_none_or(|w| count > w.2) {
                worst = Some((u, small, count));
            }
        }
    }
    let m = worst.map_or(0, |w| ceil_log2(w.2 as u64));
    Ok(DoublingEstimate {
        m,
        worst,
        exact_covers,
        scales,
        radius_cap,
    })
}

/// `ceil(log2(x))` with `ceil_log2(0) = ceil_log2(1) = 0`.
pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}
