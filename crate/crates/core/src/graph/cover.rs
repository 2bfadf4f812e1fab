//! Covering vertex sets by few radius-`r` balls.
//!
//! Coverability is NP-hard in general, so the exact searches run under a
//! [`Budget`] and report when they give up instead of guessing.

use fixedbitset::FixedBitSet;

use super::metric::bounded_bfs;
use super::{Ball, Graph};
use crate::budget::{binomial_prefix, Budget};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoverMode {
    /// Enumerate center sets; error when the budget is too small.
    #[default]
    Exact,
    /// Greedy max-coverage; may use more than `k` balls.
    Greedy,
    /// Exact when the budget allows, greedy otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub balls: Vec<Ball>,
    /// The search was exhaustive, so a `None` answer would be a proof.
    pub exact: bool,
    /// `balls.len() <= k`. Always true for exact covers.
    pub fits: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCover {
    pub balls: Vec<Ball>,
    /// `balls` is a minimum cover, not just an upper bound.
    pub exact: bool,
}

impl MinCover {
    pub fn size(&self) -> usize {
        self.balls.len()
    }
}

/// Set-cover instance: cover targets `0..target` using candidate sets.
pub(crate) struct CoverInstance {
    centers: Vec<usize>,
    sets: Vec<FixedBitSet>,
    target: usize,
}

impl CoverInstance {
    /// `ball_around(a)` must list every vertex within distance `r` of `a`.
    /// Only centers that reach some target become candidates, which never
    /// changes the answer: a minimum cover has no useless ball.
    pub(crate) fn build<F>(n: usize, targets: &[usize], mut ball_around: F) -> Self
    where
        F: FnMut(usize) -> Vec<usize>,
    {
        let mut slot: Vec<Option<usize>> = vec![None; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut centers = Vec::new();
        for (i, &a) in targets.iter().enumerate() {
            for c in ball_around(a) {
                let s = *slot[c].get_or_insert_with(|| {
                    centers.push(c);
                    members.push(Vec::new());
                    centers.len() - 1
                });
                members[s].push(i);
            }
        }
        let mut order: Vec<usize> = (0..centers.len()).collect();
        order.sort_unstable_by_key(|&s| centers[s]);
        let target = targets.len();
        let sets = order
            .iter()
            .map(|&s| {
                let mut bits = FixedBitSet::with_capacity(target);
                members[s].iter().for_each(|&i| bits.insert(i));
                bits
            })
            .collect();
        let centers = order.iter().map(|&s| centers[s]).collect();
        CoverInstance { centers, sets, target }
    }

    fn from_graph(graph: &Graph, targets: &[usize], r: u64) -> Self {
        Self::build(graph.n(), targets, |a| {
            bounded_bfs(graph, a, r)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect()
        })
    }

    fn balls(&self, picks: &[usize], r: u64) -> Vec<Ball> {
        picks.iter().map(|&i| Ball::new(self.centers[i], r)).collect()
    }

    /// Shortlex-least cover with at most `k` sets: sizes ascending, then
    /// center lists lexicographically.
    fn lex_least(&self, k: usize) -> Option<Vec<usize>> {
        if self.target == 0 {
            return Some(Vec::new());
        }
        let mut chosen = Vec::new();
        for size in 1..=k.min(self.sets.len()) {
            let covered = FixedBitSet::with_capacity(self.target);
            if self.lex_dfs(0, size, &covered, &mut chosen) {
                return Some(chosen);
            }
        }
        None
    }

    fn lex_dfs(&self, start: usize, left: usize, covered: &FixedBitSet, chosen: &mut Vec<usize>) -> bool {
        let Some(first_gap) = covered.zeroes().next() else {
            return true;
        };
        if left == 0 {
            return false;
        }
        // Some later pick has to cover the lowest uncovered target.
        if !(start..self.sets.len()).any(|i| self.sets[i].contains(first_gap)) {
            return false;
        }
        for i in start..=self.sets.len() - left {
            let mut next = covered.clone();
            next.union_with(&self.sets[i]);
            chosen.push(i);
            if self.lex_dfs(i + 1, left - 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn greedy(&self) -> Vec<usize> {
        let mut covered = FixedBitSet::with_capacity(self.target);
        let mut picks = Vec::new();
        while covered.count_ones(..) < self.target {
            let (best, _) = self
                .sets
                .iter()
                .enumerate()
                .map(|(i, s)| (i, s.difference_count(&covered)))
                .fold(
                    (usize::MAX, 0),
                    |acc, (i, gain)| if gain > acc.1 { (i, gain) } else { acc },
                );
            covered.union_with(&self.sets[best]);
            picks.push(best);
        }
        picks.sort_unstable();
        picks
    }

    /// Minimum cover by branch and bound on the lowest uncovered target.
    /// Returns `(picks, exact)`; falls back to the greedy answer when the
    /// node budget runs out.
    pub(crate) fn minimum(&self, node_budget: u64) -> (Vec<usize>, bool) {
        let mut best = self.greedy();
        let mut nodes = 0u64;
        let mut chosen = Vec::new();
        let covered = FixedBitSet::with_capacity(self.target);
        let complete = self.bnb(&covered, &mut chosen, &mut best, &mut nodes, node_budget);
        best.sort_unstable();
        (best, complete)
    }

    fn bnb(
        &self,
        covered: &FixedBitSet,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        nodes: &mut u64,
        node_budget: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > node_budget {
            return false;
        }
        let Some(gap) = covered.zeroes().next() else {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return true;
        };
        if chosen.len() + 1 >= best.len() {
            return true;
        }
        for i in 0..self.sets.len() {
            if !self.sets[i].contains(gap) {
                continue;
            }
            let mut next = covered.clone();
            next.union_with(&self.sets[i]);
            chosen.push(i);
            let ok = self.bnb(&next, chosen, best, nodes, node_budget);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    pub(crate) fn minimum_size(&self, node_budget: u64) -> (usize, bool) {
        let (picks, exact) = self.minimum(node_budget);
        (picks.len(), exact)
    }
}

/// Can `a` be covered by `k` balls of radius `r`? Centers may lie outside
/// `a`.
///
/// Exact mode returns the shortlex-least witness (fewest balls, then lowest
/// centers) or `None`. Greedy mode always returns a cover and reports
/// through [`Cover::fits`] whether it stayed within `k`.
pub fn is_coverable(
    graph: &Graph,
    a: &[usize],
    k: usize,
    r: u64,
    mode: CoverMode,
    budget: &Budget,
) -> Result<Option<Cover>> {
    graph.check_vertices(a)?;
    let inst = CoverInstance::from_graph(graph, a, r);
    let required = binomial_prefix(inst.sets.len(), k);
    let exact = match mode {
        CoverMode::Exact if required > budget.enumeration => {
            return Err(Error::BudgetExceeded {
                what: format!(
                    "exact cover of {} vertices by {k} balls from {} centers",
                    a.len(),
                    inst.sets.len()
                ),
                required: required.to_string(),
                budget: budget.enumeration,
            })
        }
        CoverMode::Exact => true,
        CoverMode::Greedy => false,
        CoverMode::Auto => required <= budget.enumeration,
    };
    if exact {
        Ok(inst.lex_least(k).map(|picks| Cover {
            balls: inst.balls(&picks, r),
            exact: true,
            fits: true,
        }))
    } else {
        let picks = inst.greedy();
        Ok(Some(Cover {
            fits: picks.len() <= k,
            balls: inst.balls(&picks, r),
            exact: false,
        }))
    }
}

/// Greedy max-coverage cover of `a` by radius-`r` balls, ties to the lowest
/// center.
pub fn greedy_cover(graph: &Graph, a: &[usize], r: u64) -> Result<Vec<Ball>> {
    graph.check_vertices(a)?;
    let inst = CoverInstance::from_graph(graph, a, r);
    Ok(inst.balls(&inst.greedy(), r))
}

/// Smallest cover of `a` by radius-`r` balls, exact within
/// `budget.search_nodes`, otherwise the best cover found.
pub fn min_cover_size(graph: &Graph, a: &[usize], r: u64, budget: &Budget) -> Result<MinCover> {
    graph.check_vertices(a)?;
    let inst = CoverInstance::from_graph(graph, a, r);
    let (picks, exact) = inst.minimum(budget.search_nodes);
    Ok(MinCover {
        balls: inst.balls(&picks, r),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};
    use crate::graph::ball_union;

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn paths_and_grids_by_one_ball() {
        let b = Budget::default();
        let p5 = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let c = is_coverable(&p5, &all(5), 1, 2, CoverMode::Exact, &b).unwrap().unwrap();
        assert_eq!(c.balls, vec![Ball::new(2, 2)]);
        assert!(is_coverable(&p5, &all(5), 1, 1, CoverMode::Exact, &b)
            .unwrap()
            .is_none());
        let g = generate(&FamilySpec::Grid { rows: 3, cols: 3 }).unwrap();
        let c = is_coverable(&g, &all(9), 1, 2, CoverMode::Exact, &b).unwrap().unwrap();
        assert_eq!(c.balls, vec![Ball::new(4, 2)]);
    }

    #[test]
    fn centers_may_lie_outside_the_set() {
        let p5 = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let c = is_coverable(&p5, &[1, 3], 1, 1, CoverMode::Exact, &Budget::default())
            .unwrap()
            .unwrap();
        assert_eq!(c.balls, vec![Ball::new(2, 1)]);
    }

    #[test]
    fn empty_set_needs_no_balls() {
        let p5 = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let c = is_coverable(&p5, &[], 1, 1, CoverMode::Exact, &Budget::default())
            .unwrap()
            .unwrap();
        assert!(c.balls.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let c = generate(&FamilySpec::Cycle { n: 40 }).unwrap();
        let tight = Budget {
            enumeration: 100,
            ..Budget::default()
        };
        let err = is_coverable(&c, &all(40), 5, 1, CoverMode::Exact, &tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        let auto = is_coverable(&c, &all(40), 5, 1, CoverMode::Auto, &tight)
            .unwrap()
            .unwrap();
        assert!(!auto.exact);
        assert!(!auto.fits);
        assert_eq!(ball_union(&c, &auto.balls).unwrap(), all(40));
    }

    #[test]
    fn minimum_beats_or_matches_greedy() {
        let c = generate(&FamilySpec::Cycle { n: 12 }).unwrap();
        let m = min_cover_size(&c, &all(12), 1, &Budget::default()).unwrap();
        assert!(m.exact);
        assert_eq!(m.size(), 4);
        assert!(greedy_cover(&c, &all(12), 1).unwrap().len() >= 4);
    }
}
