//! Balanced separator number over 0/1 weight functions.
//!
//! For a fixed `k` the question is whether some subset `U` of vertices
//! defeats every union of `k` radius-`r` balls, meaning each union leaves a
//! component holding more than half of `U`. The number of subsets is
//! exponential, so the decision runs in stages:
//!
//! 1. Only inclusion-maximal unions matter: a superset of a balanced
//!    separator is balanced.
//! 2. Cheap attempts to find a defeating subset (all of `V`, then a seeded
//!    local search).
//! 3. A refutation. If `U` defeats every union `X`, each `X` has a unique
//!    majority component, and any two majority components share a vertex
//!    of `U`. So if no choice of one component per union is pairwise
//!    intersecting, no defeating weight function exists at all, 0/1 or not.
//! 4. Full enumeration of subsets on small graphs.
//!
//! If none of these settles the question the search reports the budget it
//! would need instead of guessing.

use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::all_balls;
use crate::budget::{binomial, Budget};
use crate::error::{Error, Result};
use crate::graph::{components_masked, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BsnProof {
    /// Some union of `k` balls is the whole vertex set.
    WholeGraph,
    /// No pairwise-intersecting choice of majority components exists.
    Consistency,
    /// Every subset was tried.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BsnVerdict {
    /// The indicator of `subset` has no balanced separator made of `k` balls.
    Defeated { subset: Vec<usize> },
    /// Every indicator has one.
    Proven(BsnProof),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BsnOutcome {
    /// Smallest sufficient `k`, if it is at most `k_max`.
    pub value: Option<usize>,
    /// How each tried `k` was decided, in increasing order of `k`.
    pub steps: Vec<(usize, BsnVerdict)>,
}

/// Smallest `k <= k_max` such that every 0/1 weight function on the vertices
/// has a balanced separator covered by `k` balls of radius `r`.
pub fn bsn_over_indicators(graph: &Graph, r: u64, k_max: usize, budget: &Budget) -> Result<Option<usize>> {
    Ok(bsn_with_certificates(graph, r, k_max, budget)?.value)
}

/// [`bsn_over_indicators`] together with the evidence for every `k` tried.
pub fn bsn_with_certificates(graph: &Graph, r: u64, k_max: usize, budget: &Budget) -> Result<BsnOutcome> {
    if k_max == 0 {
        return Err(Error::input("k_max must be at least 1"));
    }
    let balls = all_balls(graph, r);
    let mut steps = Vec::new();
    for k in 1..=k_max {
        let verdict = decide(graph, &balls, k, budget)?;
        let proven = matches!(verdict, BsnVerdict::Proven(_));
        steps.push((k, verdict));
        if proven {
            return Ok(BsnOutcome { value: Some(k), steps });
        }
    }
    Ok(BsnOutcome { value: None, steps })
}

fn decide(graph: &Graph, balls: &[FixedBitSet], k: usize, budget: &Budget) -> Result<BsnVerdict> {
    let n = graph.n();
    if n == 0 {
        return Ok(BsnVerdict::Proven(BsnProof::WholeGraph));
    }
    let unions = maximal_unions(balls, k.min(n), budget)?;
    if unions.iter().any(|x| x.count_ones(..) == n) {
        return Ok(BsnVerdict::Proven(BsnProof::WholeGraph));
    }
    let inst = Instance::new(graph, &unions);

    let everything: FixedBitSet = {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        b
    };
    if inst.defeats(&everything) {
        return Ok(BsnVerdict::Defeated {
            subset: everything.ones().collect(),
        });
    }

    let choice = match inst.consistent_choice(budget.search_nodes) {
        Search::Refuted => return Ok(BsnVerdict::Proven(BsnProof::Consistency)),
        Search::Found(choice) => Some(choice),
        Search::OutOfBudget => None,
    };
    if let Some(u) = inst.local_search(choice.as_deref(), budget.search_nodes) {
        return Ok(BsnVerdict::Defeated {
            subset: u.ones().collect(),
        });
    }
    if n <= budget.subset_vertices.min(63) {
        return Ok(match inst.exhaustive() {
            Some(mask) => BsnVerdict::Defeated {
                subset: (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
            },
            None => BsnVerdict::Proven(BsnProof::Exhaustive),
        });
    }
    Err(Error::BudgetExceeded {
        what: format!(
            "balanced separator number on {n} vertices at k = {k}: no defeating subset found and \
             no refutation; full enumeration needs n <= {}",
            budget.subset_vertices
        ),
        required: format!("2^{n}"),
        budget: 1u64 << budget.subset_vertices.min(63),
    })
}

/// Distinct, inclusion-maximal unions of exactly `size` balls.
fn maximal_unions(balls: &[FixedBitSet], size: usize, budget: &Budget) -> Result<Vec<FixedBitSet>> {
    let required = binomial(balls.len(), size);
    if required > budget.enumeration {
        return Err(Error::BudgetExceeded {
            what: format!("unions of {size} balls among {} centers", balls.len()),
            required: required.to_string(),
            budget: budget.enumeration,
        });
    }
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let mut u = balls[idx[0]].clone();
        for &i in &idx[1..] {
            u.union_with(&balls[i]);
        }
        seen.insert(u);
        // Next combination in lexicographic order.
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < balls.len() - size + p) else {
            break;
        };
        idx[pos] += 1;
        for q in pos + 1..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
    let mut all: Vec<FixedBitSet> = seen.into_iter().collect();
    all.sort_by(|a, b| {
        b.count_ones(..)
            .cmp(&a.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    let mut kept: Vec<FixedBitSet> = Vec::new();
    for x in all {
        if !kept.iter().any(|y| x.is_subset(y)) {
            kept.push(x);
        }
    }
    Ok(kept)
}

enum Search {
    Refuted,
    Found(Vec<usize>),
    OutOfBudget,
}

struct Instance {
    n: usize,
    /// Components of `G - X`, one list per maximal union `X`.
    comps: Vec<Vec<FixedBitSet>>,
}

impl Instance {
    fn new(graph: &Graph, unions: &[FixedBitSet]) -> Self {
        let n = graph.n();
        let comps = unions
            .iter()
            .map(|x| {
                let blocked: Vec<bool> = (0..n).map(|v| x.contains(v)).collect();
                components_masked(graph, &blocked)
                    .into_iter()
                    .map(|c| {
                        let mut b = FixedBitSet::with_capacity(n);
                        c.into_iter().for_each(|v| b.insert(v));
                        b
                    })
                    .collect()
            })
            .collect();
        Instance { n, comps }
    }

    fn balanced_for(&self, x: usize, u: &FixedBitSet, size: usize) -> bool {
        self.comps[x].iter().all(|c| 2 * c.intersection_count(u) <= size)
    }

    fn unbalanced_count(&self, u: &FixedBitSet) -> usize {
        let size = u.count_ones(..);
        (0..self.comps.len())
            .filter(|&x| !self.balanced_for(x, u, size))
            .count()
    }

    fn defeats(&self, u: &FixedBitSet) -> bool {
        let size = u.count_ones(..);
        size > 0 && (0..self.comps.len()).all(|x| !self.balanced_for(x, u, size))
    }

    /// Backtracking search for one component per union, pairwise
    /// intersecting, with arc consistency up front and forward checking.
    fn consistent_choice(&self, node_budget: u64) -> Search {
        let m = self.comps.len();
        let mut domains: Vec<Vec<usize>> = self.comps.iter().map(|cs| (0..cs.len()).collect()).collect();
        if !self.arc_consistency(&mut domains) {
            return Search::Refuted;
        }
        let mut assignment = vec![usize::MAX; m];
        let mut nodes = 0u64;
        match self.backtrack(&mut domains, &mut assignment, &mut nodes, node_budget) {
            Some(true) => Search::Found(assignment),
            Some(false) => Search::Refuted,
            None => Search::OutOfBudget,
        }
    }

    fn meets(&self, x: usize, a: usize, y: usize, b: usize) -> bool {
        !self.comps[x][a].is_disjoint(&self.comps[y][b])
    }

    fn arc_consistency(&self, domains: &mut [Vec<usize>]) -> bool {
        let m = domains.len();
        let mut queue: VecDeque<(usize, usize)> = (0..m)
            .flat_map(|x| (0..m).filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        let mut queued = vec![vec![true; m]; m];
        while let Some((x, y)) = queue.pop_front() {
            queued[x][y] = false;
            let before = domains[x].len();
            let dy = domains[y].clone();
            domains[x].retain(|&a| dy.iter().any(|&b| self.meets(x, a, y, b)));
            if domains[x].is_empty() {
                return false;
            }
            if domains[x].len() < before {
                for z in (0..m).filter(|&z| z != x && z != y) {
                    if !queued[z][x] {
                        queued[z][x] = true;
                        queue.push_back((z, x));
                    }
                }
            }
        }
        true
    }

    /// `Some(true)`: solution in `assignment`; `Some(false)`: none exists;
    /// `None`: node budget exhausted.
    fn backtrack(
        &self,
        domains: &mut Vec<Vec<usize>>,
        assignment: &mut [usize],
        nodes: &mut u64,
        node_budget: u64,
    ) -> Option<bool> {
        *nodes += 1;
        if *nodes > node_budget {
            return None;
        }
        let next = (0..assignment.len())
            .filter(|&x| assignment[x] == usize::MAX)
            .min_by_key(|&x| domains[x].len());
        let Some(x) = next else {
            return Some(true);
        };
        for a in domains[x].clone() {
            assignment[x] = a;
            let saved = domains.clone();
            let mut ok = true;
            for y in 0..assignment.len() {
                if assignment[y] != usize::MAX {
                    continue;
                }
                domains[y].retain(|&b| self.meets(x, a, y, b));
                if domains[y].is_empty() {
                    ok = false;
                    break;
                }
            }
            if ok {
                match self.backtrack(domains, assignment, nodes, node_budget) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            *domains = saved;
            assignment[x] = usize::MAX;
        }
        Some(false)
    }

    /// Seeded hill climbing on the number of unions a subset defeats.
    fn local_search(&self, choice: Option<&[usize]>, node_budget: u64) -> Option<FixedBitSet> {
        let n = self.n;
        let m = self.comps.len();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b5e0);
        let mut starts: Vec<FixedBitSet> = Vec::new();
        if let Some(choice) = choice {
            // Vertices lying in many of the chosen majority components.
            let mut score = vec![0usize; n];
            for (x, &a) in choice.iter().enumerate() {
                self.comps[x][a].ones().for_each(|v| score[v] += 1);
            }
            let mut start = FixedBitSet::with_capacity(n);
            for v in (0..n).filter(|&v| 2 * score[v] > m) {
                start.insert(v);
            }
            if start.count_ones(..) > 0 {
                starts.push(start);
            }
        }
        for _ in 0..4 {
            let mut s = FixedBitSet::with_capacity(n);
            for v in 0..n {
                if rng.gen_bool(0.5) {
                    s.insert(v);
                }
            }
            starts.push(s);
        }
        let cost_per_eval = (m as u64).max(1);
        let mut evals_left = node_budget / cost_per_eval;
        for mut u in starts {
            let mut best = self.unbalanced_count(&u);
            let mut stale = 0;
            while stale < 3 * n && evals_left > 0 {
                if best == m && u.count_ones(..) > 0 {
                    return Some(u);
                }
                let v = rng.gen_range(0..n);
                u.toggle(v);
                evals_left = evals_left.saturating_sub(1);
                let score = if u.count_ones(..) == 0 {
                    0
                } else {
                    self.unbalanced_count(&u)
                };
                if score > best || (score == best && rng.gen_bool(0.3)) {
                    stale = if score > best { 0 } else { stale + 1 };
                    best = score;
                } else {
                    u.toggle(v);
                    stale += 1;
                }
            }
            if best == m && u.count_ones(..) > 0 {
                return Some(u);
            }
        }
        None
    }

    /// All nonempty subsets as bitmasks; returns a defeating one if any.
    fn exhaustive(&self) -> Option<u64> {
        let masks: Vec<Vec<u64>> = self
            .comps
            .iter()
            .map(|cs| cs.iter().map(|c| c.ones().fold(0u64, |acc, v| acc | 1 << v)).collect())
            .collect();
        let mut last_good = 0usize;
        let balanced = |x: usize, u: u64, size: u32| masks[x].iter().all(|&c| 2 * (c & u).count_ones() <= size);
        for u in 1u64..(1u64 << self.n) {
            let size = u.count_ones();
            if balanced(last_good, u, size) {
                continue;
            }
            match (0..masks.len()).find(|&x| balanced(x, u, size)) {
                Some(x) => last_good = x,
                None => return Some(u),
            }
        }
        None
    }
}
