//! Balanced separators covered by few balls, and the small-graph oracles
//! built on them.

mod bsn;
mod treewidth;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::budget::{binomial_prefix, Budget};
use crate::error::{Error, Result};
use crate::graph::{ball, Ball, Graph};
use crate::rational::{self, Rational};

pub use bsn::{bsn_over_indicators, bsn_with_certificates, BsnOutcome, BsnProof, BsnVerdict};
pub use treewidth::exact_treewidth;

/// Nonnegative vertex weights with a cached total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WeightFnJson", into = "WeightFnJson")]
pub struct WeightFn {
    weights: Vec<Rational>,
    total: Rational,
}

#[derive(Serialize, Deserialize)]
struct WeightFnJson {
    weights: Vec<String>,
}

impl TryFrom<WeightFnJson> for WeightFn {
    type Error = Error;

    fn try_from(j: WeightFnJson) -> Result<Self> {
        WeightFn::new(j.weights.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?)
    }
}

impl From<WeightFn> for WeightFnJson {
    fn from(w: WeightFn) -> Self {
        WeightFnJson {
            weights: w.weights.iter().map(rational::format).collect(),
        }
    }
}

impl WeightFn {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(v) = weights.iter().position(|w| *w < rational::int(0)) {
            return Err(Error::input(format!("negative weight at vertex {v}")));
        }
        let total = weights.iter().sum();
        Ok(WeightFn { weights, total })
    }

    pub fn uniform(n: usize) -> Self {
        Self::indicator(n, &(0..n).collect::<Vec<_>>())
    }

    pub fn zero(n: usize) -> Self {
        Self::indicator(n, &[])
    }

    /// `1` on `set`, `0` elsewhere. Ids outside `0..n` are ignored.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut weights = vec![rational::int(0); n];
        for &v in set.iter().filter(|&&v| v < n) {
            weights[v] = rational::int(1);
        }
        let total = weights.iter().sum();
        WeightFn { weights, total }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: usize) -> Rational {
        self.weights[v]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn total(&self) -> Rational {
        self.total
    }

    pub fn of_set(&self, set: &[usize]) -> Rational {
        set.iter().map(|&v| self.weights[v]).sum()
    }

    pub(crate) fn check_len(&self, graph: &Graph) -> Result<()> {
        if self.len() == graph.n() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "weight function has {} entries, graph has {} vertices",
                self.len(),
                graph.n()
            )))
        }
    }
}

/// Weight of the heaviest component of `graph - blocked`.
pub(crate) fn heaviest_component(graph: &Graph, blocked: &FixedBitSet, mu: &WeightFn) -> Rational {
    let n = graph.n();
    let mut seen = blocked.clone();
    let mut stack = Vec::new();
    let mut best = rational::int(0);
    for s in 0..n {
        if seen.contains(s) {
            continue;
        }
        seen.insert(s);
        stack.push(s);
        let mut w = rational::int(0);
        while let Some(u) = stack.pop() {
            w += mu.weights[u];
            for &v in graph.neighbors(u) {
                if !seen.contains(v) {
                    seen.insert(v);
                    stack.push(v);
                }
            }
        }
        best = best.max(w);
    }
    best
}

fn is_balanced(heaviest: Rational, total: Rational) -> bool {
    heaviest * 2 <= total
}

fn to_bits(n: usize, set: &[usize]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(n);
    set.iter().for_each(|&v| bits.insert(v));
    bits
}

/// Every component of `graph - x` weighs at most half of `mu`'s total.
pub fn is_balanced_separator(graph: &Graph, mu: &WeightFn, x: &[usize]) -> Result<bool> {
    graph.check_vertices(x)?;
    mu.check_len(graph)?;
    let h = heaviest_component(graph, &to_bits(graph.n(), x), mu);
    Ok(is_balanced(h, mu.total))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Enumerate center sets, fewest balls first, then lexicographically.
    #[default]
    Exact,
    /// Repeatedly add the ball that most lowers the heaviest component.
    Greedy,
}

/// Balls whose union is a balanced separator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatorWitness {
    pub balls: Vec<Ball>,
    pub union: Vec<usize>,
    /// Weight of the heaviest component left after removing `union`.
    #[serde(with = "rational")]
    pub heaviest: Rational,
    #[serde(with = "rational")]
    pub total: Rational,
    /// Found by exhaustive search (so smaller or earlier answers do not exist).
    pub exact: bool,
}

/// Radius-`r` balls around every vertex, as bitsets.
pub(crate) fn all_balls(graph: &Graph, r: u64) -> Vec<FixedBitSet> {
    (0..graph.n())
        .map(|c| to_bits(graph.n(), &ball(graph, c, r).expect("center in range")))
        .collect()
}

/// Finds at most `k` balls of radius `r` whose union is balanced for `mu`.
///
/// Exact mode returns the first balanced center set in the order: fewer
/// balls first, then lexicographically. So a weight function that is
/// already balanced without removing anything (for example the zero
/// function) yields the empty witness. Radius 0 is allowed and turns the
/// balls into plain vertices.
pub fn find_separator(
    graph: &Graph,
    mu: &WeightFn,
    k: usize,
    r: u64,
    mode: OracleMode,
    budget: &Budget,
) -> Result<Option<SeparatorWitness>> {
    if k == 0 {
        return Err(Error::input("separator ball count k must be at least 1"));
    }
    mu.check_len(graph)?;
    let balls = all_balls(graph, r);
    find_separator_with(graph, mu, k, r, mode, budget, &balls)
}

pub(crate) fn find_separator_with(
    graph: &Graph,
    mu: &WeightFn,
    k: usize,
    r: u64,
    mode: OracleMode,
    budget: &Budget,
    balls: &[FixedBitSet],
) -> Result<Option<SeparatorWitness>> {
    let n = graph.n();
    let witness = |centers: &[usize], union: &FixedBitSet, heaviest: Rational, exact: bool| SeparatorWitness {
        balls: centers.iter().map(|&c| Ball::new(c, r)).collect(),
        union: union.ones().collect(),
        heaviest,
        total: mu.total,
        exact,
    };
    match mode {
        OracleMode::Exact => {
            let required = binomial_prefix(n, k);
            if required > budget.enumeration {
                return Err(Error::BudgetExceeded {
                    what: format!("separator search with {k} balls on {n} vertices"),
                    required: required.to_string(),
                    budget: budget.enumeration,
                });
            }
            let mut chosen = Vec::new();
            for size in 0..=k.min(n) {
                let empty = FixedBitSet::with_capacity(n);
                if let Some((union, h)) = lex_search(graph, mu, balls, 0, size, &empty, &mut chosen) {
                    return Ok(Some(witness(&chosen, &union, h, true)));
                }
            }
            Ok(None)
        }
        OracleMode::Greedy => {
            let mut union = FixedBitSet::with_capacity(n);
            let mut centers = Vec::new();
            let mut h = heaviest_component(graph, &union, mu);
            for _ in 0..k {
                if is_balanced(h, mu.total) {
                    break;
                }
                let mut best: Option<(Rational, usize)> = None;
                for (c, b) in balls.iter().enumerate() {
                    let mut next = union.clone();
                    next.union_with(b);
                    let w = heaviest_component(graph, &next, mu);
                    if best.is_none_or(|(bw, _)| w < bw) {
                        best = Some((w, c));
                    }
                }
                let Some((w, c)) = best else { break };
                union.union_with(&balls[c]);
                centers.push(c);
                h = w;
            }
            centers.sort_unstable();
            centers.dedup();
            Ok(is_balanced(h, mu.total).then(|| witness(&centers, &union, h, false)))
        }
    }
}

fn lex_search(
    graph: &Graph,
    mu: &WeightFn,
    balls: &[FixedBitSet],
    start: usize,
    left: usize,
    union: &FixedBitSet,
    chosen: &mut Vec<usize>,
) -> Option<(FixedBitSet, Rational)> {
    if left == 0 {
        let h = heaviest_component(graph, union, mu);
        return is_balanced(h, mu.total).then(|| (union.clone(), h));
    }
    for c in start..=balls.len() - left {
        let mut next = union.clone();
        next.union_with(&balls[c]);
        chosen.push(c);
        if let Some(found) = lex_search(graph, mu, balls, c + 1, left - 1, &next, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn gen(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    #[test]
    fn balanced_predicate_examples() {
        let p5 = gen(FamilySpec::Path { n: 5 });
        assert!(is_balanced_separator(&p5, &WeightFn::uniform(5), &[2]).unwrap());
        assert!(!is_balanced_separator(&p5, &WeightFn::uniform(5), &[0]).unwrap());
        assert!(is_balanced_separator(&p5, &WeightFn::zero(5), &[]).unwrap());
        assert!(is_balanced_separator(&p5, &WeightFn::zero(4), &[]).is_err());
    }

    #[test]
    fn oracle_examples() {
        let b = Budget::default();
        let p9 = gen(FamilySpec::Path { n: 9 });
        let w = find_separator(&p9, &WeightFn::uniform(9), 1, 1, OracleMode::Exact, &b)
            .unwrap()
            .unwrap();
        assert_eq!(w.balls, vec![Ball::new(3, 1)]);
        assert_eq!(w.union, vec![2, 3, 4]);
        assert_eq!(w.heaviest, rational::int(4));

        let k4 = gen(FamilySpec::Complete { n: 4 });
        let w = find_separator(&k4, &WeightFn::uniform(4), 1, 1, OracleMode::Exact, &b)
            .unwrap()
            .unwrap();
        assert_eq!(w.balls, vec![Ball::new(0, 1)]);
        assert_eq!(w.union, vec![0, 1, 2, 3]);

        let c16 = gen(FamilySpec::Cycle { n: 16 });
        assert!(
            find_separator(&c16, &WeightFn::uniform(16), 1, 1, OracleMode::Exact, &b)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn zero_weight_needs_no_balls() {
        let c = gen(FamilySpec::Cycle { n: 6 });
        let w = find_separator(&c, &WeightFn::zero(6), 1, 1, OracleMode::Exact, &Budget::default())
            .unwrap()
            .unwrap();
        assert!(w.balls.is_empty());
    }

    #[test]
    fn greedy_finds_something_balanced() {
        let c = gen(FamilySpec::Cycle { n: 16 });
        let mu = WeightFn::uniform(16);
        let w = find_separator(&c, &mu, 2, 1, OracleMode::Greedy, &Budget::default())
            .unwrap()
            .unwrap();
        assert!(!w.exact);
        assert!(w.balls.len() <= 2);
        assert!(is_balanced_separator(&c, &mu, &w.union).unwrap());
    }

    #[test]
    fn weight_fn_json() {
        let mu = WeightFn::new(vec![Rational::new(1, 2), rational::int(3)]).unwrap();
        let s = serde_json::to_string(&mu).unwrap();
        assert_eq!(s, r#"{"weights":["1/2","3/1"]}"#);
        let back: WeightFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back.total(), Rational::new(7, 2));
        assert!(serde_json::from_str::<WeightFn>(r#"{"weights":["-1"]}"#).is_err());
    }
}
