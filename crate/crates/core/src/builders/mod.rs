//! Recursive builders of tree decompositions whose bags come with ball
//! covers.
//!
//! Both builders split the remaining part `U` with an oracle separator and
//! recurse on the pieces. [`decompose_simple`] carries every separator found
//! along a branch, so covers grow by `k` balls per level.
//! [`decompose_round`] keeps the carried cover small by merging crowded balls
//! into larger ones and tracks the growth of radii through the potential
//! `Σ 2^(radius / r)`.

mod bounds;
mod round;
mod simple;

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::decomposition::{potential, validate_tree_decomposition, Node, TreeDecomposition};
use crate::error::{Error, Frame, Result};
use crate::graph::{bounded_bfs, ceil_log2, components_masked, Ball, Graph};
use crate::separator::{find_separator_with, OracleMode, SeparatorWitness, WeightFn};

pub use bounds::cover_bounds;
pub use round::{decompose_round, uncrowd};
pub use simple::decompose_simple;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuilderParams {
    /// Balls allowed per oracle separator.
    pub k: usize,
    /// Radius of the oracle balls.
    pub r: u64,
    /// Cap on the carried cover of the round builder; `None` means
    /// [`gamma`].
    pub gamma_cap: Option<u64>,
    pub oracle: OracleMode,
    /// Deepest recursion allowed; `None` means `⌈log₂ n⌉ + 1`.
    pub recursion_limit: Option<usize>,
    #[serde(skip)]
    pub budget: Budget,
}

impl BuilderParams {
    pub fn new(k: usize, r: u64) -> Self {
        BuilderParams {
            k,
            r,
            gamma_cap: None,
            oracle: OracleMode::Exact,
            recursion_limit: None,
            budget: Budget::default(),
        }
    }

    /// Crowding constant `2 + ⌈log₂ 2k⌉`.
    pub fn alpha(&self) -> u32 {
        alpha(self.k)
    }

    pub fn cap(&self) -> u64 {
        self.gamma_cap.unwrap_or_else(|| gamma(self.k))
    }

    fn check(&self, graph: &Graph) -> Result<()> {
        if self.k == 0 || self.r == 0 {
            return Err(Error::input("k and r must be positive"));
        }
        if graph.n() == 0 {
            return Err(Error::input("graph has no vertices"));
        }
        Ok(())
    }

    fn depth_limit(&self, n: usize) -> usize {
        self.recursion_limit.unwrap_or(ceil_log2(n as u64) as usize + 1)
    }
}

pub fn alpha(k: usize) -> u32 {
    2 + ceil_log2(2 * k as u64)
}

/// `⌊2000 k² log₂ k⌋`, computed exactly as `bits(k^(2000 k²)) - 1`.
pub fn gamma(k: usize) -> u64 {
    if k < 2 {
        return 0;
    }
    let e = 2000 * (k as u32) * (k as u32);
    BigUint::from(k).pow(e).bits() - 1
}

/// Balls whose radii are positive multiples of a base radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundBallSet {
    pub r: u64,
    pub balls: Vec<Ball>,
}

impl RoundBallSet {
    pub fn new(r: u64, balls: Vec<Ball>) -> Result<Self> {
        if r == 0 {
            return Err(Error::input("base radius must be positive"));
        }
        if let Some(b) = balls.iter().find(|b| b.radius == 0 || b.radius % r != 0) {
            return Err(Error::input(format!(
                "ball at {} has radius {}, not a positive multiple of {r}",
                b.center, b.radius
            )));
        }
        Ok(RoundBallSet { r, balls })
    }

    pub fn potential(&self) -> BigUint {
        potential(&self.balls, self.r).expect("round by construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Simple,
    Round,
}

/// A bound the construction promises, with what was observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub observed: String,
    pub bound: String,
    pub holds: bool,
}

impl BoundCheck {
    pub(crate) fn new(name: &str, observed: impl ToString, bound: impl ToString, holds: bool) -> Self {
        BoundCheck {
            name: name.into(),
            observed: observed.to_string(),
            bound: bound.to_string(),
            holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    /// The `k` the construction ran with (the round builder needs `k >= 2`).
    pub k_used: usize,
    pub r: u64,
    pub alpha: Option<u32>,
    pub gamma_cap: Option<u64>,
    pub nodes: usize,
    pub max_depth: usize,
    pub max_cover_size: usize,
    pub max_radius: u64,
    #[serde(serialize_with = "crate::decomposition::decimal")]
    pub max_potential: Option<BigUint>,
    pub oracle_calls: usize,
    pub merges: usize,
    pub checks: Vec<BoundCheck>,
}

impl BuildReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// Turns the first failed check into an error.
    pub fn ensure(&self) -> Result<()> {
        match self.checks.iter().find(|c| !c.holds) {
            None => Ok(()),
            Some(c) => Err(Error::violation(
                format!("{} bound", c.name),
                format!("observed {}, bound {}", c.observed, c.bound),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Built {
    pub td: TreeDecomposition,
    pub report: BuildReport,
}

/// State shared by the recursive frames of a builder.
pub(crate) struct Ctx<'a> {
    pub graph: &'a Graph,
    pub k: usize,
    pub r: u64,
    pub oracle: OracleMode,
    pub budget: &'a Budget,
    pub depth_limit: usize,
    pub radius_r: Vec<FixedBitSet>,
    ball_sets: HashMap<Ball, FixedBitSet>,
    rows: HashMap<usize, Vec<Option<u64>>>,
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize)>,
    pub max_depth: usize,
    pub oracle_calls: usize,
    pub merges: usize,
}

impl<'a> Ctx<'a> {
    pub fn new(graph: &'a Graph, k: usize, params: &'a BuilderParams) -> Self {
        Ctx {
            graph,
            k,
            r: params.r,
            oracle: params.oracle,
            budget: &params.budget,
            depth_limit: params.depth_limit(graph.n()),
            radius_r: crate::separator::all_balls(graph, params.r),
            ball_sets: HashMap::new(),
            rows: HashMap::new(),
            nodes: Vec::new(),
            edges: Vec::new(),
            max_depth: 0,
            oracle_calls: 0,
            merges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn ball_set(&mut self, b: Ball) -> &FixedBitSet {
        let (graph, r, radius_r) = (self.graph, self.r, &self.radius_r);
        self.ball_sets.entry(b).or_insert_with(|| {
            if b.radius == r {
                return radius_r[b.center].clone();
            }
            let mut s = FixedBitSet::with_capacity(graph.n());
            for (v, d) in bounded_bfs(graph, b.center, b.radius).into_iter().enumerate() {
                if d.is_some() {
                    s.insert(v);
                }
            }
            s
        })
    }

    pub fn union(&mut self, balls: &[Ball]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n());
        for &b in balls {
            s.union_with(self.ball_set(b));
        }
        s
    }

    /// Hop distance, through a cache of BFS rows keyed by the first argument.
    pub fn dist(&mut self, from: usize, to: usize) -> Option<u64> {
        let graph = self.graph;
        self.rows
            .entry(from)
            .or_insert_with(|| bounded_bfs(graph, from, u64::MAX))[to]
    }

    pub fn frame(&self, depth: usize, s: &[usize], u: &[usize]) -> Frame {
        Frame {
            depth,
            separator: s.to_vec(),
            component: u.to_vec(),
        }
    }

    /// Oracle separator for the indicator of `set`.
    pub fn separate(&mut self, set: &[usize], at: (usize, &[usize], &[usize]), what: &str) -> Result<SeparatorWitness> {
        self.oracle_calls += 1;
        let mu = WeightFn::indicator(self.n(), set);
        let found = find_separator_with(
            self.graph,
            &mu,
            self.k,
            self.r,
            self.oracle,
            self.budget,
            &self.radius_r,
        )?;
        found.ok_or_else(|| Error::DecompositionFailure {
            frame: self.frame(at.0, at.1, at.2),
            reason: format!(
                "no {} balls of radius {} form a balanced separator for {what}",
                self.k, self.r
            ),
        })
    }

    /// Checks that `u` is exactly one component of `G - s` and that `s` is
    /// inside `cover`, then the depth.
    pub fn check_frame(&mut self, s: &[usize], u: &[usize], cover: &[Ball], depth: usize) -> Result<()> {
        let n = self.n();
        let mut blocked = vec![false; n];
        s.iter().for_each(|&v| blocked[v] = true);
        let comp = components_masked(self.graph, &blocked)
            .into_iter()
            .find(|c| c[0] == u[0]);
        if comp.as_deref() != Some(u) {
            return Err(Error::violation(
                "frame: U is not a component of G - S",
                self.frame(depth, s, u).to_string(),
            ));
        }
        let covered = self.union(cover);
        if let Some(&v) = s.iter().find(|&&v| !covered.contains(v)) {
            return Err(Error::violation(
                "frame: carried cover misses a vertex of S",
                format!("vertex {v} at {}", self.frame(depth, s, u)),
            ));
        }
        if depth > self.depth_limit {
            return Err(Error::violation(
                "recursion depth",
                format!(
                    "depth {depth} exceeds {} at {}",
                    self.depth_limit,
                    self.frame(depth, s, u)
                ),
            ));
        }
        self.max_depth = self.max_depth.max(depth);
        Ok(())
    }

    pub fn push_node(&mut self, bag: Vec<usize>, cover: Vec<Ball>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::new(id, bag, Some(cover)));
        id
    }

    /// Components of `G[u] - z`, by lowest vertex.
    pub fn pieces(&self, u: &[usize], z: &FixedBitSet) -> Vec<Vec<usize>> {
        let mut blocked = vec![true; self.n()];
        u.iter().filter(|&&v| !z.contains(v)).for_each(|&v| blocked[v] = false);
        components_masked(self.graph, &blocked)
    }

    /// Runs `root` on every component of the graph, links the roots into one
    /// tree and validates the result.
    pub fn assemble<F>(mut self, mut root: F) -> Result<(TreeDecomposition, Self)>
    where
        F: FnMut(&mut Self, &[usize]) -> Result<usize>,
    {
        let comps = components_masked(self.graph, &vec![false; self.n()]);
        let mut roots = Vec::new();
        for c in &comps {
            roots.push(root(&mut self, c)?);
        }
        for &x in roots.iter().skip(1) {
            self.edges.push((roots[0], x));
        }
        let td = TreeDecomposition {
            nodes: std::mem::take(&mut self.nodes),
            tree_edges: std::mem::take(&mut self.edges),
        };
        if let Some(v) = validate_tree_decomposition(self.graph, &td).first() {
            return Err(Error::violation(
                "builder output is a tree decomposition",
                v.to_string(),
            ));
        }
        Ok((td, self))
    }
}

pub(crate) fn sorted_union(a: &[usize], b: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().copied().chain(b).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `a` followed by the balls of `b` not already in `a`.
pub(crate) fn merge_balls(a: &[Ball], b: &[Ball]) -> Vec<Ball> {
    let mut out = a.to_vec();
    for x in b {
        if !out.contains(x) {
            out.push(*x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!((alpha(1), alpha(2), alpha(3), alpha(4)), (3, 4, 5, 5));
        assert_eq!(gamma(1), 0);
        assert_eq!(gamma(2), 8000);
        assert_eq!(gamma(4), 64000);
        // 18000 * log2(3) = 28529.325...
        assert_eq!(gamma(3), 28529);
    }

    #[test]
    fn round_sets() {
        let b = RoundBallSet::new(2, vec![Ball::new(0, 2), Ball::new(1, 4)]).unwrap();
        assert_eq!(b.potential(), BigUint::from(6u32));
        assert!(RoundBallSet::new(2, vec![Ball::new(0, 3)]).is_err());
        assert!(RoundBallSet::new(2, vec![Ball::new(0, 0)]).is_err());
    }
}
