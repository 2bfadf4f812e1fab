use super::{cover_bounds, merge_balls, sorted_union, Algorithm, BoundCheck, BuildReport, BuilderParams, Built, Ctx};
use crate::error::{Error, Result};
use crate::graph::{ceil_log2, Ball, Graph};

/// Tree decomposition whose every bag is covered by at most
/// `k(⌈log₂ n⌉ + 2)` balls of radius exactly `r`, provided the oracle finds a
/// `k`-ball balanced separator for every indicator it is asked about.
pub fn decompose_simple(graph: &Graph, params: &BuilderParams) -> Result<Built> {
    params.check(graph)?;
    let ctx = Ctx::new(graph, params.k, params);
    let (td, ctx) = ctx.assemble(|ctx, comp| frame(ctx, &[], comp, Vec::new(), 0))?;

    let n = graph.n();
    let max_cover_size = td
        .nodes
        .iter()
        .map(|x| x.cover.as_ref().map_or(0, Vec::len))
        .max()
        .unwrap_or(0);
    let log_n = ceil_log2(n as u64) as usize;
    let mut checks = cover_bounds(Algorithm::Simple, n, params.k, params.r, None, &td);
    checks.push(BoundCheck::new(
        "depth",
        ctx.max_depth,
        format!("ceil(log2 n) + 1 = {}", log_n + 1),
        ctx.max_depth <= log_n + 1,
    ));
    let report = BuildReport {
        algorithm: Algorithm::Simple,
        n,
        k: params.k,
        k_used: params.k,
        r: params.r,
        alpha: None,
        gamma_cap: None,
        nodes: td.nodes.len(),
        max_depth: ctx.max_depth,
        max_cover_size,
        max_radius: if max_cover_size > 0 { params.r } else { 0 },
        max_potential: None,
        oracle_calls: ctx.oracle_calls,
        merges: 0,
        checks,
    };
    Ok(Built { td, report })
}

/// Partial decomposition of `(s, u)`; returns the node whose bag holds `s`.
fn frame(ctx: &mut Ctx, s: &[usize], u: &[usize], cover: Vec<Ball>, depth: usize) -> Result<usize> {
    ctx.check_frame(s, u, &cover, depth)?;
    let sep = ctx.separate(u, (depth, s, u), "the indicator of U")?;
    let z = ctx.union(&sep.balls);
    let bag = sorted_union(s, u.iter().copied().filter(|&v| z.contains(v)));
    let cover = merge_balls(&cover, &sep.balls);
    let id = ctx.push_node(bag.clone(), cover.clone());
    for a in ctx.pieces(u, &z) {
        if 2 * a.len() > u.len() {
            return Err(Error::violation(
                "separator halves U",
                format!("piece of size {} from |U| = {} at depth {depth}", a.len(), u.len()),
            ));
        }
        let child = frame(ctx, &bag, &a, cover.clone(), depth + 1)?;
        ctx.edges.push((id, child));
    }
    Ok(id)
}
