use std::collections::HashMap;

use num_bigint::BigUint;

use super::{
    alpha, cover_bounds, merge_balls, sorted_union, Algorithm, BoundCheck, BuildReport, BuilderParams, Built, Ctx,
    RoundBallSet,
};
use crate::decomposition::potential;
use crate::error::{Error, Result};
use crate::graph::{ceil_log2, components_masked, Ball, Graph};

struct Consts {
    alpha: u32,
    cap: u64,
}

/// Merges crowded balls until no vertex is crowded, then drops every ball
/// whose vertex set lies inside another's. Uses `α` for `max(k, 2)`.
pub fn uncrowd(graph: &Graph, balls: &RoundBallSet, params: &BuilderParams) -> Result<RoundBallSet> {
    let k = params.k.max(2);
    let mut p = params.clone();
    p.r = balls.r;
    let mut ctx = Ctx::new(graph, k, &p);
    if let Some(b) = balls.balls.iter().find(|b| b.center >= graph.n()) {
        return Err(Error::InvalidVertex {
            vertex: b.center,
            n: graph.n(),
        });
    }
    let out = uncrowd_in(&mut ctx, &balls.balls, alpha(k))?;
    RoundBallSet::new(balls.r, out)
}

fn uncrowd_in(ctx: &mut Ctx, balls: &[Ball], alpha: u32) -> Result<Vec<Ball>> {
    let (r, n) = (ctx.r, ctx.n());
    let reach = alpha as u64 * r;
    let threshold = 1usize << alpha;
    let mut cur = balls.to_vec();
    loop {
        let mut levels: Vec<u64> = cur.iter().map(|b| b.radius / r).collect();
        levels.sort_unstable();
        levels.dedup();
        let mut hit = None;
        'scan: for &l in &levels {
            let group: Vec<usize> = (0..cur.len()).filter(|&i| cur[i].radius == l * r).collect();
            if group.len() < threshold {
                continue;
            }
            for x in 0..n {
                let near: Vec<usize> = group
                    .iter()
                    .copied()
                    .filter(|&i| ctx.dist(cur[i].center, x).is_some_and(|d| d <= reach))
                    .collect();
                if near.len() >= threshold {
                    hit = Some((l, x, near));
                    break 'scan;
                }
            }
        }
        let Some((l, x, near)) = hit else { break };
        let mut i = 0;
        cur.retain(|_| {
            i += 1;
            near.binary_search(&(i - 1)).is_err()
        });
        cur.push(Ball::new(x, (l + alpha as u64) * r));
        ctx.merges += 1;
    }

    cur.sort_unstable();
    let sets: Vec<_> = cur.iter().map(|&b| ctx.ball_set(b).clone()).collect();
    let kept: Vec<Ball> = (0..cur.len())
        .filter(|&i| !(0..cur.len()).any(|j| j != i && sets[i].is_subset(&sets[j]) && (sets[i] != sets[j] || j < i)))
        .map(|i| cur[i])
        .collect();

    let before = ctx.union(balls);
    if !before.is_subset(&ctx.union(&kept)) {
        return Err(Error::violation(
            "uncrowding keeps the union of the balls",
            format!("{balls:?}"),
        ));
    }
    if potential(&kept, r) > potential(balls, r) {
        return Err(Error::violation(
            "uncrowding does not raise the potential",
            format!("{balls:?}"),
        ));
    }
    Ok(kept)
}

/// Tree decomposition whose bags are covered by round ball sets of size at
/// most `Γ + 2k` and potential at most `4k(⌈log₂ n⌉ + 1)`, which keeps every
/// radius `R` within `2^(R/r) <= 12 k log₂ n`. Runs with `max(k, 2)`.
pub fn decompose_round(graph: &Graph, params: &BuilderParams) -> Result<Built> {
    params.check(graph)?;
    let k = params.k.max(2);
    let mut used = params.clone();
    used.k = k;
    let consts = Consts {
        alpha: used.alpha(),
        cap: used.cap(),
    };
    let ctx = Ctx::new(graph, k, &used);
    let (td, ctx) = ctx.assemble(|ctx, comp| frame(ctx, &consts, &[], comp, Vec::new(), 0))?;

    let (n, r) = (graph.n(), params.r);
    let covers = || td.nodes.iter().map(|x| x.cover.as_deref().unwrap_or(&[]));
    let max_cover_size = covers().map(<[Ball]>::len).max().unwrap_or(0);
    let max_radius = covers().flatten().map(|b| b.radius).max().unwrap_or(0);
    let max_potential = covers()
        .map(|c| potential(c, r).ok_or_else(|| Error::violation("covers are round", format!("{c:?}"))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max();
    let log_n = ceil_log2(n as u64) as usize;
    let mut checks = cover_bounds(Algorithm::Round, n, k, r, Some(consts.cap), &td);
    checks.push(BoundCheck::new(
        "depth",
        ctx.max_depth,
        format!("ceil(log2 n) + 1 = {}", log_n + 1),
        ctx.max_depth <= log_n + 1,
    ));
    let report = BuildReport {
        algorithm: Algorithm::Round,
        n,
        k: params.k,
        k_used: k,
        r,
        alpha: Some(consts.alpha),
        gamma_cap: Some(consts.cap),
        nodes: td.nodes.len(),
        max_depth: ctx.max_depth,
        max_cover_size,
        max_radius,
        max_potential,
        oracle_calls: ctx.oracle_calls,
        merges: ctx.merges,
        checks,
    };
    Ok(Built { td, report })
}

fn frame(ctx: &mut Ctx, c: &Consts, s: &[usize], u: &[usize], b: Vec<Ball>, depth: usize) -> Result<usize> {
    ctx.check_frame(s, u, &b, depth)?;
    let (n, r, k) = (ctx.n(), ctx.r, ctx.k);
    let reach = c.alpha as u64 * r;

    let b1 = uncrowd_in(ctx, &b, c.alpha)?;
    let crowd_cap = 2 * c.alpha as usize * (1usize << c.alpha);
    for x in 0..n {
        let near = b1
            .iter()
            .filter(|bl| ctx.dist(bl.center, x).is_some_and(|d| d <= reach))
            .count();
        if near > crowd_cap {
            return Err(Error::violation(
                "few uncrowded balls near any vertex",
                format!("{near} balls within {reach} of vertex {x}, limit {crowd_cap}"),
            ));
        }
    }
    let centers: Vec<usize> = b1.iter().map(|bl| bl.center).collect();
    let mut o = centers.clone();
    o.sort_unstable();
    o.dedup();
    if o.len() != centers.len() {
        return Err(Error::violation(
            "uncrowded balls have distinct centers",
            format!("{b1:?}"),
        ));
    }

    let du = ctx.separate(u, (depth, s, u), "the indicator of U")?;
    let dc = ctx.separate(&o, (depth, s, u), "the indicator of the ball centers")?;
    let mut d: Vec<Ball> = du.balls.iter().chain(&dc.balls).copied().collect();
    d.sort_unstable();
    d.dedup();
    let z = ctx.union(&d);
    let near_d: Vec<Ball> = b1
        .iter()
        .copied()
        .filter(|bl| {
            d.iter()
                .any(|dd| ctx.dist(dd.center, bl.center).is_some_and(|x| x <= reach))
        })
        .collect();

    let blocked: Vec<bool> = (0..n).map(|v| z.contains(v)).collect();
    let mut host = vec![usize::MAX; n];
    for (i, w) in components_masked(ctx.graph, &blocked).into_iter().enumerate() {
        w.into_iter().for_each(|v| host[v] = i);
    }
    let phi_b = potential(&b, r).unwrap_or_default();
    let phi_limit = &phi_b + BigUint::from(4 * k);

    let pieces = ctx.pieces(u, &z);
    let mut carried: HashMap<usize, Vec<Ball>> = HashMap::new();
    for a in &pieces {
        let w = host[a[0]];
        if carried.contains_key(&w) {
            continue;
        }
        let outside_max = b1
            .iter()
            .filter(|bl| !near_d.contains(bl) && host[bl.center] != w)
            .map(|bl| bl.radius)
            .max()
            .unwrap_or(0);
        let r_w = outside_max.max((c.alpha as u64 - 1) * r);
        let grown = r_w - (c.alpha as u64 - 2) * r;
        let mut bw: Vec<Ball> = near_d
            .iter()
            .copied()
            .chain(d.iter().map(|dd| Ball::new(dd.center, grown)))
            .chain(b1.iter().copied().filter(|bl| host[bl.center] == w))
            .collect();
        bw.sort_unstable();
        bw.dedup();
        if bw.len() as u64 > c.cap {
            return Err(Error::CapExceeded {
                frame: ctx.frame(depth, s, u),
                size: bw.len(),
                cap: c.cap,
            });
        }
        let phi_w = potential(&bw, r).expect("round");
        if phi_w > phi_limit {
            return Err(Error::violation(
                "carried cover potential grows by at most 4k",
                format!("{phi_w} > {phi_limit} at {}", ctx.frame(depth, s, u)),
            ));
        }
        carried.insert(w, bw);
    }

    let bag = sorted_union(s, u.iter().copied().filter(|&v| z.contains(v)));
    let id = ctx.push_node(bag, merge_balls(&b, &d));
    let in_u = {
        let mut m = vec![false; n];
        u.iter().for_each(|&v| m[v] = true);
        m
    };
    for a in pieces {
        let w = host[a[0]];
        let bw = carried[&w].clone();
        let s_a = sorted_union(
            &(0..n).filter(|&v| z.contains(v) && in_u[v]).collect::<Vec<_>>(),
            s.iter().copied().filter(|&v| z.contains(v) || host[v] == w),
        );
        let covered = ctx.union(&bw);
        if let Some(v) = s_a.iter().find(|&&v| !covered.contains(v)) {
            return Err(Error::violation(
                "carried cover covers the child separator",
                format!("vertex {v} at {}", ctx.frame(depth, s, u)),
            ));
        }
        if 2 * a.len() > u.len() {
            return Err(Error::violation(
                "separator halves U",
                format!("piece of size {} from |U| = {} at depth {depth}", a.len(), u.len()),
            ));
        }
        let child = frame(ctx, c, &s_a, &a, bw, depth + 1)?;
        ctx.edges.push((id, child));
    }
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_tree_decomposition;
    use crate::generators::{generate, FamilySpec};

    fn params(k: usize) -> BuilderParams {
        BuilderParams::new(k, 1)
    }

    #[test]
    fn sixteen_balls_merge_into_one() {
        let g = generate(&FamilySpec::Path { n: 12 }).unwrap();
        let b = RoundBallSet::new(1, vec![Ball::new(0, 1); 16]).unwrap();
        assert_eq!(b.potential(), BigUint::from(32u32));
        let out = uncrowd(&g, &b, &params(2)).unwrap();
        assert_eq!(out.balls, vec![Ball::new(0, 5)]);
        assert_eq!(out.potential(), BigUint::from(32u32));
        // The merged ball sits at the lowest crowded vertex, which need not
        // be the common center.
        let b = RoundBallSet::new(1, vec![Ball::new(5, 1); 16]).unwrap();
        assert_eq!(uncrowd(&g, &b, &params(2)).unwrap().balls, vec![Ball::new(1, 5)]);
    }

    #[test]
    fn containment_pruning() {
        let g = generate(&FamilySpec::Path { n: 12 }).unwrap();
        let b = RoundBallSet::new(1, vec![Ball::new(3, 1), Ball::new(3, 1), Ball::new(8, 1)]).unwrap();
        assert_eq!(
            uncrowd(&g, &b, &params(2)).unwrap().balls,
            vec![Ball::new(3, 1), Ball::new(8, 1)]
        );
        // On a path of 3 vertices, Ball(1, 1) is everything, so it swallows
        // Ball(0, 1) although neither radius dominates the other's center.
        let p3 = generate(&FamilySpec::Path { n: 3 }).unwrap();
        let b = RoundBallSet::new(1, vec![Ball::new(0, 1), Ball::new(1, 1)]).unwrap();
        assert_eq!(uncrowd(&p3, &b, &params(2)).unwrap().balls, vec![Ball::new(1, 1)]);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1);
        let built = decompose_round(&g, &params(2)).unwrap();
        assert_eq!(built.td.nodes.len(), 1);
        assert_eq!(built.td.nodes[0].bag, vec![0]);
        assert_eq!(built.td.nodes[0].cover, Some(vec![Ball::new(0, 1)]));
        assert_eq!(built.report.max_potential, Some(BigUint::from(2u32)));
    }

    #[test]
    fn examples_meet_the_bounds() {
        for spec in [FamilySpec::Cycle { n: 16 }, FamilySpec::Grid { rows: 4, cols: 4 }] {
            let g = generate(&spec).unwrap();
            let built = decompose_round(&g, &params(2)).unwrap();
            assert!(validate_tree_decomposition(&g, &built.td).is_empty());
            assert!(built.report.all_hold(), "{spec:?}: {:?}", built.report.checks);
            assert!(built.report.max_radius <= 6);
            assert!(built.report.max_potential.clone().unwrap() <= BigUint::from(40u32));
        }
    }

    #[test]
    fn small_cap_is_reported() {
        let g = generate(&FamilySpec::Grid { rows: 5, cols: 5 }).unwrap();
        let mut p = params(2);
        p.gamma_cap = Some(1);
        assert!(matches!(
            decompose_round(&g, &p),
            Err(Error::CapExceeded { cap: 1, .. })
        ));
    }
}
