use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use super::{
    sha256_hex, Algo, Chain, CheckArgs, CoarsenArgs, DecomposeArgs, DistgraphArgs, GenArgs, LiftArgs, Outcome,
    PipelineArgs, SeparatorArgs, TransferArgs, Variant,
};
use crate::budget::Budget;
use crate::builders::{cover_bounds, decompose_round, decompose_simple, BoundCheck, BuilderParams, Built};
use crate::decomposition::{
    balanced_bag, coverability_stats, layered_tree_partition, tree_partition_to_tree_decomposition,
    validate_tree_decomposition, validate_tree_partition, LayerShape, TreeDecomposition, TreePartition,
};
use crate::distance_graph::{build_distance_graph, check_degree_bound, check_quasi_isometry, DistanceGraph};
use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::graph::io::{parse_graph, parse_weighted_graph, write_graph_text};
use crate::graph::{estimate_doubling_dimension, DistanceMatrix, DoublingScales, Graph};
use crate::rational::{self, Rational};
use crate::separator::{bsn_over_indicators, find_separator, is_balanced_separator, WeightFn};
use crate::transforms::{
    coarsen_tree_partition, lift_decomposition, separator_transfer_unweighted, separator_transfer_weighted,
    CoarseningParams,
};

/// Largest `k` tried when a pipeline computes bsn itself.
const BSN_K_MAX: usize = 8;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn check(name: &str, observed: impl ToString, bound: impl ToString, holds: bool) -> BoundCheck {
    BoundCheck::new(name, observed, bound, holds)
}

fn zero_violations<T: std::fmt::Display>(name: &str, violations: &[T]) -> BoundCheck {
    let observed = match violations.first() {
        None => "0".to_string(),
        Some(v) => format!("{} (first: {v})", violations.len()),
    };
    check(name, observed, 0, violations.is_empty())
}

/// A graph file, a shorthand such as `C16`, or a JSON family spec.
fn load_graph(spec: &str, o: &mut Outcome) -> Result<Graph> {
    let path = Path::new(spec);
    let g = if path.is_file() {
        parse_graph(&fs::read_to_string(path)?)?
    } else if let Some(family) = FamilySpec::from_shorthand(spec) {
        generate(&family)?
    } else if spec.trim_start().starts_with('{') {
        generate(&serde_json::from_str::<FamilySpec>(spec)?)?
    } else {
        return Err(Error::input(format!(
            "{spec:?} is neither a graph file nor a graph family"
        )));
    };
    o.inputs.insert("graph".into(), sha256_hex(&serde_json::to_vec(&g)?));
    Ok(g)
}

fn read_input(path: &Path, name: &str, o: &mut Outcome) -> Result<String> {
    let text = fs::read_to_string(path)?;
    o.inputs.insert(name.into(), sha256_hex(text.as_bytes()));
    Ok(text)
}

fn read_json<T: DeserializeOwned>(path: &Path, name: &str, o: &mut Outcome) -> Result<T> {
    Ok(serde_json::from_str(&read_input(path, name, o)?)?)
}

fn read_distance_graph(path: &Path, graph: &Graph, o: &mut Outcome) -> Result<DistanceGraph> {
    let dg: DistanceGraph = read_json(path, "dg", o)?;
    dg.validate(graph)?;
    Ok(dg)
}

fn weights(path: Option<&Path>, n: usize, o: &mut Outcome) -> Result<WeightFn> {
    match path {
        Some(p) => read_json(p, "weights", o),
        None => Ok(WeightFn::uniform(n)),
    }
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(())
}

/// The serialized object inline, or a note of where it was written.
fn inline_or_written<T: Serialize>(path: Option<&Path>, v: &T) -> Result<Value> {
    match path {
        Some(p) => {
            write_json(p, v)?;
            Ok(json!({ "written": p.display().to_string() }))
        }
        None => Ok(to_value(v)),
    }
}

fn parse_rational(s: Option<&str>, fallback: Option<Rational>, name: &str) -> Result<Rational> {
    match (s, fallback) {
        (Some(s), _) => rational::parse(s),
        (None, Some(v)) => Ok(v),
        (None, None) => Err(Error::input(format!(
            "--{name} is required unless a weighted distance graph is given"
        ))),
    }
}

pub(super) fn gen(a: &GenArgs) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.spec, &mut o)?;
    let graph = match (&a.output, a.edge_list) {
        (Some(p), true) => {
            fs::write(p, write_graph_text(&g))?;
            json!({ "written": p.display().to_string() })
        }
        (Some(p), false) => inline_or_written(Some(p), &g)?,
        (None, true) => Value::String(write_graph_text(&g)),
        (None, false) => to_value(&g),
    };
    o.result = json!({ "n": g.n(), "m": g.num_edges(), "max_degree": g.max_degree(), "graph": graph });
    Ok(o)
}

pub(super) fn separator(a: &SeparatorArgs, budget: &Budget) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    if let Some(k_max) = a.bsn {
        let value = bsn_over_indicators(&g, a.r, k_max, budget)?;
        o.checks.push(check(
            "bsn_found",
            value.map_or("none".into(), |v| v.to_string()),
            format!("at most {k_max}"),
            value.is_some(),
        ));
        o.result = json!({ "r": a.r, "k_max": k_max, "bsn": value });
        return Ok(o);
    }
    let mu = weights(a.weights.as_deref(), g.n(), &mut o)?;
    let found = find_separator(&g, &mu, a.k, a.r, a.oracle.into(), budget)?;
    match &found {
        Some(w) => {
            let balanced = is_balanced_separator(&g, &mu, &w.union)?;
            o.checks.push(check(
                "balanced",
                rational::format(&w.heaviest),
                format!("half of {}", rational::format(&w.total)),
                balanced,
            ));
        }
        None => o.checks.push(check(
            "separator_found",
            "none",
            format!("{} balls of radius {}", a.k, a.r),
            false,
        )),
    }
    o.result = json!({ "k": a.k, "r": a.r, "witness": found });
    Ok(o)
}

fn build(graph: &Graph, algo: Algo, params: &BuilderParams) -> Result<Built> {
    match algo {
        Algo::Simple => decompose_simple(graph, params),
        Algo::Round => decompose_round(graph, params),
    }
}

pub(super) fn decompose(a: &DecomposeArgs, budget: &Budget) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    let params = BuilderParams {
        gamma_cap: a.gamma_cap,
        oracle: a.oracle.into(),
        recursion_limit: a.depth_limit,
        budget: *budget,
        ..BuilderParams::new(a.k, a.r)
    };
    let built = build(&g, a.algo, &params)?;
    let violations = validate_tree_decomposition(&g, &built.td);
    o.checks.push(zero_violations("valid", &violations));
    o.checks.extend(built.report.checks.iter().cloned());
    if let Some(p) = &a.dot {
        fs::write(p, built.td.to_dot())?;
    }
    if let Some(p) = &a.stats {
        let stats = coverability_stats(&g, &built.td, a.r, built.report.max_cover_size.max(1), budget)?;
        write_json(p, &stats)?;
    }
    o.result = json!({
        "width": built.td.width(),
        "report": built.report,
        "td": inline_or_written(a.output.as_deref(), &built.td)?,
    });
    Ok(o)
}

/// Radius of the graph, the least eccentricity, at least 1.
fn graph_radius(g: &Graph) -> u64 {
    let dm = DistanceMatrix::new(g);
    (0..g.n()).map(|u| dm.eccentricity(u)).min().unwrap_or(1).max(1)
}

pub(super) fn distgraph(a: &DistgraphArgs, budget: &Budget) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    let weighted = !a.unweighted;
    let sigma = a.sigma.unwrap_or(if weighted { 3 } else { 4 });
    let dg = build_distance_graph(&g, a.r, sigma, weighted, a.independent.as_deref())?;
    let cert = check_quasi_isometry(&g, &dg)?;
    o.checks.push(check(
        "distortion",
        format!("{} pairs", cert.pairs_checked),
        "no violations",
        true,
    ));
    let estimate = if a.estimate_m {
        Some(estimate_doubling_dimension(
            &g,
            graph_radius(&g),
            DoublingScales::Real,
            budget,
        )?)
    } else {
        None
    };
    let m = a.m.or(estimate.as_ref().map(|e| e.m));
    let degree = m.map(|m| check_degree_bound(&g, &dg, m));
    if let Some(d) = &degree {
        o.checks.push(check(
            "degree",
            d.max_degree,
            format!("below 2^{}", d.bound_exponent),
            d.holds,
        ));
    }
    o.result = json!({
        "h_vertices": dg.h.n(),
        "h_edges": dg.h.num_edges(),
        "certificate": cert,
        "doubling": estimate,
        "degree": degree,
        "dg": inline_or_written(a.output.as_deref(), &dg)?,
    });
    Ok(o)
}

pub(super) fn transfer(a: &TransferArgs, budget: &Budget) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    let dg = read_distance_graph(&a.dg, &g, &mut o)?;
    let mu = weights(a.weights.as_deref(), dg.h.n(), &mut o)?;
    o.result = match a.variant {
        Variant::Weighted => {
            let t = separator_transfer_weighted(&g, &dg, &mu, a.k, a.oracle.into(), a.m, budget)?;
            o.checks.push(check("balanced", "yes", "balanced in H", true));
            if let Some(bound) = t.size_bound {
                o.checks
                    .push(check("size", t.separator.len(), format!("k 2^(6m) = {bound}"), true));
            }
            to_value(&t)
        }
        Variant::Unweighted => {
            let t = separator_transfer_unweighted(&g, &dg, &mu, a.k, a.oracle.into(), budget)?;
            o.checks.push(check("balanced", "yes", "balanced in H", true));
            o.checks.push(check(
                "balls",
                t.witness.balls.len(),
                format!("d = {}", a.k),
                t.witness.balls.len() <= a.k,
            ));
            to_value(&t)
        }
    };
    Ok(o)
}

pub(super) fn coarsen(a: &CoarsenArgs) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    let (h, phi, defaults) = match (&a.dg, &a.h, &a.phi) {
        (Some(p), _, _) => {
            let dg = read_distance_graph(p, &g, &mut o)?;
            let phi: Vec<usize> = (0..g.n()).map(|u| dg.phi_h(u)).collect();
            let s = rational::int(dg.sigma as i64);
            (dg.weighted_h(), phi, dg.weighted.then_some((s, dg.r)))
        }
        (None, Some(hp), Some(pp)) => {
            let h = parse_weighted_graph(&read_input(hp, "h", &mut o)?)?;
            let phi: Vec<usize> = read_json(pp, "phi", &mut o)?;
            (h, phi, None)
        }
        _ => return Err(Error::input("coarsen needs --dg, or both --h and --phi")),
    };
    let tp_h = match &a.tp {
        Some(p) => TreePartition::from_json(&read_input(p, "tp", &mut o)?)?,
        None => layered_tree_partition(&h.skeleton(), a.layered.into())?,
    };
    let fallback = defaults.map(|(s, _)| s);
    let params = CoarseningParams::new(
        parse_rational(a.alpha.as_deref(), fallback, "alpha")?,
        parse_rational(a.beta.as_deref(), fallback, "beta")?,
        parse_rational(a.gamma.as_deref(), fallback, "gamma")?,
        a.r.or(defaults.map(|(_, r)| r))
            .ok_or_else(|| Error::input("-r is required"))?,
    )?;
    let c = coarsen_tree_partition(&g, &h, &phi, &tp_h, &params, a.rule.into())?;
    o.checks.push(check(
        "partition",
        c.clusters.levels.len(),
        "clusters partition the tree",
        true,
    ));
    o.checks.push(check(
        "farness",
        format!("{} pairs", c.report.farness_pairs),
        "all more than p apart",
        true,
    ));
    o.checks.push(check("valid", 0, 0, true));
    o.checks.extend(c.report.checks.iter().cloned());
    if let Some(p) = &a.dot {
        fs::write(p, c.tp.to_dot())?;
    }
    o.result = json!({
        "params": params,
        "report": c.report,
        "clusters": c.clusters,
        "tp": inline_or_written(a.output.as_deref(), &c.tp)?,
    });
    Ok(o)
}

pub(super) fn lift(a: &LiftArgs) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    let dg = read_distance_graph(&a.dg, &g, &mut o)?;
    let td_h = TreeDecomposition::from_json(&read_input(&a.td, "td", &mut o)?)?;
    let lifted = lift_decomposition(&g, &dg, &td_h)?;
    o.checks.push(check("valid", 0, 0, true));
    o.checks.push(check(
        "radius",
        lifted.radius,
        format!("(4s + 1) r with s = {}", lifted.s),
        true,
    ));
    o.result = json!({
        "s": lifted.s,
        "radius": lifted.radius,
        "td": inline_or_written(a.output.as_deref(), &lifted.td)?,
    });
    Ok(o)
}

pub(super) fn check_cmd(a: &CheckArgs) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    if let Some(p) = &a.td {
        let td = TreeDecomposition::from_json(&read_input(p, "td", &mut o)?)?;
        let violations = validate_tree_decomposition(&g, &td);
        o.checks.push(zero_violations("valid", &violations));
        if let Some(algo) = a.bound {
            o.checks
                .extend(cover_bounds(algo.into(), g.n(), a.k, a.r, a.gamma_cap, &td));
        }
        o.result = json!({ "kind": "tree_decomposition", "nodes": td.nodes.len(), "width": td.width(), "violations": violations });
    } else if let Some(p) = &a.tp {
        let tp = TreePartition::from_json(&read_input(p, "tp", &mut o)?)?;
        let violations = validate_tree_partition(&g, &tp);
        o.checks.push(zero_violations("valid", &violations));
        o.result = json!({
            "kind": "tree_partition",
            "nodes": tp.nodes.len(),
            "width": tp.width(),
            "spread": tp.spread,
            "violations": violations,
        });
    }
    Ok(o)
}

fn bsn_or_given(k: Option<usize>, g: &Graph, r: u64, budget: &Budget) -> Result<usize> {
    match k {
        Some(k) => Ok(k),
        None => bsn_over_indicators(g, r, BSN_K_MAX, budget)?
            .ok_or_else(|| Error::input(format!("bsn exceeds {BSN_K_MAX}; pass -k"))),
    }
}

pub(super) fn pipeline(a: &PipelineArgs, budget: &Budget) -> Result<Outcome> {
    let mut o = Outcome::default();
    let g = load_graph(&a.graph, &mut o)?;
    let params = |k: usize, r: u64| BuilderParams {
        budget: *budget,
        ..BuilderParams::new(k, r)
    };
    o.result = match a.chain {
        Chain::Round => {
            let k = bsn_or_given(a.k, &g, a.r, budget)?;
            let dg = build_distance_graph(&g, a.r, 3, true, None)?;
            let cert = check_quasi_isometry(&g, &dg)?;
            o.checks.push(check(
                "distortion",
                format!("{} pairs", cert.pairs_checked),
                "no violations",
                true,
            ));
            let built = decompose_round(&g, &params(k, a.r))?;
            o.checks
                .push(zero_violations("valid", &validate_tree_decomposition(&g, &built.td)));
            o.checks.extend(built.report.checks.iter().cloned());
            json!({ "k": k, "h_vertices": dg.h.n(), "report": built.report })
        }
        Chain::Bag => {
            let k = bsn_or_given(a.k, &g, a.r, budget)?;
            let built = decompose_simple(&g, &params(k, a.r))?;
            o.checks
                .push(zero_violations("valid", &validate_tree_decomposition(&g, &built.td)));
            let mu = WeightFn::uniform(g.n());
            let node = balanced_bag(&g, &built.td, &mu)?;
            let bag = &built.td.nodes[node].bag;
            o.checks.push(check(
                "balanced_bag",
                node,
                "balanced separator",
                is_balanced_separator(&g, &mu, bag)?,
            ));
            let mut layered = Value::Null;
            if g.n() > 0 && crate::graph::components(&g, &[])?.len() == 1 {
                let tp = layered_tree_partition(&g, LayerShape::Branching)?;
                let td = tree_partition_to_tree_decomposition(&g, &tp)?;
                let node = balanced_bag(&g, &td, &mu)?;
                let holds = is_balanced_separator(&g, &mu, &td.nodes[node].bag)?;
                o.checks
                    .push(check("layered_balanced_bag", node, "balanced separator", holds));
                layered = json!({ "nodes": td.nodes.len(), "bag": node });
            }
            json!({ "k": k, "nodes": built.td.nodes.len(), "bag": node, "bag_vertices": bag, "layered": layered })
        }
        Chain::Coarsen => {
            let dg = build_distance_graph(&g, a.r, 3, true, None)?;
            check_quasi_isometry(&g, &dg)?;
            let tp_h = layered_tree_partition(&dg.h, a.layered.into())?;
            let phi: Vec<usize> = (0..g.n()).map(|u| dg.phi_h(u)).collect();
            let three = rational::int(3);
            let cp = CoarseningParams::new(three, three, three, a.r)?;
            let c = coarsen_tree_partition(&g, &dg.weighted_h(), &phi, &tp_h, &cp, a.rule.into())?;
            o.checks.push(check("valid", 0, 0, true));
            o.checks.extend(c.report.checks.iter().cloned());
            json!({ "h_vertices": dg.h.n(), "h_nodes": tp_h.nodes.len(), "nodes": c.tp.nodes.len(), "report": c.report })
        }
        Chain::Lift => {
            let dg = build_distance_graph(&g, a.r, 4, false, None)?;
            check_quasi_isometry(&g, &dg)?;
            let k = bsn_or_given(a.k, &dg.h, 1, budget)?;
            let built = decompose_simple(&dg.h, &params(k, 1))?;
            o.checks.extend(built.report.checks.iter().cloned());
            let lifted = lift_decomposition(&g, &dg, &built.td)?;
            o.checks.push(check("valid", 0, 0, true));
            o.checks.push(check(
                "radius",
                lifted.radius,
                format!("(4s + 1) r with s = {}", lifted.s),
                true,
            ));
            json!({ "k": k, "h_vertices": dg.h.n(), "nodes": lifted.td.nodes.len(), "radius": lifted.radius })
        }
    };
    Ok(o)
}
