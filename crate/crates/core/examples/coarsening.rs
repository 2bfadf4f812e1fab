//! Distance graph, layered tree-partition of it, and the coarsened
//! tree-partition of the original graph with spread `r`.

use coarse_tw::decomposition::{layered_tree_partition, validate_tree_partition, LayerShape};
use coarse_tw::distance_graph::build_distance_graph;
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::rational::int;
use coarse_tw::transforms::{coarsen_tree_partition, ClusterRule, CoarseningParams};

fn main() -> coarse_tw::Result<()> {
    let g = generate(&FamilySpec::Grid { rows: 5, cols: 12 })?;
    let r = 1;
    let dg = build_distance_graph(&g, r, 3, true, None)?;
    let tp_h = layered_tree_partition(&dg.h, LayerShape::Path)?;
    let phi: Vec<usize> = (0..g.n()).map(|u| dg.phi_h(u)).collect();
    let params = CoarseningParams::new(int(3), int(3), int(3), r)?;
    println!("p = {}", params.p());

    let c = coarsen_tree_partition(&g, &dg.weighted_h(), &phi, &tp_h, &params, ClusterRule::Verbatim)?;
    assert!(validate_tree_partition(&g, &c.tp).is_empty());
    println!(
        "H: {} vertices in {} parts; G: {} parts of spread {}",
        dg.h.n(),
        tp_h.nodes.len(),
        c.tp.nodes.len(),
        c.tp.spread
    );
    println!("clusters {:?}", c.clusters.clusters);
    for check in &c.report.checks {
        println!("  {:<14} {:>4}  bound {}", check.name, check.observed, check.bound);
    }
    Ok(())
}
