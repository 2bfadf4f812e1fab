use coarse_tw::budget::Budget;
use coarse_tw::builders::{decompose_simple, BuilderParams};
use coarse_tw::distance_graph::build_distance_graph;
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::separator::bsn_over_indicators;
use coarse_tw::transforms::lift_decomposition;

fn main() -> coarse_tw::Result<()> {
    let g = generate(&FamilySpec::Grid { rows: 6, cols: 6 })?;
    let r = 1;
    let dg = build_distance_graph(&g, r, 4, false, None)?;
    let k = bsn_over_indicators(&dg.h, 1, 6, &Budget::from_env())?.expect("H is small");
    let built = decompose_simple(&dg.h, &BuilderParams::new(k, 1))?;
    let lifted = lift_decomposition(&g, &dg, &built.td)?;
    println!("H: {} vertices, k = {k}, {} bags", dg.h.n(), built.td.nodes.len());
    println!(
        "lifted covers use radius (4 * {} + 1) * {r} = {}",
        lifted.s, lifted.radius
    );
    for node in lifted.td.nodes.iter().take(3) {
        println!(
            "  bag {:?} covered by {:?}",
            node.bag,
            node.cover.as_deref().unwrap_or(&[])
        );
    }
    Ok(())
}
