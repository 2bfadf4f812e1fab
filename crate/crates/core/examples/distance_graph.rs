//! Coarsening a cycle into its distance graph and certifying the distortion.

use coarse_tw::distance_graph::{build_distance_graph, check_degree_bound, check_quasi_isometry};
use coarse_tw::generators::{generate, FamilySpec};

fn main() -> coarse_tw::Result<()> {
    let g = generate(&FamilySpec::Cycle { n: 12 })?;
    for (sigma, weighted) in [(3, true), (4, false)] {
        let dg = build_distance_graph(&g, 2, sigma, weighted, Some(&[0, 3, 6, 9]))?;
        let cert = check_quasi_isometry(&g, &dg)?;
        println!(
            "sigma {sigma}, weighted {weighted}: H has {} vertices and {} edges; {} pairs within ({}, {})",
            dg.h.n(),
            dg.h.num_edges(),
            cert.pairs_checked,
            cert.alpha,
            cert.beta
        );
        let deg = check_degree_bound(&g, &dg, 2);
        println!(
            "  max degree {} below 2^{}: {}",
            deg.max_degree, deg.bound_exponent, deg.holds
        );
    }
    let grid = generate(&FamilySpec::Grid { rows: 5, cols: 5 })?;
    let dg = build_distance_graph(&grid, 1, 3, true, None)?;
    println!("5x5 grid, r = 1: I = {:?}", dg.independent);
    println!("{}", serde_json::to_string(&dg)?);
    Ok(())
}
