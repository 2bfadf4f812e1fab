//! Balls, covers and a doubling-dimension estimate on a small grid.

use coarse_tw::budget::Budget;
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::graph::{ball, estimate_doubling_dimension, is_coverable, min_cover_size, CoverMode, DoublingScales};

fn main() -> coarse_tw::Result<()> {
    let g = generate(&FamilySpec::Grid { rows: 5, cols: 5 })?;
    let budget = Budget::from_env();

    println!("Ball(12, 1) = {:?}", ball(&g, 12, 1)?);
    println!("Ball(12, 2) has {} vertices", ball(&g, 12, 2)?.len());

    let everything: Vec<usize> = (0..g.n()).collect();
    for r in 1..=3 {
        let min = min_cover_size(&g, &everything, r, &budget)?;
        println!(
            "radius {r}: {} balls cover the grid (minimal: {})",
            min.size(),
            min.exact
        );
    }

    let corner_rows: Vec<usize> = vec![0, 1, 2, 3, 4, 20, 21, 22, 23, 24];
    match is_coverable(&g, &corner_rows, 2, 2, CoverMode::Exact, &budget)? {
        Some(c) => println!("top and bottom rows: 2 balls of radius 2 suffice, e.g. {:?}", c.balls),
        None => println!("top and bottom rows need more than 2 balls of radius 2"),
    }

    let est = estimate_doubling_dimension(&g, 4, DoublingScales::Real, &budget)?;
    println!("doubling estimate m = {} (worst {:?})", est.m, est.worst);
    Ok(())
}
