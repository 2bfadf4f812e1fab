//! The round builder keeps carried covers small by merging crowded balls.

use coarse_tw::builders::{decompose_round, uncrowd, BuilderParams, RoundBallSet};
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::graph::Ball;

fn main() -> coarse_tw::Result<()> {
    let p = generate(&FamilySpec::Path { n: 12 })?;
    let crowded = RoundBallSet::new(1, vec![Ball::new(0, 1); 16])?;
    let merged = uncrowd(&p, &crowded, &BuilderParams::new(1, 1))?;
    println!(
        "16 copies of Ball(0, 1), potential {} -> {:?}, potential {}",
        crowded.potential(),
        merged.balls,
        merged.potential()
    );

    for spec in [FamilySpec::Cycle { n: 16 }, FamilySpec::Grid { rows: 5, cols: 5 }] {
        let g = generate(&spec)?;
        let built = decompose_round(&g, &BuilderParams::new(2, 1))?;
        built.report.ensure()?;
        println!(
            "{spec:?}: {} bags, largest cover {}, largest radius {}, potential {}",
            built.report.nodes,
            built.report.max_cover_size,
            built.report.max_radius,
            built
                .report
                .max_potential
                .as_ref()
                .map_or("-".into(), |p| p.to_string())
        );
    }
    Ok(())
}
