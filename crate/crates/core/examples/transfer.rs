//! Separators of the host carried over to its distance graphs.

use coarse_tw::budget::Budget;
use coarse_tw::distance_graph::build_distance_graph;
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::separator::{OracleMode, WeightFn};
use coarse_tw::transforms::{separator_transfer_unweighted, separator_transfer_weighted};

fn main() -> coarse_tw::Result<()> {
    let budget = Budget::from_env();
    let g = generate(&FamilySpec::Grid { rows: 6, cols: 6 })?;

    let dg = build_distance_graph(&g, 1, 3, true, None)?;
    let mu = WeightFn::uniform(dg.h.n());
    let t = separator_transfer_weighted(&g, &dg, &mu, 2, OracleMode::Exact, Some(2), &budget)?;
    println!(
        "weighted: host balls {:?} -> X_H = {:?} (bound {:?})",
        t.host_witness.balls, t.separator, t.size_bound
    );

    let dg = build_distance_graph(&g, 1, 4, false, None)?;
    let mu = WeightFn::uniform(dg.h.n());
    let t = separator_transfer_unweighted(&g, &dg, &mu, 2, OracleMode::Exact, &budget)?;
    println!("unweighted: radius-1 balls {:?} in H", t.witness.balls);
    Ok(())
}
