use coarse_tw::budget::Budget;
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::separator::{bsn_with_certificates, exact_treewidth, find_separator, OracleMode, WeightFn};

fn main() -> coarse_tw::Result<()> {
    let budget = Budget::from_env();
    let g = generate(&FamilySpec::Cycle { n: 16 })?;

    let w = find_separator(&g, &WeightFn::uniform(g.n()), 2, 1, OracleMode::Exact, &budget)?
        .expect("two radius-1 balls split a cycle");
    println!(
        "C16 separator balls {:?}, heaviest part {} of {}",
        w.balls, w.heaviest, w.total
    );

    let out = bsn_with_certificates(&g, 1, 4, &budget)?;
    println!("bsn(C16, r = 1) = {:?}", out.value);
    for (k, verdict) in &out.steps {
        println!("  k = {k}: {verdict:?}");
    }

    // Radius 0 turns balls into vertices; bsn then sandwiches treewidth.
    let small = generate(&FamilySpec::Grid { rows: 3, cols: 3 })?;
    let b = coarse_tw::separator::bsn_over_indicators(&small, 0, 9, &budget)?.unwrap();
    let tw = exact_treewidth(&small, &budget)?;
    println!(
        "3x3 grid: bsn at radius 0 = {b}, treewidth = {tw}, so {} <= {tw} <= {}",
        b - 1,
        3 * b
    );
    Ok(())
}
