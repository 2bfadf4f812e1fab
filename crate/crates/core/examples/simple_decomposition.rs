use coarse_tw::budget::Budget;
use coarse_tw::builders::{decompose_simple, BuilderParams};
use coarse_tw::decomposition::validate_tree_decomposition;
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::separator::bsn_over_indicators;

fn main() -> coarse_tw::Result<()> {
    for spec in ["P8", "C16", "G4x4"] {
        let g = generate(&FamilySpec::from_shorthand(spec).unwrap())?;
        let k = bsn_over_indicators(&g, 1, 4, &Budget::from_env())?.expect("small k");
        let built = decompose_simple(&g, &BuilderParams::new(k, 1))?;
        assert!(validate_tree_decomposition(&g, &built.td).is_empty());
        println!(
            "{spec}: k = {k}, {} bags, width {}",
            built.td.nodes.len(),
            built.td.width()
        );
        for c in &built.report.checks {
            println!("  {:<10} {:>6}  bound {}", c.name, c.observed, c.bound);
        }
    }
    Ok(())
}
