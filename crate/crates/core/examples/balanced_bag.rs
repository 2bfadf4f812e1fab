use coarse_tw::decomposition::{
    balanced_bag, layered_tree_partition, tree_partition_to_tree_decomposition, validate_tree_decomposition, LayerShape,
};
use coarse_tw::generators::{generate, FamilySpec};
use coarse_tw::separator::{is_balanced_separator, WeightFn};

fn main() -> coarse_tw::Result<()> {
    let g = generate(&FamilySpec::BinaryTree { depth: 4 })?;
    let tp = layered_tree_partition(&g, LayerShape::Branching)?;
    let td = tree_partition_to_tree_decomposition(&g, &tp)?;
    assert!(validate_tree_decomposition(&g, &td).is_empty());
    println!("{} parts became {} bags", tp.nodes.len(), td.nodes.len());

    // Weight only the leaves of the left subtree.
    let leaves: Vec<usize> = (15..23).collect();
    for mu in [WeightFn::uniform(g.n()), WeightFn::indicator(g.n(), &leaves)] {
        let t = balanced_bag(&g, &td, &mu)?;
        let bag = &td.nodes[t].bag;
        println!(
            "sink bag {t} = {bag:?}, balanced: {}",
            is_balanced_separator(&g, &mu, bag)?
        );
    }
    Ok(())
}
