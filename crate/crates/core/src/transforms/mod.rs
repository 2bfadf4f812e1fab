//! Moving separators and decompositions between a graph and a coarser
//! graph that is quasi-isometric to it.

mod coarsen;
mod lift;
mod transfer;

pub use coarsen::{
    coarsen_tree_partition, level_clusters, ClusterRule, Coarsened, CoarseningParams, CoarseningReport, LevelClusters,
};
pub use lift::{lift_decomposition, Lifted};
pub use transfer::{separator_transfer_unweighted, separator_transfer_weighted, UnweightedTransfer, WeightedTransfer};
