//! Tree decompositions whose bags are covered by few balls.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --example balls_and_covers       # balls, covers, doubling estimate
//! cargo run --example separators             # ball separators and bsn
//! cargo run --example simple_decomposition   # covers of k(log n + 2) balls
//! cargo run --example round_decomposition    # round covers and the potential
//! cargo run --example balanced_bag           # the sink bag is a separator
//! cargo run --example distance_graph         # H(G, I, r, sigma) and its distortion
//! cargo run --example transfer               # separators moved into H
//! cargo run --example coarsening             # tree-partitions of spread r
//! cargo run --example lift                   # decompositions of H pulled back to G
//! ```

pub mod budget;
pub mod builders;
pub mod cli;
pub mod decomposition;
pub mod distance_graph;
pub mod error;
pub mod generators;
pub mod graph;
pub mod rational;
pub mod separator;
pub mod transforms;

pub use error::{Error, Result};
