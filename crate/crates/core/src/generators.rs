//! Deterministic graph families for tests, examples and the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// Row-major: vertex `i * cols + j` sits at row `i`, column `j`.
    Grid {
        rows: usize,
        cols: usize,
    },
    /// Path `0..n` plus vertex `n` adjacent to all of it.
    PathUniversal {
        n: usize,
    },
    /// Complete binary tree in heap order; `depth` 0 is a single vertex.
    BinaryTree {
        depth: u32,
    },
    Complete {
        n: usize,
    },
    /// `n` seeded points on a `side x side` integer grid, joined when their
    /// L1 distance is at most `threshold`.
    RandomGeometric {
        n: usize,
        side: u64,
        threshold: u64,
        seed: u64,
    },
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
}

impl FamilySpec {
    /// Short names: `P8` path, `C16` cycle, `K4` complete, `G4x5` grid,
    /// `U6` path plus universal vertex, `T3` binary tree of depth 3.
    pub fn from_shorthand(s: &str) -> Option<Self> {
        let (head, rest) = s.split_at(s.char_indices().nth(1)?.0);
        let num = |t: &str| t.parse::<usize>().ok();
        Some(match head {
            "P" => FamilySpec::Path { n: num(rest)? },
            "C" => FamilySpec::Cycle { n: num(rest)? },
            "K" => FamilySpec::Complete { n: num(rest)? },
            "U" => FamilySpec::PathUniversal { n: num(rest)? },
            "T" => FamilySpec::BinaryTree {
                depth: rest.parse().ok()?,
            },
            "G" => {
                let (a, b) = rest.split_once('x')?;
                FamilySpec::Grid {
                    rows: num(a)?,
                    cols: num(b)?,
                }
            }
            _ => return None,
        })
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::input(format!("invalid family parameters: {what}")))
        }
    };
    match *spec {
        FamilySpec::Path { n } => {
            need(n >= 1, "path needs n >= 1")?;
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        FamilySpec::Cycle { n } => {
            need(n >= 3, "cycle needs n >= 3")?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        FamilySpec::Grid { rows, cols } => {
            need(rows >= 1 && cols >= 1, "grid needs positive sides")?;
            let id = |i: usize, j: usize| i * cols + j;
            let mut edges = Vec::new();
            for i in 0..rows {
                for j in 0..cols {
                    if j + 1 < cols {
                        edges.push((id(i, j), id(i, j + 1)));
                    }
                    if i + 1 < rows {
                        edges.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            Graph::from_edges(rows * cols, edges)
        }
        FamilySpec::PathUniversal { n } => {
            need(n >= 1, "path_universal needs n >= 1")?;
            let path = (1..n).map(|i| (i - 1, i));
            Graph::from_edges(n + 1, path.chain((0..n).map(|i| (i, n))))
        }
        FamilySpec::BinaryTree { depth } => {
            need(depth < 24, "binary tree depth must be below 24")?;
            let n = (1usize << (depth + 1)) - 1;
            Graph::from_edges(n, (1..n).map(|i| ((i - 1) / 2, i)))
        }
        FamilySpec::Complete { n } => {
            need(n >= 1, "complete graph needs n >= 1")?;
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        FamilySpec::RandomGeometric {
            n,
            side,
            threshold,
            seed,
        } => {
            need(n >= 1 && side >= 1, "random_geometric needs n >= 1 and side >= 1")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<(u64, u64)> = (0..n)
                .map(|_| (rng.gen_range(0..side), rng.gen_range(0..side)))
                .collect();
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if pts[u].0.abs_diff(pts[v].0) + pts[u].1.abs_diff(pts[v].1) <= threshold {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        FamilySpec::Gnp { n, p, seed } => {
            need(n >= 1 && (0.0..=1.0).contains(&p), "gnp needs n >= 1 and p in [0, 1]")?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let g = generate(&FamilySpec::Grid { rows: 3, cols: 3 }).unwrap();
        assert_eq!((g.n(), g.num_edges()), (9, 12));
        let g = generate(&FamilySpec::PathUniversal { n: 6 }).unwrap();
        assert_eq!((g.n(), g.num_edges()), (7, 11));
        let g = generate(&FamilySpec::Cycle { n: 12 }).unwrap();
        assert_eq!((g.n(), g.num_edges()), (12, 12));
        let g = generate(&FamilySpec::BinaryTree { depth: 3 }).unwrap();
        assert_eq!((g.n(), g.num_edges()), (15, 14));
    }

    #[test]
    fn seeded_families_repeat() {
        let spec = FamilySpec::RandomGeometric {
            n: 30,
            side: 10,
            threshold: 3,
            seed: 7,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = FamilySpec::RandomGeometric {
            n: 30,
            side: 10,
            threshold: 3,
            seed: 8,
        };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
        let gnp = FamilySpec::Gnp { n: 20, p: 0.3, seed: 1 };
        assert_eq!(generate(&gnp).unwrap(), generate(&gnp).unwrap());
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(generate(&FamilySpec::Cycle { n: 2 }).is_err());
        assert!(generate(&FamilySpec::Path { n: 0 }).is_err());
        assert!(generate(&FamilySpec::Gnp { n: 3, p: 1.5, seed: 0 }).is_err());
    }

    #[test]
    fn shorthand() {
        assert_eq!(FamilySpec::from_shorthand("P8"), Some(FamilySpec::Path { n: 8 }));
        assert_eq!(
            FamilySpec::from_shorthand("G4x5"),
            Some(FamilySpec::Grid { rows: 4, cols: 5 })
        );
        assert_eq!(FamilySpec::from_shorthand("X3"), None);
        assert_eq!(FamilySpec::from_shorthand("P"), None);
    }
}
