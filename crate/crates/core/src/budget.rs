//! Limits for the exhaustive searches.

/// Environment variable that overrides [`Budget::enumeration`].
pub const BUDGET_ENV: &str = "COARSE_TW_BUDGET";

/// Caps on the brute-force procedures. Exceeding a cap is an error, never a
/// silent approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of candidate center sets an exact search may visit.
    pub enumeration: u64,
    /// Largest vertex count for which all `2^n` vertex subsets are enumerated.
    pub subset_vertices: usize,
    /// Largest vertex count accepted by the exact treewidth oracle.
    pub treewidth_vertices: usize,
    /// Node limit for the backtracking searches (set cover, separator
    /// consistency search).
    pub search_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: 10_000_000,
            subset_vertices: 20,
            treewidth_vertices: 12,
            search_nodes: 2_000_000,
        }
    }
}

impl Budget {
    /// Default budget with `COARSE_TW_BUDGET` applied when it parses.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Some(v) = std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            budget.enumeration = v;
        }
        budget
    }
}

/// `C(n, k)` saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `sum_{j <= k} C(n, j)`, saturating.
pub fn binomial_prefix(n: usize, k: usize) -> u64 {
    (0..=k.min(n)).fold(0u64, |acc, j| acc.saturating_add(binomial(n, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial_prefix(4, 2), 1 + 4 + 6);
        assert_eq!(binomial(200, 100), u64::MAX);
    }
}
