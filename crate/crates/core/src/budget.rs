//! Work limits for the exhaustive parts of the toolkit.

/// Environment variable that overrides the default node, term and
/// enumeration budgets.
pub const BUDGET_ENV: &str = "SLICERANK_BUDGET";

/// Limits on brute-force work. Every field is a count of basic items
/// (tuples, terms, search nodes, function-space points).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of exponent tuples `p^n` the monomial enumerator visits.
    pub enumeration: u64,
    /// Maximum estimated term count of the expanded indicator polynomial.
    pub terms: u64,
    /// Maximum number of DFS nodes a sum-free search may expand.
    pub nodes: u64,
    /// Maximum size of the function space `p^(|A|^3)` for the slice-rank oracle.
    pub oracle_space: u64,
}

impl Budget {
    pub const DEFAULT_ENUMERATION: u64 = 100_000_000;
    pub const DEFAULT_TERMS: u64 = 10_000_000;
    pub const DEFAULT_NODES: u64 = 50_000_000;
    /// 2^20 points: covers |A| = 2 for p in {2, 3, 5}.
    pub const DEFAULT_ORACLE_SPACE: u64 = 1 << 20;
    /// 2^27 points: |A| = 3 over F_2.
    pub const LARGE_ORACLE_SPACE: u64 = 1 << 27;

    /// Defaults, with `SLICERANK_BUDGET` (if set to an integer) replacing the
    /// enumeration, term and node limits.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Some(v) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            budget.enumeration = v;
            budget.terms = v;
            budget.nodes = v;
        }
        budget
    }

    pub fn with_large_oracle(mut self) -> Self {
        self.oracle_space = self.oracle_space.max(Self::LARGE_ORACLE_SPACE);
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: Self::DEFAULT_ENUMERATION,
            terms: Self::DEFAULT_TERMS,
            nodes: Self::DEFAULT_NODES,
            oracle_space: Self::DEFAULT_ORACLE_SPACE,
        }
    }
}

/// `base^exp` if it does not exceed `limit`, otherwise `None`.
pub(crate) fn checked_pow_within(base: u64, exp: u64, limit: u64) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > limit {
            return None;
        }
    }
    (acc <= limit).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_within() {
        assert_eq!(checked_pow_within(3, 4, 100), Some(81));
        assert_eq!(checked_pow_within(3, 5, 100), None);
        assert_eq!(checked_pow_within(2, 0, 0), None);
        assert_eq!(checked_pow_within(2, 0, 1), Some(1));
        assert_eq!(checked_pow_within(u64::MAX, 2, u64::MAX), None);
    }
}
