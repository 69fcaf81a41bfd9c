//! Search budgets. Every ineffective "for n large enough" hypothesis
//! becomes an explicit budget here; searches fail loudly with
//! `BudgetExceeded` instead of degrading silently.

/// Limits shared by all budgeted searches.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Cap on ambient/auxiliary dimensions a construction may demand.
    pub dim: usize,
    /// Cap on candidates examined in any single enumeration loop.
    pub tries: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::from_env_or(Budget { dim: 32, tries: 4_000_000 })
    }
}

impl Budget {
    /// Default tries can be overridden by `BRAUER_BUDGET_DEFAULT`.
    fn from_env_or(fallback: Budget) -> Budget {
        match std::env::var("BRAUER_BUDGET_DEFAULT").ok().and_then(|s| s.parse().ok()) {
            Some(tries) => Budget { tries, ..fallback },
            None => fallback,
        }
    }

    pub fn with_tries(tries: u64) -> Budget {
        Budget { tries, ..Budget::default() }
    }
}
