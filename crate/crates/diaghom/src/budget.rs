//! Resource budgets for basis and tensor enumerations.

/// Default ceiling on the number of basis tuples materialized per chain
/// degree. Larger runs must raise the budget explicitly.
pub const DEFAULT_TUPLE_BUDGET: u64 = 5_000_000;

/// A budget on enumeration sizes, counted in basis tuples per degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_tuples: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_tuples: DEFAULT_TUPLE_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_tuples: u64) -> Self {
        Budget { max_tuples }
    }

    /// Checks a requested size against the budget.
    pub fn check(&self, required: u64, what: &str) -> Result<(), BudgetError> {
        if required > self.max_tuples {
            Err(BudgetError {
                what: what.to_string(),
                required,
                allowed: self.max_tuples,
            })
        } else {
            Ok(())
        }
    }
}

/// Raised when an enumeration would exceed the configured budget; carries the
/// size that would have been required.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
#[error("budget exceeded for {what}: requires {required} tuples, budget allows {allowed}")]
pub struct BudgetError {
    pub what: String,
    pub required: u64,
    pub allowed: u64,
}
