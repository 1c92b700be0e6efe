//! Work caps shared by the enumeration and completion loops.
//!
//! Every loop that can blow up combinatorially checks one of these caps and
//! fails with [`Error::BudgetExceeded`] instead of truncating its output.

use crate::error::{Error, Result};

/// Environment variable that overrides the default work caps.
pub const BUDGET_ENV: &str = "EQUILAT_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Node cap for bounded lattice-point enumeration.
    pub ball_nodes: u64,
    /// Cap on the number of placements tried while enumerating an orbit.
    pub orbit: u64,
    /// Cap on completion pairs (Graver and Buchberger).
    pub pairs: u64,
    /// Cap on stored elements during completion.
    pub elements: u64,
    /// Cap on the number of cells of a marginal matrix.
    pub cells: u64,
    /// Cap on the number of vertices of a single fiber.
    pub fiber: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            ball_nodes: 10_000_000,
            orbit: 1_000_000,
            pairs: 200_000,
            elements: 50_000,
            cells: 20_000,
            fiber: 1_000_000,
        }
    }
}

impl Budget {
    /// Replaces the work caps of the main loops (pairs, enumeration nodes,
    /// orbit placements, fiber vertices) with `limit`. Storage and cell caps
    /// keep their defaults.
    pub fn with_work_limit(mut self, limit: u64) -> Self {
        self.ball_nodes = limit;
        self.orbit = limit;
        self.pairs = limit;
        self.fiber = limit;
        self
    }

    /// Defaults, overridden by `EQUILAT_BUDGET` when it holds a positive integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => {
                let limit: u64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("{BUDGET_ENV} must be a positive integer"))
                })?;
                if limit == 0 {
                    return Err(Error::InvalidInput(format!("{BUDGET_ENV} must be positive")));
                }
                Ok(Budget::default().with_work_limit(limit))
            }
            Err(_) => Ok(Budget::default()),
        }
    }
}

/// Counts work units against a cap.
#[derive(Debug)]
pub(crate) struct Meter {
    what: &'static str,
    limit: u64,
    used: u64,
}

impl Meter {
    pub(crate) fn new(what: &'static str, limit: u64) -> Self {
        Meter { what, limit, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.add(1)
    }

    pub(crate) fn add(&mut self, units: u64) -> Result<()> {
        self.used = self.used.saturating_add(units);
        if self.used > self.limit {
            Err(Error::BudgetExceeded { what: self.what, limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}
