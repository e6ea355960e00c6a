use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Cooperative resource limit, polled by the solvers at branch boundaries.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    max_branches: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + limit),
            max_branches: None,
        }
    }

    pub fn with_max_branches(mut self, branches: u64) -> Self {
        self.max_branches = Some(branches);
        self
    }

    /// Fails once the deadline has passed or `branches` exceeds the branch cap.
    pub fn check(&self, branches: u64) -> Result<()> {
        if let Some(cap) = self.max_branches {
            if branches > cap {
                return Err(Error::BudgetExceeded);
            }
        }
        // Instant::now is cheap but not free; poll the clock every 256 branches.
        if branches.is_multiple_of(256) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::BudgetExceeded);
                }
            }
        }
        Ok(())
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}
