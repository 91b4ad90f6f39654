//! Resource limits shared by every enumerating routine.
//!
//! Exceeding a limit is always reported as [`Error::BudgetExceeded`]; nothing
//! is ever silently truncated.

use crate::error::{Error, Result};

/// Upper bounds on work and memory a single call may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest sieve level `z` (and so the largest prime table built).
    pub max_sieve_limit: u64,
    /// Largest interval length `y`.
    pub max_interval: u64,
    /// Largest count of integers a full enumeration may visit (`x` in
    /// rough counts, the limit in gap scans, `rad(m)` for Jacobsthal).
    pub max_enumeration: u64,
    /// Rough cap on bytes allocated for tables and bitmaps.
    pub max_memory: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_sieve_limit: 1_000_000_000,
            max_interval: 1_000_000_000,
            max_enumeration: 1_000_000_000,
            max_memory: 2 << 30,
        }
    }
}

impl Budget {
    pub(crate) fn check(what: &'static str, requested: u64, limit: u64) -> Result<()> {
        if requested > limit {
            Err(Error::BudgetExceeded {
                what,
                requested: requested as u128,
                limit: limit as u128,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_sieve_limit(&self, z: u64) -> Result<()> {
        Self::check("sieve limit z", z, self.max_sieve_limit)?;
        // odd-only bit table for primes up to z, plus the list itself (~z/ln z words)
        Self::check("memory bytes", z / 16 + z / 2, self.max_memory)
    }

    pub fn check_interval(&self, y: u64) -> Result<()> {
        Self::check("interval length y", y, self.max_interval)?;
        Self::check("memory bytes", y / 8, self.max_memory)
    }

    pub fn check_enumeration(&self, n: u64) -> Result<()> {
        Self::check("enumeration size", n, self.max_enumeration)
    }
}
