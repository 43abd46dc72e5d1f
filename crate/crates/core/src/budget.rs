use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ENUM: u64 = 10_000_000;

/// Shared cap on the number of enumerated items across one analysis.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Reads `SELFSIM_MAX_ENUM`, falling back to the default cap.
    pub fn from_env() -> Self {
        let limit = std::env::var("SELFSIM_MAX_ENUM")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .unwrap_or(DEFAULT_MAX_ENUM);
        Self::new(limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used())
    }

    pub fn charge(&self, n: u64, what: &str) -> Result<()> {
        let prev = self.used.fetch_add(n, Ordering::Relaxed);
        if prev.saturating_add(n) > self.limit {
            return Err(Error::BoundExceeded(format!(
                "{what} (cap {} items, set SELFSIM_MAX_ENUM to raise it)",
                self.limit
            )));
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_env()
    }
}
