//! Resource caps shared by the enumeration and search routines.
//!
//! The cap is a single work budget (number of candidate objects or
//! vertices an operation may touch). `COMMSOL_MAX_WORK` overrides it.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_WORK: u64 = 20_000_000;

pub fn max_work() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("COMMSOL_MAX_WORK")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_WORK)
    })
}

pub(crate) fn check(work: u64, what: impl FnOnce() -> String) -> Result<()> {
    if work > max_work() {
        Err(Error::ResourceCap(what()))
    } else {
        Ok(())
    }
}
