//! Resource caps for the exhaustive operations.
//!
//! Every check in this crate is exhaustive; when an input is too large the
//! operation returns [`Error::CapExceeded`](crate::Error::CapExceeded)
//! instead of sampling. Defaults can be overridden through the environment:
//!
//! | variable              | default    | meaning                                      |
//! |-----------------------|------------|----------------------------------------------|
//! | `AMMATCH_SUBSET_CAP`  | 16         | max workers for subset enumeration            |
//! | `AMMATCH_ORDER_CAP`   | 5040       | max distinct orders produced by a decomposition |
//! | `AMMATCH_ENUM_CAP`    | 10 000 000 | max candidate matchings an enumerator visits |

use crate::error::{Error, Result};

pub const MAX_WORKERS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub subset_workers: usize,
    pub orders: usize,
    pub enumeration: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subset_workers: 16,
            orders: 5040,
            enumeration: 10_000_000,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = read_env("AMMATCH_SUBSET_CAP") {
            limits.subset_workers = (v as usize).min(MAX_WORKERS);
        }
        if let Some(v) = read_env("AMMATCH_ORDER_CAP") {
            limits.orders = v as usize;
        }
        if let Some(v) = read_env("AMMATCH_ENUM_CAP") {
            limits.enumeration = v as u128;
        }
        limits
    }

    pub(crate) fn check_subsets(&self, universe: usize) -> Result<()> {
        if universe > self.subset_workers {
            return Err(Error::CapExceeded {
                what: "worker universe",
                size: universe as u128,
                cap: self.subset_workers as u128,
            });
        }
        Ok(())
    }
}

fn read_env(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}
