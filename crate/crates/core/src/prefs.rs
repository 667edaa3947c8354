//! Strict rankings: a firm-copy's order over workers, a worker's order over
//! firms, and a firm's ranking over subsets of workers.
//!
//! Every ranking lists acceptable alternatives only, best first. The empty
//! outcome sits right after the last listed entry and every unlisted
//! alternative sits below it.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{FirmId, WorkerId, WorkerSet};

/// Position of `x` in `list` with the unmatched outcome at `list.len()`
/// and unacceptable alternatives at `list.len() + 1`. Smaller is better.
fn rank_key<T: PartialEq>(list: &[T], x: Option<&T>) -> usize {
    match x {
        None => list.len(),
        Some(x) => list.iter().position(|y| y == x).unwrap_or(list.len() + 1),
    }
}

fn check_distinct<T: std::hash::Hash + Eq + Copy + std::fmt::Debug>(
    items: &[T],
    what: &str,
) -> Result<()> {
    let mut seen = HashSet::new();
    for x in items {
        if !seen.insert(*x) {
            return Err(Error::validation(format!("duplicate {what} {x:?}")));
        }
    }
    Ok(())
}

/// A strict order over acceptable workers, best first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearOrder(Vec<WorkerId>);

impl LinearOrder {
    pub fn new(workers: Vec<WorkerId>) -> Result<Self> {
        check_distinct(&workers, "worker in order")?;
        Ok(LinearOrder(workers))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| WorkerId(i)).collect())
    }

    pub fn workers(&self) -> &[WorkerId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn acceptable(&self) -> WorkerSet {
        self.0.iter().copied().collect()
    }

    pub fn is_acceptable(&self, w: WorkerId) -> bool {
        self.0.contains(&w)
    }

    /// Best acceptable worker of `set`.
    pub fn max_in(&self, set: WorkerSet) -> Option<WorkerId> {
        self.0.iter().copied().find(|&w| set.contains(w))
    }

    /// Rank key of an outcome; `None` is being unmatched.
    pub fn key(&self, w: Option<WorkerId>) -> usize {
        rank_key(&self.0, w.as_ref())
    }

    /// Strict preference of `a` over `b`.
    pub fn prefers(&self, a: Option<WorkerId>, b: Option<WorkerId>) -> bool {
        self.key(a) < self.key(b)
    }
}

/// A worker's strict order over acceptable firms, best first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkerPreference(Vec<FirmId>);

impl WorkerPreference {
    pub fn new(firms: Vec<FirmId>) -> Result<Self> {
        check_distinct(&firms, "firm in worker preference")?;
        Ok(WorkerPreference(firms))
    }

    pub fn firms(&self) -> &[FirmId] {
        &self.0
    }

    pub fn is_acceptable(&self, f: FirmId) -> bool {
        self.0.contains(&f)
    }

    pub fn key(&self, f: Option<FirmId>) -> usize {
        rank_key(&self.0, f.as_ref())
    }

    pub fn prefers(&self, a: Option<FirmId>, b: Option<FirmId>) -> bool {
        self.key(a) < self.key(b)
    }
}

/// A firm's ranking over acceptable non-empty subsets of workers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetRanking(Vec<WorkerSet>);

impl SubsetRanking {
    pub fn new(sets: Vec<WorkerSet>) -> Result<Self> {
        if sets.iter().any(|s| s.is_empty()) {
            return Err(Error::validation(
                "subset ranking lists the empty set; it is implicitly last",
            ));
        }
        check_distinct(&sets, "subset in ranking")?;
        Ok(SubsetRanking(sets))
    }

    pub fn sets(&self) -> &[WorkerSet] {
        &self.0
    }

    /// Best listed subset contained in `available`, else the empty set.
    pub fn choose(&self, available: WorkerSet) -> WorkerSet {
        self.0
            .iter()
            .copied()
            .find(|s| s.is_subset(available))
            .unwrap_or(WorkerSet::EMPTY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(i: usize) -> Option<WorkerId> {
        Some(WorkerId(i))
    }

    #[test]
    fn unlisted_is_below_unmatched() {
        let o = LinearOrder::from_indices(&[2, 0]).unwrap();
        assert!(o.prefers(w(2), w(0)));
        assert!(o.prefers(w(0), None));
        assert!(o.prefers(None, w(1)));
        assert!(!o.prefers(w(1), w(3)));
        assert_eq!(o.max_in(WorkerSet::from_bits(0b011)), w(0));
        assert_eq!(o.max_in(WorkerSet::from_bits(0b010)), None);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(LinearOrder::from_indices(&[1, 1]).is_err());
        assert!(WorkerPreference::new(vec![FirmId(0), FirmId(0)]).is_err());
        let s = WorkerSet::from_bits(1);
        assert!(SubsetRanking::new(vec![s, s]).is_err());
        assert!(SubsetRanking::new(vec![WorkerSet::EMPTY]).is_err());
    }
}
