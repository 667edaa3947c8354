use crate::associated::OneToOneMarket;
use crate::error::{Error, Result};
use crate::ids::{CopyId, FirmId, WorkerId, WorkerSet};

/// Many-to-one matching: each worker is assigned at most one firm.
///
/// Stored from the worker side; the firm side is derived, so
/// `μ(w) = φ ⇔ w ∈ μ(φ)` holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchingM1 {
    firms: usize,
    of_worker: Vec<Option<FirmId>>,
}

impl MatchingM1 {
    pub fn new(firms: usize, of_worker: Vec<Option<FirmId>>) -> Result<Self> {
        if let Some(f) = of_worker.iter().flatten().find(|f| f.0 >= firms) {
            return Err(Error::validation(format!("matching references firm index {}", f.0)));
        }
        Ok(MatchingM1 { firms, of_worker })
    }

    pub fn empty(workers: usize, firms: usize) -> Self {
        MatchingM1 {
            firms,
            of_worker: vec![None; workers],
        }
    }

    /// Builds a matching from each firm's worker set; sets must be disjoint.
    pub fn from_firm_sets(workers: usize, sets: &[WorkerSet]) -> Result<Self> {
        let mut of_worker = vec![None; workers];
        for (f, set) in sets.iter().enumerate() {
            for w in set.iter() {
                let slot = of_worker.get_mut(w.0).ok_or_else(|| {
                    Error::validation(format!("matching references worker index {}", w.0))
                })?;
                if let Some(prev) = slot.replace(FirmId(f)) {
                    return Err(Error::validation(format!(
                        "worker {} assigned to firms {} and {}",
                        w.0, prev.0, f
                    )));
                }
            }
        }
        Ok(MatchingM1 {
            firms: sets.len(),
            of_worker,
        })
    }

    pub fn worker_count(&self) -> usize {
        self.of_worker.len()
    }

    pub fn firm_count(&self) -> usize {
        self.firms
    }

    pub fn firm_of(&self, w: WorkerId) -> Option<FirmId> {
        self.of_worker[w.0]
    }

    pub fn workers_of(&self, f: FirmId) -> WorkerSet {
        self.of_worker
            .iter()
            .enumerate()
            .filter(|(_, g)| **g == Some(f))
            .map(|(w, _)| WorkerId(w))
            .collect()
    }

    pub fn firm_sets(&self) -> Vec<WorkerSet> {
        let mut sets = vec![WorkerSet::EMPTY; self.firms];
        for (w, f) in self.of_worker.iter().enumerate() {
            if let Some(f) = f {
                sets[f.0].insert(WorkerId(w));
            }
        }
        sets
    }

    pub fn worker_side(&self) -> &[Option<FirmId>] {
        &self.of_worker
    }
}

/// One-to-one matching between workers and firm-copy slots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching11 {
    of_copy: Vec<Option<WorkerId>>,
    of_worker: Vec<Option<usize>>,
}

impl Matching11 {
    pub fn empty(workers: usize, copies: usize) -> Self {
        Matching11 {
            of_copy: vec![None; copies],
            of_worker: vec![None; workers],
        }
    }

    /// From the copy side; no worker may be held by two copies.
    pub fn from_copy_side(workers: usize, of_copy: Vec<Option<WorkerId>>) -> Result<Self> {
        let mut of_worker = vec![None; workers];
        for (slot, w) in of_copy.iter().enumerate() {
            if let Some(w) = w {
                let entry = of_worker.get_mut(w.0).ok_or_else(|| {
                    Error::validation(format!("matching references worker index {}", w.0))
                })?;
                if let Some(prev) = entry.replace(slot) {
                    return Err(Error::validation(format!(
                        "worker {} held by copy slots {prev} and {slot}",
                        w.0
                    )));
                }
            }
        }
        Ok(Matching11 { of_copy, of_worker })
    }

    /// From `(copy, worker)` pairs over the copies of `market`.
    pub fn from_pairs(market: &OneToOneMarket, pairs: &[(CopyId, WorkerId)]) -> Result<Self> {
        let mut of_copy = vec![None; market.copy_count()];
        for &(id, w) in pairs {
            let slot = market
                .slot_of(id)
                .ok_or_else(|| Error::validation(format!("unknown copy {id:?}")))?;
            if w.0 >= market.worker_count() {
                return Err(Error::validation(format!("unknown worker index {}", w.0)));
            }
            if of_copy[slot].replace(w).is_some() {
                return Err(Error::validation(format!("copy {id:?} assigned twice")));
            }
        }
        Self::from_copy_side(market.worker_count(), of_copy)
    }

    pub fn worker_of(&self, slot: usize) -> Option<WorkerId> {
        self.of_copy[slot]
    }

    pub fn copy_of(&self, w: WorkerId) -> Option<usize> {
        self.of_worker[w.0]
    }

    pub fn copy_side(&self) -> &[Option<WorkerId>] {
        &self.of_copy
    }

    pub fn worker_side(&self) -> &[Option<usize>] {
        &self.of_worker
    }

    pub fn copy_count(&self) -> usize {
        self.of_copy.len()
    }

    pub fn worker_count(&self) -> usize {
        self.of_worker.len()
    }

    pub fn matched_pairs(&self) -> impl Iterator<Item = (usize, WorkerId)> + '_ {
        self.of_copy
            .iter()
            .enumerate()
            .filter_map(|(s, w)| w.map(|w| (s, w)))
    }

    pub(crate) fn assign(&mut self, slot: usize, w: WorkerId) {
        if let Some(old) = self.of_copy[slot].take() {
            self.of_worker[old.0] = None;
        }
        if let Some(old) = self.of_worker[w.0].take() {
            self.of_copy[old] = None;
        }
        self.of_copy[slot] = Some(w);
        self.of_worker[w.0] = Some(slot);
    }

    pub(crate) fn unassign_copy(&mut self, slot: usize) {
        if let Some(w) = self.of_copy[slot].take() {
            self.of_worker[w.0] = None;
        }
    }

    /// `λ(f) = w ⇔ λ(w) = f` for every copy and worker.
    pub fn is_involutive(&self) -> bool {
        self.of_copy
            .iter()
            .enumerate()
            .all(|(s, w)| w.is_none_or(|w| self.of_worker.get(w.0) == Some(&Some(s))))
            && self
                .of_worker
                .iter()
                .enumerate()
                .all(|(w, s)| s.is_none_or(|s| self.of_copy.get(s) == Some(&Some(WorkerId(w)))))
    }

    pub(crate) fn check_shape(&self, market: &OneToOneMarket) -> Result<()> {
        if self.of_copy.len() != market.copy_count() || self.of_worker.len() != market.worker_count()
        {
            return Err(Error::validation(format!(
                "matching is over {} copies and {} workers, market has {} and {}",
                self.of_copy.len(),
                self.of_worker.len(),
                market.copy_count(),
                market.worker_count()
            )));
        }
        if !self.is_involutive() {
            return Err(Error::validation("matching is not involutive"));
        }
        Ok(())
    }
}
