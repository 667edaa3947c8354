use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WorkerId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FirmId(pub usize);

/// The `index`-th copy of `firm`; copy indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CopyId {
    pub firm: FirmId,
    pub index: usize,
}

impl CopyId {
    pub fn new(firm: usize, index: usize) -> Self {
        CopyId {
            firm: FirmId(firm),
            index,
        }
    }
}

/// A set of workers as a bit mask over dense worker indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkerSet(u64);

impl WorkerSet {
    pub const EMPTY: WorkerSet = WorkerSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        WorkerSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All workers `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            WorkerSet(u64::MAX)
        } else {
            WorkerSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(w: WorkerId) -> Self {
        WorkerSet(1u64 << w.0)
    }

    pub fn contains(self, w: WorkerId) -> bool {
        w.0 < 64 && self.0 & (1u64 << w.0) != 0
    }

    pub fn insert(&mut self, w: WorkerId) {
        self.0 |= 1u64 << w.0;
    }

    pub fn with(self, w: WorkerId) -> Self {
        WorkerSet(self.0 | (1u64 << w.0))
    }

    pub fn without(self, w: WorkerId) -> Self {
        WorkerSet(self.0 & !(1u64 << w.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: WorkerSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: WorkerSet) -> Self {
        WorkerSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorkerSet) -> Self {
        WorkerSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorkerSet) -> Self {
        WorkerSet(self.0 & !other.0)
    }

    /// Highest worker index present plus one, or 0 when empty.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = WorkerId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(WorkerId(i))
        })
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = WorkerSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(WorkerSet(cur))
        })
    }
}

impl FromIterator<WorkerId> for WorkerSet {
    fn from_iter<I: IntoIterator<Item = WorkerId>>(iter: I) -> Self {
        let mut s = WorkerSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

impl fmt::Debug for WorkerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|w| w.0)).finish()
    }
}

/// Subsets of a universe of `n` workers, in increasing bit order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = WorkerSet> {
    WorkerSet::full(n).subsets()
}
