//! The one-to-one market of firm-copies induced by a decomposition.
//!
//! Copies are stored flat, grouped by firm and ordered by copy index; a
//! copy's position in that list is its *slot*. Matchings and algorithms
//! address copies by slot.

use std::ops::Range;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::ids::{CopyId, FirmId, WorkerId};
use crate::limits::Limits;
use crate::market::ManyToOneMarket;
use crate::prefs::LinearOrder;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirmCopy {
    pub id: CopyId,
    pub order: LinearOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneToOneMarket {
    worker_labels: Vec<String>,
    firm_labels: Vec<String>,
    copies: Vec<FirmCopy>,
    firm_slots: Vec<Range<usize>>,
    /// Per worker, acceptable copy slots best first.
    lifted: Vec<Vec<usize>>,
    /// Per worker, rank key of every slot (see [`LinearOrder::key`]).
    lifted_key: Vec<Vec<usize>>,
    decomposition: Decomposition,
}

/// Builds the copy market of `m1` under decomposition `d`, after checking
/// that `d` reproduces every firm's choice function.
pub fn build_associated_market(
    m1: &ManyToOneMarket,
    d: &Decomposition,
    limits: &Limits,
) -> Result<OneToOneMarket> {
    d.verify(m1, limits)?;

    let mut copies = Vec::with_capacity(d.copy_count());
    let mut firm_slots = Vec::with_capacity(d.firm_count());
    for (i, orders) in d.iter().enumerate() {
        let start = copies.len();
        copies.extend(orders.iter().enumerate().map(|(j, o)| FirmCopy {
            id: CopyId::new(i, j + 1),
            order: o.clone(),
        }));
        firm_slots.push(start..copies.len());
    }

    // Firms in the worker's order, each expanded into its copies by index.
    let lifted: Vec<Vec<usize>> = m1
        .prefs()
        .iter()
        .map(|p| {
            p.firms()
                .iter()
                .flat_map(|f| firm_slots[f.0].clone())
                .collect()
        })
        .collect();
    let lifted_key = lifted
        .iter()
        .map(|list| {
            let mut key = vec![list.len() + 1; copies.len()];
            for (pos, &slot) in list.iter().enumerate() {
                key[slot] = pos;
            }
            key
        })
        .collect();

    let market = OneToOneMarket {
        worker_labels: m1.worker_labels().to_vec(),
        firm_labels: m1.firm_labels().to_vec(),
        copies,
        firm_slots,
        lifted,
        lifted_key,
        decomposition: d.clone(),
    };
    market.check_lifting(m1)?;
    Ok(market)
}

impl OneToOneMarket {
    /// Conditions linking the lifted preferences to the firm preferences:
    /// copies of a better firm come first, copies of one firm appear in
    /// increasing index, unacceptable firms contribute nothing.
    fn check_lifting(&self, m1: &ManyToOneMarket) -> Result<()> {
        for w in m1.worker_ids() {
            let pref = m1.pref(w);
            let list = &self.lifted[w.0];
            for pair in list.windows(2) {
                let (a, b) = (&self.copies[pair[0]].id, &self.copies[pair[1]].id);
                let ok = if a.firm == b.firm {
                    a.index < b.index
                } else {
                    pref.prefers(Some(a.firm), Some(b.firm))
                };
                if !ok {
                    return Err(Error::Internal(format!(
                        "lifted preference of worker {w:?} misorders {a:?} and {b:?}"
                    )));
                }
            }
            if list.iter().any(|&s| !pref.is_acceptable(self.copies[s].id.firm)) {
                return Err(Error::Internal(format!(
                    "lifted preference of worker {w:?} includes an unacceptable firm"
                )));
            }
            let expected: usize = pref.firms().iter().map(|f| self.firm_slots[f.0].len()).sum();
            if expected != list.len() {
                return Err(Error::Internal(format!(
                    "lifted preference of worker {w:?} misses copies"
                )));
            }
        }
        Ok(())
    }

    pub fn worker_count(&self) -> usize {
        self.worker_labels.len()
    }

    pub fn firm_count(&self) -> usize {
        self.firm_labels.len()
    }

    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn copies(&self) -> &[FirmCopy] {
        &self.copies
    }

    pub fn copy(&self, slot: usize) -> &FirmCopy {
        &self.copies[slot]
    }

    pub fn order(&self, slot: usize) -> &LinearOrder {
        &self.copies[slot].order
    }

    pub fn firm_of(&self, slot: usize) -> FirmId {
        self.copies[slot].id.firm
    }

    /// Slots of every copy of `firm`, including `firm`'s own.
    pub fn siblings(&self, firm: FirmId) -> Range<usize> {
        self.firm_slots[firm.0].clone()
    }

    pub fn slot_of(&self, id: CopyId) -> Option<usize> {
        let r = self.firm_slots.get(id.firm.0)?;
        (id.index >= 1 && id.index <= r.len()).then(|| r.start + id.index - 1)
    }

    /// Acceptable copy slots of `w`, best first.
    pub fn lifted(&self, w: WorkerId) -> &[usize] {
        &self.lifted[w.0]
    }

    pub fn worker_key(&self, w: WorkerId, slot: Option<usize>) -> usize {
        match slot {
            None => self.lifted[w.0].len(),
            Some(s) => self.lifted_key[w.0][s],
        }
    }

    pub fn worker_prefers(&self, w: WorkerId, a: Option<usize>, b: Option<usize>) -> bool {
        self.worker_key(w, a) < self.worker_key(w, b)
    }

    pub fn worker_accepts(&self, w: WorkerId, slot: usize) -> bool {
        self.lifted_key[w.0][slot] < self.lifted[w.0].len()
    }

    pub fn worker_labels(&self) -> &[String] {
        &self.worker_labels
    }

    pub fn firm_labels(&self) -> &[String] {
        &self.firm_labels
    }

    pub fn worker_label(&self, w: WorkerId) -> &str {
        &self.worker_labels[w.0]
    }

    /// Display label `<firm>#<index>`.
    pub fn copy_label(&self, slot: usize) -> String {
        let id = self.copies[slot].id;
        format!("{}#{}", self.firm_labels[id.firm.0], id.index)
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn worker_ids(&self) -> impl Iterator<Item = WorkerId> {
        (0..self.worker_labels.len()).map(WorkerId)
    }
}
