//! Choice functions over a finite worker universe.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ids::{all_subsets, WorkerSet};
use crate::limits::{Limits, MAX_WORKERS};
use crate::prefs::{LinearOrder, SubsetRanking};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceRepr {
    /// Explicit value for every subset, indexed by the subset's bit mask.
    Table(Vec<WorkerSet>),
    /// Best listed subset available.
    Ranking(SubsetRanking),
    /// Union of each order's best available worker.
    Orders(Vec<LinearOrder>),
}

/// A firm's choice function `C: 2^W -> 2^W` with `C(S) ⊆ S`.
///
/// The canonical explicit table is built on first use and shared by later
/// calls; concurrent first calls build identical tables.
#[derive(Debug, Clone)]
pub struct ChoiceFunction {
    universe: usize,
    repr: ChoiceRepr,
    table: OnceLock<Vec<WorkerSet>>,
}

impl PartialEq for ChoiceFunction {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.repr == other.repr
    }
}

impl Eq for ChoiceFunction {}

fn check_universe(universe: usize) -> Result<()> {
    if universe > MAX_WORKERS {
        return Err(Error::validation(format!(
            "worker universe of {universe} exceeds {MAX_WORKERS}"
        )));
    }
    Ok(())
}

fn check_members(set: WorkerSet, universe: usize, what: &str) -> Result<()> {
    if !set.is_subset(WorkerSet::full(universe)) {
        return Err(Error::validation(format!(
            "{what} {set:?} references a worker outside 0..{universe}"
        )));
    }
    Ok(())
}

impl ChoiceFunction {
    fn with_repr(universe: usize, repr: ChoiceRepr) -> Self {
        ChoiceFunction {
            universe,
            repr,
            table: OnceLock::new(),
        }
    }

    /// `values[s]` is the choice from the subset with bit mask `s`.
    pub fn from_table(universe: usize, values: Vec<WorkerSet>) -> Result<Self> {
        check_universe(universe)?;
        if universe >= usize::BITS as usize || values.len() != 1usize << universe {
            return Err(Error::validation(format!(
                "table needs one entry per subset of {universe} workers, got {}",
                values.len()
            )));
        }
        for (mask, chosen) in values.iter().enumerate() {
            let set = WorkerSet::from_bits(mask as u64);
            if !chosen.is_subset(set) {
                return Err(Error::validation(format!(
                    "table chooses {chosen:?} from {set:?}, which is not a subset"
                )));
            }
        }
        Ok(Self::with_repr(universe, ChoiceRepr::Table(values)))
    }

    pub fn from_ranking(universe: usize, ranking: SubsetRanking) -> Result<Self> {
        check_universe(universe)?;
        for s in ranking.sets() {
            check_members(*s, universe, "ranked subset")?;
        }
        Ok(Self::with_repr(universe, ChoiceRepr::Ranking(ranking)))
    }

    pub fn from_orders(universe: usize, orders: Vec<LinearOrder>) -> Result<Self> {
        check_universe(universe)?;
        for o in &orders {
            check_members(o.acceptable(), universe, "order")?;
        }
        Ok(Self::with_repr(universe, ChoiceRepr::Orders(orders)))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn repr(&self) -> &ChoiceRepr {
        &self.repr
    }

    pub fn choose(&self, available: WorkerSet) -> Result<WorkerSet> {
        check_members(available, self.universe, "choice set")?;
        Ok(self.pick(available))
    }

    /// `choose` without the universe check.
    pub(crate) fn pick(&self, available: WorkerSet) -> WorkerSet {
        if let Some(t) = self.table.get() {
            return t[available.bits() as usize];
        }
        match &self.repr {
            ChoiceRepr::Table(t) => t[available.bits() as usize],
            ChoiceRepr::Ranking(r) => r.choose(available),
            ChoiceRepr::Orders(orders) => orders
                .iter()
                .filter_map(|o| o.max_in(available))
                .collect(),
        }
    }

    /// The canonical table, built once per value.
    pub fn table(&self, limits: &Limits) -> Result<&[WorkerSet]> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        limits.check_subsets(self.universe)?;
        Ok(self.table.get_or_init(|| match &self.repr {
            ChoiceRepr::Table(t) => t.clone(),
            _ => all_subsets(self.universe).map(|s| self.pick(s)).collect(),
        }))
    }

    /// Explicit-table form agreeing with `self` on every subset.
    pub fn canonicalize(&self, limits: &Limits) -> Result<ChoiceFunction> {
        let values = self.table(limits)?.to_vec();
        ChoiceFunction::from_table(self.universe, values)
    }

    /// Subset-by-subset equality, first disagreeing subset on failure.
    pub fn first_disagreement(
        &self,
        other: &ChoiceFunction,
        limits: &Limits,
    ) -> Result<Option<WorkerSet>> {
        if self.universe != other.universe {
            return Err(Error::validation("choice functions over different universes"));
        }
        let a = self.table(limits)?;
        let b = other.table(limits)?;
        Ok(a.iter()
            .zip(b)
            .position(|(x, y)| x != y)
            .map(|i| WorkerSet::from_bits(i as u64)))
    }
}
