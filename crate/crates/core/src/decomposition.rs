//! Splitting a path-independent choice function into linear orders whose
//! per-subset maxima union back to the function.
//!
//! The orders are every maximal selection sequence from the full worker
//! set: pick any chosen worker, remove it, choose again, and stop once
//! nothing is chosen. Workers left over are unacceptable in that order.

use std::collections::BTreeSet;

use crate::axioms::{check_path_independence, Axiom, AxiomReport, Witness};
use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::ids::{WorkerId, WorkerSet};
use crate::limits::Limits;
use crate::market::ManyToOneMarket;
use crate::prefs::LinearOrder;

/// Per firm, the ordered list of linear orders; position `j - 1` holds
/// the order of copy `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    firms: Vec<Vec<LinearOrder>>,
}

impl Decomposition {
    pub fn new(firms: Vec<Vec<LinearOrder>>) -> Self {
        Decomposition { firms }
    }

    pub fn orders(&self, firm: usize) -> &[LinearOrder] {
        &self.firms[firm]
    }

    pub fn firm_count(&self) -> usize {
        self.firms.len()
    }

    pub fn copy_count(&self) -> usize {
        self.firms.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[LinearOrder]> {
        self.firms.iter().map(Vec::as_slice)
    }

    /// Decomposes every firm of `market`. `explicit[i]`, when present,
    /// fixes the copy indexing of firm `i`.
    pub fn of_market(
        market: &ManyToOneMarket,
        explicit: &[Option<Vec<LinearOrder>>],
        limits: &Limits,
    ) -> Result<Self> {
        let firms = market
            .choices()
            .iter()
            .enumerate()
            .map(|(i, cf)| match explicit.get(i).and_then(Option::as_ref) {
                Some(order) => decompose_indexed(cf, order, limits),
                None => decompose(cf, limits),
            })
            .collect::<Result<_>>()?;
        Ok(Decomposition { firms })
    }

    /// Checks every firm's orders against the market's choice functions.
    pub fn verify(&self, market: &ManyToOneMarket, limits: &Limits) -> Result<()> {
        if self.firms.len() != market.firm_count() {
            return Err(Error::Inconsistent(format!(
                "decomposition covers {} firms, market has {}",
                self.firms.len(),
                market.firm_count()
            )));
        }
        for (i, orders) in self.firms.iter().enumerate() {
            let report = verify_decomposition(&market.choices()[i], orders, limits)?;
            if let Some(w) = report.witness {
                return Err(Error::Inconsistent(format!(
                    "orders of firm {:?} do not reproduce its choice function: {w:?}",
                    market.firm_labels()[i]
                )));
            }
        }
        Ok(())
    }
}

/// All maximal selection sequences of `cf`, deduplicated, in lexicographic
/// order of worker indices.
pub fn decompose(cf: &ChoiceFunction, limits: &Limits) -> Result<Vec<LinearOrder>> {
    let pi = check_path_independence(cf, limits)?;
    if !pi.holds {
        return Err(Error::Axiom {
            axiom: Axiom::PathIndependence.name(),
            report: pi,
        });
    }

    let mut found = BTreeSet::new();
    let mut prefix = Vec::new();
    let full = WorkerSet::full(cf.universe());
    extend(cf, full, &mut prefix, &mut found, limits)?;

    let orders: Vec<LinearOrder> = found
        .into_iter()
        .map(|seq: Vec<WorkerId>| LinearOrder::new(seq))
        .collect::<Result<_>>()?;

    let check = verify_decomposition(cf, &orders, limits)?;
    if let Some(w) = check.witness {
        return Err(Error::Internal(format!(
            "selection sequences do not reproduce the choice function: {w:?}"
        )));
    }
    Ok(orders)
}

fn extend(
    cf: &ChoiceFunction,
    remaining: WorkerSet,
    prefix: &mut Vec<WorkerId>,
    found: &mut BTreeSet<Vec<WorkerId>>,
    limits: &Limits,
) -> Result<()> {
    let chosen = cf.pick(remaining);
    if chosen.is_empty() {
        if prefix.is_empty() {
            return Ok(());
        }
        found.insert(prefix.clone());
        if found.len() > limits.orders {
            return Err(Error::CapExceeded {
                what: "decomposition order count",
                size: found.len() as u128,
                cap: limits.orders as u128,
            });
        }
        return Ok(());
    }
    for w in chosen.iter() {
        prefix.push(w);
        extend(cf, remaining.without(w), prefix, found, limits)?;
        prefix.pop();
    }
    Ok(())
}

/// Like [`decompose`], but returns the orders in the caller's indexing.
/// `indexing` must be exactly the deduplicated decomposition set.
pub fn decompose_indexed(
    cf: &ChoiceFunction,
    indexing: &[LinearOrder],
    limits: &Limits,
) -> Result<Vec<LinearOrder>> {
    let computed: BTreeSet<LinearOrder> = decompose(cf, limits)?.into_iter().collect();
    let supplied: BTreeSet<LinearOrder> = indexing.iter().cloned().collect();
    if supplied.len() != indexing.len() {
        return Err(Error::validation("copy indexing lists an order twice"));
    }
    if supplied != computed {
        let missing = computed.difference(&supplied).count();
        let extra = supplied.difference(&computed).count();
        return Err(Error::Inconsistent(format!(
            "copy indexing differs from the decomposition ({missing} missing, {extra} extra)"
        )));
    }
    Ok(indexing.to_vec())
}

/// Union-of-maxima choice function of `orders` over `universe` workers.
/// Duplicate orders are kept; they do not change the union.
pub fn recompose(universe: usize, orders: Vec<LinearOrder>) -> Result<ChoiceFunction> {
    ChoiceFunction::from_orders(universe, orders)
}

/// Returns `true` when some order appears more than once.
pub fn has_duplicate_orders(orders: &[LinearOrder]) -> bool {
    let distinct: BTreeSet<&LinearOrder> = orders.iter().collect();
    distinct.len() != orders.len()
}

/// Exhaustive check that `orders` recompose to `cf`.
pub fn verify_decomposition(
    cf: &ChoiceFunction,
    orders: &[LinearOrder],
    limits: &Limits,
) -> Result<AxiomReport> {
    let rebuilt = recompose(cf.universe(), orders.to_vec())?;
    let witness = cf
        .first_disagreement(&rebuilt, limits)?
        .map(|set| Witness::Disagreement {
            set,
            expected: cf.pick(set),
            actual: rebuilt.pick(set),
        });
    Ok(AxiomReport::from_witness(Axiom::Decomposition, witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(ix: &[usize]) -> LinearOrder {
        LinearOrder::from_indices(ix).unwrap()
    }

    #[test]
    fn single_order_is_its_own_decomposition() {
        let cf = ChoiceFunction::from_orders(2, vec![ord(&[0, 1])]).unwrap();
        assert_eq!(decompose(&cf, &Limits::default()).unwrap(), vec![ord(&[0, 1])]);
    }

    #[test]
    fn unreachable_workers_are_unacceptable() {
        let cf = ChoiceFunction::from_orders(3, vec![ord(&[2])]).unwrap();
        assert_eq!(decompose(&cf, &Limits::default()).unwrap(), vec![ord(&[2])]);
    }

    #[test]
    fn empty_orders_recompose_to_nothing() {
        let cf = recompose(3, vec![]).unwrap();
        let all_empty = ChoiceFunction::from_orders(3, vec![]).unwrap();
        let r = verify_decomposition(&all_empty, &[], &Limits::default()).unwrap();
        assert!(r.holds);
        assert!(cf.table(&Limits::default()).unwrap().iter().all(|s| s.is_empty()));
        assert!(decompose(&all_empty, &Limits::default()).unwrap().is_empty());
    }

    #[test]
    fn two_orders_recompose() {
        let cf = recompose(3, vec![ord(&[0, 1, 2]), ord(&[0, 2, 1])]).unwrap();
        let bc: WorkerSet = [WorkerId(1), WorkerId(2)].into_iter().collect();
        assert_eq!(cf.pick(bc), bc);
        assert!(has_duplicate_orders(&[ord(&[0]), ord(&[0])]));
    }

    #[test]
    fn order_cap_enforced() {
        // Choosing everyone yields n! sequences.
        let everyone: Vec<_> = (0..5).map(|i| ord(&[i])).collect();
        let cf = recompose(5, everyone).unwrap();
        let limits = Limits {
            orders: 100,
            ..Limits::default()
        };
        assert!(matches!(decompose(&cf, &limits), Err(Error::CapExceeded { .. })));
        assert_eq!(decompose(&cf, &Limits::default()).unwrap().len(), 120);
    }

    #[test]
    fn non_path_independent_rejected() {
        let s = |b| WorkerSet::from_bits(b);
        let cf = ChoiceFunction::from_table(2, vec![s(0), s(0), s(0), s(1)]).unwrap();
        assert!(matches!(
            decompose(&cf, &Limits::default()),
            Err(Error::Axiom { .. })
        ));
    }
}
