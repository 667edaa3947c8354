//! Exhaustive checks of the choice-theoretic axioms.
//!
//! Each check scans subsets in increasing bit-mask order and reports the
//! first violation found. Witnesses carry enough data to be replayed
//! against the choice function with [`Witness::replays`].

use serde::{Deserialize, Serialize};

use crate::choice::ChoiceFunction;
use crate::error::Result;
use crate::ids::{all_subsets, WorkerId, WorkerSet};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Substitutability,
    Consistency,
    PathIndependence,
    Lad,
    Decomposition,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Substitutability => "substitutability",
            Axiom::Consistency => "consistency",
            Axiom::PathIndependence => "path independence",
            Axiom::Lad => "law of aggregate demand",
            Axiom::Decomposition => "decomposition equality",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `chosen ∈ C(set)` but `chosen ∉ C(set ∖ {removed})`.
    Substitutability {
        set: WorkerSet,
        chosen: WorkerId,
        removed: WorkerId,
    },
    /// `C(outer) ⊆ inner ⊆ outer` but `C(inner) ≠ C(outer)`.
    Consistency { outer: WorkerSet, inner: WorkerSet },
    /// `C(left ∪ right) ≠ C(C(left) ∪ right)`.
    PathIndependence { left: WorkerSet, right: WorkerSet },
    /// `smaller ⊆ larger` but `|C(smaller)| > |C(larger)|`.
    Lad { smaller: WorkerSet, larger: WorkerSet },
    /// Two choice functions disagree on `set`.
    Disagreement {
        set: WorkerSet,
        expected: WorkerSet,
        actual: WorkerSet,
    },
}

impl Witness {
    /// Re-evaluates the witness; `true` when it still exhibits a violation.
    /// `Disagreement` witnesses are checked against `cf` as the expected side.
    pub fn replays(&self, cf: &ChoiceFunction) -> bool {
        let c = |s: WorkerSet| cf.pick(s);
        match *self {
            Witness::Substitutability {
                set,
                chosen,
                removed,
            } => {
                chosen != removed
                    && set.contains(removed)
                    && c(set).contains(chosen)
                    && !c(set.without(removed)).contains(chosen)
            }
            Witness::Consistency { outer, inner } => {
                c(outer).is_subset(inner) && inner.is_subset(outer) && c(inner) != c(outer)
            }
            Witness::PathIndependence { left, right } => {
                c(left.union(right)) != c(c(left).union(right))
            }
            Witness::Lad { smaller, larger } => {
                smaller.is_subset(larger) && c(smaller).len() > c(larger).len()
            }
            Witness::Disagreement {
                set,
                expected,
                actual,
            } => c(set) == expected && expected != actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl AxiomReport {
    pub(crate) fn from_witness(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomReport {
            axiom,
            holds: witness.is_none(),
            witness,
        }
    }
}

pub fn check_substitutability(cf: &ChoiceFunction, limits: &Limits) -> Result<AxiomReport> {
    let table = cf.table(limits)?;
    let witness = all_subsets(cf.universe()).find_map(|set| {
        let chosen_set = table[set.bits() as usize];
        chosen_set.iter().find_map(|chosen| {
            set.without(chosen).iter().find_map(|removed| {
                let smaller = table[set.without(removed).bits() as usize];
                (!smaller.contains(chosen)).then_some(Witness::Substitutability {
                    set,
                    chosen,
                    removed,
                })
            })
        })
    });
    Ok(AxiomReport::from_witness(Axiom::Substitutability, witness))
}

pub fn check_consistency(cf: &ChoiceFunction, limits: &Limits) -> Result<AxiomReport> {
    let table = cf.table(limits)?;
    let witness = all_subsets(cf.universe()).find_map(|outer| {
        let chosen = table[outer.bits() as usize];
        outer.difference(chosen).subsets().find_map(|extra| {
            let inner = chosen.union(extra);
            (table[inner.bits() as usize] != chosen)
                .then_some(Witness::Consistency { outer, inner })
        })
    });
    Ok(AxiomReport::from_witness(Axiom::Consistency, witness))
}

/// Checks `C(W ∪ W′) = C(C(W) ∪ W′)` over every ordered pair of subsets.
pub fn check_path_independence(cf: &ChoiceFunction, limits: &Limits) -> Result<AxiomReport> {
    let table = cf.table(limits)?;
    let c = |s: WorkerSet| table[s.bits() as usize];
    let witness = all_subsets(cf.universe()).find_map(|left| {
        let chosen = c(left);
        all_subsets(cf.universe()).find_map(|right| {
            (c(left.union(right)) != c(chosen.union(right)))
                .then_some(Witness::PathIndependence { left, right })
        })
    });
    Ok(AxiomReport::from_witness(Axiom::PathIndependence, witness))
}

/// Cardinality monotonicity over nested pairs. Checking single-worker
/// removals suffices: any nested pair is joined by such a chain.
pub fn check_lad(cf: &ChoiceFunction, limits: &Limits) -> Result<AxiomReport> {
    let table = cf.table(limits)?;
    let witness = all_subsets(cf.universe()).find_map(|larger| {
        let n = table[larger.bits() as usize].len();
        larger.iter().find_map(|w| {
            let smaller = larger.without(w);
            (table[smaller.bits() as usize].len() > n).then_some(Witness::Lad { smaller, larger })
        })
    });
    Ok(AxiomReport::from_witness(Axiom::Lad, witness))
}
