//! JSON market files.
//!
//! ```json
//! {
//!   "workers": ["w1", "w2"],
//!   "firms": [
//!     {"id": "a", "choice": {"kind": "subset_ranking", "payload": [["w1", "w2"], ["w1"]]}},
//!     {"id": "b", "choice": {"kind": "orders", "payload": [["w2", "w1"]]}},
//!     {"id": "c", "choice": {"kind": "table", "payload": [{"set": ["w1"], "choice": ["w1"]}]}}
//!   ],
//!   "worker_prefs": {"w1": ["a", "b"], "w2": ["b"]},
//!   "copy_indexing": {"a": [["w1", "w2"], ["w2", "w1"]]}
//! }
//! ```
//!
//! Table entries that are not listed choose the empty set. A worker with
//! no `worker_prefs` entry finds every firm unacceptable. `copy_indexing`
//! fixes the copy order of a firm's decomposition and must list exactly the
//! decomposition's orders.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::choice::{ChoiceFunction, ChoiceRepr};
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::ids::{FirmId, WorkerId, WorkerSet};
use crate::limits::Limits;
use crate::market::ManyToOneMarket;
use crate::prefs::{LinearOrder, SubsetRanking, WorkerPreference};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketFile {
    pub workers: Vec<String>,
    pub firms: Vec<FirmEntry>,
    #[serde(default)]
    pub worker_prefs: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_indexing: Option<BTreeMap<String, Vec<Vec<String>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirmEntry {
    pub id: String,
    pub choice: ChoiceSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum ChoiceSpec {
    SubsetRanking(Vec<Vec<String>>),
    Orders(Vec<Vec<String>>),
    Table(Vec<TableEntry>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub set: Vec<String>,
    pub choice: Vec<String>,
}

/// A parsed market together with any explicit copy indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedMarket {
    pub market: ManyToOneMarket,
    /// Per firm, the explicit order list when one was given.
    pub copy_indexing: Vec<Option<Vec<LinearOrder>>>,
}

impl LoadedMarket {
    pub fn decompose(&self, limits: &Limits) -> Result<Decomposition> {
        Decomposition::of_market(&self.market, &self.copy_indexing, limits)
    }

    /// Drops the explicit indexing so decomposition falls back to
    /// lexicographic copy order.
    pub fn without_indexing(&self) -> LoadedMarket {
        LoadedMarket {
            market: self.market.clone(),
            copy_indexing: vec![None; self.market.firm_count()],
        }
    }
}

fn lookup(map: &BTreeMap<&str, usize>, label: &str, kind: &str) -> Result<usize> {
    map.get(label)
        .copied()
        .ok_or_else(|| Error::validation(format!("unknown {kind} {label:?}")))
}

fn label_index(labels: &[String]) -> BTreeMap<&str, usize> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect()
}

impl MarketFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::validation(format!("malformed market file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("market file serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<LoadedMarket> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)?.resolve()
    }

    pub fn resolve(&self) -> Result<LoadedMarket> {
        let workers = label_index(&self.workers);
        let firm_labels: Vec<String> = self.firms.iter().map(|f| f.id.clone()).collect();
        let firms = label_index(&firm_labels);
        let n = self.workers.len();

        let set = |labels: &[String]| -> Result<WorkerSet> {
            let mut s = WorkerSet::EMPTY;
            for l in labels {
                let w = WorkerId(lookup(&workers, l, "worker")?);
                if s.contains(w) {
                    return Err(Error::validation(format!("worker {l:?} listed twice in a set")));
                }
                s.insert(w);
            }
            Ok(s)
        };
        let order = |labels: &[String]| -> Result<LinearOrder> {
            LinearOrder::new(
                labels
                    .iter()
                    .map(|l| lookup(&workers, l, "worker").map(WorkerId))
                    .collect::<Result<_>>()?,
            )
        };

        let mut choices = Vec::with_capacity(self.firms.len());
        for entry in &self.firms {
            let cf = match &entry.choice {
                ChoiceSpec::SubsetRanking(sets) => ChoiceFunction::from_ranking(
                    n,
                    SubsetRanking::new(sets.iter().map(|s| set(s)).collect::<Result<_>>()?)?,
                )?,
                ChoiceSpec::Orders(orders) => ChoiceFunction::from_orders(
                    n,
                    orders.iter().map(|o| order(o)).collect::<Result<_>>()?,
                )?,
                ChoiceSpec::Table(entries) => {
                    if n >= usize::BITS as usize - 1 {
                        return Err(Error::validation("table universe too large"));
                    }
                    let mut values = vec![WorkerSet::EMPTY; 1usize << n];
                    let mut seen = vec![false; 1usize << n];
                    for e in entries {
                        let s = set(&e.set)?;
                        let idx = s.bits() as usize;
                        if std::mem::replace(&mut seen[idx], true) {
                            return Err(Error::validation(format!(
                                "table of firm {:?} lists {:?} twice",
                                entry.id, e.set
                            )));
                        }
                        values[idx] = set(&e.choice)?;
                    }
                    ChoiceFunction::from_table(n, values)?
                }
            };
            choices.push(cf);
        }

        let mut prefs = vec![WorkerPreference::default(); n];
        for (label, list) in &self.worker_prefs {
            let w = lookup(&workers, label, "worker")?;
            prefs[w] = WorkerPreference::new(
                list.iter()
                    .map(|f| lookup(&firms, f, "firm").map(FirmId))
                    .collect::<Result<_>>()?,
            )?;
        }

        let market = ManyToOneMarket::new(self.workers.clone(), firm_labels.clone(), choices, prefs)?;

        let mut copy_indexing = vec![None; self.firms.len()];
        for (label, orders) in self.copy_indexing.iter().flatten() {
            let f = lookup(&firms, label, "firm")?;
            copy_indexing[f] = Some(orders.iter().map(|o| order(o)).collect::<Result<_>>()?);
        }
        Ok(LoadedMarket {
            market,
            copy_indexing,
        })
    }

    pub fn from_market(loaded: &LoadedMarket) -> Self {
        let m = &loaded.market;
        let labels = |s: WorkerSet| m.set_labels(s);
        let order_labels = |o: &LinearOrder| -> Vec<String> {
            o.workers().iter().map(|&w| m.worker_label(w).to_owned()).collect()
        };
        let firms = m
            .firm_ids()
            .map(|f| {
                let choice = match m.choice(f).repr() {
                    ChoiceRepr::Ranking(r) => {
                        ChoiceSpec::SubsetRanking(r.sets().iter().map(|&s| labels(s)).collect())
                    }
                    ChoiceRepr::Orders(os) => {
                        ChoiceSpec::Orders(os.iter().map(order_labels).collect())
                    }
                    ChoiceRepr::Table(values) => ChoiceSpec::Table(
                        values
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_empty())
                            .map(|(mask, &c)| TableEntry {
                                set: labels(WorkerSet::from_bits(mask as u64)),
                                choice: labels(c),
                            })
                            .collect(),
                    ),
                };
                FirmEntry {
                    id: m.firm_label(f).to_owned(),
                    choice,
                }
            })
            .collect();
        let worker_prefs = m
            .worker_ids()
            .map(|w| {
                (
                    m.worker_label(w).to_owned(),
                    m.pref(w)
                        .firms()
                        .iter()
                        .map(|&f| m.firm_label(f).to_owned())
                        .collect(),
                )
            })
            .collect();
        let explicit: BTreeMap<String, Vec<Vec<String>>> = loaded
            .copy_indexing
            .iter()
            .enumerate()
            .filter_map(|(i, o)| {
                o.as_ref().map(|orders| {
                    (
                        m.firm_label(FirmId(i)).to_owned(),
                        orders.iter().map(order_labels).collect(),
                    )
                })
            })
            .collect();
        MarketFile {
            workers: m.worker_labels().to_vec(),
            firms,
            worker_prefs,
            copy_indexing: (!explicit.is_empty()).then_some(explicit),
        }
    }
}
