use std::collections::HashMap;

use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::ids::{FirmId, WorkerId, WorkerSet};
use crate::limits::MAX_WORKERS;
use crate::prefs::WorkerPreference;

/// Firms with choice functions on one side, workers with strict
/// preferences over firms on the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManyToOneMarket {
    workers: Vec<String>,
    firms: Vec<String>,
    choices: Vec<ChoiceFunction>,
    prefs: Vec<WorkerPreference>,
}

fn index_labels(labels: &[String], kind: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), i).is_some() {
            return Err(Error::validation(format!("duplicate {kind} label {l:?}")));
        }
    }
    Ok(map)
}

impl ManyToOneMarket {
    pub fn new(
        workers: Vec<String>,
        firms: Vec<String>,
        choices: Vec<ChoiceFunction>,
        prefs: Vec<WorkerPreference>,
    ) -> Result<Self> {
        if workers.len() > MAX_WORKERS {
            return Err(Error::validation(format!(
                "{} workers exceeds the supported {MAX_WORKERS}",
                workers.len()
            )));
        }
        index_labels(&workers, "worker")?;
        index_labels(&firms, "firm")?;
        if choices.len() != firms.len() {
            return Err(Error::validation(format!(
                "{} firms but {} choice functions",
                firms.len(),
                choices.len()
            )));
        }
        if prefs.len() != workers.len() {
            return Err(Error::validation(format!(
                "{} workers but {} preference lists",
                workers.len(),
                prefs.len()
            )));
        }
        for (i, cf) in choices.iter().enumerate() {
            if cf.universe() != workers.len() {
                return Err(Error::validation(format!(
                    "choice function of firm {:?} is over {} workers, market has {}",
                    firms[i],
                    cf.universe(),
                    workers.len()
                )));
            }
        }
        for (w, p) in prefs.iter().enumerate() {
            if let Some(f) = p.firms().iter().find(|f| f.0 >= firms.len()) {
                return Err(Error::validation(format!(
                    "worker {:?} ranks unknown firm index {}",
                    workers[w], f.0
                )));
            }
        }
        Ok(ManyToOneMarket {
            workers,
            firms,
            choices,
            prefs,
        })
    }

    pub fn worker_count(&self) -> usize {
        self.workers.len()
    }

    pub fn firm_count(&self) -> usize {
        self.firms.len()
    }

    pub fn worker_labels(&self) -> &[String] {
        &self.workers
    }

    pub fn firm_labels(&self) -> &[String] {
        &self.firms
    }

    pub fn worker_label(&self, w: WorkerId) -> &str {
        &self.workers[w.0]
    }

    pub fn firm_label(&self, f: FirmId) -> &str {
        &self.firms[f.0]
    }

    pub fn worker_by_label(&self, label: &str) -> Option<WorkerId> {
        self.workers.iter().position(|l| l == label).map(WorkerId)
    }

    pub fn firm_by_label(&self, label: &str) -> Option<FirmId> {
        self.firms.iter().position(|l| l == label).map(FirmId)
    }

    pub fn choice(&self, f: FirmId) -> &ChoiceFunction {
        &self.choices[f.0]
    }

    pub fn choices(&self) -> &[ChoiceFunction] {
        &self.choices
    }

    pub fn pref(&self, w: WorkerId) -> &WorkerPreference {
        &self.prefs[w.0]
    }

    pub fn prefs(&self) -> &[WorkerPreference] {
        &self.prefs
    }

    pub fn all_workers(&self) -> WorkerSet {
        WorkerSet::full(self.workers.len())
    }

    pub fn worker_ids(&self) -> impl Iterator<Item = WorkerId> {
        (0..self.workers.len()).map(WorkerId)
    }

    pub fn firm_ids(&self) -> impl Iterator<Item = FirmId> {
        (0..self.firms.len()).map(FirmId)
    }

    /// Resolves labels to a worker set.
    pub fn worker_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<WorkerSet> {
        labels
            .iter()
            .map(|l| {
                self.worker_by_label(l.as_ref())
                    .ok_or_else(|| Error::validation(format!("unknown worker {:?}", l.as_ref())))
            })
            .collect()
    }

    pub fn set_labels(&self, set: WorkerSet) -> Vec<String> {
        set.iter().map(|w| self.workers[w.0].clone()).collect()
    }
}
