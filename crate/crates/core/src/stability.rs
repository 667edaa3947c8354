//! Stability in the many-to-one market, and classical stability and
//! stability* in the copy market, with exhaustive enumerators.
//!
//! Checks report the first violation in a fixed scan order:
//! worker blocks by worker index, then firm (or copy) blocks by firm index
//! (or slot), then envy between sibling copies by slot, then pair blocks.
//! Many-to-one pair blocks are scanned by worker, then firm; copy-market
//! pair blocks by slot, then worker.

use serde::Serialize;

use crate::associated::OneToOneMarket;
use crate::error::{Error, Result};
use crate::ids::{FirmId, WorkerId, WorkerSet};
use crate::limits::Limits;
use crate::market::ManyToOneMarket;
use crate::matching::{Matching11, MatchingM1};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport<V> {
    pub stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<V>,
}

impl<V> StabilityReport<V> {
    fn from_violation(violation: Option<V>) -> Self {
        StabilityReport {
            stable: violation.is_none(),
            violation,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ManyToOneViolation {
    /// The worker finds its firm unacceptable.
    WorkerBlock { worker: WorkerId, firm: FirmId },
    /// The firm would drop some of its workers: `C(μ(φ)) ≠ μ(φ)`.
    FirmBlock { firm: FirmId },
    /// `w ∈ C(μ(φ) ∪ {w})` and `φ P_w μ(w)`.
    PairBlock { worker: WorkerId, firm: FirmId },
}

impl ManyToOneViolation {
    pub fn replays(&self, m1: &ManyToOneMarket, mu: &MatchingM1) -> bool {
        match *self {
            ManyToOneViolation::WorkerBlock { worker, firm } => {
                mu.firm_of(worker) == Some(firm) && !m1.pref(worker).is_acceptable(firm)
            }
            ManyToOneViolation::FirmBlock { firm } => {
                let held = mu.workers_of(firm);
                m1.choice(firm).pick(held) != held
            }
            ManyToOneViolation::PairBlock { worker, firm } => pair_blocks_m1(m1, mu, worker, firm),
        }
    }
}

fn pair_blocks_m1(m1: &ManyToOneMarket, mu: &MatchingM1, w: WorkerId, f: FirmId) -> bool {
    let current = mu.firm_of(w);
    current != Some(f)
        && m1.pref(w).prefers(Some(f), current)
        && m1.choice(f).pick(mu.workers_of(f).with(w)).contains(w)
}

fn check_m1_shape(m1: &ManyToOneMarket, mu: &MatchingM1) -> Result<()> {
    if mu.worker_count() != m1.worker_count() || mu.firm_count() != m1.firm_count() {
        return Err(Error::validation(format!(
            "matching is over {} workers and {} firms, market has {} and {}",
            mu.worker_count(),
            mu.firm_count(),
            m1.worker_count(),
            m1.firm_count()
        )));
    }
    Ok(())
}

pub fn check_stable_m1(
    m1: &ManyToOneMarket,
    mu: &MatchingM1,
) -> Result<StabilityReport<ManyToOneViolation>> {
    check_m1_shape(m1, mu)?;
    Ok(StabilityReport::from_violation(first_m1_violation(m1, mu)))
}

fn first_m1_violation(m1: &ManyToOneMarket, mu: &MatchingM1) -> Option<ManyToOneViolation> {
    for w in m1.worker_ids() {
        if let Some(f) = mu.firm_of(w) {
            if !m1.pref(w).is_acceptable(f) {
                return Some(ManyToOneViolation::WorkerBlock { worker: w, firm: f });
            }
        }
    }
    let sets = mu.firm_sets();
    for f in m1.firm_ids() {
        if m1.choice(f).pick(sets[f.0]) != sets[f.0] {
            return Some(ManyToOneViolation::FirmBlock { firm: f });
        }
    }
    for w in m1.worker_ids() {
        let current = mu.firm_of(w);
        for f in m1.firm_ids() {
            if current != Some(f)
                && m1.pref(w).prefers(Some(f), current)
                && m1.choice(f).pick(sets[f.0].with(w)).contains(w)
            {
                return Some(ManyToOneViolation::PairBlock { worker: w, firm: f });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum StarViolation {
    /// The worker finds its copy unacceptable.
    WorkerBlock { worker: WorkerId, copy: usize },
    /// The copy finds its worker unacceptable.
    FirmBlock { copy: usize, worker: WorkerId },
    /// A sibling holds a worker the copy ranks above its own match.
    CopyEnvy { copy: usize, sibling: usize },
    /// The worker prefers the copy, and the copy ranks the worker above
    /// the match of every sibling not already holding that worker.
    PairBlock { copy: usize, worker: WorkerId },
}

impl StarViolation {
    pub fn replays(&self, market: &OneToOneMarket, m: &Matching11) -> bool {
        match *self {
            StarViolation::WorkerBlock { worker, copy } => {
                m.copy_of(worker) == Some(copy) && !market.worker_accepts(worker, copy)
            }
            StarViolation::FirmBlock { copy, worker } => {
                m.worker_of(copy) == Some(worker) && !market.order(copy).is_acceptable(worker)
            }
            StarViolation::CopyEnvy { copy, sibling } => envies(market, m, copy, sibling),
            StarViolation::PairBlock { copy, worker } => star_pair_blocks(market, m, copy, worker),
        }
    }
}

fn envies(market: &OneToOneMarket, m: &Matching11, copy: usize, sibling: usize) -> bool {
    let order = market.order(copy);
    let own = m.worker_of(copy);
    market.firm_of(copy) == market.firm_of(sibling)
        && own.is_some()
        && order.prefers(own, None)
        && order.prefers(m.worker_of(sibling), own)
}

// The sibling holding `w` itself is skipped: `w` parked at a later copy
// still blocks with an earlier copy it tops.
fn star_pair_blocks(market: &OneToOneMarket, m: &Matching11, copy: usize, w: WorkerId) -> bool {
    let order = market.order(copy);
    market.worker_prefers(w, Some(copy), m.copy_of(w))
        && market
            .siblings(market.firm_of(copy))
            .filter(|&s| m.worker_of(s) != Some(w))
            .all(|s| order.prefers(Some(w), m.worker_of(s)))
}

pub fn check_stable_star(
    market: &OneToOneMarket,
    m: &Matching11,
) -> Result<StabilityReport<StarViolation>> {
    m.check_shape(market)?;
    Ok(StabilityReport::from_violation(first_star_violation(market, m)))
}

fn first_star_violation(market: &OneToOneMarket, m: &Matching11) -> Option<StarViolation> {
    for w in market.worker_ids() {
        if let Some(copy) = m.copy_of(w) {
            if !market.worker_accepts(w, copy) {
                return Some(StarViolation::WorkerBlock { worker: w, copy });
            }
        }
    }
    for copy in 0..market.copy_count() {
        if let Some(worker) = m.worker_of(copy) {
            if !market.order(copy).is_acceptable(worker) {
                return Some(StarViolation::FirmBlock { copy, worker });
            }
        }
    }
    for copy in 0..market.copy_count() {
        for sibling in market.siblings(market.firm_of(copy)) {
            if envies(market, m, copy, sibling) {
                return Some(StarViolation::CopyEnvy { copy, sibling });
            }
        }
    }
    for copy in 0..market.copy_count() {
        for &worker in market.order(copy).workers() {
            if star_pair_blocks(market, m, copy, worker) {
                return Some(StarViolation::PairBlock { copy, worker });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ClassicalViolation {
    WorkerBlock { worker: WorkerId, copy: usize },
    FirmBlock { copy: usize, worker: WorkerId },
    /// `w P_ij λ(f_ij)` and `f_ij P̄_w λ(w)`.
    PairBlock { copy: usize, worker: WorkerId },
}

impl ClassicalViolation {
    pub fn replays(&self, market: &OneToOneMarket, m: &Matching11) -> bool {
        match *self {
            ClassicalViolation::WorkerBlock { worker, copy } => {
                m.copy_of(worker) == Some(copy) && !market.worker_accepts(worker, copy)
            }
            ClassicalViolation::FirmBlock { copy, worker } => {
                m.worker_of(copy) == Some(worker) && !market.order(copy).is_acceptable(worker)
            }
            ClassicalViolation::PairBlock { copy, worker } => {
                classical_pair_blocks(market, m, copy, worker)
            }
        }
    }
}

fn classical_pair_blocks(market: &OneToOneMarket, m: &Matching11, copy: usize, w: WorkerId) -> bool {
    market.order(copy).prefers(Some(w), m.worker_of(copy))
        && market.worker_prefers(w, Some(copy), m.copy_of(w))
}

pub fn check_stable_classical_11(
    market: &OneToOneMarket,
    m: &Matching11,
) -> Result<StabilityReport<ClassicalViolation>> {
    m.check_shape(market)?;
    Ok(StabilityReport::from_violation(first_classical_violation(
        market, m,
    )))
}

fn first_classical_violation(market: &OneToOneMarket, m: &Matching11) -> Option<ClassicalViolation> {
    for w in market.worker_ids() {
        if let Some(copy) = m.copy_of(w) {
            if !market.worker_accepts(w, copy) {
                return Some(ClassicalViolation::WorkerBlock { worker: w, copy });
            }
        }
    }
    for copy in 0..market.copy_count() {
        if let Some(worker) = m.worker_of(copy) {
            if !market.order(copy).is_acceptable(worker) {
                return Some(ClassicalViolation::FirmBlock { copy, worker });
            }
        }
    }
    for copy in 0..market.copy_count() {
        for &worker in market.order(copy).workers() {
            if classical_pair_blocks(market, m, copy, worker) {
                return Some(ClassicalViolation::PairBlock { copy, worker });
            }
        }
    }
    None
}

/// Whether enumerators restrict candidates to mutually acceptable pairs.
/// Pruning is sound for every concept here: an unacceptable match is a
/// worker or firm block under each of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    #[default]
    Acceptable,
    None,
}

fn enumeration_cap(what: &'static str, options: &[usize], limits: &Limits) -> Result<()> {
    let mut total: u128 = 1;
    for &o in options {
        total = total.saturating_mul(o as u128);
        if total > limits.enumeration {
            return Err(Error::CapExceeded {
                what,
                size: total,
                cap: limits.enumeration,
            });
        }
    }
    Ok(())
}

/// All stable many-to-one matchings, sorted.
pub fn enumerate_stable_m1(m1: &ManyToOneMarket, limits: &Limits) -> Result<Vec<MatchingM1>> {
    enumeration_cap(
        "many-to-one candidate matchings",
        &vec![m1.firm_count() + 1; m1.worker_count()],
        limits,
    )?;
    let options: Vec<Vec<Option<FirmId>>> = m1
        .worker_ids()
        .map(|w| {
            std::iter::once(None)
                .chain(m1.pref(w).firms().iter().copied().map(Some))
                .collect()
        })
        .collect();
    let mut found = Vec::new();
    let mut digits = vec![0usize; options.len()];
    loop {
        let of_worker = digits.iter().zip(&options).map(|(&d, o)| o[d]).collect();
        let mu = MatchingM1::new(m1.firm_count(), of_worker)?;
        if first_m1_violation(m1, &mu).is_none() {
            found.push(mu);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == digits.len() {
                found.sort();
                return Ok(found);
            }
            digits[i] += 1;
            if digits[i] < options[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn enumerate_11<F>(
    market: &OneToOneMarket,
    pruning: Pruning,
    limits: &Limits,
    mut keep: F,
) -> Result<Vec<Matching11>>
where
    F: FnMut(&Matching11) -> bool,
{
    let options: Vec<Vec<usize>> = market
        .worker_ids()
        .map(|w| match pruning {
            Pruning::Acceptable => market
                .lifted(w)
                .iter()
                .copied()
                .filter(|&s| market.order(s).is_acceptable(w))
                .collect(),
            Pruning::None => (0..market.copy_count()).collect(),
        })
        .collect();
    let sizes: Vec<usize> = options.iter().map(|o| o.len() + 1).collect();
    enumeration_cap("one-to-one candidate matchings", &sizes, limits)?;

    let mut found = Vec::new();
    let mut current = Matching11::empty(market.worker_count(), market.copy_count());
    fill(0, &options, &mut current, &mut found, &mut keep);
    found.sort();
    Ok(found)
}

fn fill<F: FnMut(&Matching11) -> bool>(
    w: usize,
    options: &[Vec<usize>],
    current: &mut Matching11,
    found: &mut Vec<Matching11>,
    keep: &mut F,
) {
    if w == options.len() {
        if keep(current) {
            found.push(current.clone());
        }
        return;
    }
    fill(w + 1, options, current, found, keep);
    for &slot in &options[w] {
        if current.worker_of(slot).is_none() {
            current.assign(slot, WorkerId(w));
            fill(w + 1, options, current, found, keep);
            current.unassign_copy(slot);
        }
    }
}

pub fn enumerate_stable_star(market: &OneToOneMarket, limits: &Limits) -> Result<Vec<Matching11>> {
    enumerate_stable_star_with(market, Pruning::Acceptable, limits)
}

pub fn enumerate_stable_star_with(
    market: &OneToOneMarket,
    pruning: Pruning,
    limits: &Limits,
) -> Result<Vec<Matching11>> {
    match pruning {
        Pruning::None => enumerate_11(market, pruning, limits, |m| {
            first_star_violation(market, m).is_none()
        }),
        Pruning::Acceptable => StarSearch::new(market, limits).run(),
    }
}

/// Pruned stable* search. Workers are first spread over firms (or left
/// unmatched); each firm's workers are then placed on copies whose maximum
/// over that set they are, and a firm's copies are checked for pair blocks
/// as soon as the firm is complete. Every node visited counts against the
/// enumeration cap.
struct StarSearch<'a> {
    market: &'a OneToOneMarket,
    cap: u128,
    visited: u128,
    firm_of_worker: Vec<Option<FirmId>>,
    current: Matching11,
    found: Vec<Matching11>,
}

impl<'a> StarSearch<'a> {
    fn new(market: &'a OneToOneMarket, limits: &Limits) -> Self {
        StarSearch {
            market,
            cap: limits.enumeration,
            visited: 0,
            firm_of_worker: vec![None; market.worker_count()],
            current: Matching11::empty(market.worker_count(), market.copy_count()),
            found: Vec::new(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::CapExceeded {
                what: "stable* search nodes",
                size: self.visited,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn run(mut self) -> Result<Vec<Matching11>> {
        let market = self.market;
        let options: Vec<Vec<Option<FirmId>>> = market
            .worker_ids()
            .map(|w| {
                let mut firms: Vec<Option<FirmId>> = vec![None];
                for &s in market.lifted(w) {
                    let f = Some(market.firm_of(s));
                    if market.order(s).is_acceptable(w) && !firms.contains(&f) {
                        firms.push(f);
                    }
                }
                firms
            })
            .collect();
        let mut digits = vec![0usize; options.len()];
        loop {
            self.tick()?;
            for (w, (&d, o)) in digits.iter().zip(&options).enumerate() {
                self.firm_of_worker[w] = o[d];
            }
            self.place_firm(0)?;
            let mut i = 0;
            loop {
                if i == digits.len() {
                    self.found.sort();
                    return Ok(self.found);
                }
                digits[i] += 1;
                if digits[i] < options[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    fn place_firm(&mut self, firm: usize) -> Result<()> {
        let market = self.market;
        if firm == market.firm_count() {
            self.tick()?;
            if first_star_violation(market, &self.current).is_none() {
                self.found.push(self.current.clone());
            }
            return Ok(());
        }
        let f = FirmId(firm);
        let members: Vec<WorkerId> = market
            .worker_ids()
            .filter(|w| self.firm_of_worker[w.0] == Some(f))
            .collect();
        let set: WorkerSet = members.iter().copied().collect();
        let mut slots = Vec::with_capacity(members.len());
        for &w in &members {
            let here: Vec<usize> = market
                .siblings(f)
                .filter(|&s| market.order(s).max_in(set) == Some(w))
                .collect();
            if here.is_empty() {
                return Ok(());
            }
            slots.push(here);
        }
        self.place_worker(f, &members, &slots, 0)
    }

    fn place_worker(
        &mut self,
        f: FirmId,
        members: &[WorkerId],
        slots: &[Vec<usize>],
        k: usize,
    ) -> Result<()> {
        if k == members.len() {
            self.tick()?;
            if !self.firm_has_pair_block(f) {
                self.place_firm(f.0 + 1)?;
            }
            return Ok(());
        }
        for &s in &slots[k] {
            if self.current.worker_of(s).is_none() {
                self.current.assign(s, members[k]);
                self.place_worker(f, members, slots, k + 1)?;
                self.current.unassign_copy(s);
            }
        }
        Ok(())
    }

    /// Pair blocks on `f`'s copies. A worker headed for a firm not yet
    /// placed is stood in for by that firm's first copy, which the worker
    /// ranks exactly as it ranks the firm.
    fn firm_has_pair_block(&self, f: FirmId) -> bool {
        let market = self.market;
        let m = &self.current;
        market.siblings(f).any(|copy| {
            let order = market.order(copy);
            order.workers().iter().any(|&w| {
                let held = match self.firm_of_worker[w.0] {
                    None => None,
                    Some(g) if g == f => m.copy_of(w),
                    Some(g) => Some(market.siblings(g).start),
                };
                market.worker_prefers(w, Some(copy), held)
                    && market
                        .siblings(f)
                        .filter(|&s| m.worker_of(s) != Some(w))
                        .all(|s| order.prefers(Some(w), m.worker_of(s)))
            })
        })
    }
}

pub fn enumerate_stable_classical_11(
    market: &OneToOneMarket,
    limits: &Limits,
) -> Result<Vec<Matching11>> {
    enumerate_stable_classical_11_with(market, Pruning::Acceptable, limits)
}

pub fn enumerate_stable_classical_11_with(
    market: &OneToOneMarket,
    pruning: Pruning,
    limits: &Limits,
) -> Result<Vec<Matching11>> {
    enumerate_11(market, pruning, limits, |m| {
        first_classical_violation(market, m).is_none()
    })
}
