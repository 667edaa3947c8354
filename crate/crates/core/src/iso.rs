//! The bijection between stable many-to-one matchings and stable* copy
//! matchings, and the rural-hospital invariants it carries.

use serde::Serialize;

use crate::associated::OneToOneMarket;
use crate::axioms::check_lad;
use crate::error::{Error, Result};
use crate::ids::{FirmId, WorkerId, WorkerSet};
use crate::limits::Limits;
use crate::market::ManyToOneMarket;
use crate::matching::{Matching11, MatchingM1};
use crate::stability::{check_stable_m1, check_stable_star, enumerate_stable_m1, enumerate_stable_star};

/// `μ(φ_i)` is the set of workers held by copies of `φ_i`.
pub fn map_t(market: &OneToOneMarket, lambda: &Matching11) -> Result<MatchingM1> {
    if lambda.copy_count() != market.copy_count() || lambda.worker_count() != market.worker_count() {
        return Err(Error::validation("matching does not belong to this copy market"));
    }
    let mut sets = vec![WorkerSet::EMPTY; market.firm_count()];
    for (slot, w) in lambda.matched_pairs() {
        let f = market.firm_of(slot).0;
        if sets[f].contains(w) {
            return Err(Error::validation(format!("worker {} held twice by firm {f}", w.0)));
        }
        sets[f].insert(w);
    }
    MatchingM1::from_firm_sets(market.worker_count(), &sets)
}

/// Each `w ∈ μ(φ_i)` goes to the lowest-index copy of `φ_i` whose best
/// worker in `μ(φ_i)` is `w`; every other copy stays unmatched.
pub fn map_t_inv(market: &OneToOneMarket, mu: &MatchingM1) -> Result<Matching11> {
    if mu.worker_count() != market.worker_count() || mu.firm_count() != market.firm_count() {
        return Err(Error::validation("matching does not belong to this market"));
    }
    let mut of_copy = vec![None; market.copy_count()];
    for (f, held) in mu.firm_sets().into_iter().enumerate() {
        let slots = market.siblings(FirmId(f));
        for w in held.iter() {
            let slot = slots
                .clone()
                .find(|&s| market.order(s).max_in(held) == Some(w))
                .ok_or_else(|| {
                    Error::NotFirmRational(format!(
                        "worker {:?} is not the best of firm {:?}'s set under any copy",
                        market.worker_label(w),
                        market.firm_labels()[f]
                    ))
                })?;
            of_copy[slot] = Some(w);
        }
    }
    Matching11::from_copy_side(market.worker_count(), of_copy)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IsomorphismFailure {
    /// `T(λ)` is not stable in the many-to-one market.
    ImageUnstable { star: usize },
    /// `T⁻¹(μ)` is not stable* (or undefined).
    PreimageUnstable { stable: usize, reason: String },
    /// `T⁻¹(T(λ)) ≠ λ`.
    NotLeftInverse { star: usize },
    /// `T(T⁻¹(μ)) ≠ μ`.
    NotRightInverse { stable: usize },
    CountMismatch { star: usize, stable: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismReport {
    pub holds: bool,
    pub stable_star: Vec<Matching11>,
    pub stable: Vec<MatchingM1>,
    /// `(λ, T(λ))` for every stable* `λ`.
    pub forward: Vec<(Matching11, MatchingM1)>,
    /// `(μ, T⁻¹(μ))` for every stable `μ` where `T⁻¹` is defined.
    pub backward: Vec<(MatchingM1, Matching11)>,
    pub failures: Vec<IsomorphismFailure>,
}

pub fn verify_isomorphism(
    m1: &ManyToOneMarket,
    market: &OneToOneMarket,
    limits: &Limits,
) -> Result<IsomorphismReport> {
    let stable_star = enumerate_stable_star(market, limits)?;
    let stable = enumerate_stable_m1(m1, limits)?;
    let mut failures = Vec::new();

    let mut forward = Vec::with_capacity(stable_star.len());
    for (i, lambda) in stable_star.iter().enumerate() {
        let mu = map_t(market, lambda)?;
        if !check_stable_m1(m1, &mu)?.is_stable() {
            failures.push(IsomorphismFailure::ImageUnstable { star: i });
        }
        match map_t_inv(market, &mu) {
            Ok(back) if &back == lambda => {}
            _ => failures.push(IsomorphismFailure::NotLeftInverse { star: i }),
        }
        forward.push((lambda.clone(), mu));
    }

    let mut backward = Vec::with_capacity(stable.len());
    for (i, mu) in stable.iter().enumerate() {
        let lambda = match map_t_inv(market, mu) {
            Ok(l) => l,
            Err(e) => {
                failures.push(IsomorphismFailure::PreimageUnstable {
                    stable: i,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if let Some(v) = check_stable_star(market, &lambda)?.violation {
            failures.push(IsomorphismFailure::PreimageUnstable {
                stable: i,
                reason: format!("{v:?}"),
            });
        }
        if map_t(market, &lambda)? != *mu {
            failures.push(IsomorphismFailure::NotRightInverse { stable: i });
        }
        backward.push((mu.clone(), lambda));
    }

    if stable_star.len() != stable.len() {
        failures.push(IsomorphismFailure::CountMismatch {
            star: stable_star.len(),
            stable: stable.len(),
        });
    }

    Ok(IsomorphismReport {
        holds: failures.is_empty(),
        stable_star,
        stable,
        forward,
        backward,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhtReport {
    /// Per firm, whether its choice function satisfies the law of
    /// aggregate demand.
    pub lad: Vec<bool>,
    /// Per stable* matching, per firm, the number of matched copies.
    pub copy_counts: Vec<Vec<usize>>,
    /// Per stable matching, per firm, `|μ(φ)|`.
    pub firm_counts: Vec<Vec<usize>>,
    /// Per stable matching, per worker, whether the worker is matched.
    pub worker_matched: Vec<Vec<bool>>,
    /// `false` when some firm violates the law of aggregate demand; the
    /// report is then informational only.
    pub premise_holds: bool,
    pub copy_counts_constant: bool,
    pub firm_counts_constant: bool,
    pub worker_status_constant: bool,
}

impl RhtReport {
    /// Fails only when the premise holds and some count varies.
    pub fn holds(&self) -> bool {
        !self.premise_holds
            || (self.copy_counts_constant && self.firm_counts_constant && self.worker_status_constant)
    }
}

fn constant<T: PartialEq>(rows: &[T]) -> bool {
    rows.windows(2).all(|w| w[0] == w[1])
}

pub fn rural_hospital_check(
    m1: &ManyToOneMarket,
    market: &OneToOneMarket,
    limits: &Limits,
) -> Result<RhtReport> {
    let lad = m1
        .choices()
        .iter()
        .map(|cf| check_lad(cf, limits).map(|r| r.holds))
        .collect::<Result<Vec<_>>>()?;
    let stable_star = enumerate_stable_star(market, limits)?;
    let stable = enumerate_stable_m1(m1, limits)?;

    let copy_counts: Vec<Vec<usize>> = stable_star
        .iter()
        .map(|lambda| {
            m1.firm_ids()
                .map(|f| {
                    market
                        .siblings(f)
                        .filter(|&s| lambda.worker_of(s).is_some())
                        .count()
                })
                .collect()
        })
        .collect();
    let firm_counts: Vec<Vec<usize>> = stable
        .iter()
        .map(|mu| mu.firm_sets().iter().map(|s| s.len()).collect())
        .collect();
    let worker_matched: Vec<Vec<bool>> = stable
        .iter()
        .map(|mu| {
            m1.worker_ids()
                .map(|w: WorkerId| mu.firm_of(w).is_some())
                .collect()
        })
        .collect();

    Ok(RhtReport {
        premise_holds: lad.iter().all(|&b| b),
        lad,
        copy_counts_constant: constant(&copy_counts),
        firm_counts_constant: constant(&firm_counts),
        worker_status_constant: constant(&worker_matched),
        copy_counts,
        firm_counts,
        worker_matched,
    })
}
