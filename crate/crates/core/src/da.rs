//! Deferred acceptance on the copy market, with either side proposing.
//!
//! Firm-copies proposing: a rejected copy may move down its order only when
//! no sibling currently holds a worker it ranks above the next candidate;
//! otherwise it is unauthorized and leaves the proposal pool. Workers
//! proposing: a copy ignores (rejects) offers from workers it ranks below a
//! worker some sibling held at the end of the previous stage, and once a
//! stage's acceptances are in, any copy that now ranks a sibling's worker
//! above its own releases its worker (lowest slot first, until no copy is
//! envious). Released workers count as rejected.
//!
//! Offers within a stage are simultaneous. Agents are visited by index only
//! to fix the trace order.

use serde_json::{json, Map, Value};

use crate::associated::OneToOneMarket;
use crate::error::{Error, Result};
use crate::ids::WorkerId;
use crate::matching::Matching11;
use crate::stability::check_stable_star;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DaOptions {
    /// Firm-copies proposing only: unmatched copies that were unauthorized
    /// re-check authorization at every later stage instead of leaving the
    /// pool for good. On by default; switching it off can leave a copy idle
    /// while a worker it tops sits at a later sibling.
    pub reauthorize: bool,
}

impl Default for DaOptions {
    fn default() -> Self {
        DaOptions { reauthorize: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposing {
    Firms,
    Workers,
}

/// One stage of a run. Offers and rejections are `(copy slot, worker)`
/// pairs regardless of which side proposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaStage {
    pub stage: usize,
    pub offers: Vec<(usize, WorkerId)>,
    /// Firm-copies proposing: authorization verdict of every copy that
    /// tried to offer.
    pub authorization: Vec<(usize, bool)>,
    /// Workers proposing: the offers that passed the validity filter.
    pub valid_offers: Vec<(usize, WorkerId)>,
    pub rejections: Vec<(usize, WorkerId)>,
    pub matching: Matching11,
}

impl DaStage {
    /// Copies offering to `w` (firm-copies proposing).
    pub fn offers_to_worker(&self, w: WorkerId) -> Vec<usize> {
        pick_copies(&self.offers, w)
    }

    pub fn rejected_by_worker(&self, w: WorkerId) -> Vec<usize> {
        pick_copies(&self.rejections, w)
    }

    /// Workers offering to `slot` (workers proposing).
    pub fn offers_to_copy(&self, slot: usize) -> Vec<WorkerId> {
        pick_workers(&self.offers, slot)
    }

    pub fn rejected_by_copy(&self, slot: usize) -> Vec<WorkerId> {
        pick_workers(&self.rejections, slot)
    }
}

fn pick_copies(pairs: &[(usize, WorkerId)], w: WorkerId) -> Vec<usize> {
    let mut v: Vec<usize> = pairs.iter().filter(|p| p.1 == w).map(|p| p.0).collect();
    v.sort_unstable();
    v
}

fn pick_workers(pairs: &[(usize, WorkerId)], slot: usize) -> Vec<WorkerId> {
    let mut v: Vec<WorkerId> = pairs.iter().filter(|p| p.0 == slot).map(|p| p.1).collect();
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaTrace {
    pub proposing: Proposing,
    pub stages: Vec<DaStage>,
}

impl DaTrace {
    /// One JSON object per stage, using market labels.
    pub fn json_lines(&self, market: &OneToOneMarket) -> Vec<String> {
        self.stages
            .iter()
            .map(|s| stage_json(self.proposing, market, s).to_string())
            .collect()
    }
}

fn stage_json(proposing: Proposing, market: &OneToOneMarket, s: &DaStage) -> Value {
    let group = |pairs: &[(usize, WorkerId)]| -> Value {
        let mut map = Map::new();
        let mut sorted = pairs.to_vec();
        sorted.sort_unstable();
        for (slot, w) in sorted {
            let (key, val) = match proposing {
                Proposing::Firms => (market.worker_label(w).to_owned(), market.copy_label(slot)),
                Proposing::Workers => (market.copy_label(slot), market.worker_label(w).to_owned()),
            };
            map.entry(key)
                .or_insert_with(|| Value::Array(Vec::new()))
                .as_array_mut()
                .expect("array")
                .push(Value::String(val));
        }
        Value::Object(map)
    };
    let matching: Vec<Value> = s
        .matching
        .matched_pairs()
        .map(|(slot, w)| json!([market.copy_label(slot), market.worker_label(w)]))
        .collect();
    let mut obj = Map::new();
    obj.insert("stage".into(), json!(s.stage));
    obj.insert("offers".into(), group(&s.offers));
    match proposing {
        Proposing::Firms => {
            let auth: Map<String, Value> = s
                .authorization
                .iter()
                .map(|&(slot, ok)| (market.copy_label(slot), Value::Bool(ok)))
                .collect();
            obj.insert("authorization".into(), Value::Object(auth));
        }
        Proposing::Workers => {
            obj.insert("valid_offers".into(), group(&s.valid_offers));
        }
    }
    obj.insert("rejections".into(), group(&s.rejections));
    obj.insert("matching".into(), Value::Array(matching));
    Value::Object(obj)
}

fn assert_stable_star(market: &OneToOneMarket, m: &Matching11, who: &str) -> Result<()> {
    let report = check_stable_star(market, m)?;
    if let Some(v) = report.violation {
        return Err(Error::Internal(format!(
            "{who}-proposing deferred acceptance produced an unstable* matching: {v:?}"
        )));
    }
    Ok(())
}

/// Firm-copies-proposing deferred acceptance.
pub fn da_firm_proposing(
    market: &OneToOneMarket,
    options: DaOptions,
) -> Result<(Matching11, DaTrace)> {
    let copies = market.copy_count();
    let mut matching = Matching11::empty(market.worker_count(), copies);
    // next[c]: position in c's order of the next worker to try
    let mut next = vec![0usize; copies];
    let mut waiting = vec![false; copies];
    let mut pool: Vec<usize> = (0..copies).collect();
    let mut stages = Vec::new();

    for stage in 1.. {
        let prev = matching.clone();
        let mut offers = Vec::new();
        let mut authorization = Vec::new();

        if options.reauthorize {
            for c in (0..copies).filter(|&c| waiting[c]) {
                if prev.worker_of(c).is_none() && !pool.contains(&c) {
                    pool.push(c);
                }
            }
            pool.sort_unstable();
        }
        for &c in &pool {
            let order = market.order(c);
            let Some(&w) = order.workers().get(next[c]) else {
                continue;
            };
            let authorized = stage == 1 || is_authorized(market, &prev, c, w);
            authorization.push((c, authorized));
            waiting[c] = !authorized;
            if authorized {
                offers.push((c, w));
            }
        }

        // Each worker keeps the best acceptable copy among its offers and
        // its current holder.
        let mut rejections = Vec::new();
        for w in market.worker_ids() {
            let held = prev.copy_of(w);
            let incoming: Vec<usize> = offers.iter().filter(|o| o.1 == w).map(|o| o.0).collect();
            if incoming.is_empty() {
                continue;
            }
            let best = incoming
                .iter()
                .copied()
                .chain(held)
                .filter(|&c| market.worker_accepts(w, c))
                .min_by_key(|&c| market.worker_key(w, Some(c)));
            for c in incoming.into_iter().chain(held) {
                if Some(c) != best {
                    rejections.push((c, w));
                }
            }
            match best {
                Some(c) => matching.assign(c, w),
                None => {
                    if let Some(h) = held {
                        matching.unassign_copy(h);
                    }
                }
            }
        }
        for &(c, w) in &rejections {
            let pos = market
                .order(c)
                .workers()
                .iter()
                .position(|&x| x == w)
                .expect("copies only offer to listed workers");
            next[c] = pos + 1;
        }

        let mut new_pool: Vec<usize> = rejections.iter().map(|r| r.0).collect();
        new_pool.sort_unstable();
        new_pool.dedup();

        let done = rejections.is_empty()
            && !(options.reauthorize
                && (0..copies).any(|c| {
                    waiting[c]
                        && matching.worker_of(c).is_none()
                        && market
                            .order(c)
                            .workers()
                            .get(next[c])
                            .is_some_and(|&w| is_authorized(market, &matching, c, w))
                }));
        stages.push(DaStage {
            stage,
            offers,
            authorization,
            valid_offers: Vec::new(),
            rejections,
            matching: matching.clone(),
        });
        if done {
            break;
        }
        pool = new_pool;
    }

    assert_stable_star(market, &matching, "firm-copies")?;
    Ok((
        matching,
        DaTrace {
            proposing: Proposing::Firms,
            stages,
        },
    ))
}

/// No sibling holds a worker other than `w` that `copy` ranks above `w`.
fn is_authorized(market: &OneToOneMarket, m: &Matching11, copy: usize, w: WorkerId) -> bool {
    let order = market.order(copy);
    market
        .siblings(market.firm_of(copy))
        .filter_map(|s| m.worker_of(s))
        .all(|held| held == w || !order.prefers(Some(held), Some(w)))
}

fn is_envious(market: &OneToOneMarket, m: &Matching11, copy: usize) -> bool {
    let order = market.order(copy);
    let own = m.worker_of(copy);
    own.is_some()
        && market
            .siblings(market.firm_of(copy))
            .any(|s| order.prefers(m.worker_of(s), own))
}

/// Worker-proposing deferred acceptance.
pub fn da_worker_proposing(market: &OneToOneMarket) -> Result<(Matching11, DaTrace)> {
    let copies = market.copy_count();
    let mut matching = Matching11::empty(market.worker_count(), copies);
    let mut next = vec![0usize; market.worker_count()];
    let mut pool: Vec<WorkerId> = market.worker_ids().collect();
    let mut stages = Vec::new();

    for stage in 1.. {
        let prev = matching.clone();
        let offers: Vec<(usize, WorkerId)> = pool
            .iter()
            .filter_map(|&w| market.lifted(w).get(next[w.0]).map(|&c| (c, w)))
            .collect();

        let mut valid_offers = Vec::new();
        let mut rejections = Vec::new();
        for c in 0..copies {
            let incoming: Vec<WorkerId> =
                offers.iter().filter(|o| o.0 == c).map(|o| o.1).collect();
            if incoming.is_empty() {
                continue;
            }
            let order = market.order(c);
            let valid: Vec<WorkerId> = incoming
                .iter()
                .copied()
                .filter(|&w| {
                    market
                        .siblings(market.firm_of(c))
                        .filter_map(|s| prev.worker_of(s))
                        .all(|held| !order.prefers(Some(held), Some(w)))
                })
                .collect();
            valid_offers.extend(valid.iter().map(|&w| (c, w)));
            let held = prev.worker_of(c);
            let best = valid
                .iter()
                .copied()
                .chain(held)
                .filter(|&w| order.is_acceptable(w))
                .min_by_key(|&w| order.key(Some(w)));
            for w in incoming.into_iter().chain(held) {
                if Some(w) != best {
                    rejections.push((c, w));
                }
            }
            match best {
                Some(w) => matching.assign(c, w),
                None => matching.unassign_copy(c),
            }
        }
        while let Some(c) = (0..copies).find(|&c| is_envious(market, &matching, c)) {
            let w = matching.worker_of(c).expect("envious copies hold a worker");
            rejections.push((c, w));
            matching.unassign_copy(c);
        }
        for &(c, w) in &rejections {
            let pos = market
                .lifted(w)
                .iter()
                .position(|&x| x == c)
                .expect("workers only offer to listed copies");
            next[w.0] = pos + 1;
        }

        let done = rejections.is_empty();
        let mut new_pool: Vec<WorkerId> = rejections.iter().map(|r| r.1).collect();
        new_pool.sort_unstable();
        new_pool.dedup();
        stages.push(DaStage {
            stage,
            offers,
            authorization: Vec::new(),
            valid_offers,
            rejections,
            matching: matching.clone(),
        });
        if done {
            break;
        }
        pool = new_pool;
    }

    assert_stable_star(market, &matching, "worker")?;
    Ok((
        matching,
        DaTrace {
            proposing: Proposing::Workers,
            stages,
        },
    ))
}
