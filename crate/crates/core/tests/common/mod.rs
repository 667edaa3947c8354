#![allow(dead_code)]

use std::path::PathBuf;

use ammatch::associated::{build_associated_market, OneToOneMarket};
use ammatch::generate::{gen_loaded, GenParams};
use ammatch::ids::{CopyId, FirmId, WorkerId, WorkerSet};
use ammatch::io::{LoadedMarket, MarketFile};
use ammatch::limits::Limits;
use ammatch::market::ManyToOneMarket;
use ammatch::matching::{Matching11, MatchingM1};

pub const P_PHI1: [&[&str]; 8] = [
    &["w1", "w2"],
    &["w1", "w3"],
    &["w2", "w4"],
    &["w3", "w4"],
    &["w1"],
    &["w2"],
    &["w3"],
    &["w4"],
];

pub const P_PHI2: [&[&str]; 8] = [
    &["w3", "w4"],
    &["w1", "w3"],
    &["w2", "w4"],
    &["w1", "w2"],
    &["w4"],
    &["w3"],
    &["w2"],
    &["w1"],
];

/// The decomposition table of the worked example, copy index order.
pub const ORDERS_PHI1: [[&str; 4]; 6] = [
    ["w1", "w2", "w3", "w4"],
    ["w1", "w2", "w4", "w3"],
    ["w1", "w4", "w2", "w3"],
    ["w2", "w1", "w3", "w4"],
    ["w2", "w1", "w4", "w3"],
    ["w2", "w3", "w1", "w4"],
];

pub const ORDERS_PHI2: [[&str; 4]; 6] = [
    ["w3", "w4", "w2", "w1"],
    ["w3", "w4", "w1", "w2"],
    ["w3", "w2", "w4", "w1"],
    ["w4", "w3", "w2", "w1"],
    ["w4", "w3", "w1", "w2"],
    ["w4", "w1", "w3", "w2"],
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub struct Example {
    pub loaded: LoadedMarket,
    /// Copy market under the published copy indexing.
    pub market: OneToOneMarket,
    /// Copy market under lexicographic copy indexing.
    pub lex_market: OneToOneMarket,
}

impl Example {
    pub fn m1(&self) -> &ManyToOneMarket {
        &self.loaded.market
    }
}

pub fn example1() -> Example {
    let limits = Limits::default();
    let loaded = MarketFile::load(fixture_path("example1.json")).expect("fixture loads");
    let d = loaded.decompose(&limits).expect("decomposes");
    let market = build_associated_market(&loaded.market, &d, &limits).expect("market");
    let lex = loaded.without_indexing();
    let d = lex.decompose(&limits).expect("decomposes");
    let lex_market = build_associated_market(&lex.market, &d, &limits).expect("market");
    Example {
        loaded,
        market,
        lex_market,
    }
}

pub fn copy_market(loaded: &LoadedMarket) -> OneToOneMarket {
    let limits = Limits::default();
    let d = loaded.decompose(&limits).expect("decomposes");
    build_associated_market(&loaded.market, &d, &limits).expect("market")
}

pub fn worker(m1: &ManyToOneMarket, label: &str) -> WorkerId {
    m1.worker_by_label(label).expect("known worker")
}

pub fn set(m1: &ManyToOneMarket, labels: &[&str]) -> WorkerSet {
    m1.worker_set(labels).expect("known workers")
}

/// A copy-market matching from `(firm, copy index, worker)` triples.
pub fn lam(market: &OneToOneMarket, pairs: &[(&str, usize, &str)]) -> Matching11 {
    let pairs: Vec<(CopyId, WorkerId)> = pairs
        .iter()
        .map(|&(f, j, w)| {
            let firm = market.firm_labels().iter().position(|l| l == f).expect("firm");
            let w = market.worker_labels().iter().position(|l| l == w).expect("worker");
            (CopyId::new(firm, j), WorkerId(w))
        })
        .collect();
    Matching11::from_pairs(market, &pairs).expect("well-formed matching")
}

pub fn mu(m1: &ManyToOneMarket, sets: &[(&str, &[&str])]) -> MatchingM1 {
    let mut firm_sets = vec![WorkerSet::EMPTY; m1.firm_count()];
    for &(f, ws) in sets {
        firm_sets[m1.firm_by_label(f).expect("firm").0] = set(m1, ws);
    }
    MatchingM1::from_firm_sets(m1.worker_count(), &firm_sets).expect("well-formed matching")
}

/// `(firm, copy index, worker)` triples of a copy-market matching.
pub fn triples(market: &OneToOneMarket, m: &Matching11) -> Vec<(String, usize, String)> {
    m.matched_pairs()
        .map(|(slot, w)| {
            let id = market.copy(slot).id;
            (
                market.firm_labels()[id.firm.0].clone(),
                id.index,
                market.worker_label(w).to_owned(),
            )
        })
        .collect()
}

/// The markets of the random property suite: up to 5 workers, 3 firms and
/// 4 orders per firm.
pub fn suite_params(seed: u64) -> GenParams {
    GenParams {
        workers: 1 + (seed % 5) as usize,
        firms: 1 + (seed / 5 % 3) as usize,
        jmax: 1 + (seed / 15 % 4) as usize,
        density: [1.0, 0.8, 0.6, 0.4][(seed / 60 % 4) as usize],
        seed,
    }
}

pub fn suite_market(seed: u64) -> LoadedMarket {
    gen_loaded(&suite_params(seed)).expect("generator params are valid")
}

// ---- the displayed matchings of the worked example ----------------------

pub fn lambda_f(ex: &Example) -> Matching11 {
    lam(&ex.market, &[("phi1", 1, "w1"), ("phi1", 4, "w2"), ("phi2", 1, "w3"), ("phi2", 4, "w4")])
}

pub fn lambda_w(ex: &Example) -> Matching11 {
    lam(&ex.market, &[("phi1", 1, "w3"), ("phi1", 2, "w4"), ("phi2", 1, "w2"), ("phi2", 2, "w1")])
}

pub fn lambda_1(ex: &Example) -> Matching11 {
    lam(&ex.market, &[("phi1", 1, "w2"), ("phi1", 3, "w4"), ("phi2", 1, "w3"), ("phi2", 6, "w1")])
}

pub fn lambda_2(ex: &Example) -> Matching11 {
    lam(&ex.market, &[("phi1", 1, "w1"), ("phi1", 6, "w3"), ("phi2", 1, "w4"), ("phi2", 3, "w2")])
}

pub fn mu_phi(ex: &Example) -> MatchingM1 {
    mu(ex.m1(), &[("phi1", &["w1", "w2"]), ("phi2", &["w3", "w4"])])
}

pub fn mu_1(ex: &Example) -> MatchingM1 {
    mu(ex.m1(), &[("phi1", &["w1", "w3"]), ("phi2", &["w2", "w4"])])
}

pub fn mu_2(ex: &Example) -> MatchingM1 {
    mu(ex.m1(), &[("phi1", &["w2", "w4"]), ("phi2", &["w1", "w3"])])
}

pub fn mu_w(ex: &Example) -> MatchingM1 {
    mu(ex.m1(), &[("phi1", &["w3", "w4"]), ("phi2", &["w1", "w2"])])
}

// ---- independent oracles -------------------------------------------------

/// The best listed subset contained in `available`, by label.
pub fn ranking_choice<'a>(ranking: &[&'a [&'a str]], available: &[&str]) -> Vec<&'a str> {
    ranking
        .iter()
        .find(|s| s.iter().all(|w| available.contains(w)))
        .map(|s| s.to_vec())
        .unwrap_or_default()
}

/// Union of the best available worker of each order, by label.
pub fn orders_choice<'a>(orders: &[&[&'a str]], available: &[&str]) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for o in orders {
        if let Some(w) = o.iter().find(|w| available.contains(w)) {
            if !out.contains(w) {
                out.push(w);
            }
        }
    }
    out.sort();
    out
}

/// Every stable many-to-one matching, by brute force over worker
/// assignments; only the firms' choice functions are taken from the library.
pub fn oracle_stable_m1(m1: &ManyToOneMarket) -> Vec<MatchingM1> {
    let k = m1.worker_count();
    let n = m1.firm_count();
    let total = (n + 1).pow(k as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut assign: Vec<Option<usize>> = Vec::with_capacity(k);
        for _ in 0..k {
            let d = c % (n + 1);
            c /= n + 1;
            assign.push(if d == 0 { None } else { Some(d - 1) });
        }
        if m1_is_stable(m1, &assign) {
            out.push(
                MatchingM1::new(n, assign.iter().map(|a| a.map(FirmId)).collect())
                    .expect("assignment is a matching"),
            );
        }
    }
    out.sort();
    out
}

fn m1_is_stable(m1: &ManyToOneMarket, assign: &[Option<usize>]) -> bool {
    let rank = |w: usize, f: Option<usize>| -> usize {
        let list = m1.pref(WorkerId(w)).firms();
        match f {
            None => list.len(),
            Some(f) => list.iter().position(|x| x.0 == f).unwrap_or(list.len() + 1),
        }
    };
    let held = |f: usize| -> WorkerSet {
        (0..assign.len())
            .filter(|&w| assign[w] == Some(f))
            .map(WorkerId)
            .collect()
    };
    for (w, &a) in assign.iter().enumerate() {
        if rank(w, a) > rank(w, None) {
            return false;
        }
    }
    for f in 0..m1.firm_count() {
        let s = held(f);
        if m1.choice(FirmId(f)).choose(s).unwrap() != s {
            return false;
        }
        for (w, &a) in assign.iter().enumerate() {
            if a != Some(f) && rank(w, Some(f)) < rank(w, a) {
                let with = s.with(WorkerId(w));
                if m1.choice(FirmId(f)).choose(with).unwrap().contains(WorkerId(w)) {
                    return false;
                }
            }
        }
    }
    true
}

fn pos<T: PartialEq>(list: &[T], x: &T) -> Option<usize> {
    list.iter().position(|y| y == x)
}

/// Stability* of `m`, written out from the four blocking cases.
pub fn oracle_is_stable_star(market: &OneToOneMarket, m: &Matching11) -> bool {
    let copies = market.copy_count();
    let wrank = |w: WorkerId, c: Option<usize>| -> usize {
        let list = market.lifted(w);
        match c {
            None => list.len(),
            Some(c) => pos(list, &c).unwrap_or(list.len() + 1),
        }
    };
    let crank = |c: usize, w: Option<WorkerId>| -> usize {
        let list = market.order(c).workers();
        match w {
            None => list.len(),
            Some(w) => pos(list, &w).unwrap_or(list.len() + 1),
        }
    };
    let siblings = |c: usize| -> Vec<usize> {
        (0..copies)
            .filter(|&s| market.copy(s).id.firm == market.copy(c).id.firm)
            .collect()
    };
    for w in market.worker_ids() {
        if wrank(w, m.copy_of(w)) > wrank(w, None) {
            return false;
        }
    }
    for c in 0..copies {
        if crank(c, m.worker_of(c)) > crank(c, None) {
            return false;
        }
    }
    for c in 0..copies {
        if m.worker_of(c).is_none() {
            continue;
        }
        for s in siblings(c) {
            if crank(c, m.worker_of(s)) < crank(c, m.worker_of(c)) {
                return false;
            }
        }
    }
    for c in 0..copies {
        for w in market.worker_ids() {
            if wrank(w, Some(c)) >= wrank(w, m.copy_of(w)) || crank(c, Some(w)) >= crank(c, None) {
                continue;
            }
            let tops = siblings(c)
                .into_iter()
                .filter(|&s| m.worker_of(s) != Some(w))
                .all(|s| crank(c, Some(w)) < crank(c, m.worker_of(s)));
            if tops {
                return false;
            }
        }
    }
    true
}

/// Classical one-to-one stability of `m`.
pub fn oracle_is_classical(market: &OneToOneMarket, m: &Matching11) -> bool {
    let wrank = |w: WorkerId, c: Option<usize>| -> usize {
        let list = market.lifted(w);
        c.map_or(list.len(), |c| pos(list, &c).unwrap_or(list.len() + 1))
    };
    let crank = |c: usize, w: Option<WorkerId>| -> usize {
        let list = market.order(c).workers();
        w.map_or(list.len(), |w| pos(list, &w).unwrap_or(list.len() + 1))
    };
    for w in market.worker_ids() {
        if wrank(w, m.copy_of(w)) > wrank(w, None) {
            return false;
        }
    }
    for c in 0..market.copy_count() {
        if crank(c, m.worker_of(c)) > crank(c, None) {
            return false;
        }
        for w in market.worker_ids() {
            if crank(c, Some(w)) < crank(c, m.worker_of(c)) && wrank(w, Some(c)) < wrank(w, m.copy_of(w)) {
                return false;
            }
        }
    }
    true
}

/// Every injective partial assignment of workers to copies passing `keep`.
pub fn oracle_enumerate_11<F: Fn(&Matching11) -> bool>(market: &OneToOneMarket, keep: F) -> Vec<Matching11> {
    fn go<F: Fn(&Matching11) -> bool>(
        w: usize,
        side: &mut Vec<Option<WorkerId>>,
        market: &OneToOneMarket,
        keep: &F,
        out: &mut Vec<Matching11>,
    ) {
        if w == market.worker_count() {
            let m = Matching11::from_copy_side(market.worker_count(), side.clone()).unwrap();
            if keep(&m) {
                out.push(m);
            }
            return;
        }
        go(w + 1, side, market, keep, out);
        for c in 0..side.len() {
            if side[c].is_none() {
                side[c] = Some(WorkerId(w));
                go(w + 1, side, market, keep, out);
                side[c] = None;
            }
        }
    }
    let mut out = Vec::new();
    go(0, &mut vec![None; market.copy_count()], market, &keep, &mut out);
    out.sort();
    out
}
