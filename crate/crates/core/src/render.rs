//! Label-based JSON views of markets, reports and matchings.
//!
//! Matchings are rendered as two association lists: `worker_side` pairs
//! every worker with its partner (or `null`) in worker index order, and the
//! firm or copy side does the same for the other side. Object keys come out
//! sorted.

use serde_json::{json, Map, Value};

use crate::associated::OneToOneMarket;
use crate::axioms::{AxiomReport, Witness};
use crate::decomposition::Decomposition;
use crate::ids::{FirmId, WorkerId, WorkerSet};
use crate::iso::{IsomorphismReport, RhtReport};
use crate::market::ManyToOneMarket;
use crate::matching::{Matching11, MatchingM1};
use crate::stability::{ClassicalViolation, ManyToOneViolation, StarViolation};

fn labels(m1: &ManyToOneMarket, set: WorkerSet) -> Value {
    json!(m1.set_labels(set))
}

pub fn witness(m1: &ManyToOneMarket, w: &Witness) -> Value {
    let worker = |w: WorkerId| json!(m1.worker_label(w));
    match *w {
        Witness::Substitutability {
            set,
            chosen,
            removed,
        } => json!({
            "kind": "substitutability",
            "set": labels(m1, set),
            "chosen": worker(chosen),
            "removed": worker(removed),
        }),
        Witness::Consistency { outer, inner } => json!({
            "kind": "consistency",
            "outer": labels(m1, outer),
            "inner": labels(m1, inner),
        }),
        Witness::PathIndependence { left, right } => json!({
            "kind": "path-independence",
            "left": labels(m1, left),
            "right": labels(m1, right),
        }),
        Witness::Lad { smaller, larger } => json!({
            "kind": "lad",
            "smaller": labels(m1, smaller),
            "larger": labels(m1, larger),
        }),
        Witness::Disagreement {
            set,
            expected,
            actual,
        } => json!({
            "kind": "disagreement",
            "set": labels(m1, set),
            "expected": labels(m1, expected),
            "actual": labels(m1, actual),
        }),
    }
}

pub fn axiom_report(m1: &ManyToOneMarket, r: &AxiomReport) -> Value {
    let mut obj = Map::new();
    obj.insert("axiom".into(), json!(r.axiom));
    obj.insert("holds".into(), json!(r.holds));
    if let Some(w) = &r.witness {
        obj.insert("witness".into(), witness(m1, w));
    }
    Value::Object(obj)
}

/// Firm label to its list of orders, in copy-index order.
pub fn decomposition(m1: &ManyToOneMarket, d: &Decomposition) -> Value {
    let firms: Map<String, Value> = d
        .iter()
        .enumerate()
        .map(|(f, orders)| {
            let list: Vec<Value> = orders
                .iter()
                .map(|o| json!(o.workers().iter().map(|&w| m1.worker_label(w)).collect::<Vec<_>>()))
                .collect();
            (m1.firm_label(FirmId(f)).to_owned(), Value::Array(list))
        })
        .collect();
    Value::Object(firms)
}

pub fn matching_m1(m1: &ManyToOneMarket, mu: &MatchingM1) -> Value {
    let workers: Vec<Value> = m1
        .worker_ids()
        .map(|w| json!([m1.worker_label(w), mu.firm_of(w).map(|f| m1.firm_label(f))]))
        .collect();
    let firms: Vec<Value> = m1
        .firm_ids()
        .map(|f| json!([m1.firm_label(f), labels(m1, mu.workers_of(f))]))
        .collect();
    json!({ "worker_side": workers, "firm_side": firms })
}

pub fn matching_11(market: &OneToOneMarket, m: &Matching11) -> Value {
    let workers: Vec<Value> = market
        .worker_ids()
        .map(|w| json!([market.worker_label(w), m.copy_of(w).map(|s| market.copy_label(s))]))
        .collect();
    let copies: Vec<Value> = (0..market.copy_count())
        .map(|s| json!([market.copy_label(s), m.worker_of(s).map(|w| market.worker_label(w))]))
        .collect();
    json!({ "worker_side": workers, "copy_side": copies })
}

pub fn m1_violation(m1: &ManyToOneMarket, v: &ManyToOneViolation) -> Value {
    let w = |w: WorkerId| m1.worker_label(w).to_owned();
    let f = |f: FirmId| m1.firm_label(f).to_owned();
    match *v {
        ManyToOneViolation::WorkerBlock { worker, firm } => {
            json!({"case": "worker-block", "worker": w(worker), "firm": f(firm)})
        }
        ManyToOneViolation::FirmBlock { firm } => json!({"case": "firm-block", "firm": f(firm)}),
        ManyToOneViolation::PairBlock { worker, firm } => {
            json!({"case": "pair-block", "worker": w(worker), "firm": f(firm)})
        }
    }
}

pub fn star_violation(market: &OneToOneMarket, v: &StarViolation) -> Value {
    let w = |w: WorkerId| market.worker_label(w).to_owned();
    let c = |s: usize| market.copy_label(s);
    match *v {
        StarViolation::WorkerBlock { worker, copy } => {
            json!({"case": "worker-block", "worker": w(worker), "copy": c(copy)})
        }
        StarViolation::FirmBlock { copy, worker } => {
            json!({"case": "firm-block", "copy": c(copy), "worker": w(worker)})
        }
        StarViolation::CopyEnvy { copy, sibling } => {
            json!({"case": "copy-envy", "copy": c(copy), "sibling": c(sibling)})
        }
        StarViolation::PairBlock { copy, worker } => {
            json!({"case": "pair-block", "copy": c(copy), "worker": w(worker)})
        }
    }
}

pub fn classical_violation(market: &OneToOneMarket, v: &ClassicalViolation) -> Value {
    let w = |w: WorkerId| market.worker_label(w).to_owned();
    let c = |s: usize| market.copy_label(s);
    match *v {
        ClassicalViolation::WorkerBlock { worker, copy } => {
            json!({"case": "worker-block", "worker": w(worker), "copy": c(copy)})
        }
        ClassicalViolation::FirmBlock { copy, worker } => {
            json!({"case": "firm-block", "copy": c(copy), "worker": w(worker)})
        }
        ClassicalViolation::PairBlock { copy, worker } => {
            json!({"case": "pair-block", "copy": c(copy), "worker": w(worker)})
        }
    }
}

/// Copy matchings with their images under `T`, and stable matchings with
/// their preimages.
pub fn isomorphism(m1: &ManyToOneMarket, market: &OneToOneMarket, r: &IsomorphismReport) -> Value {
    let forward: Vec<Value> = r
        .forward
        .iter()
        .map(|(l, mu)| json!({"stable_star": matching_11(market, l), "image": matching_m1(m1, mu)}))
        .collect();
    let backward: Vec<Value> = r
        .backward
        .iter()
        .map(|(mu, l)| json!({"stable": matching_m1(m1, mu), "preimage": matching_11(market, l)}))
        .collect();
    json!({
        "holds": r.holds,
        "stable_star_count": r.stable_star.len(),
        "stable_count": r.stable.len(),
        "forward": forward,
        "backward": backward,
        "failures": r.failures,
    })
}

pub fn rural_hospital(m1: &ManyToOneMarket, r: &RhtReport) -> Value {
    let per_firm = |row: &Vec<usize>| -> Value {
        let map: Map<String, Value> = row
            .iter()
            .enumerate()
            .map(|(f, &n)| (m1.firm_label(FirmId(f)).to_owned(), json!(n)))
            .collect();
        Value::Object(map)
    };
    let lad: Map<String, Value> = r
        .lad
        .iter()
        .enumerate()
        .map(|(f, &b)| (m1.firm_label(FirmId(f)).to_owned(), json!(b)))
        .collect();
    let matched: Vec<Value> = r
        .worker_matched
        .iter()
        .map(|row| {
            let map: Map<String, Value> = row
                .iter()
                .enumerate()
                .map(|(w, &b)| (m1.worker_label(WorkerId(w)).to_owned(), json!(b)))
                .collect();
            Value::Object(map)
        })
        .collect();
    json!({
        "holds": r.holds(),
        "premise_holds": r.premise_holds,
        "lad": lad,
        "copy_counts": r.copy_counts.iter().map(per_firm).collect::<Vec<_>>(),
        "firm_counts": r.firm_counts.iter().map(per_firm).collect::<Vec<_>>(),
        "worker_matched": matched,
        "copy_counts_constant": r.copy_counts_constant,
        "firm_counts_constant": r.firm_counts_constant,
        "worker_status_constant": r.worker_status_constant,
    })
}
