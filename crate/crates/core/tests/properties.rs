mod common;

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use proptest::prelude::*;

use ammatch::axioms::{check_consistency, check_lad, check_path_independence, check_substitutability};
use ammatch::choice::ChoiceFunction;
use ammatch::da::{da_firm_proposing, da_worker_proposing, DaOptions, DaTrace};
use ammatch::decomposition::{decompose, recompose, verify_decomposition};
use ammatch::ids::{all_subsets, WorkerSet};
use ammatch::io::MarketFile;
use ammatch::iso::{map_t, map_t_inv, verify_isomorphism};
use ammatch::limits::Limits;
use ammatch::prefs::LinearOrder;
use ammatch::stability::{
    check_stable_star, enumerate_stable_m1, enumerate_stable_star, enumerate_stable_star_with, Pruning,
};

use common::*;

fn table_strategy(max_workers: usize) -> impl Strategy<Value = ChoiceFunction> {
    (1..=max_workers).prop_flat_map(|n| {
        prop::collection::vec(any::<u64>(), 1 << n).prop_map(move |raw| {
            let values = raw
                .iter()
                .enumerate()
                .map(|(s, &r)| WorkerSet::from_bits(r & s as u64))
                .collect();
            ChoiceFunction::from_table(n, values).unwrap()
        })
    })
}

fn orders_strategy(max_workers: usize) -> impl Strategy<Value = (usize, Vec<LinearOrder>)> {
    (1..=max_workers).prop_flat_map(|n| {
        let order = Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_flat_map(move |perm| (0..=n).prop_map(move |len| perm[..len].to_vec()));
        prop::collection::vec(order, 0..5).prop_map(move |raw| {
            let orders = raw.iter().map(|o| LinearOrder::from_indices(o).unwrap()).collect();
            (n, orders)
        })
    })
}

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_independence_is_substitutability_and_consistency(cf in table_strategy(4)) {
        let limits = Limits::default();
        let pi = check_path_independence(&cf, &limits).unwrap();
        let sub = check_substitutability(&cf, &limits).unwrap();
        let cons = check_consistency(&cf, &limits).unwrap();
        prop_assert_eq!(pi.holds, sub.holds && cons.holds);
        for r in [&pi, &sub, &cons, &check_lad(&cf, &limits).unwrap()] {
            if let Some(w) = &r.witness {
                prop_assert!(w.replays(&cf));
            }
        }
    }

    #[test]
    fn union_of_orders_round_trips((n, orders) in orders_strategy(5)) {
        let limits = Limits::default();
        let cf = recompose(n, orders).unwrap();
        let pi = check_path_independence(&cf, &limits).unwrap();
        prop_assert!(pi.holds);
        prop_assert!(check_substitutability(&cf, &limits).unwrap().holds);
        prop_assert!(check_consistency(&cf, &limits).unwrap().holds);

        let d = decompose(&cf, &limits).unwrap();
        prop_assert!(verify_decomposition(&cf, &d, &limits).unwrap().holds);
        let again = recompose(n, d.clone()).unwrap();
        prop_assert_eq!(again.table(&limits).unwrap(), cf.table(&limits).unwrap());
        prop_assert_eq!(decompose(&cf, &limits).unwrap(), d.clone());

        for order in &d {
            let mut rest = WorkerSet::full(n);
            for &w in order.workers() {
                prop_assert!(cf.choose(rest).unwrap().contains(w));
                rest = rest.without(w);
            }
            prop_assert!(cf.choose(rest).unwrap().is_empty());
        }
        for s in all_subsets(n) {
            let c = cf.choose(s).unwrap();
            prop_assert!(c.is_subset(s));
            prop_assert_eq!(cf.choose(c).unwrap(), c);
        }
    }

    #[test]
    fn generated_firms_are_path_independent(s in seed()) {
        let limits = Limits::default();
        let p = ammatch::generate::GenParams { workers: 6, firms: 2, jmax: 4, density: 0.7, seed: s };
        for cf in ammatch::generate::gen_random_market(&p).unwrap().choices() {
            prop_assert!(check_path_independence(cf, &limits).unwrap().holds);
        }
    }

    #[test]
    fn market_files_round_trip(s in seed()) {
        let loaded = suite_market(s);
        let text = MarketFile::from_market(&loaded).to_json();
        let back = MarketFile::from_json(&text).unwrap().resolve().unwrap();
        prop_assert_eq!(&back, &loaded);
        prop_assert_eq!(MarketFile::from_market(&back).to_json(), text);
    }

    #[test]
    fn lifted_preferences_project_back(s in seed()) {
        let loaded = suite_market(s);
        let m = copy_market(&loaded);
        for w in m.worker_ids() {
            let mut firms: Vec<usize> = m.lifted(w).iter().map(|&c| m.firm_of(c).0).collect();
            firms.dedup();
            let listed: Vec<usize> = loaded.market.pref(w).firms().iter().map(|f| f.0)
                .filter(|&f| !m.siblings(ammatch::ids::FirmId(f)).is_empty())
                .collect();
            prop_assert_eq!(firms, listed);
            for pair in m.lifted(w).windows(2) {
                if m.firm_of(pair[0]) == m.firm_of(pair[1]) {
                    prop_assert!(m.copy(pair[0]).id.index < m.copy(pair[1]).id.index);
                }
            }
        }
    }

    #[test]
    fn deferred_acceptance_outputs_are_stable_star(s in seed()) {
        let loaded = suite_market(s);
        let m = copy_market(&loaded);
        let bound = m.worker_count() * m.copy_count() + 1;
        let (lf, tf) = da_firm_proposing(&m, DaOptions::default()).unwrap();
        let (lw, tw) = da_worker_proposing(&m).unwrap();
        for (out, trace) in [(&lf, &tf), (&lw, &tw)] {
            prop_assert!(check_stable_star(&m, out).unwrap().is_stable());
            prop_assert!(oracle_is_stable_star(&m, out));
            prop_assert!(trace.stages.len() <= bound);
            prop_assert!(trace.stages.last().unwrap().rejections.is_empty());
            prop_assert!(trace.stages.iter().all(|st| st.matching.is_involutive()));
        }
        check_firm_monotonicity(&m, &tf)?;
        check_worker_monotonicity(&m, &tw)?;
    }

    #[test]
    fn deferred_acceptance_ignores_agent_order(s in seed()) {
        let loaded = suite_market(s);
        let m = copy_market(&loaded);
        let mut file = MarketFile::from_market(&loaded);
        let indexing: BTreeMap<String, Vec<Vec<String>>> = loaded.market.firm_ids()
            .map(|f| {
                let orders = m.decomposition().orders(f.0).iter()
                    .map(|o| o.workers().iter().map(|&w| m.worker_label(w).to_owned()).collect())
                    .collect();
                (loaded.market.firm_label(f).to_owned(), orders)
            })
            .collect();
        file.copy_indexing = Some(indexing);
        file.workers.reverse();
        file.firms.reverse();
        let shuffled = file.resolve().unwrap();
        let m2 = copy_market(&shuffled);

        let sorted = |v: Vec<(String, usize, String)>| -> BTreeSet<(String, usize, String)> { v.into_iter().collect() };
        let (a, _) = da_firm_proposing(&m, DaOptions::default()).unwrap();
        let (b, _) = da_firm_proposing(&m2, DaOptions::default()).unwrap();
        prop_assert_eq!(sorted(triples(&m, &a)), sorted(triples(&m2, &b)));
        let (a, _) = da_worker_proposing(&m).unwrap();
        let (b, _) = da_worker_proposing(&m2).unwrap();
        prop_assert_eq!(sorted(triples(&m, &a)), sorted(triples(&m2, &b)));
    }

    #[test]
    fn isomorphism_holds(s in seed()) {
        let loaded = suite_market(s);
        let m = copy_market(&loaded);
        let limits = Limits::default();
        let report = verify_isomorphism(&loaded.market, &m, &limits).unwrap();
        prop_assert!(report.holds, "{:?}", report.failures);
        prop_assert_eq!(&report.stable, &oracle_stable_m1(&loaded.market));
        for mu in &report.stable {
            prop_assert_eq!(&map_t(&m, &map_t_inv(&m, mu).unwrap()).unwrap(), mu);
        }
        for l in &report.stable_star {
            prop_assert_eq!(&map_t_inv(&m, &map_t(&m, l).unwrap()).unwrap(), l);
        }
    }

    #[test]
    fn pruned_enumeration_matches_brute_force(s in seed()) {
        let mut p = suite_params(s);
        p.workers = p.workers.min(3);
        let loaded = ammatch::generate::gen_loaded(&p).unwrap();
        let m = copy_market(&loaded);
        let limits = Limits::default();
        let pruned = enumerate_stable_star(&m, &limits).unwrap();
        prop_assert_eq!(&pruned, &enumerate_stable_star_with(&m, Pruning::None, &limits).unwrap());
        prop_assert_eq!(&pruned, &oracle_enumerate_11(&m, |l| oracle_is_stable_star(&m, l)));
    }

    #[test]
    fn images_do_not_depend_on_copy_indexing(s in seed()) {
        let loaded = suite_market(s);
        let limits = Limits::default();
        let m = copy_market(&loaded);
        let mut reversed = loaded.clone();
        reversed.copy_indexing = loaded.market.firm_ids()
            .map(|f| Some(m.decomposition().orders(f.0).iter().rev().cloned().collect()))
            .collect();
        let m2 = copy_market(&reversed);
        let images = |m: &ammatch::associated::OneToOneMarket| -> BTreeSet<ammatch::matching::MatchingM1> {
            enumerate_stable_star(m, &limits).unwrap().iter().map(|l| map_t(m, l).unwrap()).collect()
        };
        prop_assert_eq!(images(&m), images(&m2));
    }

    #[test]
    fn inverse_map_preserves_worker_preferences(s in seed()) {
        let loaded = suite_market(s);
        let m1 = &loaded.market;
        let m = copy_market(&loaded);
        let stable = enumerate_stable_m1(m1, &Limits::default()).unwrap();
        for a in &stable {
            for b in &stable {
                let weakly = m1.worker_ids().all(|w| !m1.pref(w).prefers(b.firm_of(w), a.firm_of(w)));
                if weakly {
                    let la = map_t_inv(&m, a).unwrap();
                    let lb = map_t_inv(&m, b).unwrap();
                    prop_assert!(m.worker_ids().all(|w| !m.worker_prefers(w, lb.copy_of(w), la.copy_of(w))));
                }
            }
        }
    }
}

fn check_firm_monotonicity(
    m: &ammatch::associated::OneToOneMarket,
    t: &DaTrace,
) -> Result<(), TestCaseError> {
    for c in 0..m.copy_count() {
        let offered: Vec<_> = t.stages.iter().flat_map(|st| st.offers.iter().filter(|o| o.0 == c).map(|o| o.1)).collect();
        for pair in offered.windows(2) {
            prop_assert!(m.order(c).prefers(Some(pair[0]), Some(pair[1])));
        }
    }
    for pair in t.stages.windows(2) {
        for w in m.worker_ids() {
            prop_assert!(!m.worker_prefers(w, pair[0].matching.copy_of(w), pair[1].matching.copy_of(w)));
        }
    }
    Ok(())
}

fn check_worker_monotonicity(
    m: &ammatch::associated::OneToOneMarket,
    t: &DaTrace,
) -> Result<(), TestCaseError> {
    for w in m.worker_ids() {
        let offered: Vec<_> = t.stages.iter().flat_map(|st| st.offers.iter().filter(|o| o.1 == w).map(|o| o.0)).collect();
        for pair in offered.windows(2) {
            prop_assert!(m.worker_prefers(w, Some(pair[0]), Some(pair[1])));
        }
    }
    for pair in t.stages.windows(2) {
        for c in 0..m.copy_count() {
            let before = pair[0].matching.worker_of(c);
            let after = pair[1].matching.worker_of(c);
            let released = after.is_none() && before.is_some_and(|w| pair[1].rejected_by_copy(c).contains(&w));
            prop_assert!(!m.order(c).prefers(before, after) || released);
        }
    }
    Ok(())
}
