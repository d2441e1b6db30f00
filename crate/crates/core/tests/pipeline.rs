use std::collections::{BTreeMap, BTreeSet};

use chevcheck::existence::{check_a_summands, check_h_torus, DiagonalA1Spec};
use chevcheck::lemmas::{check_poly_lemma, check_ppower_lemma};
use chevcheck::report::{run_suite, RunConfig, Status, Suite};
use chevcheck::rootdata::GroupId;
use chevcheck::subgrp::{check_additive, instantiate_case, load_tables, match_to_table, search_solutions, solve_torus, USpec};
use chevcheck::witness::{check_witness, load_witnesses, Status as WStatus};
use chevcheck::Error;

#[test]
fn sl3_case1_at_p3() {
    let rows = load_tables().unwrap();
    let row = rows.iter().find(|r| r.group == GroupId::Sl3 && r.case == 1).unwrap();
    let (u, t) = instantiate_case(row, 3, &BTreeMap::from([("q1".into(), 0)]), 1, &BTreeMap::new()).unwrap();
    assert!(check_additive(&u).unwrap());
    assert_eq!(solve_torus(&u).unwrap(), Some(t));
}

#[test]
fn sl3_case1_excluded_at_p2() {
    let rows = load_tables().unwrap();
    let row = rows.iter().find(|r| r.group == GroupId::Sl3 && r.case == 1).unwrap();
    let e = instantiate_case(row, 2, &BTreeMap::from([("q1".into(), 0)]), 1, &BTreeMap::new());
    assert!(matches!(e, Err(Error::CharacteristicExcluded { .. })));
}

#[test]
fn non_additive_spec_is_rejected() {
    // q3 = 1 is not q1 + q2 = 2
    let u = USpec::new(GroupId::Sl3, 3, vec![1, 1, 1], vec![1, 1, 1]).unwrap();
    assert!(!check_additive(&u).unwrap());
}

#[test]
fn sp4_search_hits_all_match() {
    let rows = load_tables().unwrap();
    let r = search_solutions(GroupId::Sp4, 2, 4, 10_000_000).unwrap();
    assert!(!r.truncated && !r.hits.is_empty());
    for (u, _) in &r.hits {
        assert!(match_to_table(u, &rows, 6).unwrap().is_some(), "{u}");
    }
}

#[test]
fn empty_search_bound() {
    assert!(search_solutions(GroupId::G2, 3, 0, 10).unwrap().hits.is_empty());
}

#[test]
fn lemma_examples() {
    assert!(check_poly_lemma(2, 5, 200, 25).unwrap().passed);
    assert!(!check_poly_lemma(3, 2, 50, 4).unwrap().applicable);
    assert!(check_ppower_lemma(3, 3, 20, 64).unwrap().passed);
    assert!(check_poly_lemma(7, 3, 10, 3).is_err());
}

#[test]
fn table4_row5_is_resolved_by_fallback() {
    let rows = load_tables().unwrap();
    let data = load_witnesses().unwrap();
    let spec = data.witnesses.iter().find(|w| w.group == GroupId::Sp4 && w.cases == [5]).unwrap();
    let recs = check_witness(spec, &rows, 2).unwrap();
    assert!(recs.iter().all(|r| r.status == WStatus::Discrepant && r.corrected_ok == Some(true) && r.fallback.is_some()));
}

#[test]
fn existence_sp4_q2() {
    let s = DiagonalA1Spec::new(GroupId::Sp4, 2, 2).unwrap();
    let h = check_h_torus(&s);
    assert_eq!((h.simple_weights, h.companion_weight), ([2, 1], 3));
    let a = check_a_summands(&s).unwrap();
    assert!(a.passed);
    assert!(a.leaks[1].contains(&("v23".into(), "v21".into())));
}

#[test]
fn suite_selection_and_determinism() {
    let cfg = RunConfig { primes: vec![3], suites: BTreeSet::from([Suite::Lemmas, Suite::Existence]), z_max: 40, ..Default::default() };
    let a = run_suite(&cfg).unwrap();
    assert!(a.records.iter().all(|r| matches!(r.suite, Suite::Lemmas | Suite::Existence)));
    assert!(!a.failed());
    assert!(a.records.iter().all(|r| r.status != Status::Fail));
    assert_eq!(a.machine(), run_suite(&cfg).unwrap().machine());
    for line in a.machine().lines() {
        assert!(integers_only(&serde_json::from_str(line).unwrap()), "{line}");
    }
}

fn integers_only(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_i64() || n.is_u64(),
        serde_json::Value::Array(a) => a.iter().all(integers_only),
        serde_json::Value::Object(o) => o.values().all(integers_only),
        _ => true,
    }
}
