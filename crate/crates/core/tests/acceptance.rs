//! Acceptance run: one PASS/FAIL line per criterion. Criteria listed in
//! KNOWN_FAILURES fail on the printed data itself (see the README); any
//! other failure makes this target exit non-zero.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use chevcheck::chevrep::{cached_rep, validate_rep};
use chevcheck::exactalg::PrimeField;
use chevcheck::existence::{check_a_summands, check_h_torus, check_irreducible, check_normalization, DiagonalA1Spec, DEFAULT_SPAN_STEPS};
use chevcheck::lemmas::{check_poly_lemma, check_ppower_lemma};
use chevcheck::report::{run_suite, RunConfig, Status, Suite};
use chevcheck::rootdata::GroupId;
use chevcheck::subgrp::normalize::DEFAULT_EXTENSION_BOUND;
use chevcheck::subgrp::system::{derive_cross_terms, printed_system, system_diff};
use chevcheck::subgrp::{load_tables, match_to_table, plan_instantiations, search_solutions, verify_case};
use chevcheck::witness::{check_principal_a1, check_weight_rows, check_witness, load_witnesses};

/// The SL3 cross-term sign and the G2 Case 14 witness.
const KNOWN_FAILURES: [u32; 2] = [1, 5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let el = t.elapsed();
    if el > limit {
        o.pass = false;
        o.detail.push_str(&format!("; took {:.1}s, limit {}s", el.as_secs_f64(), limit.as_secs()));
    }
    o
}

fn c1() -> Outcome {
    let mut bad = vec![];
    for g in GroupId::ALL {
        let d = system_diff(&derive_cross_terms(g).unwrap(), &printed_system(g).unwrap());
        if !d.is_empty() {
            bad.push(format!("{g}: {}", d.join("; ")));
        }
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { "all three systems verbatim".into() } else { bad.join(" | ") } }
}

fn c2() -> Outcome {
    let mut bad = vec![];
    let mut n = 0;
    for p in [2, 3, 5, 7] {
        let f = PrimeField::new(p).unwrap();
        for (g, m) in [(GroupId::Sl3, "natural"), (GroupId::Sp4, "V2"), (GroupId::Sp4, "V1"), (GroupId::G2, "V")] {
            match cached_rep(g, m, f).and_then(|r| validate_rep(&r)) {
                Ok(r) => n += r.checks.len(),
                Err(e) => bad.push(format!("{g} {m} p={p}: {e}")),
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { format!("{n} checks") } else { bad.join(" | ") } }
}

fn c3() -> Outcome {
    let mut bad = vec![];
    let mut discrepant = BTreeSet::new();
    let rows = load_tables().unwrap();
    let mut insts = 0;
    for row in &rows {
        let plan = plan_instantiations(row, &[2, 3, 5, 7], 2);
        insts += plan.len();
        let r = verify_case(row, &plan).unwrap();
        if !r.passed() || r.passing_pf() < 2 {
            bad.push(format!("{} case {}", row.group, row.case));
        }
        if r.printed_m_discrepant() {
            discrepant.insert((row.group, row.case));
        }
    }
    let expected = BTreeSet::from([(GroupId::Sl3, 2)]);
    if discrepant != expected {
        bad.push(format!("m-column discrepancies {discrepant:?}"));
    }
    let pass = bad.is_empty();
    Outcome {
        pass,
        detail: if pass { format!("{} rows, {insts} instantiations, m-column discrepancy only at SL3 case 2", rows.len()) } else { bad.join(" | ") },
    }
}

fn c4() -> Outcome {
    let rows = load_tables().unwrap();
    let mut bad = vec![];
    let mut total = 0;
    for (g, ps) in [(GroupId::Sl3, &[2u64, 3, 5][..]), (GroupId::Sp4, &[2, 3]), (GroupId::G2, &[2, 3])] {
        for &p in ps {
            let r = search_solutions(g, p, p * p, 200_000_000).unwrap();
            if r.truncated {
                bad.push(format!("{g} p={p} truncated"));
            }
            total += r.hits.len();
            for (u, _) in &r.hits {
                if match_to_table(u, &rows, DEFAULT_EXTENSION_BOUND).unwrap().is_none() {
                    bad.push(format!("unmatched {u}"));
                }
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { format!("{total} solutions, all matched") } else { bad.join(" | ") } }
}

fn c5() -> Outcome {
    let rows = load_tables().unwrap();
    let data = load_witnesses().unwrap();
    let mut bad = vec![];
    let mut allowed = 0;
    let mut n = 0;
    for spec in &data.witnesses {
        for r in check_witness(spec, &rows, 2).unwrap() {
            n += 1;
            match r.status {
                Status::Pass => {}
                Status::Discrepant if (r.group, r.case) == (GroupId::Sp4, 5) => allowed += 1,
                Status::Discrepant if r.degenerate => allowed += 1,
                _ => bad.push(format!("{} case {} [{}] {}", r.group, r.case, r.branch, r.instantiation)),
            }
        }
    }
    for w in check_weight_rows(&data, &rows, 2).unwrap() {
        n += 1;
        if !w.passed {
            bad.push(format!("weights case {}", w.case));
        }
    }
    let pass = bad.is_empty();
    Outcome {
        pass,
        detail: if pass {
            format!("{n} records, {allowed} resolved by the fixed-space fallback")
        } else {
            format!("{} unexpected: {}", bad.len(), bad.join(" | "))
        },
    }
}

fn c6() -> Outcome {
    let mut parts = vec![];
    let mut pass = true;
    for (g, p) in [(GroupId::G2, 7), (GroupId::Sp4, 5), (GroupId::Sl3, 3)] {
        let r = check_principal_a1(g, p, 0).unwrap();
        pass &= r.passed;
        parts.push(format!("{g} p={p} {}", if r.passed { "equal" } else { "differs" }));
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn c7() -> Outcome {
    let mut bad = vec![];
    let mut n = 0;
    for p in [2u64, 3, 5, 7] {
        for case in 1..=6 {
            let r = check_poly_lemma(case, p, 200, p * p * p).unwrap();
            n += 1;
            if !r.passed {
                bad.push(format!("case {case} p={p}"));
            }
        }
        let exprs: &[u32] = if p == 2 { &[1, 2] } else { &[3, 4, 5] };
        for &e in exprs {
            n += 1;
            if !check_ppower_lemma(e, p, 20, 64).unwrap().passed {
                bad.push(format!("p-power {e} p={p}"));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { format!("{n} checks") } else { bad.join(" | ") } }
}

fn c8() -> Outcome {
    let mut bad = vec![];
    for g in [GroupId::Sp4, GroupId::G2] {
        for p in [2, 3, 5] {
            let s = DiagonalA1Spec::new(g, p, p).unwrap();
            if !check_h_torus(&s).passed {
                bad.push(format!("{g} p={p} torus"));
            }
            if !check_normalization(&s).unwrap().passed {
                bad.push(format!("{g} p={p} normalization"));
            }
            if !check_a_summands(&s).unwrap().passed {
                bad.push(format!("{g} p={p} summands"));
            }
        }
    }
    let mut dims = BTreeMap::new();
    for (g, ps, want) in [(GroupId::Sp4, &[3u64, 5][..], 16), (GroupId::G2, &[3, 5, 7], 49)] {
        for &p in ps {
            let r = check_irreducible(&DiagonalA1Spec::new(g, p, p).unwrap(), DEFAULT_SPAN_STEPS).unwrap();
            dims.insert(format!("{g} p={p}"), r.full.dim);
            if r.full.dim != want {
                bad.push(format!("{g} p={p} span {}", r.full.dim));
            }
        }
    }
    let r2 = check_irreducible(&DiagonalA1Spec::new(GroupId::G2, 2, 2).unwrap(), DEFAULT_SPAN_STEPS).unwrap();
    let quotient = r2.quotient.map(|q| q.dim.to_string()).unwrap_or("-".into());
    let pass = bad.is_empty();
    Outcome {
        pass,
        detail: if pass {
            format!("spans {dims:?}; G2 p=2 reported: 7-dim {} of 49, 6-dim quotient {quotient} of 36", r2.full.dim)
        } else {
            bad.join(" | ")
        },
    }
}

fn c9() -> Outcome {
    let cfg = RunConfig { primes: vec![2, 3], f_max: 1, z_max: 60, ..Default::default() };
    let a = run_suite(&cfg).unwrap().machine();
    let b = run_suite(&cfg).unwrap().machine();
    let suites: BTreeSet<Suite> = cfg.suites.clone();
    Outcome {
        pass: a == b,
        detail: format!("{} suites, {} lines, {} bytes, identical {}", suites.len(), a.lines().count(), a.len(), a == b),
    }
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 9] = [
        (1, "system derivation", Duration::from_secs(10), c1),
        (2, "representation validation", Duration::from_secs(600), c2),
        (3, "table verification", Duration::from_secs(120), c3),
        (4, "completeness search", Duration::from_secs(1800), c4),
        (5, "witnesses", Duration::from_secs(300), c5),
        (6, "principal A1", Duration::from_secs(600), c6),
        (7, "lemma suites", Duration::from_secs(600), c7),
        (8, "existence", Duration::from_secs(300), c8),
        (9, "determinism", Duration::from_secs(1800), c9),
    ];
    let mut unexpected = vec![];
    for (n, name, limit, f) in criteria {
        let o = timed(limit, f);
        println!("criterion {n} ({name}): {} :: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !KNOWN_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
