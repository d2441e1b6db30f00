//! Batch driver: runs the selected suites and assembles a deterministic
//! report, one self-describing JSON record per line in machine form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::chevrep::{cached_rep, validate_rep};
use crate::error::{Error, Result};
use crate::exactalg::{is_prime, PrimeField};
use crate::existence::{check_a_summands, check_h_torus, check_irreducible, check_normalization, DiagonalA1Spec};
use crate::lemmas::{check_poly_lemma, check_ppower_lemma, ppower_label};
use crate::rootdata::GroupId;
use crate::subgrp::normalize::DEFAULT_EXTENSION_BOUND;
use crate::subgrp::system::{derive_cross_terms, matching_sign_patterns, printed_system, system_diff};
use crate::subgrp::{load_tables, match_to_table, plan_instantiations, search_solutions, verify_case};
pub use crate::witness::Status;
use crate::witness::principal::default_prime;
use crate::witness::{check_principal_a1, check_subsystem, check_weight_rows, check_witness, load_witnesses};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Systems,
    Tables,
    Search,
    Lemmas,
    Witnesses,
    Existence,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Systems, Suite::Tables, Suite::Search, Suite::Lemmas, Suite::Witnesses, Suite::Existence];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Systems => "systems",
            Suite::Tables => "tables",
            Suite::Search => "search",
            Suite::Lemmas => "lemmas",
            Suite::Witnesses => "witnesses",
            Suite::Existence => "existence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    pub f_max: u32,
    /// exponent bound for the search and the polynomial lemma; p^2 if unset
    pub q_max: Option<u64>,
    pub suites: BTreeSet<Suite>,
    /// wall-clock cap per suite
    pub budget_seconds: u64,
    /// step cap for the exhaustive search and span saturation
    pub step_budget: u64,
    pub z_max: u64,
    pub ppower_f_max: u32,
    pub ppower_m_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            primes: vec![2, 3, 5],
            f_max: 2,
            q_max: None,
            suites: Suite::ALL.into_iter().collect(),
            budget_seconds: 1800,
            step_budget: 50_000_000,
            z_max: crate::lemmas::DEFAULT_Z_MAX,
            ppower_f_max: 20,
            ppower_m_max: crate::lemmas::DEFAULT_PPOWER_BOUND,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.primes.is_empty() {
            return bad("no primes".into());
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return bad(format!("{p} is not prime"));
        }
        if self.q_max == Some(0) {
            return bad("q_max must be positive".into());
        }
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if self.budget_seconds == 0 || self.step_budget == 0 || self.z_max == 0 {
            return bad("budgets must be positive".into());
        }
        if self.ppower_f_max == 0 || self.ppower_m_max == 0 {
            return bad("lemma bounds must be positive".into());
        }
        Ok(())
    }

    fn sorted_primes(&self) -> Vec<u64> {
        let s: BTreeSet<u64> = self.primes.iter().copied().collect();
        s.into_iter().collect()
    }

    fn q_max_for(&self, p: u64) -> u64 {
        self.q_max.unwrap_or(p * p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub group: String,
    pub case: u32,
    pub instantiation: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub discrepant: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub engine_version: String,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn by_suite(&self, s: Suite) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.suite == s)
    }

    /// One JSON object per line: a header, the records, the summary.
    pub fn machine(&self) -> String {
        #[derive(Serialize)]
        struct Header<'a> {
            kind: &'static str,
            engine_version: &'a str,
            config: &'a RunConfig,
        }
        #[derive(Serialize)]
        struct Line<'a> {
            kind: &'static str,
            #[serde(flatten)]
            record: &'a Record,
        }
        #[derive(Serialize)]
        struct Tail<'a> {
            kind: &'static str,
            #[serde(flatten)]
            summary: &'a Summary,
        }
        let mut out = String::new();
        let mut push = |s: serde_json::Result<String>| {
            out.push_str(&s.expect("report serializes"));
            out.push('\n');
        };
        push(serde_json::to_string(&Header { kind: "config", engine_version: &self.engine_version, config: &self.config }));
        for r in &self.records {
            push(serde_json::to_string(&Line { kind: "record", record: r }));
        }
        push(serde_json::to_string(&Tail { kind: "summary", summary: &self.summary }));
        out
    }

    pub fn text(&self) -> String {
        let mut out = format!("chevcheck {}\n", self.engine_version);
        for r in &self.records {
            let case = if r.case == 0 { String::new() } else { format!(" case {}", r.case) };
            out.push_str(&format!("[{}] {} {}{} {} {}", r.status, r.suite, r.group, case, r.check, r.instantiation));
            if !r.detail.is_empty() {
                out.push_str(&format!(" :: {}", r.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "pass {}  discrepant {}  fail {}\n",
            self.summary.pass, self.summary.discrepant, self.summary.fail
        ));
        out
    }
}

struct Sink {
    suite: Suite,
    records: Vec<Record>,
    start: Instant,
    budget: Duration,
}

impl Sink {
    fn push(&mut self, group: impl ToString, case: u32, inst: impl ToString, check: &str, status: Status, detail: impl ToString) {
        self.records.push(Record {
            suite: self.suite,
            group: group.to_string(),
            case,
            instantiation: inst.to_string(),
            check: check.to_string(),
            status,
            detail: detail.to_string(),
        });
    }

    fn ok(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn over_budget(&self) -> bool {
        self.start.elapsed() > self.budget
    }
}

fn run_systems(cfg: &RunConfig, s: &mut Sink) -> Result<()> {
    for g in GroupId::ALL {
        let derived = derive_cross_terms(g)?;
        let diff = system_diff(&derived, &printed_system(g)?);
        if diff.is_empty() {
            s.push(g, 0, "", "additivity system", Status::Pass, "");
        } else {
            let signs = matching_sign_patterns(g)?;
            let detail = format!("{}; printed form matches under root signs {:?}", diff.join("; "), signs);
            let status = if signs.is_empty() { Status::Fail } else { Status::Discrepant };
            s.push(g, 0, "", "additivity system", status, detail);
        }
    }
    for p in cfg.sorted_primes() {
        let f = PrimeField::new(p)?;
        for (g, m) in [(GroupId::Sl3, "natural"), (GroupId::Sp4, "V2"), (GroupId::Sp4, "V1"), (GroupId::G2, "V")] {
            let check = format!("representation {m}");
            match cached_rep(g, m, f).and_then(|r| validate_rep(&r)) {
                Ok(r) => s.push(g, 0, format!("p={p}"), &check, Status::Pass, format!("{} checks", r.checks.len())),
                Err(e) => s.push(g, 0, format!("p={p}"), &check, Status::Fail, e),
            }
        }
    }
    Ok(())
}

fn run_tables(cfg: &RunConfig, s: &mut Sink) -> Result<()> {
    for row in load_tables()? {
        let insts = plan_instantiations(&row, &cfg.primes, cfg.f_max);
        let rep = verify_case(&row, &insts)?;
        for r in &rep.records {
            let status = match (r.additive && r.torus, r.printed_m) {
                (true, true) => Status::Pass,
                (true, false) => Status::Discrepant,
                _ => Status::Fail,
            };
            let detail = if r.printed_m || r.detail.contains("printed m-column") {
                r.detail.clone()
            } else {
                format!("printed m-column disagrees; {}", r.detail)
            };
            s.push(row.group, row.case, &r.instantiation, "additive and torus", status, detail.trim_end_matches("; "));
        }
        let n = rep.passing_pf();
        s.push(row.group, row.case, "", "coverage", Sink::ok(n >= 2), format!("{n} passing (p, f) instantiations"));
        if s.over_budget() {
            return Err(Error::BudgetExceeded(cfg.budget_seconds));
        }
    }
    Ok(())
}

fn run_search(cfg: &RunConfig, s: &mut Sink) -> Result<()> {
    let rows = load_tables()?;
    for g in GroupId::ALL {
        for p in cfg.sorted_primes() {
            let q_max = cfg.q_max_for(p);
            let inst = format!("p={p} q_max={q_max}");
            let res = search_solutions(g, p, q_max, cfg.step_budget)?;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            let mut unmatched = 0;
            for (u, t) in &res.hits {
                match match_to_table(u, &rows, DEFAULT_EXTENSION_BOUND)? {
                    Some(m) => {
                        let kind = m.transform.split(' ').next().unwrap_or("").to_string();
                        *counts.entry(kind).or_default() += 1;
                    }
                    None => {
                        unmatched += 1;
                        s.push(g, 0, &inst, "unmatched solution", Status::Fail, format!("{u} {t}"));
                    }
                }
                if s.over_budget() {
                    return Err(Error::BudgetExceeded(cfg.budget_seconds));
                }
            }
            let breakdown = counts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
            let detail = format!("{} solutions, {unmatched} unmatched; {breakdown}", res.hits.len());
            s.push(g, 0, &inst, "completeness", Sink::ok(unmatched == 0 && !res.truncated), detail);
            if res.truncated {
                s.push(g, 0, &inst, "search budget", Status::Fail, format!("stopped after {} steps", res.steps));
            }
        }
    }
    Ok(())
}

fn run_lemmas(cfg: &RunConfig, s: &mut Sink) -> Result<()> {
    for p in cfg.sorted_primes() {
        let q_max = cfg.q_max_for(p);
        for case in 1..=6 {
            let r = check_poly_lemma(case, p, cfg.z_max, q_max)?;
            let inst = format!("p={p} z<={} q<={q_max}", cfg.z_max);
            let detail = if !r.applicable {
                "not applicable for p = 2".to_string()
            } else {
                let mut d = format!("{} solutions", r.solutions);
                if !r.missing.is_empty() {
                    d.push_str(&format!("; missing {}", r.missing.join(", ")));
                }
                if !r.extra.is_empty() {
                    d.push_str(&format!("; unexpected {}", r.extra.join(", ")));
                }
                d
            };
            s.push("", case, inst, "polynomial lemma", Sink::ok(r.passed), detail);
        }
        let exprs: &[u32] = if p == 2 { &[1, 2] } else { &[3, 4, 5] };
        for &e in exprs {
            let r = check_ppower_lemma(e, p, cfg.ppower_f_max, cfg.ppower_m_max)?;
            let inst = format!("p={p} f<={} m<={}", cfg.ppower_f_max, cfg.ppower_m_max);
            let detail = if r.passed {
                format!("{}: integral at {} values of f, never a power", ppower_label(e), r.integral.len())
            } else {
                format!("{}: equals a power at (f, m) = {:?}", ppower_label(e), r.counterexamples)
            };
            s.push("", e, inst, "p-power lemma", Sink::ok(r.passed), detail);
        }
    }
    Ok(())
}

fn run_witnesses(cfg: &RunConfig, s: &mut Sink) -> Result<()> {
    let rows = load_tables()?;
    let data = load_witnesses()?;
    for spec in &data.witnesses {
        for r in check_witness(spec, &rows, cfg.f_max)? {
            let check = if r.branch.is_empty() { "witness".to_string() } else { format!("witness [{}]", r.branch) };
            let mut detail = format!("w = {} in {}", r.vector, r.module);
            if r.degenerate {
                detail.push_str("; printed vector vanishes here");
            } else if !r.detail.is_empty() {
                detail.push_str(&format!("; {}", r.detail));
            }
            if let Some(ok) = r.corrected_ok {
                detail.push_str(&format!("; corrected vector {}", if ok { "verifies" } else { "fails" }));
            }
            if let Some(fb) = &r.fallback {
                detail.push_str(&format!("; fixed-space witness {fb}"));
            }
            s.push(r.group, r.case, &r.instantiation, &check, r.status, detail);
        }
        if s.over_budget() {
            return Err(Error::BudgetExceeded(cfg.budget_seconds));
        }
    }
    for r in check_weight_rows(&data, &rows, cfg.f_max)? {
        let detail = if r.passed { String::new() } else { format!("expected {:?}, got {:?}", r.expected, r.actual) };
        s.push(GroupId::G2, r.case, &r.instantiation, "T_H-weights", Sink::ok(r.passed), detail);
    }
    for e in &data.subsystems {
        let r = check_subsystem(e, &rows)?;
        s.push(r.group, r.case, "", &format!("subsystem {}", r.kind), Sink::ok(r.passed), r.roots.join(" "));
    }
    for g in GroupId::ALL {
        let p = default_prime(g);
        for f in 0..=cfg.f_max.min(1) {
            let r = check_principal_a1(g, p, f)?;
            let inst = format!("p={p} q1={}", r.q1);
            let mut status = Sink::ok(r.passed);
            let mut detail = format!("gamma {:?}", r.gamma);
            if g == GroupId::Sl3 && r.passed {
                status = Status::Discrepant;
                detail.push_str("; the module of highest weight 2q1 is 3-dimensional, not two-dimensional");
            }
            if r.printed_reading == Some(false) && r.passed {
                status = Status::Discrepant;
                detail.push_str("; equality holds with the scalars dividing w_i, not multiplying");
            }
            if !r.torus_match {
                detail.push_str("; torus weights differ");
            }
            s.push(g, 1, inst, "principal A1", status, detail);
        }
    }
    Ok(())
}

fn run_existence(cfg: &RunConfig, s: &mut Sink) -> Result<()> {
    for g in [GroupId::Sp4, GroupId::G2] {
        for p in cfg.sorted_primes() {
            let spec = DiagonalA1Spec::new(g, p, p)?;
            let inst = format!("p={p} q={p}");
            let h = check_h_torus(&spec);
            let mut status = Sink::ok(h.passed);
            let mut detail = format!(
                "h = {:?}, simple root weights {:?}, companion weight {}",
                h.torus, h.simple_weights, h.companion_weight
            );
            if h.passed && h.stated_weights.is_some_and(|w| w != h.printed_form_weights) {
                status = Status::Discrepant;
                detail.push_str(&format!("; the printed form {:?} gives {:?}", h.printed_torus, h.printed_form_weights));
            }
            s.push(g, 0, &inst, "torus of A", status, detail);

            let n = check_normalization(&spec)?;
            let detail = format!(
                "centralized by X {}, torus scales {}, torus normalizes X {}",
                n.centralized_by_x, n.torus_scales, n.torus_normalizes_x
            );
            s.push(g, 0, &inst, "normalization", Sink::ok(n.passed), detail);

            let a = check_a_summands(&spec)?;
            let leaks = |l: &Vec<(String, String)>| l.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(",");
            let detail = format!(
                "spans {:?} stable {:?}, leaks [{}] [{}]",
                a.spans,
                a.a_stable,
                leaks(&a.leaks[0]),
                leaks(&a.leaks[1])
            );
            s.push(g, 0, &inst, "A-summands", Sink::ok(a.passed), detail);

            let r = check_irreducible(&spec, cfg.step_budget)?;
            let n2 = r.full.n * r.full.n;
            if g == GroupId::G2 && p == 2 {
                let q = r.quotient.as_ref().map(|q| format!("{} of {}", q.dim, q.n * q.n)).unwrap_or("not formed".into());
                let detail = format!(
                    "7-dim module: span {} of {n2}; zero-weight line invariant {:?}; 6-dim quotient: span {q}",
                    r.full.dim, r.zero_weight_line_invariant
                );
                s.push(g, 0, &inst, "irreducibility (reported)", Status::Pass, detail);
            } else {
                let detail = format!("span {} of {n2} over F_{}", r.full.dim, r.field_size);
                s.push(g, 0, &inst, "irreducibility", Sink::ok(r.full.irreducible), detail);
            }
            if s.over_budget() {
                return Err(Error::BudgetExceeded(cfg.budget_seconds));
            }
        }
    }
    Ok(())
}

/// Runs the selected suites. A suite that errors or exceeds its time budget
/// contributes a single fail record instead of aborting the run.
pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    load_tables()?;
    load_witnesses()?;
    let mut records = vec![];
    for &suite in &cfg.suites {
        let mut sink = Sink { suite, records: vec![], start: Instant::now(), budget: Duration::from_secs(cfg.budget_seconds) };
        let res = match suite {
            Suite::Systems => run_systems(cfg, &mut sink),
            Suite::Tables => run_tables(cfg, &mut sink),
            Suite::Search => run_search(cfg, &mut sink),
            Suite::Lemmas => run_lemmas(cfg, &mut sink),
            Suite::Witnesses => run_witnesses(cfg, &mut sink),
            Suite::Existence => run_existence(cfg, &mut sink),
        };
        if let Err(e) = res {
            sink.push("", 0, "", "suite", Status::Fail, e);
        }
        records.extend(sink.records);
    }
    records.sort();
    let mut summary = Summary::default();
    for r in &records {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Discrepant => summary.discrepant += 1,
            Status::Fail => summary.fail += 1,
        }
    }
    Ok(Report { engine_version: ENGINE_VERSION.to_string(), config: cfg.clone(), records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_prime() {
        let cfg = RunConfig { primes: vec![4], ..Default::default() };
        assert!(matches!(run_suite(&cfg), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn lemmas_only() {
        let cfg = RunConfig {
            primes: vec![3],
            suites: BTreeSet::from([Suite::Lemmas]),
            z_max: 30,
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.records.iter().all(|x| x.suite == Suite::Lemmas));
        assert!(!r.failed(), "{}", r.text());
    }
}
