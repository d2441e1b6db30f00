//! Matching a spec against the table rows up to Weyl conjugation, torus
//! normalization and the special isogeny.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::isogeny::isogeny_swap;
use super::normalize::{normalize_solutions, LogTable};
use super::spec::{TSpec, USpec};
use super::table::CaseRow;
use super::torus::solve_torus;
use super::weyl::weyl_conjugates;
use crate::error::Result;
use crate::exactalg::{is_power_of, ExtField, PrimeField, Q};
use crate::expr::Expr;
use crate::rootdata::GroupId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Match {
    pub group: GroupId,
    pub case: u32,
    pub transform: String,
}

type TableCache = Mutex<HashMap<(u64, u32), Arc<LogTable>>>;
static LOG_TABLES: OnceLock<TableCache> = OnceLock::new();

/// Fields larger than this are not searched for normalizing tori.
const MAX_FIELD: u64 = 4096;

fn log_table(p: u64, k: u32) -> Option<Arc<LogTable>> {
    let base = PrimeField::new(p).ok()?;
    if p.checked_pow(k).map_or(true, |s| s > MAX_FIELD) {
        return None;
    }
    let cache = LOG_TABLES.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    Some(guard.entry((p, k)).or_insert_with(|| Arc::new(LogTable::new(ExtField::new(base, k as usize)))).clone())
}

/// Candidate values for the row's exponent symbols.
fn q_assignments(row: &CaseRow, u: &USpec) -> Result<Vec<BTreeMap<String, i64>>> {
    let syms = row.q_symbols();
    let mut fixed: BTreeMap<String, i64> = BTreeMap::new();
    for i in u.support() {
        let Some(e) = &row.q[i] else { return Ok(vec![]) };
        let (c0, lin) = e.linear_form()?;
        if *c0.numer() != 0 || lin.len() != 1 {
            continue;
        }
        let (s, k) = &lin[0];
        let v = Q::from_integer(u.q[i] as i64) / k;
        if !v.is_integer() || v.to_integer() <= 0 || !is_power_of(v.to_integer() as u64, u.p) {
            return Ok(vec![]);
        }
        match fixed.get(s) {
            Some(&old) if old != v.to_integer() => return Ok(vec![]),
            _ => {
                fixed.insert(s.clone(), v.to_integer());
            }
        }
    }
    let max_q = u.q.iter().copied().max().unwrap_or(1).max(1) as i64 * u.p as i64;
    let mut out = vec![fixed];
    for s in syms.iter() {
        if out[0].contains_key(s) {
            continue;
        }
        let mut powers = vec![];
        let mut v = 1i64;
        while v <= max_q {
            powers.push(v);
            v *= u.p as i64;
        }
        out = out
            .into_iter()
            .flat_map(|m| {
                powers.iter().map(move |&v| {
                    let mut m = m.clone();
                    m.insert(s.clone(), v);
                    m
                })
            })
            .collect();
    }
    Ok(out)
}

fn constant_one(e: &Option<Expr>) -> bool {
    match e {
        Some(e) => e.is_constant() && e.eval_q(&|_| None).map(|v| v == Q::from_integer(1)).unwrap_or(false),
        None => false,
    }
}

/// Whether u is literally an instance of the row, up to torus conjugation.
fn row_matches(row: &CaseRow, u: &USpec, torus: Option<TSpec>, ext_bound: u32) -> Result<bool> {
    if row.group != u.group || !row.p.holds(u.p) {
        return Ok(false);
    }
    let s = u.support();
    for i in 0..u.c.len() {
        match (&row.c[i], u.c[i] != 0) {
            (None, true) => return Ok(false),
            // only a coefficient given by an expression may vanish
            (Some(e), false) if e.is_constant() => return Ok(false),
            _ => {}
        }
    }
    let Some(torus) = torus else { return Ok(false) };
    let m_pattern = row.m_pattern()?;
    let ones: Vec<usize> = s.iter().copied().filter(|&i| constant_one(&row.c[i])).collect();
    if ones.len() < 2 {
        return Ok(false);
    }
    for qs in q_assignments(row, u)? {
        let env = |x: &str| qs.get(x).copied();
        let q_ok = s.iter().all(|&i| row.q[i].as_ref().map(|e| e.eval_int(&env).ok() == Some(u.q[i] as i64)) == Some(true));
        if !q_ok {
            continue;
        }
        let envq = |x: &str| qs.get(x).map(|&v| Q::from_integer(v));
        let (Ok(m1), Ok(m2)) = (m_pattern[0].eval_q(&envq), m_pattern[1].eval_q(&envq)) else { continue };
        if TSpec::from_ratios(m1, m2, Q::from_integer(1)).ok() != Some(torus) {
            continue;
        }
        if coefficients_match(row, u, ones[0], ones[1], ext_bound)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn coefficients_match(row: &CaseRow, u: &USpec, i: usize, j: usize, ext_bound: u32) -> Result<bool> {
    for k in 1..=ext_bound {
        let Some(table) = log_table(u.p, k) else { break };
        let ext = &table.ext;
        for sol in normalize_solutions(u, i, j, &table)? {
            let env = |name: &str| -> Option<Vec<u64>> {
                let l: usize = name.strip_prefix('c')?.parse().ok()?;
                sol.c.get(l.checked_sub(1)?).cloned()
            };
            let ok = row.c.iter().enumerate().all(|(r, pat)| match pat {
                None => true,
                Some(e) => e.eval(ext, &env).map(|v| v == sol.c[r]).unwrap_or(false),
            });
            if ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The first (transformation, row) pair under which the spec is an
/// instance of a row. Transformations are tried in order: identity, Weyl
/// conjugates, the special isogeny (for SL3 the graph automorphism), Weyl
/// conjugates after it.
pub fn match_to_table(u: &USpec, rows: &[CaseRow], ext_bound: u32) -> Result<Option<Match>> {
    let mut candidates: Vec<(String, USpec)> = vec![];
    for (w, s) in weyl_conjugates(u)? {
        let label = if w.word.is_empty() { "identity".to_string() } else { format!("weyl {}", w.label()) };
        candidates.push((label, s));
    }
    if let Some(v) = isogeny_swap(u)? {
        let name = if u.group == GroupId::Sl3 { "graph automorphism" } else { "isogeny" };
        for (w, s) in weyl_conjugates(&v)? {
            let label = if w.word.is_empty() { name.to_string() } else { format!("{name}, weyl {}", w.label()) };
            candidates.push((label, s));
        }
    }
    for (label, s) in candidates {
        let torus = solve_torus(&s)?;
        for row in rows {
            if row_matches(row, &s, torus, ext_bound)? {
                return Ok(Some(Match { group: row.group, case: row.case, transform: label }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgrp::table::load_tables;

    #[test]
    fn instances_match_themselves() {
        let rows = load_tables().unwrap();
        let u = USpec::new(GroupId::Sp4, 5, vec![1, 1, 2, 1], vec![1, 1, 2, 3]).unwrap();
        let m = match_to_table(&u, &rows, 4).unwrap().unwrap();
        assert_eq!((m.case, m.transform.as_str()), (1, "identity"));
    }

    #[test]
    fn sp4_case4_conjugate() {
        let rows = load_tables().unwrap();
        let u = USpec::new(GroupId::Sp4, 3, vec![0, 1, 0, 1], vec![0, 1, 0, 3]).unwrap();
        let m = match_to_table(&u, &rows, 4).unwrap().unwrap();
        assert_eq!(m.case, 4);
        assert!(m.transform.starts_with("weyl"));
    }

    #[test]
    fn sp4_isogeny_to_case2() {
        let rows = load_tables().unwrap();
        let u = USpec::new(GroupId::Sp4, 2, vec![0, 1, 1, 0], vec![0, 1, 2, 0]).unwrap();
        let m = match_to_table(&u, &rows, 4).unwrap().unwrap();
        assert_eq!(m.case, 2);
        assert!(m.transform.starts_with("isogeny"));
    }
}
