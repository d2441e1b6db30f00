//! Case tables: parsing, instantiation at concrete (p, f), verification.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::spec::{TSpec, USpec};
use super::torus::solve_torus;
use super::{check_additive, check_additive_in};
use crate::chevrep::cached_rep;
use crate::error::{Error, Result};
use crate::exactalg::{PrimeField, Q};
use crate::expr::Expr;
use crate::rootdata::GroupId;

const TABLES: &str = include_str!("../../data/tables.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PConstraint {
    Any,
    Eq(u64),
    Ne(u64),
    Ge(u64),
}

impl PConstraint {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("constraint {s}")));
        if s == "any" {
            Ok(PConstraint::Any)
        } else if let Some(t) = s.strip_prefix(">=") {
            Ok(PConstraint::Ge(num(t)?))
        } else if let Some(t) = s.strip_prefix("!=") {
            Ok(PConstraint::Ne(num(t)?))
        } else if let Some(t) = s.strip_prefix('=') {
            Ok(PConstraint::Eq(num(t)?))
        } else {
            Err(Error::Parse(format!("constraint {s}")))
        }
    }

    pub fn holds(&self, p: u64) -> bool {
        match *self {
            PConstraint::Any => true,
            PConstraint::Eq(k) => p == k,
            PConstraint::Ne(k) => p != k,
            PConstraint::Ge(k) => p >= k,
        }
    }
}

impl fmt::Display for PConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PConstraint::Any => f.write_str("any"),
            PConstraint::Eq(k) => write!(f, "={k}"),
            PConstraint::Ne(k) => write!(f, "!={k}"),
            PConstraint::Ge(k) => write!(f, ">={k}"),
        }
    }
}

#[derive(Deserialize)]
struct RawCase {
    group: String,
    case: u32,
    q: Vec<String>,
    c: Vec<String>,
    m: Vec<String>,
    m_proof: Option<Vec<String>>,
    #[serde(default)]
    discrepant: bool,
    p: String,
}

#[derive(Deserialize)]
struct RawFile {
    case: Vec<RawCase>,
}

#[derive(Clone, Debug)]
pub struct CaseRow {
    pub group: GroupId,
    pub case: u32,
    /// None where the root is absent
    pub q: Vec<Option<Expr>>,
    pub c: Vec<Option<Expr>>,
    pub m_printed: Vec<String>,
    pub m_proof: Option<Vec<String>>,
    pub discrepant: bool,
    pub p: PConstraint,
}

impl CaseRow {
    pub fn support(&self) -> Vec<usize> {
        (0..self.q.len()).filter(|&i| self.q[i].is_some()).collect()
    }

    pub fn q_symbols(&self) -> Vec<String> {
        let mut s = std::collections::BTreeSet::new();
        for e in self.q.iter().flatten() {
            s.extend(e.symbols());
        }
        s.into_iter().collect()
    }

    pub fn free_coefficients(&self) -> Vec<String> {
        let mut s = std::collections::BTreeSet::new();
        for e in self.c.iter().flatten() {
            s.extend(e.symbols());
        }
        s.into_iter().collect()
    }

    /// The m-column used for verification: the derived value where the
    /// printed one is flagged.
    pub fn m_pattern(&self) -> Result<Vec<Expr>> {
        self.m_proof.as_ref().unwrap_or(&self.m_printed).iter().map(|s| Expr::parse(s)).collect()
    }

    pub fn id(&self) -> String {
        format!("{} case {}", self.group, self.case)
    }
}

pub fn parse_tables(text: &str) -> Result<Vec<CaseRow>> {
    let raw: RawFile = toml::from_str(text).map_err(|e| Error::DataFileCorrupt(e.to_string()))?;
    let mut rows = vec![];
    for r in raw.case {
        let group = GroupId::parse(&r.group).map_err(|e| Error::DataFileCorrupt(e.to_string()))?;
        let n = group.datum().num_positive();
        let bad = |what: &str| Error::DataFileCorrupt(format!("{} case {}: {what}", r.group, r.case));
        if r.q.len() != n || r.c.len() != n || r.m.len() != 2 {
            return Err(bad("wrong number of entries"));
        }
        let mut q = vec![];
        let mut c = vec![];
        for (qs, cs) in r.q.iter().zip(&r.c) {
            match (qs.trim(), cs.trim()) {
                ("-", "0") => {
                    q.push(None);
                    c.push(None);
                }
                ("-", _) | (_, "0") => return Err(bad("exponent and coefficient disagree on support")),
                (qs, cs) => {
                    q.push(Some(Expr::parse(qs).map_err(|e| bad(&e.to_string()))?));
                    c.push(Some(Expr::parse(cs).map_err(|e| bad(&e.to_string()))?));
                }
            }
        }
        for m in r.m.iter().chain(r.m_proof.iter().flatten()) {
            Expr::parse(m).map_err(|e| bad(&e.to_string()))?;
        }
        if r.discrepant != r.m_proof.is_some() {
            return Err(bad("discrepant flag needs a derived m-column"));
        }
        rows.push(CaseRow {
            group,
            case: r.case,
            q,
            c,
            m_printed: r.m,
            m_proof: r.m_proof,
            discrepant: r.discrepant,
            p: PConstraint::parse(&r.p).map_err(|e| bad(&e.to_string()))?,
        });
    }
    Ok(rows)
}

pub fn load_tables() -> Result<Vec<CaseRow>> {
    parse_tables(TABLES)
}

/// Concrete values for one instantiation of a row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Instantiation {
    pub p: u64,
    pub f: BTreeMap<String, u32>,
    pub free: BTreeMap<String, u64>,
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        for (k, v) in &self.f {
            write!(f, " f({k})={v}")?;
        }
        for (k, v) in &self.free {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

fn q_values(p: u64, f: &BTreeMap<String, u32>) -> BTreeMap<String, i64> {
    f.iter().map(|(k, &e)| (k.clone(), p.pow(e) as i64)).collect()
}

fn eval_m(pattern: &[Expr], qs: &BTreeMap<String, i64>, m: i64) -> Result<TSpec> {
    let env = |s: &str| qs.get(s).map(|&v| Q::from_integer(v));
    let v1 = pattern[0].eval_q(&env)?;
    let v2 = pattern[1].eval_q(&env)?;
    let mq = Q::from_integer(m);
    TSpec::from_ratios(v1 * mq, v2 * mq, mq)
}

/// Concrete (U, T) for a row. The torus comes from the m-column used for
/// verification, scaled to a primitive integer triple.
pub fn instantiate_case(
    row: &CaseRow,
    p: u64,
    f: &BTreeMap<String, u32>,
    m: i64,
    free: &BTreeMap<String, u64>,
) -> Result<(USpec, TSpec)> {
    if !row.p.holds(p) {
        return Err(Error::CharacteristicExcluded { p, constraint: row.p.to_string() });
    }
    let field = PrimeField::new(p)?;
    let qs = q_values(p, f);
    let mut c = vec![];
    let mut q = vec![];
    for (qe, ce) in row.q.iter().zip(&row.c) {
        match (qe, ce) {
            (Some(qe), Some(ce)) => {
                q.push(qe.eval_int(&|s| qs.get(s).copied())? as u64);
                c.push(ce.eval(&field, &|s| free.get(s).map(|&v| v % p))?);
            }
            _ => {
                q.push(0);
                c.push(0);
            }
        }
    }
    let u = USpec::new(row.group, p, c, q)?;
    let t = eval_m(&row.m_pattern()?, &qs, m)?;
    Ok((u, t))
}

const FALLBACK_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Instantiations of a row: configured primes allowed by the constraint
/// (else the smallest allowed prime), every f in [0, f_max] per exponent
/// symbol, every nonzero value of each free coefficient. Assignments that
/// make a listed coefficient vanish belong to other rows and are skipped.
pub fn plan_instantiations(row: &CaseRow, primes: &[u64], f_max: u32) -> Vec<Instantiation> {
    let mut ps: Vec<u64> = primes.iter().copied().filter(|&p| row.p.holds(p)).collect();
    if ps.is_empty() {
        ps.extend(FALLBACK_PRIMES.iter().copied().find(|&p| row.p.holds(p)));
    }
    let qsyms = row.q_symbols();
    let csyms = row.free_coefficients();
    let mut out = vec![];
    for &p in &ps {
        let field = PrimeField::new(p).expect("prime");
        for fa in product(qsyms.len(), f_max as u64 + 1) {
            let f: BTreeMap<String, u32> = qsyms.iter().cloned().zip(fa.iter().map(|&v| v as u32)).collect();
            for ca in product(csyms.len(), p - 1) {
                let free: BTreeMap<String, u64> = csyms.iter().cloned().zip(ca.iter().map(|&v| v + 1)).collect();
                let vanishes = row.c.iter().flatten().any(|e| {
                    matches!(e.eval(&field, &|s| free.get(s).copied()), Ok(0))
                });
                if !vanishes {
                    out.push(Instantiation { p, f: f.clone(), free });
                }
            }
        }
    }
    out
}

fn product(len: usize, base: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..base).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct InstRecord {
    pub instantiation: String,
    pub spec: String,
    pub additive: bool,
    pub torus: bool,
    pub printed_m: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub group: GroupId,
    pub case: u32,
    pub records: Vec<InstRecord>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.additive && r.torus)
    }

    pub fn printed_m_discrepant(&self) -> bool {
        self.records.iter().any(|r| !r.printed_m)
    }

    /// Distinct (p, f) pairs that passed.
    pub fn passing_pf(&self) -> usize {
        let mut s = std::collections::BTreeSet::new();
        for r in self.records.iter().filter(|r| r.additive && r.torus) {
            s.insert(r.instantiation.split(" c").next().unwrap_or("").to_string());
        }
        s.len()
    }
}

/// Additivity and torus compatibility for each instantiation; the printed
/// m-column is compared separately so a misprint is reported, not fatal.
pub fn verify_case(row: &CaseRow, insts: &[Instantiation]) -> Result<CaseReport> {
    let mut records = vec![];
    let printed: Vec<Expr> = row.m_printed.iter().map(|s| Expr::parse(s)).collect::<Result<_>>()?;
    for inst in insts {
        let (u, t) = instantiate_case(row, inst.p, &inst.f, 1, &inst.free)?;
        let mut detail = vec![];
        let mut additive = check_additive(&u)?;
        if row.group == GroupId::Sp4 {
            // the same identity in the five-dimensional module
            let v1 = cached_rep(GroupId::Sp4, "V1", u.field())?;
            let other = check_additive_in(&u, &v1)?;
            if other != additive {
                detail.push(format!("V1 disagrees: {other}"));
                additive = false;
            }
        }
        if !additive {
            detail.push("u(a)u(b) != u(a+b)".into());
        }
        let solved = solve_torus(&u)?;
        let torus = solved == Some(t);
        if !torus {
            detail.push(format!("torus solve gives {solved:?}, pattern gives {t}"));
        }
        let qs = q_values(inst.p, &inst.f);
        let printed_m = match eval_m(&printed, &qs, 1) {
            Ok(tp) => Some(tp) == solved,
            Err(e) => {
                detail.push(format!("printed m-column: {e}"));
                false
            }
        };
        if !printed_m && detail.iter().all(|d| !d.starts_with("printed")) {
            detail.push("printed m-column disagrees with the torus solution".into());
        }
        records.push(InstRecord {
            instantiation: inst.to_string(),
            spec: format!("{u} {t}"),
            additive,
            torus,
            printed_m,
            detail: detail.join("; "),
        });
    }
    Ok(CaseReport { group: row.group, case: row.case, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(g: GroupId, case: u32) -> CaseRow {
        load_tables().unwrap().into_iter().find(|r| r.group == g && r.case == case).unwrap()
    }

    #[test]
    fn table_parses() {
        let rows = load_tables().unwrap();
        assert_eq!(rows.iter().filter(|r| r.group == GroupId::Sl3).count(), 2);
        assert_eq!(rows.iter().filter(|r| r.group == GroupId::Sp4).count(), 5);
        assert_eq!(rows.iter().filter(|r| r.group == GroupId::G2).count(), 21);
    }

    #[test]
    fn sp4_case1_at_5() {
        let f = BTreeMap::from([("q1".to_string(), 0)]);
        let (u, t) = instantiate_case(&row(GroupId::Sp4, 1), 5, &f, 1, &BTreeMap::new()).unwrap();
        assert_eq!(u.q, vec![1, 1, 2, 3]);
        assert_eq!(u.c, vec![1, 1, 2, 1]);
        assert_eq!(t, TSpec::new(4, 3, 2).unwrap());
        assert!(matches!(
            instantiate_case(&row(GroupId::Sp4, 1), 3, &f, 1, &BTreeMap::new()),
            Err(Error::CharacteristicExcluded { p: 3, .. })
        ));
    }

    #[test]
    fn g2_case15_at_2() {
        let f = BTreeMap::from([("q2".to_string(), 0)]);
        let free = BTreeMap::from([("c6".to_string(), 1)]);
        let (u, _) = instantiate_case(&row(GroupId::G2, 15), 2, &f, 1, &free).unwrap();
        assert_eq!(u.q, vec![0, 1, 1, 0, 0, 2]);
        assert_eq!(u.c, vec![0, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn corrupt_rows() {
        let bad = "[[case]]\ngroup = \"SL3\"\ncase = 9\nq = [\"q1\", \"-\"]\nc = [\"1\", \"0\"]\nm = [\"q1\", \"q1\"]\np = \"any\"\n";
        assert!(matches!(parse_tables(bad), Err(Error::DataFileCorrupt(_))));
        assert!(matches!(parse_tables("not toml ["), Err(Error::DataFileCorrupt(_))));
    }
}
