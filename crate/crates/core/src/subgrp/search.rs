//! Exhaustive search for additive one-parameter specs, pruned equation by
//! equation in root order: equation i only involves roots before i.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::check_additive;
use super::spec::{TSpec, USpec};
use super::system::{derive_cross_terms, AdditivitySystem};
use super::torus::solve_torus;
use crate::error::{Error, Result};
use crate::exactalg::{is_power_of, Field, Poly, PrimeField, A, B};
use crate::rootdata::GroupId;

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub group: GroupId,
    pub p: u64,
    pub q_max: u64,
    pub hits: Vec<(USpec, TSpec)>,
    pub steps: u64,
    /// set when the step budget ran out; hits are then partial
    pub truncated: bool,
}

static SYSTEMS: OnceLock<Mutex<HashMap<GroupId, AdditivitySystem>>> = OnceLock::new();

fn system(group: GroupId) -> Result<AdditivitySystem> {
    let cache = SYSTEMS.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&group) {
        return Ok(s.clone());
    }
    let s = derive_cross_terms(group)?;
    cache.lock().unwrap().insert(group, s.clone());
    Ok(s)
}

struct Searcher {
    f: PrimeField,
    q_max: u64,
    sys: AdditivitySystem,
    /// (a+b)^q - a^q - b^q
    defect: Vec<Poly>,
    budget: u64,
    steps: u64,
    c: Vec<u64>,
    q: Vec<u64>,
    leaves: Vec<(Vec<u64>, Vec<u64>)>,
}

impl Searcher {
    fn cross_terms(&self, i: usize) -> Result<Poly> {
        let f = self.f;
        let mut acc = Poly::zero(f);
        for t in &self.sys.terms[i] {
            if t.c.iter().zip(&self.c).any(|(&e, &c)| e > 0 && c == 0) {
                continue;
            }
            let mut coef = f.from_i64(t.coef);
            let (mut ea, mut eb) = (0u64, 0u64);
            for j in 0..i {
                coef = f.mul(&coef, &f.pow(self.c[j], t.c[j] as u64));
                ea += t.a[j] as u64 * self.q[j];
                eb += t.b[j] as u64 * self.q[j];
            }
            acc = acc.add(&Poly::monomial(f, coef, &[(A, ea), (B, eb)])?);
        }
        Ok(acc)
    }

    fn dfs(&mut self, i: usize) -> Result<bool> {
        let n = self.c.len();
        if i == n {
            self.leaves.push((self.c.clone(), self.q.clone()));
            return Ok(true);
        }
        let rhs = self.cross_terms(i)?;
        let mut options = vec![(0u64, 0u64)];
        for c in 1..self.f.p() {
            for q in 1..=self.q_max {
                options.push((c, q));
            }
        }
        for (c, q) in options {
            self.steps += 1;
            if self.steps > self.budget {
                return Ok(false);
            }
            let lhs = if c == 0 { Poly::zero(self.f) } else { self.defect[q as usize].scale(c) };
            if lhs != rhs {
                continue;
            }
            self.c[i] = c;
            self.q[i] = q;
            if !self.dfs(i + 1)? {
                return Ok(false);
            }
        }
        self.c[i] = 0;
        self.q[i] = 0;
        Ok(true)
    }
}

/// Every spec with c_i in F_p and q_i in [1, q_max] that is additive, has
/// support on at least two roots and admits a normalizing torus.
pub fn search_solutions(group: GroupId, p: u64, q_max: u64, budget: u64) -> Result<SearchResult> {
    let f = PrimeField::new(p)?;
    let n = group.datum().num_positive();
    let mut result = SearchResult { group, p, q_max, hits: vec![], steps: 0, truncated: false };
    if q_max == 0 {
        return Ok(result);
    }
    let (a, b) = (Poly::var(f, A), Poly::var(f, B));
    let sum = a.add(&b);
    let mut defect = vec![Poly::zero(f)];
    for q in 1..=q_max {
        defect.push(sum.pow(q)?.sub(&a.pow(q)?).sub(&b.pow(q)?));
    }
    let mut s = Searcher {
        f,
        q_max,
        sys: system(group)?,
        defect,
        budget,
        steps: 0,
        c: vec![0; n],
        q: vec![0; n],
        leaves: vec![],
    };
    let complete = s.dfs(0)?;
    result.steps = s.steps;
    result.truncated = !complete;
    let simple = [0usize, 1];
    for (c, q) in s.leaves {
        if c.iter().filter(|&&x| x != 0).count() < 2 {
            continue;
        }
        let u = USpec::new(group, p, c, q)?;
        if !check_additive(&u)? {
            return Err(Error::ValidationFailure(format!("search accepted non-additive {u}")));
        }
        for &i in &simple {
            if u.c[i] != 0 && !is_power_of(u.q[i], p) {
                return Err(Error::ValidationFailure(format!("simple-root exponent not a p-power in {u}")));
            }
        }
        if let Some(t) = solve_torus(&u)? {
            result.hits.push((u, t));
        }
    }
    result.hits.sort();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl3_small() {
        let r = search_solutions(GroupId::Sl3, 3, 3, 1_000_000).unwrap();
        assert!(!r.truncated);
        let case1 = USpec::new(GroupId::Sl3, 3, vec![1, 1, 1], vec![1, 1, 2]).unwrap();
        assert!(r.hits.iter().any(|(u, _)| *u == case1));
        assert!(r.hits.iter().all(|(u, _)| u.support().len() >= 2));
    }

    #[test]
    fn empty_bound() {
        assert!(search_solutions(GroupId::G2, 2, 0, 10).unwrap().hits.is_empty());
    }

    #[test]
    fn budget_truncates() {
        assert!(search_solutions(GroupId::G2, 3, 9, 50).unwrap().truncated);
    }
}
