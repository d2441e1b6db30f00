//! The additivity systems: coordinates of u(a)u(b) against those of u(a+b).

use std::fmt;

use serde::Serialize;

use super::normal_form::normal_form_factorize;
use crate::chevrep::{cached_rep, faithful_module, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::poly::{sys_a, sys_b};
use crate::exactalg::{Poly, PrimeField};
use crate::expr::Expr;
use crate::rootdata::GroupId;

/// One cross term coef * prod c_j^{c[j]} * a^{sum a[j] q_j} * b^{sum b[j] q_j}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SysTerm {
    pub c: Vec<u32>,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub coef: i64,
}

impl fmt::Display for SysTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.coef < 0 { "-" } else { "+" }, self.coef.abs())?;
        for (j, &e) in self.c.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, " c{}", j + 1)?,
                _ => write!(f, " c{}^{}", j + 1, e)?,
            }
        }
        let lin = |v: &[u32]| {
            v.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("q{}", j + 1) } else { format!("{k}q{}", j + 1) })
                .collect::<Vec<_>>()
                .join("+")
        };
        write!(f, " a^{{{}}} b^{{{}}}", lin(&self.a), lin(&self.b))
    }
}

/// Cross terms per equation, in root order. Equation i reads
/// c_i(a+b)^{q_i} = c_i a^{q_i} + c_i b^{q_i} + (sum of terms[i]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivitySystem {
    pub group: GroupId,
    pub terms: Vec<Vec<SysTerm>>,
}

const DERIVATION_PRIMES: [u64; 2] = [1_000_000_007, 998_244_353];

/// Cross terms of the factorized product with the parameter of root i
/// replaced by signs[i] times itself.
pub fn derive_with_signs(group: GroupId, signs: &[i64]) -> Result<AdditivitySystem> {
    let mut results = vec![];
    for p in DERIVATION_PRIMES {
        results.push(derive_at(group, signs, PrimeField::new(p)?)?);
    }
    if results[0] != results[1] {
        return Err(Error::ValidationFailure(format!("{group} system coefficients do not lift consistently")));
    }
    Ok(results.swap_remove(0))
}

fn derive_at(group: GroupId, signs: &[i64], f: PrimeField) -> Result<AdditivitySystem> {
    let rep = cached_rep(group, faithful_module(group), f)?;
    let n = rep.datum().num_positive();
    let param = |v| Poly::var(f, v);
    let mut factors = vec![];
    for i in 0..n {
        factors.push((RootRef::Pos(i), param(sys_a(i)).scale(f.from_i64(signs[i]))));
    }
    for i in 0..n {
        factors.push((RootRef::Pos(i), param(sys_b(i)).scale(f.from_i64(signs[i]))));
    }
    let g = rep.product(&factors)?;
    let s = normal_form_factorize(&g, &rep)?;
    let mut terms = vec![];
    for i in 0..n {
        let si = s[i].scale(f.from_i64(signs[i]));
        let eq = si.sub(&param(sys_a(i))).sub(&param(sys_b(i)));
        let mut row = vec![];
        for (e, c) in eq.terms() {
            let a: Vec<u32> = (0..n).map(|j| e[sys_a(j).0 as usize]).collect();
            let b: Vec<u32> = (0..n).map(|j| e[sys_b(j).0 as usize]).collect();
            let c_exp = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            row.push(SysTerm { c: c_exp, a, b, coef: f.lift(*c) });
        }
        row.sort();
        terms.push(row);
    }
    Ok(AdditivitySystem { group, terms })
}

pub fn derive_cross_terms(group: GroupId) -> Result<AdditivitySystem> {
    derive_with_signs(group, &vec![1; group.datum().num_positive()])
}

const SL3_PRINTED: &[&[&str]] = &[&[], &[], &["+1 c1 c2 a^{q2} b^{q1}"]];

const SP4_PRINTED: &[&[&str]] = &[
    &[],
    &[],
    &["-1 c1 c2 a^{q2} b^{q1}"],
    &["-1 c1 c2^2 a^{2q2} b^{q1}", "-2 c2^2 c1 a^{q2} b^{q1+q2}", "+2 c2 c3 a^{q3} b^{q2}"],
];

const G2_PRINTED: &[&[&str]] = &[
    &[],
    &[],
    &["+1 c1 c2 a^{q2} b^{q1}"],
    &["+1 c1^2 c2 a^{q2} b^{2q1}", "+2 c1 c3 a^{q3} b^{q1}"],
    &["+1 c1^3 c2 a^{q2} b^{3q1}", "+3 c1^2 c3 a^{q3} b^{2q1}", "+3 c4 c1 a^{q4} b^{q1}"],
    &[
        "-1 c1^3 c2^2 a^{2q2} b^{3q1}",
        "+1 c2^2 c1^3 a^{q2} b^{3q1+q2}",
        "-3 c1^2 c2 c3 a^{q2+q3} b^{2q1}",
        "-3 c1^2 c2 c3 a^{q2} b^{2q1+q3}",
        "+3 c1^2 c2 c3 a^{q3} b^{2q1+q2}",
        "-3 c1 c3^2 a^{2q3} b^{q1}",
        "-6 c1 c3^2 a^{q3} b^{q1+q3}",
        "+3 c1 c2 c4 a^{q4} b^{q1+q2}",
        "-3 c4 c3 a^{q4} b^{q3}",
        "+1 c2 c5 a^{q5} b^{q2}",
    ],
];

fn parse_exponent(s: &str, n: usize) -> Result<Vec<u32>> {
    let inner = s.strip_prefix("^{").and_then(|t| t.strip_suffix('}')).ok_or_else(|| Error::Parse(s.into()))?;
    let (c0, lin) = Expr::parse(inner)?.linear_form()?;
    if *c0.numer() != 0 {
        return Err(Error::Parse(format!("constant in exponent {s}")));
    }
    let mut out = vec![0; n];
    for (sym, k) in lin {
        let j: usize = sym.strip_prefix('q').and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse(sym.clone()))?;
        if !k.is_integer() || *k.numer() < 0 || j == 0 || j > n {
            return Err(Error::Parse(format!("bad exponent {s}")));
        }
        out[j - 1] = k.to_integer() as u32;
    }
    Ok(out)
}

fn parse_term(s: &str, n: usize) -> Result<SysTerm> {
    let mut toks = s.split_whitespace();
    let coef: i64 = toks.next().and_then(|t| t.trim_start_matches('+').parse().ok()).ok_or_else(|| Error::Parse(s.into()))?;
    let mut t = SysTerm { c: vec![0; n], a: vec![0; n], b: vec![0; n], coef };
    for tok in toks {
        if let Some(rest) = tok.strip_prefix('a') {
            t.a = parse_exponent(rest, n)?;
        } else if let Some(rest) = tok.strip_prefix('b') {
            t.b = parse_exponent(rest, n)?;
        } else if let Some(rest) = tok.strip_prefix('c') {
            let (idx, pow) = rest.split_once('^').unwrap_or((rest, "1"));
            let j: usize = idx.parse().map_err(|_| Error::Parse(tok.into()))?;
            let k: u32 = pow.parse().map_err(|_| Error::Parse(tok.into()))?;
            t.c[j - 1] += k;
        } else {
            return Err(Error::Parse(format!("unexpected token {tok}")));
        }
    }
    Ok(t)
}

/// The systems as printed, transcribed term by term.
pub fn printed_system(group: GroupId) -> Result<AdditivitySystem> {
    let raw = match group {
        GroupId::Sl3 => SL3_PRINTED,
        GroupId::Sp4 => SP4_PRINTED,
        GroupId::G2 => G2_PRINTED,
    };
    let n = raw.len();
    let mut terms = vec![];
    for eq in raw {
        let mut row = eq.iter().map(|s| parse_term(s, n)).collect::<Result<Vec<_>>>()?;
        row.sort();
        terms.push(row);
    }
    Ok(AdditivitySystem { group, terms })
}

/// Human-readable difference between two systems, empty when equal.
pub fn system_diff(derived: &AdditivitySystem, printed: &AdditivitySystem) -> Vec<String> {
    let mut out = vec![];
    for (i, (d, p)) in derived.terms.iter().zip(&printed.terms).enumerate() {
        for t in d.iter().filter(|t| !p.contains(t)) {
            out.push(format!("eq{}: derived {t} not printed", i + 1));
        }
        for t in p.iter().filter(|t| !d.contains(t)) {
            out.push(format!("eq{}: printed {t} not derived", i + 1));
        }
    }
    out
}

/// The derived system, required to agree with the printed one term by term.
pub fn derive_additivity_system(group: GroupId) -> Result<AdditivitySystem> {
    let derived = derive_cross_terms(group)?;
    let diff = system_diff(&derived, &printed_system(group)?);
    if diff.is_empty() {
        Ok(derived)
    } else {
        Err(Error::SystemMismatch { group: group.name().into(), detail: diff.join("; ") })
    }
}

/// Sign patterns on the root parametrizations under which the derivation
/// reproduces the printed system.
pub fn matching_sign_patterns(group: GroupId) -> Result<Vec<Vec<i64>>> {
    let n = group.datum().num_positive();
    let printed = printed_system(group)?;
    let mut out = vec![];
    for mask in 0..(1u32 << n) {
        let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        if system_diff(&derive_with_signs(group, &signs)?, &printed).is_empty() {
            out.push(signs);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_terms_are_consistent() {
        for g in GroupId::ALL {
            for eq in printed_system(g).unwrap().terms {
                for t in eq {
                    for j in 0..t.c.len() {
                        assert_eq!(t.c[j], t.a[j] + t.b[j], "{g} {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn sp4_and_g2_match() {
        derive_additivity_system(GroupId::Sp4).unwrap();
        derive_additivity_system(GroupId::G2).unwrap();
    }

    #[test]
    fn sl3_cross_term_sign() {
        let d = derive_cross_terms(GroupId::Sl3).unwrap();
        assert_eq!(d.terms[2].len(), 1);
        assert_eq!(d.terms[2][0].coef, -1);
        let pats = matching_sign_patterns(GroupId::Sl3).unwrap();
        assert!(pats.contains(&vec![1, -1, 1]));
    }
}
