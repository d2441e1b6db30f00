use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, PrimeField};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 17;

/// Index into the fixed variable universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u8);

pub const X: Var = Var(0);
pub const A: Var = Var(1);
pub const B: Var = Var(2);
pub const LAMBDA: Var = Var(3);
pub const Y: Var = Var(4);

/// Symbol standing for c_i a^{q_i} in the additivity derivation (i from 0).
pub fn sys_a(i: usize) -> Var {
    Var(5 + i as u8)
}

/// Symbol standing for c_i b^{q_i}.
pub fn sys_b(i: usize) -> Var {
    Var(11 + i as u8)
}

pub fn var_name(v: Var) -> String {
    match v.0 {
        0 => "x".into(),
        1 => "a".into(),
        2 => "b".into(),
        3 => "λ".into(),
        4 => "y".into(),
        i @ 5..=10 => format!("A{}", i - 4),
        i => format!("B{}", i - 10),
    }
}

pub type Exps = [u32; MAX_VARS];

/// Sparse polynomial over F_p. Terms live in a BTreeMap keyed by exponent
/// vectors and zero coefficients are never stored, so derived equality is
/// exact equality of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    terms: BTreeMap<Exps, u64>,
}

impl Poly {
    pub fn zero(field: PrimeField) -> Self {
        Self { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        let mut p = Self::zero(field);
        p.add_term([0; MAX_VARS], c);
        p
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn var(field: PrimeField, v: Var) -> Self {
        Self::monomial(field, 1, &[(v, 1)]).expect("degree one is within any bound")
    }

    pub fn monomial(field: PrimeField, c: u64, powers: &[(Var, u64)]) -> Result<Self> {
        let mut e = [0u32; MAX_VARS];
        for &(v, k) in powers {
            let total = e[v.0 as usize] as u64 + k;
            if total > field.exponent_bound() as u64 {
                return Err(Error::ExponentOverflow { exp: total, bound: field.exponent_bound() });
            }
            e[v.0 as usize] = total as u32;
        }
        let mut p = Self::zero(field);
        p.add_term(e, c);
        Ok(p)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &u64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0; MAX_VARS]) == Some(&1)
    }

    pub fn constant_term(&self) -> u64 {
        self.terms.get(&[0; MAX_VARS]).copied().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&[0; MAX_VARS]).copied(),
            _ => None,
        }
    }

    /// (coefficient, exponent of v) when the polynomial is c * v^k.
    pub fn as_monomial_in(&self, v: Var) -> Option<(u64, u32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let k = e[v.0 as usize];
        let mut rest = *e;
        rest[v.0 as usize] = 0;
        if rest.iter().any(|&x| x != 0) {
            return None;
        }
        Some((*c, k))
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.0 as usize]).max().unwrap_or(0)
    }

    pub fn coeff(&self, e: &Exps) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: Exps, c: u64) {
        let c = c % self.field.p();
        if c == 0 {
            return;
        }
        let f = self.field;
        let entry = self.terms.entry(e).or_insert(0);
        *entry = f.add(entry, &c);
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.field.p(), other.field.p(), "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly { field: f, terms: self.terms.iter().map(|(e, c)| (*e, f.neg(c))).collect() }
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Poly::zero(f);
        }
        Poly { field: f, terms: self.terms.iter().map(|(e, x)| (*e, f.mul(x, &c))).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other);
        let f = self.field;
        let bound = f.exponent_bound();
        let mut out = Poly::zero(f);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = [0u32; MAX_VARS];
                for i in 0..MAX_VARS {
                    let s = e1[i] as u64 + e2[i] as u64;
                    if s > bound as u64 {
                        return Err(Error::ExponentOverflow { exp: s, bound });
                    }
                    e[i] = s as u32;
                }
                out.add_term(e, f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// p-th power: coefficients are fixed by Frobenius on F_p, so only the
    /// exponents scale.
    fn frobenius(&self) -> Result<Poly> {
        let f = self.field;
        let p = f.p();
        let bound = f.exponent_bound() as u64;
        let mut out = Poly::zero(f);
        for (e, c) in &self.terms {
            let mut ne = [0u32; MAX_VARS];
            for i in 0..MAX_VARS {
                let s = e[i] as u64 * p;
                if s > bound {
                    return Err(Error::ExponentOverflow { exp: s, bound: f.exponent_bound() });
                }
                ne[i] = s as u32;
            }
            out.add_term(ne, *c);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u64) -> Result<Poly> {
        if e == 0 {
            return Ok(Poly::one(self.field));
        }
        if self.terms.len() == 1 {
            let (ex, c) = self.terms.iter().next().unwrap();
            let bound = self.field.exponent_bound() as u64;
            let mut ne = [0u32; MAX_VARS];
            for i in 0..MAX_VARS {
                let s = ex[i] as u64 * e;
                if s > bound {
                    return Err(Error::ExponentOverflow { exp: s, bound: bound as u32 });
                }
                ne[i] = s as u32;
            }
            let mut out = Poly::zero(self.field);
            out.add_term(ne, self.field.pow(*c, e));
            return Ok(out);
        }
        let p = self.field.p();
        let (hi, lo) = (e / p, e % p);
        let mut acc = if hi > 0 { self.pow(hi)?.frobenius()? } else { Poly::one(self.field) };
        for _ in 0..lo {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute_many(&self, subs: &[(Var, &Poly)]) -> Result<Poly> {
        let f = self.field;
        let mut out = Poly::zero(f);
        for (e, c) in &self.terms {
            let mut rest = *e;
            let mut term = Poly::constant(f, *c);
            for (v, q) in subs {
                let k = e[v.0 as usize];
                rest[v.0 as usize] = 0;
                if k > 0 {
                    term = term.mul(&q.pow(k as u64)?)?;
                }
            }
            let mut mono = Poly::zero(f);
            mono.add_term(rest, 1);
            out = out.add(&term.mul(&mono)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, v: Var, q: &Poly) -> Result<Poly> {
        self.substitute_many(&[(v, q)])
    }

    /// Coefficient of v^k, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, v: Var, k: u32) -> Poly {
        let mut out = Poly::zero(self.field);
        for (e, c) in &self.terms {
            if e[v.0 as usize] == k {
                let mut r = *e;
                r[v.0 as usize] = 0;
                out.add_term(r, *c);
            }
        }
        out
    }

    /// Evaluate every variable at a field element.
    pub fn eval(&self, values: &[(Var, u64)]) -> Option<u64> {
        let f = self.field;
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let val = values.iter().find(|(v, _)| v.0 as usize == i)?.1;
                t = f.mul(&t, &f.pow(val, k as u64));
            }
            acc = f.add(&acc, &t);
        }
        Some(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = var_name(Var(i as u8));
                    if k == 1 { n } else { format!("{n}^{k}") }
                })
                .collect();
            if mono.is_empty() {
                write!(out, "{c}")?;
            } else if *c == 1 {
                write!(out, "{}", mono.join("*"))?;
            } else {
                write!(out, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Poly[F{}]({})", self.field.p(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn freshman_dream() {
        let k = f(3);
        let a = Poly::var(k, A);
        let b = Poly::var(k, B);
        let s = a.add(&b);
        let cube = s.pow(3).unwrap().sub(&a.pow(3).unwrap()).sub(&b.pow(3).unwrap());
        assert!(cube.is_zero());
        let sq = s.pow(2).unwrap().sub(&a.pow(2).unwrap()).sub(&b.pow(2).unwrap());
        assert_eq!(sq, a.mul(&b).unwrap().scale(2));
    }

    #[test]
    fn substitution_of_sum() {
        let k = f(3);
        let x9 = Poly::monomial(k, 1, &[(X, 9)]).unwrap();
        let s = Poly::var(k, A).add(&Poly::var(k, B));
        let got = x9.substitute(X, &s).unwrap();
        let want = Poly::monomial(k, 1, &[(A, 9)]).unwrap().add(&Poly::monomial(k, 1, &[(B, 9)]).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn overflow_is_reported() {
        let k = f(5).with_exponent_bound(10);
        let x = Poly::var(k, X).add(&Poly::one(k));
        assert!(matches!(x.pow(11), Err(Error::ExponentOverflow { .. })));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let k = f(5);
        let q = Poly::var(k, A).add(&Poly::var(k, B).scale(3)).add(&Poly::one(k));
        let mut acc = Poly::one(k);
        for e in 0..14 {
            assert_eq!(q.pow(e).unwrap(), acc);
            acc = acc.mul(&q).unwrap();
        }
    }
}
