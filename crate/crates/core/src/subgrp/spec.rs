use std::fmt;

use serde::Serialize;

use crate::chevrep::{cached_rep, faithful_module, Representation, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::{PolyMatrix, Poly, PrimeField, X};
use crate::exactalg::rational::primitive;
use crate::exactalg::Q;
use crate::rootdata::{Cochar, GroupId};

/// u(x) = prod_i u_i(c_i x^{q_i}) over the positive roots in their fixed
/// order. q_i is stored as 0 wherever c_i = 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct USpec {
    pub group: GroupId,
    pub p: u64,
    pub c: Vec<u64>,
    pub q: Vec<u64>,
}

impl USpec {
    pub fn new(group: GroupId, p: u64, c: Vec<u64>, q: Vec<u64>) -> Result<Self> {
        let n = group.datum().num_positive();
        if c.len() != n || q.len() != n {
            return Err(Error::Precondition(format!("{group} needs {n} coefficients and exponents")));
        }
        let f = PrimeField::new(p)?;
        let c: Vec<u64> = c.into_iter().map(|x| x % f.p()).collect();
        if c.iter().all(|&x| x == 0) {
            return Err(Error::Precondition("all coefficients vanish".into()));
        }
        let q = q.iter().zip(&c).map(|(&q, &c)| if c == 0 { 0 } else { q }).collect::<Vec<_>>();
        if q.iter().zip(&c).any(|(&q, &c)| c != 0 && q == 0) {
            return Err(Error::Precondition("exponents must be positive".into()));
        }
        Ok(Self { group, p, c, q })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("checked at construction")
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.c.len()).filter(|&i| self.c[i] != 0).collect()
    }

    /// Root-element factors of u(param).
    pub fn factors(&self, param: &Poly) -> Result<Vec<(RootRef, Poly)>> {
        let mut out = vec![];
        for i in self.support() {
            out.push((RootRef::Pos(i), param.pow(self.q[i])?.scale(self.c[i])));
        }
        Ok(out)
    }

    pub fn matrix(&self, rep: &Representation, param: &Poly) -> Result<PolyMatrix> {
        rep.product(&self.factors(param)?)
    }

    pub fn faithful_rep(&self) -> Result<std::sync::Arc<Representation>> {
        cached_rep(self.group, faithful_module(self.group), self.field())
    }

    /// u(x) in the faithful module.
    pub fn u_of_x(&self) -> Result<PolyMatrix> {
        let rep = self.faithful_rep()?;
        self.matrix(&rep, &Poly::var(self.field(), X))
    }
}

impl fmt::Display for USpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fld = self.field();
        let show = |v: &[u64], is_c: bool| {
            v.iter()
                .zip(&self.c)
                .map(|(x, c)| {
                    if *c == 0 {
                        if is_c { "0".to_string() } else { "-".to_string() }
                    } else if is_c {
                        fld.lift(*x).to_string()
                    } else {
                        x.to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{} p={} q=({}) c=({})", self.group, self.p, show(&self.q, false), show(&self.c, true))
    }
}

/// t(λ) = α1^∨(λ^{m1}) α2^∨(λ^{m2}) with t(λ)u(x)t(λ)^{-1} = u(λ^m x),
/// stored as a primitive triple with m > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TSpec {
    pub m1: i64,
    pub m2: i64,
    pub m: i64,
}

impl TSpec {
    pub fn new(m1: i64, m2: i64, m: i64) -> Result<Self> {
        Self::from_ratios(Q::from_integer(m1), Q::from_integer(m2), Q::from_integer(m))
    }

    pub fn from_ratios(m1: Q, m2: Q, m: Q) -> Result<Self> {
        if *m.numer() == 0 {
            return Err(Error::Precondition("m must be nonzero".into()));
        }
        if *m1.numer() == 0 && *m2.numer() == 0 {
            return Err(Error::Precondition("(m1, m2) must be nonzero".into()));
        }
        let sign = if *m.numer() < 0 { -1 } else { 1 };
        let v = primitive(&[m1, m2, m]);
        Ok(Self { m1: sign * v[0], m2: sign * v[1], m: sign * v[2] })
    }

    pub fn cochar(&self) -> Cochar {
        [self.m1, self.m2]
    }
}

impl fmt::Display for TSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m1,m2,m)=({},{},{})", self.m1, self.m2, self.m)
    }
}
