//! Case 1 of each group: U_H T_H as the image of a Borel subgroup of SL2
//! acting on binary forms of degree n = dim V - 1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chevrep::cocharacter_weights;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Poly, PolyMatrix, PrimeField, X};
use crate::lemmas::binom_mod;
use crate::rootdata::GroupId;
use crate::subgrp::load_tables;
use crate::subgrp::table::instantiate_case;

/// Rescaling of the G2 basis as printed.
pub const G2_GAMMA: [i64; 7] = [1, 1, -2, -3, -12, -60, -360];

#[derive(Clone, Debug, Serialize)]
pub struct PrincipalReport {
    pub group: GroupId,
    pub p: u64,
    pub q1: u64,
    /// scalars γ_i: the printed ones for G2, else solved and lifted to (-p/2, p/2]
    pub gamma: Vec<i64>,
    /// G2 only: whether [[1,t],[0,1]] on the basis γ_i w_i equals u(t) on v_i
    pub printed_reading: Option<bool>,
    /// G2 only: the same with the roles of the two bases exchanged, i.e.
    /// [[1,t],[0,1]] on w_i / γ_i
    pub swapped_reading: Option<bool>,
    pub unipotent_match: bool,
    pub torus_match: bool,
    pub passed: bool,
}

/// [[1, x^q],[0,1]] on X^{n-i} Y^i, Y -> x^q X + Y.
fn sl2_unipotent(f: PrimeField, n: usize, q: u64) -> Result<PolyMatrix> {
    let mut s = PolyMatrix::zero(f, n + 1, n + 1);
    for i in 0..=n {
        for k in 0..=i {
            let b = binom_mod(i as u64, k as u64, f.p());
            s.set(k, i, Poly::monomial(f, b, &[(X, q * (i - k) as u64)])?);
        }
    }
    Ok(s)
}

/// D^{-1} S D with D = diag(γ).
fn rescale(f: &PrimeField, s: &PolyMatrix, gamma: &[u64]) -> Result<PolyMatrix> {
    let n = gamma.len();
    let mut out = PolyMatrix::zero(*f, n, n);
    for k in 0..n {
        let inv = f.inv(&gamma[k]).ok_or_else(|| Error::RescalingUnsolvable("zero scalar".into()))?;
        for i in 0..n {
            out.set(k, i, s.get(k, i).scale(f.mul(&gamma[i], &inv)));
        }
    }
    Ok(out)
}

/// γ with γ_1 = 1 making D^{-1} S D agree with u on the superdiagonal.
fn solve_gamma(f: &PrimeField, s: &PolyMatrix, u: &PolyMatrix, q: u64) -> Result<Vec<u64>> {
    let n = s.rows();
    let mut g = vec![1u64];
    for i in 0..n - 1 {
        let a = u.get(i, i + 1).coeff_in(X, q as u32).as_constant().unwrap_or(0);
        let b = s.get(i, i + 1).coeff_in(X, q as u32).as_constant().unwrap_or(0);
        if a == 0 || b == 0 {
            return Err(Error::RescalingUnsolvable(format!("superdiagonal entry {} vanishes", i + 1)));
        }
        g.push(f.mul(&g[i], &f.mul(&a, &f.inv(&b).unwrap())));
    }
    Ok(g)
}

pub fn default_prime(group: GroupId) -> u64 {
    match group {
        GroupId::Sl3 => 3,
        GroupId::Sp4 => 5,
        GroupId::G2 => 7,
    }
}

/// Case 1 at (p, q1 = p^f): exact equality of u(x) with the SL2 unipotent
/// on forms after rescaling, and of the torus weights with the SL2 weights.
pub fn check_principal_a1(group: GroupId, p: u64, f_exp: u32) -> Result<PrincipalReport> {
    let rows = load_tables()?;
    let row = rows.iter().find(|r| r.group == group && r.case == 1).expect("case 1 row");
    let (u, t) = instantiate_case(row, p, &BTreeMap::from([("q1".to_string(), f_exp)]), 1, &BTreeMap::new())?;
    let field = u.field();
    let q = p.pow(f_exp);
    let m = u.u_of_x()?;
    let n = m.rows() - 1;
    let s = sl2_unipotent(field, n, q)?;
    let (gamma, printed, swapped) = if group == GroupId::G2 {
        let g: Vec<u64> = G2_GAMMA.iter().map(|&v| field.from_i64(v)).collect();
        let ginv: Vec<u64> = g.iter().map(|v| field.inv(v).expect("γ nonzero mod p")).collect();
        let a = rescale(&field, &s, &g)? == m;
        let b = rescale(&field, &s, &ginv)? == m;
        (if a || !b { g } else { ginv }, Some(a), Some(b))
    } else {
        (solve_gamma(&field, &s, &m, q)?, None, None)
    };
    let unipotent_match = rescale(&field, &s, &gamma)? == m;
    if group != GroupId::G2 && !unipotent_match {
        return Err(Error::RescalingUnsolvable(format!("{group} case 1 at p={p}: diagonal rescaling does not conjugate")));
    }
    let rep = u.faithful_rep()?;
    let w = cocharacter_weights(&rep, t.cochar());
    let torus_match = w.iter().enumerate().all(|(i, &wi)| 2 * wi == t.m * q as i64 * (n as i64 - 2 * i as i64));
    Ok(PrincipalReport {
        group,
        p,
        q1: q,
        gamma: if group == GroupId::G2 { G2_GAMMA.to_vec() } else { gamma.iter().map(|&g| field.lift(g)).collect() },
        printed_reading: printed,
        swapped_reading: swapped,
        unipotent_match,
        torus_match,
        passed: unipotent_match && torus_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_groups() {
        for g in [GroupId::Sl3, GroupId::Sp4, GroupId::G2] {
            let r = check_principal_a1(g, default_prime(g), 0).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn sl3_gamma() {
        let r = check_principal_a1(GroupId::Sl3, 3, 0).unwrap();
        assert_eq!(r.gamma, vec![1, 1, -1]);
    }
}
