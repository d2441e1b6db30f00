use std::collections::HashMap;

use super::spec::USpec;
use crate::error::{Error, Result};
use crate::exactalg::{ExtElem, ExtField, Field};

/// A torus conjugate of a spec with coefficients over F_{p^k}.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub ext: ExtField,
    /// (s1, s2) with t = α1^∨(s1) α2^∨(s2)
    pub torus: [ExtElem; 2],
    pub c: Vec<ExtElem>,
}

pub const DEFAULT_EXTENSION_BOUND: u32 = 6;

/// Discrete logarithms in the multiplicative group of a small field.
pub struct LogTable {
    pub ext: ExtField,
    order: u64,
    exp: Vec<ExtElem>,
    log: HashMap<ExtElem, u64>,
}

impl LogTable {
    pub fn new(ext: ExtField) -> Self {
        let order = ext.size() - 1;
        let mut exp = vec![];
        let mut log = HashMap::new();
        for cand in ext.elements().skip(1) {
            exp.clear();
            log.clear();
            let mut cur = ext.one();
            for k in 0..order {
                if log.insert(cur.clone(), k).is_some() {
                    break;
                }
                exp.push(cur.clone());
                cur = ext.mul(&cur, &cand);
            }
            if exp.len() as u64 == order {
                break;
            }
        }
        Self { ext, order, exp, log }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn log(&self, a: &ExtElem) -> Option<u64> {
        self.log.get(a).copied()
    }

    pub fn exp(&self, k: i64) -> ExtElem {
        self.exp[k.rem_euclid(self.order as i64) as usize].clone()
    }
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// All t in [0, n) with b t ≡ r (mod n).
fn linear_congruence(b: i64, r: i64, n: i64) -> Vec<i64> {
    let b = b.rem_euclid(n);
    let r = r.rem_euclid(n);
    let (g, x, _) = egcd(b, n);
    let g = if g == 0 { n } else { g.abs() };
    if r % g != 0 {
        return vec![];
    }
    let step = n / g;
    let t0 = if step == 1 { 0 } else { ((r / g) as i128 * x as i128).rem_euclid(step as i128) as i64 };
    (0..g).map(|k| t0 + k * step).collect()
}

/// Every torus element over F_{p^k} making c_i = c_j = 1.
pub fn normalize_solutions(spec: &USpec, i: usize, j: usize, table: &LogTable) -> Result<Vec<Normalized>> {
    if i == j {
        return Err(Error::Precondition("normalization needs two distinct roots".into()));
    }
    if spec.c[i] == 0 || spec.c[j] == 0 {
        return Err(Error::Precondition("normalization needs nonzero coefficients".into()));
    }
    let ext = &table.ext;
    let d = spec.group.datum();
    let wi = d.root_weight(d.root(i));
    let wj = d.root_weight(d.root(j));
    let n = table.order() as i64;
    let target = |c: u64| -> i64 {
        let inv = ext.inv(&ext.embed(c)).expect("nonzero");
        table.log(&inv).expect("unit") as i64
    };
    let (u, v) = (target(spec.c[i]), target(spec.c[j]));
    let mut out = vec![];
    for s in 0..n {
        for t in linear_congruence(wi[1], u - wi[0] * s, n) {
            if (wj[0] * s + wj[1] * t - v).rem_euclid(n) != 0 {
                continue;
            }
            let c = (0..spec.c.len())
                .map(|k| {
                    if spec.c[k] == 0 {
                        return ext.zero();
                    }
                    let w = d.root_weight(d.root(k));
                    ext.mul(&table.exp(w[0] * s + w[1] * t), &ext.embed(spec.c[k]))
                })
                .collect();
            out.push(Normalized { ext: ext.clone(), torus: [table.exp(s), table.exp(t)], c });
        }
    }
    Ok(out)
}

/// The torus conjugate with c_i = c_j = 1 over the smallest extension that
/// admits one, up to degree `bound`.
pub fn normalize_pair(spec: &USpec, i: usize, j: usize, bound: u32) -> Result<Normalized> {
    let f = spec.field();
    for k in 1..=bound {
        let ext = ExtField::new(f, k as usize);
        if ext.size() > 1 << 20 {
            break;
        }
        let sols = normalize_solutions(spec, i, j, &LogTable::new(ext))?;
        if let Some(s) = sols.into_iter().next() {
            return Ok(s);
        }
    }
    Err(Error::ExtensionDegreeExceeded(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::GroupId;

    #[test]
    fn sl3_over_f5() {
        let s = USpec::new(GroupId::Sl3, 5, vec![4, 1, 2], vec![1, 1, 2]).unwrap();
        let n = normalize_pair(&s, 0, 1, 3).unwrap();
        let ext = &n.ext;
        assert_eq!(n.c[0], ext.one());
        assert_eq!(n.c[1], ext.one());
        // α3 = α1 + α2 so its coefficient scales by the product 4^{-1}
        assert_eq!(n.c[2], ext.mul(&ext.embed(2), &ext.embed(4)));
    }

    #[test]
    fn already_normalized() {
        let s = USpec::new(GroupId::Sp4, 3, vec![1, 0, 1, 2], vec![1, 0, 1, 1]).unwrap();
        let n = normalize_pair(&s, 0, 2, 2).unwrap();
        assert_eq!(n.c, s.c.iter().map(|&c| n.ext.embed(c)).collect::<Vec<_>>());
    }

    #[test]
    fn same_root_is_rejected() {
        let s = USpec::new(GroupId::Sl3, 5, vec![4, 1, 2], vec![1, 1, 2]).unwrap();
        assert!(matches!(normalize_pair(&s, 1, 1, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn congruences() {
        assert_eq!(linear_congruence(2, 4, 6), vec![2, 5]);
        assert_eq!(linear_congruence(0, 0, 3), vec![0, 1, 2]);
        assert!(linear_congruence(2, 1, 4).is_empty());
    }
}
