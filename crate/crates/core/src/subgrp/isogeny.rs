//! The special isogenies of B2 in characteristic 2 and G2 in characteristic
//! 3, and the graph automorphism of SL3 (transpose-inverse), used only as
//! transformations of one-parameter specs. The root
//! permutation exchanges long and short roots via the coroots; the Frobenius
//! twist side and the signs are fixed by testing the homomorphism property
//! on the unipotent radical.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::normal_form::normal_form_factorize;
use super::spec::USpec;
use super::weyl::spec_from_matrix;
use crate::chevrep::{cached_rep, faithful_module, Representation, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::poly::{sys_a, sys_b};
use crate::exactalg::{Poly, PolyMatrix, PrimeField, X};
use crate::rootdata::GroupId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isogeny {
    pub group: GroupId,
    pub p: u64,
    /// image root index of each positive root
    pub perm: Vec<usize>,
    /// Frobenius exponent applied to each root's parameter (1 or p)
    pub twist: Vec<u64>,
    pub signs: Vec<i64>,
}

pub fn applies(group: GroupId, p: u64) -> bool {
    matches!((group, p), (GroupId::Sl3, _) | (GroupId::Sp4, 2) | (GroupId::G2, 3))
}

/// β ↦ b' α1 + a' α2 where β^∨ = a' α1^∨ + b' α2^∨.
pub fn root_permutation(group: GroupId) -> Vec<usize> {
    let d = group.datum();
    d.positive_roots
        .iter()
        .map(|&r| {
            let cv = d.coroot(r);
            d.index_of([cv[1], cv[0]]).expect("swapped coroot is a root")
        })
        .collect()
}

impl Isogeny {
    fn image(&self, rep: &Representation, params: &[(usize, Poly)]) -> Result<PolyMatrix> {
        let mut factors = vec![];
        for (i, s) in params {
            if s.is_zero() {
                continue;
            }
            let v = s.pow(self.twist[*i])?.scale(rep.field.from_i64(self.signs[*i]));
            factors.push((RootRef::Pos(self.perm[*i]), v));
        }
        rep.product(&factors)
    }

    /// φ(u(A)u(B)) = φ(u(A)) φ(u(B)) with u(A) = prod u_i(A_i) generic.
    fn is_homomorphism(&self, rep: &Representation) -> Result<bool> {
        let f = rep.field;
        let n = self.perm.len();
        let gen = |v: fn(usize) -> crate::exactalg::Var| -> Vec<(usize, Poly)> {
            (0..n).map(|i| (i, Poly::var(f, v(i)))).collect()
        };
        let (pa, pb) = (gen(sys_a), gen(sys_b));
        let prod = |ps: &[(usize, Poly)]| rep.product(&ps.iter().map(|(i, s)| (RootRef::Pos(*i), s.clone())).collect::<Vec<_>>());
        let g = prod(&pa)?.mul(&prod(&pb)?)?;
        let s: Vec<(usize, Poly)> = normal_form_factorize(&g, rep)?.into_iter().enumerate().collect();
        Ok(self.image(rep, &s)? == self.image(rep, &pa)?.mul(&self.image(rep, &pb)?)?)
    }
}

type IsoCache = Mutex<HashMap<(GroupId, u64), Option<Isogeny>>>;
static CACHE: OnceLock<IsoCache> = OnceLock::new();

/// The validated isogeny pattern for (group, p), None where none applies.
pub fn exceptional_isogeny(group: GroupId, p: u64) -> Result<Option<Isogeny>> {
    if !applies(group, p) {
        return Ok(None);
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(group, p)) {
        return Ok(v.clone());
    }
    let found = find_isogeny(group, p)?;
    cache.lock().unwrap().insert((group, p), Some(found.clone()));
    Ok(Some(found))
}

fn find_isogeny(group: GroupId, p: u64) -> Result<Isogeny> {
    let d = group.datum();
    let n = d.num_positive();
    let rep = cached_rep(group, faithful_module(group), PrimeField::new(p)?)?;
    let perm = root_permutation(group);
    // simple-root signs can be absorbed by the torus, so they stay +1
    let free: Vec<usize> = (2..n).collect();
    let sign_patterns = if p == 2 { 1 } else { 1u32 << free.len() };
    for twist_short in [true, false] {
        let twist: Vec<u64> =
            d.positive_roots.iter().map(|&r| if d.is_long(r) != twist_short { p } else { 1 }).collect();
        for mask in 0..sign_patterns {
            let mut signs = vec![1; n];
            for (b, &i) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    signs[i] = -1;
                }
            }
            let iso = Isogeny { group, p, perm: perm.clone(), twist: twist.clone(), signs };
            if iso.is_homomorphism(&rep)? {
                return Ok(iso);
            }
        }
    }
    Err(Error::ValidationFailure(format!("no sign pattern makes the {group} root swap a homomorphism at p={p}")))
}

/// φ(u(x)) as a spec, when (group, p) admits the special isogeny and the
/// image is again a monomial product.
pub fn isogeny_swap(spec: &USpec) -> Result<Option<USpec>> {
    let Some(iso) = exceptional_isogeny(spec.group, spec.p)? else { return Ok(None) };
    let rep = spec.faithful_rep()?;
    let f = spec.field();
    let x = Poly::var(f, X);
    let mut params = vec![];
    for i in spec.support() {
        params.push((i, x.pow(spec.q[i])?.scale(spec.c[i])));
    }
    let g = iso.image(&rep, &params)?;
    spec_from_matrix(spec, &rep, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations() {
        assert_eq!(root_permutation(GroupId::Sl3), vec![1, 0, 2]);
        assert_eq!(root_permutation(GroupId::Sp4), vec![1, 0, 3, 2]);
        assert_eq!(root_permutation(GroupId::G2), vec![1, 0, 4, 5, 2, 3]);
    }

    #[test]
    fn short_side_is_twisted() {
        let iso = exceptional_isogeny(GroupId::Sp4, 2).unwrap().unwrap();
        assert_eq!(iso.twist, vec![1, 2, 2, 1]);
        let iso = exceptional_isogeny(GroupId::G2, 3).unwrap().unwrap();
        assert_eq!(iso.twist, vec![3, 1, 3, 3, 1, 1]);
    }

    #[test]
    fn sl3_graph_automorphism() {
        let iso = exceptional_isogeny(GroupId::Sl3, 5).unwrap().unwrap();
        assert_eq!(iso.twist, vec![1, 1, 1]);
        let s = USpec::new(GroupId::Sl3, 5, vec![0, 1, 1], vec![0, 1, 5]).unwrap();
        let t = isogeny_swap(&s).unwrap().unwrap();
        assert_eq!(t.support(), vec![0, 2]);
        assert_eq!(t.q, vec![1, 0, 5]);
    }

    #[test]
    fn sp4_case5_to_case2() {
        let s = USpec::new(GroupId::Sp4, 2, vec![0, 1, 1, 0], vec![0, 1, 2, 0]).unwrap();
        let t = isogeny_swap(&s).unwrap().unwrap();
        assert_eq!(t.support(), vec![0, 3]);
        assert_eq!(t.q, vec![2, 0, 0, 4]);
    }
}
