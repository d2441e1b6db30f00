use super::normal_form::normal_form_factorize;
use super::spec::USpec;
use crate::chevrep::{Representation, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, PolyMatrix, X};
use crate::rootdata::WeylElement;

/// n_i = u_i(1) u_{-i}(-1) u_i(1) and its inverse.
fn simple_reflection(rep: &Representation, i: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    let f = rep.field;
    let one = Poly::one(f);
    let m1 = one.neg();
    let n = rep.product(&[(RootRef::Pos(i), one.clone()), (RootRef::Neg(i), m1.clone()), (RootRef::Pos(i), one.clone())])?;
    let ninv = rep.product(&[(RootRef::Pos(i), m1.clone()), (RootRef::Neg(i), one), (RootRef::Pos(i), m1)])?;
    Ok((n, ninv))
}

/// A representative of w in N(T) with its inverse.
pub fn weyl_representative(rep: &Representation, w: &WeylElement) -> Result<(PolyMatrix, PolyMatrix)> {
    let mut n = PolyMatrix::identity(rep.field, rep.dim());
    let mut ninv = n.clone();
    for &i in &w.word {
        let (a, b) = simple_reflection(rep, i)?;
        n = n.mul(&a)?;
        ninv = b.mul(&ninv)?;
    }
    Ok((n, ninv))
}

/// Reads a spec back from a matrix g(x) that should be a one-parameter
/// product of positive root elements with monomial parameters.
pub fn spec_from_matrix(template: &USpec, rep: &Representation, g: &PolyMatrix) -> Result<Option<USpec>> {
    let params = match normal_form_factorize(g, rep) {
        Ok(s) => s,
        Err(Error::NotUnipotent) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut c = vec![];
    let mut q = vec![];
    for s in params {
        if s.is_zero() {
            c.push(0);
            q.push(0);
            continue;
        }
        match s.as_monomial_in(X) {
            Some((coef, k)) if k > 0 && s.num_terms() == 1 => {
                c.push(coef);
                q.push(k as u64);
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(USpec::new(template.group, template.p, c, q)?))
}

/// n u(x) n^{-1} for a Weyl representative n, as a spec if it stays in U.
pub fn conjugate(spec: &USpec, w: &WeylElement) -> Result<Option<USpec>> {
    let rep = spec.faithful_rep()?;
    let (n, ninv) = weyl_representative(&rep, w)?;
    let g = n.mul(&spec.u_of_x()?)?.mul(&ninv)?;
    spec_from_matrix(spec, &rep, &g)
}

/// The Weyl conjugates of the spec that remain in U, one per group element
/// (duplicates kept so the element used is always recorded).
pub fn weyl_conjugates(spec: &USpec) -> Result<Vec<(WeylElement, USpec)>> {
    let mut out = vec![];
    for w in spec.group.datum().weyl_group() {
        if let Some(s) = conjugate(spec, &w)? {
            out.push((w, s));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::GroupId;

    #[test]
    fn identity_fixes() {
        let s = USpec::new(GroupId::G2, 5, vec![1, 0, 1, 1, 1, 3], vec![1, 0, 1, 2, 3, 3]).unwrap();
        let c = weyl_conjugates(&s).unwrap();
        assert_eq!(c[0].1, s);
    }

    #[test]
    fn sp4_s2s1_moves_support() {
        // support {α2, α1+2α2} to {α1+α2, α1}
        let s = USpec::new(GroupId::Sp4, 3, vec![0, 1, 0, 1], vec![0, 1, 0, 3]).unwrap();
        let w = WeylElement { word: vec![1, 0] };
        let t = conjugate(&s, &w).unwrap().unwrap();
        assert_eq!(t.support(), vec![0, 2]);
        assert_eq!(t.q, vec![3, 0, 1, 0]);
        let back = conjugate(&t, &w.inverse()).unwrap().unwrap();
        assert_eq!(back.support(), s.support());
    }
}
