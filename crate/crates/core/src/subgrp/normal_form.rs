use crate::chevrep::{Representation, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, PolyMatrix};

/// Parameters (s_1, ..., s_N) with g = prod_i u_i(s_i) in root order.
///
/// Root i is read off at its pivot entry: the weight gap there is exactly
/// the root, and no product of roots of equal or larger height can fill it.
pub fn normal_form_factorize(g: &PolyMatrix, rep: &Representation) -> Result<Vec<Poly>> {
    let n = rep.datum().num_positive();
    let f = rep.field;
    let mut cur = g.clone();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (r, c, inv) = rep.pivot(i)?;
        let s = cur.get(r, c).scale(inv);
        if !s.is_zero() {
            cur = rep.root_element(RootRef::Pos(i), &s.neg())?.mul(&cur)?;
        }
        out.push(s);
    }
    if !cur.is_identity() {
        return Err(Error::NotUnipotent);
    }
    debug_assert!(out.iter().all(|s| s.field() == f));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevrep::build_rep;
    use crate::exactalg::{PrimeField, A, B};
    use crate::rootdata::GroupId;

    #[test]
    fn sl3_products() {
        let f = PrimeField::new(5).unwrap();
        let rep = build_rep(GroupId::Sl3, "natural", f).unwrap();
        let (a, b) = (Poly::var(f, A), Poly::var(f, B));
        let g = rep.product(&[(RootRef::Pos(0), a.clone()), (RootRef::Pos(1), b.clone())]).unwrap();
        assert_eq!(normal_form_factorize(&g, &rep).unwrap(), vec![a.clone(), b.clone(), Poly::zero(f)]);
        let g = rep.product(&[(RootRef::Pos(1), b.clone()), (RootRef::Pos(0), a.clone())]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(normal_form_factorize(&g, &rep).unwrap(), vec![a, b, ab.neg()]);
        let id = PolyMatrix::identity(f, 3);
        assert!(normal_form_factorize(&id, &rep).unwrap().iter().all(Poly::is_zero));
    }

    #[test]
    fn negative_root_is_rejected() {
        let f = PrimeField::new(3).unwrap();
        let rep = build_rep(GroupId::G2, "V", f).unwrap();
        let g = rep.root_element(RootRef::Neg(0), &Poly::var(f, A)).unwrap();
        assert_eq!(normal_form_factorize(&g, &rep), Err(Error::NotUnipotent));
    }
}
