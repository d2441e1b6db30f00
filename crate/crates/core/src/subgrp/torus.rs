use super::spec::{TSpec, USpec};
use crate::chevrep::torus_matrix;
use crate::error::{Error, Result};
use crate::exactalg::rational::integer_kernel;
use crate::exactalg::{Poly, LAMBDA, X};

/// The torus normalizing U_H: solves <α_j, m1 α1^∨ + m2 α2^∨> = m q_j over
/// the support. None when the solution ray is not unique or forces m = 0.
pub fn solve_torus(spec: &USpec) -> Result<Option<TSpec>> {
    let d = spec.group.datum();
    let rows: Vec<Vec<i64>> = spec
        .support()
        .iter()
        .map(|&j| {
            let w = d.root_weight(d.root(j));
            vec![w[0], w[1], -(spec.q[j] as i64)]
        })
        .collect();
    let ker = integer_kernel(&rows);
    if ker.len() != 1 || ker[0][2] == 0 {
        return Ok(None);
    }
    let t = TSpec::new(ker[0][0], ker[0][1], ker[0][2])?;
    if !verify_torus(spec, &t)? {
        return Err(Error::ValidationFailure(format!("torus {t} fails the conjugation identity for {spec}")));
    }
    Ok(Some(t))
}

/// t(λ) u(x) t(λ)^{-1} = u(λ^m x) in the faithful module.
pub fn verify_torus(spec: &USpec, t: &TSpec) -> Result<bool> {
    if t.m <= 0 {
        return Err(Error::Precondition("torus check needs m > 0".into()));
    }
    let rep = spec.faithful_rep()?;
    let f = spec.field();
    let (dm, _) = torus_matrix(&rep, t.cochar(), LAMBDA)?;
    let x = Poly::var(f, X);
    let scaled = Poly::monomial(f, 1, &[(LAMBDA, t.m as u64), (X, 1)])?;
    let lhs = dm.mul(&spec.matrix(&rep, &x)?)?;
    let rhs = spec.matrix(&rep, &scaled)?.mul(&dm)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::GroupId;

    #[test]
    fn sl3_cases() {
        let s = USpec::new(GroupId::Sl3, 3, vec![1, 1, 1], vec![1, 1, 2]).unwrap();
        assert_eq!(solve_torus(&s).unwrap(), Some(TSpec::new(1, 1, 1).unwrap()));
        // q1=1, q3=4: m1/m = 5/3, m2/m = 7/3
        let s = USpec::new(GroupId::Sl3, 2, vec![1, 0, 1], vec![1, 0, 4]).unwrap();
        assert_eq!(solve_torus(&s).unwrap(), Some(TSpec::new(5, 7, 3).unwrap()));
    }

    #[test]
    fn incompatible_weights() {
        // α1 with q=1 and α2 with q=1 force m1 = m2 = m; adding α1+α2 with q=1 forces m = 0
        let s = USpec::new(GroupId::Sl3, 5, vec![1, 1, 1], vec![1, 1, 1]).unwrap();
        assert_eq!(solve_torus(&s).unwrap(), None);
    }
}
