use super::{torus_matrix, Representation, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, A, B, LAMBDA, X};
use crate::rootdata::root_label;

#[derive(Clone, Debug, Default)]
pub struct RepReport {
    pub checks: Vec<String>,
}

fn roots(rep: &Representation) -> Vec<RootRef> {
    let n = rep.datum().num_positive();
    let mut v: Vec<RootRef> = (0..n).map(RootRef::Pos).collect();
    if rep.has_negative_roots() {
        v.extend((0..n).map(RootRef::Neg));
    }
    v
}

fn name(rep: &Representation, r: RootRef) -> String {
    let d = rep.datum();
    match r {
        RootRef::Pos(i) => root_label(d.root(i)),
        RootRef::Neg(i) => format!("-{}", root_label(d.root(i))),
    }
}

fn root_vec(rep: &Representation, r: RootRef) -> [i64; 2] {
    let d = rep.datum();
    match r {
        RootRef::Pos(i) => d.root(i),
        RootRef::Neg(i) => d.root(i).map(|x| -x),
    }
}

/// Checks per-root additivity, torus grading and unipotence; for V1 the
/// stability of the span is established during construction.
pub fn validate_rep(rep: &Representation) -> Result<RepReport> {
    let f = rep.field;
    let d = rep.datum();
    let mut report = RepReport::default();
    let (a, b) = (Poly::var(f, A), Poly::var(f, B));
    for r in roots(rep) {
        let label = name(rep, r);
        let ua = rep.root_element(r, &a)?;
        let ub = rep.root_element(r, &b)?;
        let uab = rep.root_element(r, &a.add(&b))?;
        if ua.mul(&ub)? != uab {
            return Err(Error::ValidationFailure(format!(
                "u_{label}(a)u_{label}(b) != u_{label}(a+b) in {} mod {}",
                rep.name,
                f.p()
            )));
        }
        let u = rep.action(r);
        if !u.determinant()?.is_one() {
            return Err(Error::ValidationFailure(format!("det u_{label}(x) != 1 in {}", rep.name)));
        }
        // the x^k slice moves weight μ to μ + kα
        let rw = d.root_weight(root_vec(rep, r));
        for k in 0..=u.max_degree(X) {
            let piece = u.graded_piece(X, k);
            for (row, line) in piece.iter().enumerate() {
                for (col, &v) in line.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    let src = rep.weights[col];
                    let want = [src[0] + k as i64 * rw[0], src[1] + k as i64 * rw[1]];
                    if rep.weights[row] != want {
                        return Err(Error::ValidationFailure(format!(
                            "u_{label} x^{k} entry ({},{}) breaks weight grading in {}",
                            row + 1,
                            col + 1,
                            rep.name
                        )));
                    }
                }
            }
        }
        report.checks.push(format!("additivity and grading of u_{label}"));
    }
    let x = Poly::var(f, X);
    let lambda = Poly::var(f, LAMBDA);
    for t in [[1, 0], [0, 1]] {
        let (dm, _) = torus_matrix(rep, t, LAMBDA)?;
        for r in roots(rep) {
            let e = d.pair_root(root_vec(rep, r), t);
            let scaled = lambda.pow(e.unsigned_abs())?.mul(&x)?;
            let u = rep.action(r);
            let us = u.substitute(X, &scaled)?;
            let ok = if e >= 0 { dm.mul(u)? == us.mul(&dm)? } else { dm.mul(&us)? == u.mul(&dm)? };
            if !ok {
                return Err(Error::ValidationFailure(format!(
                    "torus {t:?} does not scale u_{} by λ^{e} in {}",
                    name(rep, r),
                    rep.name
                )));
            }
        }
        report.checks.push(format!("torus conjugation by {t:?}"));
    }
    if rep.name == "V1" {
        report.checks.push("five-dimensional span stable under all root elements".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevrep::build_rep;
    use crate::exactalg::PrimeField;
    use crate::rootdata::GroupId;

    #[test]
    fn builtin_modules_validate() {
        for p in [2, 3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for (g, m) in [(GroupId::Sl3, "natural"), (GroupId::Sp4, "V2"), (GroupId::Sp4, "V1"), (GroupId::G2, "V")] {
                let rep = build_rep(g, m, f).unwrap();
                validate_rep(&rep).unwrap_or_else(|e| panic!("{g} {m} p={p}: {e}"));
            }
        }
    }
}
