use super::Representation;
use crate::error::{Error, Result};
use crate::exactalg::linalg;
use crate::exactalg::rational::solve_q;
use crate::exactalg::{Poly, PolyMatrix, PrimeField, QMatrix, Q, X};
use crate::rootdata::{GroupId, RootDatum, Weight};

/// Integral form of a module: weight basis and, per root, the divided powers
/// of the root operator (index k holds e^(k)).
#[derive(Clone, Debug)]
pub struct ZForm {
    pub group: GroupId,
    pub name: String,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    pub pos: Vec<Vec<QMatrix>>,
    pub neg: Vec<Vec<QMatrix>>,
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Printed root elements I + x e + x^2 e2 as divided-power lists.
fn printed(n: usize, lin: &[(usize, usize, i64)], quad: &[(usize, usize, i64)]) -> Vec<QMatrix> {
    let mut v = vec![QMatrix::identity(n), QMatrix::from_units(n, lin)];
    if !quad.is_empty() {
        v.push(QMatrix::from_units(n, quad));
    }
    v
}

/// f with [e, f] = h_α, f of weight -α. The solution is unique because a
/// vector of h-weight -2 cannot be killed by e in a finite-dimensional
/// sl2-module.
pub fn complete_sl2(d: &RootDatum, weights: &[Weight], root: [i64; 2], e: &QMatrix) -> Result<QMatrix> {
    let n = weights.len();
    let rw = d.root_weight(root);
    let co = d.coroot(root);
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| weights[r][0] == weights[c][0] - rw[0] && weights[r][1] == weights[c][1] - rw[1])
        .collect();
    let mut rows = vec![];
    let mut rhs = vec![];
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Q::from_integer(0); unknowns.len()];
            for (u, &(r, c)) in unknowns.iter().enumerate() {
                // (e f)_ij picks f_rc with r = k, c = j; (f e)_ij picks r = i
                if c == j {
                    row[u] += e.get(i, r);
                }
                if r == i {
                    row[u] -= e.get(c, j);
                }
            }
            let h = if i == j { weights[i][0] * co[0] + weights[i][1] * co[1] } else { 0 };
            rows.push(row);
            rhs.push(Q::from_integer(h));
        }
    }
    let sol = solve_q(&rows, &rhs)
        .map_err(|_| Error::ValidationFailure(format!("no sl2 completion for root {root:?}")))?;
    let mut f = QMatrix::zero(n, n);
    for (u, &(r, c)) in unknowns.iter().enumerate() {
        f.set(r, c, sol[u]);
    }
    if e.commutator(&f) != diag_h(weights, co) {
        return Err(Error::ValidationFailure(format!("sl2 completion inconsistent for {root:?}")));
    }
    Ok(f)
}

fn diag_h(weights: &[Weight], co: [i64; 2]) -> QMatrix {
    let n = weights.len();
    let mut h = QMatrix::zero(n, n);
    for (i, w) in weights.iter().enumerate() {
        h.set(i, i, Q::from_integer(w[0] * co[0] + w[1] * co[1]));
    }
    h
}

impl ZForm {
    fn with_negatives(mut self) -> Result<Self> {
        let d = self.group.datum();
        let mut neg = vec![];
        for (i, powers) in self.pos.iter().enumerate() {
            let f = complete_sl2(&d, &self.weights, d.root(i), &powers[1])?;
            let dp = f.divided_powers();
            if dp.iter().any(|m| !m.is_integral()) {
                return Err(Error::ValidationFailure(format!("divided powers of f_{i} not integral")));
            }
            neg.push(dp);
        }
        self.neg = neg;
        Ok(self)
    }

    pub fn reduce(&self, field: PrimeField) -> Result<Representation> {
        let to_poly = |powers: &Vec<QMatrix>| -> Result<PolyMatrix> {
            let n = self.weights.len();
            let mut acc = PolyMatrix::zero(field, n, n);
            for (k, m) in powers.iter().enumerate() {
                let xk = Poly::monomial(field, 1, &[(X, k as u64)])?;
                acc = acc.add(&PolyMatrix::from_q(field, m)?.scale(&xk)?);
            }
            Ok(acc)
        };
        let pos = self.pos.iter().map(to_poly).collect::<Result<_>>()?;
        let neg = self.neg.iter().map(to_poly).collect::<Result<_>>()?;
        Ok(Representation::new(
            self.group,
            self.name.clone(),
            field,
            self.labels.clone(),
            self.weights.clone(),
            pos,
            neg,
        ))
    }

    pub fn sl3_natural() -> Result<Self> {
        let n = 3;
        ZForm {
            group: GroupId::Sl3,
            name: "natural".into(),
            labels: labels("e", 3),
            weights: vec![[1, 0], [-1, 1], [0, -1]],
            pos: vec![printed(n, &[(1, 2, 1)], &[]), printed(n, &[(2, 3, 1)], &[]), printed(n, &[(1, 3, 1)], &[])],
            neg: vec![],
        }
        .with_negatives()
    }

    pub fn sp4_v2() -> Result<Self> {
        let n = 4;
        ZForm {
            group: GroupId::Sp4,
            name: "V2".into(),
            labels: vec!["v21".into(), "v22".into(), "v23".into(), "v24".into()],
            weights: vec![[0, 1], [1, -1], [-1, 1], [0, -1]],
            pos: vec![
                printed(n, &[(2, 3, -1)], &[]),
                printed(n, &[(1, 2, 1), (3, 4, 1)], &[]),
                printed(n, &[(1, 3, 1), (2, 4, -1)], &[]),
                printed(n, &[(1, 4, 1)], &[]),
            ],
            neg: vec![],
        }
        .with_negatives()
    }

    pub fn g2_v() -> Result<Self> {
        let n = 7;
        ZForm {
            group: GroupId::G2,
            name: "V".into(),
            labels: labels("v", 7),
            weights: vec![[1, 0], [-1, 1], [2, -1], [0, 0], [-2, 1], [1, -1], [-1, 0]],
            pos: vec![
                printed(n, &[(1, 2, 1), (3, 4, 2), (4, 5, 1), (6, 7, 1)], &[(3, 5, 1)]),
                printed(n, &[(2, 3, -1), (5, 6, 1)], &[]),
                printed(n, &[(1, 3, 1), (2, 4, -2), (4, 6, -1), (5, 7, 1)], &[(2, 6, 1)]),
                printed(n, &[(1, 4, 2), (2, 5, -1), (3, 6, 1), (4, 7, -1)], &[(1, 7, -1)]),
                printed(n, &[(1, 5, 1), (3, 7, 1)], &[]),
                printed(n, &[(1, 6, 1), (2, 7, 1)], &[]),
            ],
            neg: vec![],
        }
        .with_negatives()
    }
}

/// Pairs (i < j) indexing the basis of the exterior square.
fn ext2_basis(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Divided power e^(k) acting on the exterior square of a module given by
/// its divided powers.
fn ext2_divided(powers: &[QMatrix], k: usize) -> QMatrix {
    let n = powers[0].rows();
    let basis = ext2_basis(n);
    let mut out = QMatrix::zero(basis.len(), basis.len());
    for (col, &(i, j)) in basis.iter().enumerate() {
        for a in 0..=k {
            let b = k - a;
            if a >= powers.len() || b >= powers.len() {
                continue;
            }
            for r in 0..n {
                let x = *powers[a].get(r, i);
                if *x.numer() == 0 {
                    continue;
                }
                for s in 0..n {
                    let y = *powers[b].get(s, j);
                    if *y.numer() == 0 || r == s {
                        continue;
                    }
                    let (lo, hi, sign) = if r < s { (r, s, 1) } else { (s, r, -1) };
                    let row = basis.iter().position(|&p| p == (lo, hi)).unwrap();
                    let v = *out.get(row, col) + x * y * Q::from_integer(sign);
                    out.set(row, col, v);
                }
            }
        }
    }
    out
}

/// The five f-monomial vectors spanning V1 inside the exterior square of V2,
/// as integer coordinate vectors, with their weights.
fn sp4_v1_vectors(v2: &ZForm) -> (Vec<Vec<Q>>, Vec<Weight>) {
    let basis = ext2_basis(4);
    let mut hw = vec![Q::from_integer(0); basis.len()];
    hw[0] = Q::from_integer(1); // v21 ∧ v22
    let f = |i: usize| ext2_divided(&v2.neg[i], 1);
    let v12 = f(0).apply(&hw);
    let v13 = f(2).apply(&hw);
    let v14 = f(3).apply(&hw);
    let v15 = f(0).apply(&v14);
    (vec![hw, v12, v13, v14, v15], vec![[1, 0], [-1, 2], [0, 0], [1, -2], [-1, 0]])
}

/// V1 reduced mod p directly: the spanning vectors and the root operators on
/// the exterior square are reduced, and each image is solved back into the
/// span over F_p. Fails if the span is not stable at this prime.
fn build_sp4_v1(field: PrimeField) -> Result<Representation> {
    let v2 = ZForm::sp4_v2()?;
    let (vecs, weights) = sp4_v1_vectors(&v2);
    let red = |v: &Vec<Q>| -> Result<Vec<u64>> { v.iter().map(|x| field.ratio(*x.numer(), *x.denom())).collect() };
    let vecs_p: Vec<Vec<u64>> = vecs.iter().map(red).collect::<Result<_>>()?;
    // columns are the spanning vectors
    let six = vecs_p[0].len();
    let mat: Vec<Vec<u64>> = (0..six).map(|r| vecs_p.iter().map(|v| v[r]).collect()).collect();
    if linalg::rank(&field, &mat) != 5 {
        return Err(Error::ValidationFailure(format!("V1 spanning vectors dependent mod {}", field.p())));
    }
    let build = |powers: &Vec<QMatrix>| -> Result<PolyMatrix> {
        let mut acc = PolyMatrix::zero(field, 5, 5);
        let max_k = 2 * (powers.len() - 1);
        for k in 0..=max_k {
            let dk = ext2_divided(powers, k);
            if dk.is_zero() {
                continue;
            }
            let xk = Poly::monomial(field, 1, &[(X, k as u64)])?;
            for (col, v) in vecs.iter().enumerate() {
                let img = red(&dk.apply(v))?;
                let coords = linalg::solve(&field, &mat, &img).ok_or_else(|| {
                    Error::ValidationFailure(format!("V1 span not stable mod {}", field.p()))
                })?;
                for (row, c) in coords.iter().enumerate() {
                    if *c != 0 {
                        let cur = acc.get(row, col).add(&xk.scale(*c));
                        acc.set(row, col, cur);
                    }
                }
            }
        }
        Ok(acc)
    };
    let pos = v2.pos.iter().map(build).collect::<Result<_>>()?;
    let neg = v2.neg.iter().map(build).collect::<Result<_>>()?;
    Ok(Representation::new(
        GroupId::Sp4,
        "V1",
        field,
        labels("v1", 5),
        weights,
        pos,
        neg,
    ))
}

pub fn build_rep(group: GroupId, module: &str, field: PrimeField) -> Result<Representation> {
    match (group, module) {
        (GroupId::Sl3, "natural") => ZForm::sl3_natural()?.reduce(field),
        (GroupId::Sp4, "V2") => ZForm::sp4_v2()?.reduce(field),
        (GroupId::Sp4, "V1") => build_sp4_v1(field),
        (GroupId::G2, "V") => ZForm::g2_v()?.reduce(field),
        _ => Err(Error::UnknownModule { group: group.name().into(), module: module.into() }),
    }
}

/// The faithful module used for additivity checks and normal forms.
pub fn faithful_module(group: GroupId) -> &'static str {
    match group {
        GroupId::Sl3 => "natural",
        GroupId::Sp4 => "V2",
        GroupId::G2 => "V",
    }
}

/// Integral structure behind `build_rep`, where one exists.
pub fn zform(group: GroupId, module: &str) -> Result<ZForm> {
    match (group, module) {
        (GroupId::Sl3, "natural") => ZForm::sl3_natural(),
        (GroupId::Sp4, "V2") => ZForm::sp4_v2(),
        (GroupId::G2, "V") => ZForm::g2_v(),
        _ => Err(Error::UnknownModule { group: group.name().into(), module: module.into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g2_printed_quadratic_terms_are_divided_squares() {
        let z = ZForm::g2_v().unwrap();
        for (i, p) in z.pos.iter().enumerate() {
            let dp = p[1].divided_powers();
            assert_eq!(dp.len(), p.len(), "root {i}");
            for (a, b) in dp.iter().zip(p) {
                assert_eq!(a, b, "root {i}");
            }
        }
    }

    #[test]
    fn g2_f_alpha1_is_not_a_plain_transpose() {
        let z = ZForm::g2_v().unwrap();
        let want = QMatrix::from_units(7, &[(2, 1, 1), (4, 3, 1), (5, 4, 2), (7, 6, 1)]);
        assert_eq!(z.neg[0][1], want);
    }

    #[test]
    fn sp4_v1_weights_and_dimension() {
        let f = PrimeField::new(3).unwrap();
        let v1 = build_rep(GroupId::Sp4, "V1", f).unwrap();
        assert_eq!(v1.dim(), 5);
        assert_eq!(v1.weights, vec![[1, 0], [-1, 2], [0, 0], [1, -2], [-1, 0]]);
    }

    #[test]
    fn unknown_module() {
        let f = PrimeField::new(3).unwrap();
        assert!(matches!(build_rep(GroupId::G2, "V2", f), Err(Error::UnknownModule { .. })));
    }
}
