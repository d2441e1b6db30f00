//! The 3-dimensional candidate H = B_A U_c in SP4 and G2: A is an A1
//! diagonal in two commuting root SL2's, twisted by q on the second, and U_c
//! a companion root group. Checks the torus, the normalization identities,
//! the A-stable summands of V, and irreducibility of <A, U_c> through the
//! dimension of the generated matrix algebra.

use serde::Serialize;

use crate::chevrep::{cached_rep, faithful_module, torus_matrix, Representation, RootRef};
use crate::error::{Error, Result};
use crate::exactalg::{is_power_of, ExtElem, ExtField, Field, Poly, PolyMatrix, PrimeField, LAMBDA, X, Y};
use crate::exactalg::linalg::SpanBuilder;
use crate::rootdata::{root_label, Cochar, GroupId, Root};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalA1Spec {
    pub group: GroupId,
    pub p: u64,
    pub q: u64,
    /// u_+(x) = u_{pair[0]}(x) u_{pair[1]}(x^q)
    pub pair: [Root; 2],
    pub companion: Root,
}

impl DiagonalA1Spec {
    pub fn new(group: GroupId, p: u64, q: u64) -> Result<Self> {
        let (pair, companion) = match group {
            GroupId::Sp4 => ([[1, 0], [1, 2]], [1, 1]),
            GroupId::G2 => ([[1, 0], [3, 2]], [3, 1]),
            GroupId::Sl3 => return Err(Error::Precondition("no diagonal A1 construction for SL3".into())),
        };
        PrimeField::new(p)?;
        if q < p || !is_power_of(q, p) {
            return Err(Error::Precondition(format!("q = {q} is not a power p^k with k >= 1, p = {p}")));
        }
        Ok(Self { group, p, q, pair, companion })
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("checked in new")
    }

    fn rep(&self) -> Result<std::sync::Arc<Representation>> {
        cached_rep(self.group, faithful_module(self.group), self.field())
    }

    fn index(&self, r: Root) -> usize {
        self.group.datum().index_of(r).expect("root of the datum")
    }

    /// h(λ) = pair[0]^∨(λ) pair[1]^∨(λ^q), in simple coroot coordinates.
    pub fn torus(&self) -> Cochar {
        let d = self.group.datum();
        let a = d.coroot(self.pair[0]);
        let b = d.coroot(self.pair[1]);
        [a[0] + self.q as i64 * b[0], a[1] + self.q as i64 * b[1]]
    }

    /// The printed form α1^∨(λ^{1+q}) α2^∨(λ^{2q}).
    pub fn printed_torus(&self) -> Cochar {
        [1 + self.q as i64, 2 * self.q as i64]
    }

    fn sign_poly(&self, v: &Poly, neg: bool) -> Poly {
        if neg {
            v.neg()
        } else {
            v.clone()
        }
    }

    /// u_±(x), or u_±(-x) = u_±(x)^{-1} if inverse.
    fn u_pm(&self, positive: bool, inverse: bool) -> Result<PolyMatrix> {
        let rep = self.rep()?;
        let f = self.field();
        let x = self.sign_poly(&Poly::var(f, X), inverse);
        let xq = x.pow(self.q)?;
        let (i, j) = (self.index(self.pair[0]), self.index(self.pair[1]));
        let r = |k| if positive { RootRef::Pos(k) } else { RootRef::Neg(k) };
        // the two root groups commute, so the order only matters for readability
        rep.product(&[(r(i), x), (r(j), xq)])
    }

    fn u_c(&self, param: &Poly) -> Result<PolyMatrix> {
        self.rep()?.root_element(RootRef::Pos(self.index(self.companion)), param)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HTorusReport {
    pub group: GroupId,
    pub p: u64,
    pub q: u64,
    pub torus: Cochar,
    pub printed_torus: Cochar,
    /// (α1(h), α2(h)) for the torus of A
    pub simple_weights: [i64; 2],
    /// the same for the printed form
    pub printed_form_weights: [i64; 2],
    /// SP4: the stated values (2, q-1)
    pub stated_weights: Option<[i64; 2]>,
    /// weights of the two roots of A: (2, 2q) when h is the torus of A
    pub pair_weights: [i64; 2],
    pub companion_weight: i64,
    pub passed: bool,
}

/// Weights of the torus of A on the simple roots, the pair and the companion.
pub fn check_h_torus(spec: &DiagonalA1Spec) -> HTorusReport {
    let d = spec.group.datum();
    let q = spec.q as i64;
    let t = spec.torus();
    let pt = spec.printed_torus();
    let simple_weights = [d.pair_root([1, 0], t), d.pair_root([0, 1], t)];
    let printed_form_weights = [d.pair_root([1, 0], pt), d.pair_root([0, 1], pt)];
    let pair_weights = [d.pair_root(spec.pair[0], t), d.pair_root(spec.pair[1], t)];
    let companion_weight = d.pair_root(spec.companion, t);
    let stated_weights = (spec.group == GroupId::Sp4).then_some([2, q - 1]);
    let mut passed = pair_weights == [2, 2 * q] && companion_weight > 0;
    if let Some(s) = stated_weights {
        passed &= simple_weights == s && companion_weight == q + 1;
    }
    HTorusReport {
        group: spec.group,
        p: spec.p,
        q: spec.q,
        torus: t,
        printed_torus: pt,
        simple_weights,
        printed_form_weights,
        stated_weights,
        pair_weights,
        companion_weight,
        passed,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationReport {
    pub group: GroupId,
    pub p: u64,
    pub q: u64,
    pub companion: String,
    /// u_+(x) u_c(y) u_+(x)^{-1} = u_c(y)
    pub centralized_by_x: bool,
    /// h(λ) u_c(y) h(λ)^{-1} = u_c(λ^w y), w the companion weight
    pub torus_scales: bool,
    /// h(λ) u_+(x) h(λ)^{-1} = u_+(λ^2 x)
    pub torus_normalizes_x: bool,
    pub u_plus_inverse: bool,
    pub passed: bool,
}

/// The identities as polynomial identities in x, y, λ over F_p.
pub fn check_normalization(spec: &DiagonalA1Spec) -> Result<NormalizationReport> {
    let f = spec.field();
    let rep = spec.rep()?;
    let up = spec.u_pm(true, false)?;
    let up_inv = spec.u_pm(true, true)?;
    let u_plus_inverse = up.mul(&up_inv)?.is_identity();
    let uc = spec.u_c(&Poly::var(f, Y))?;
    let centralized_by_x = up.mul(&uc)?.mul(&up_inv)? == uc;

    let w = spec.group.datum().pair_root(spec.companion, spec.torus());
    if w < 0 {
        return Err(Error::IdentityFails(format!("companion weight {w} is negative")));
    }
    let (h, _) = torus_matrix(&rep, spec.torus(), LAMBDA)?;
    let lam_w_y = Poly::monomial(f, 1, &[(LAMBDA, w as u64), (Y, 1)])?;
    let torus_scales = h.mul(&uc)? == spec.u_c(&lam_w_y)?.mul(&h)?;
    let lam2x = Poly::monomial(f, 1, &[(LAMBDA, 2), (X, 1)])?;
    let up_scaled = up.substitute(X, &lam2x)?;
    let torus_normalizes_x = h.mul(&up)? == up_scaled.mul(&h)?;
    Ok(NormalizationReport {
        group: spec.group,
        p: spec.p,
        q: spec.q,
        companion: root_label(spec.companion),
        centralized_by_x,
        torus_scales,
        torus_normalizes_x,
        u_plus_inverse,
        passed: u_plus_inverse && centralized_by_x && torus_scales && torus_normalizes_x,
    })
}

/// The two weight spans stated to be the A-summands of V.
pub fn stated_summands(group: GroupId) -> [Vec<&'static str>; 2] {
    match group {
        GroupId::Sp4 => [vec!["v21", "v24"], vec!["v22", "v23"]],
        GroupId::G2 => [vec!["v1", "v2", "v6", "v7"], vec!["v3", "v4", "v5"]],
        GroupId::Sl3 => [vec![], vec![]],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandReport {
    pub group: GroupId,
    pub p: u64,
    pub q: u64,
    pub spans: [Vec<String>; 2],
    /// invariant under u_+(x) and u_-(x)
    pub a_stable: [bool; 2],
    /// (from, to): u_c(y) applied to a span vector has a `to`-component
    /// outside the span
    pub leaks: [Vec<(String, String)>; 2],
    /// u_c(0) leaks nowhere
    pub zero_sanity: bool,
    pub passed: bool,
}

fn span_stable(m: &PolyMatrix, span: &[usize]) -> bool {
    span.iter().all(|&c| (0..m.rows()).all(|r| span.contains(&r) || m.get(r, c).is_zero()))
}

fn span_leaks(rep: &Representation, m: &PolyMatrix, span: &[usize]) -> Vec<(String, String)> {
    let mut out = vec![];
    for &c in span {
        for r in 0..m.rows() {
            if !span.contains(&r) && !m.get(r, c).is_zero() {
                out.push((rep.labels[c].clone(), rep.labels[r].clone()));
            }
        }
    }
    out
}

pub fn check_a_summands(spec: &DiagonalA1Spec) -> Result<SummandReport> {
    let f = spec.field();
    let rep = spec.rep()?;
    let spans = stated_summands(spec.group).map(|s| {
        s.iter().map(|l| rep.label_index(l).expect("label of the faithful module")).collect::<Vec<_>>()
    });
    let up = spec.u_pm(true, false)?;
    let um = spec.u_pm(false, false)?;
    let uc = spec.u_c(&Poly::var(f, Y))?;
    let uc0 = spec.u_c(&Poly::zero(f))?;
    let a_stable = [0, 1].map(|i| span_stable(&up, &spans[i]) && span_stable(&um, &spans[i]));
    let leaks = [0, 1].map(|i| span_leaks(&rep, &uc, &spans[i]));
    let zero_sanity = spans.iter().all(|s| span_leaks(&rep, &uc0, s).is_empty());
    let passed = a_stable == [true, true] && leaks.iter().all(|l| !l.is_empty()) && zero_sanity;
    Ok(SummandReport {
        group: spec.group,
        p: spec.p,
        q: spec.q,
        spans: spans.map(|s| s.iter().map(|&i| rep.labels[i].clone()).collect()),
        a_stable,
        leaks,
        zero_sanity,
        passed,
    })
}

pub type ExtMatrix = Vec<Vec<ExtElem>>;

fn ext_identity(f: &ExtField, n: usize) -> ExtMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
}

fn ext_mul(f: &ExtField, a: &ExtMatrix, b: &ExtMatrix) -> ExtMatrix {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![f.zero(); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if f.is_zero(&a[i][k]) {
                continue;
            }
            for j in 0..m {
                if !f.is_zero(&b[k][j]) {
                    out[i][j] = f.add(&out[i][j], &f.mul(&a[i][k], &b[k][j]));
                }
            }
        }
    }
    out
}

/// A matrix over F_p[x] evaluated at x = ξ in F_{p^k}.
pub fn eval_at(f: &ExtField, m: &PolyMatrix, xi: &ExtElem) -> ExtMatrix {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let mut acc = f.zero();
                    for (e, &coef) in m.get(r, c).terms() {
                        let term = f.mul(&f.embed(coef), &f.pow(xi, e[X.0 as usize] as u64));
                        acc = f.add(&acc, &term);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanResult {
    pub n: usize,
    pub dim: usize,
    pub steps: u64,
    pub irreducible: bool,
}

/// Dimension of the algebra spanned by all words in the generators,
/// computed by closing span{I} under left multiplication. Full dimension
/// n^2 means the generated group acts absolutely irreducibly.
pub fn burnside_irreducible(f: &ExtField, gens: &[ExtMatrix], max_steps: u64) -> Result<SpanResult> {
    let Some(first) = gens.first() else {
        return Err(Error::Precondition("no generators".into()));
    };
    let n = first.len();
    if gens.iter().any(|g| g.len() != n || g.iter().any(|row| row.len() != n)) {
        return Err(Error::Precondition("generators must be square of one size".into()));
    }
    let flat = |m: &ExtMatrix| m.iter().flatten().cloned().collect::<Vec<_>>();
    let mut span = SpanBuilder::new(f);
    let id = ext_identity(f, n);
    span.insert(&flat(&id));
    let mut frontier = vec![id];
    let mut steps = 0u64;
    while let Some(b) = frontier.pop() {
        for g in gens {
            steps += 1;
            if steps > max_steps {
                return Err(Error::BudgetExceeded(max_steps));
            }
            let w = ext_mul(f, g, &b);
            if span.insert(&flat(&w)) {
                frontier.push(w);
            }
        }
        if span.dim() == n * n {
            break;
        }
    }
    Ok(SpanResult { n, dim: span.dim(), steps, irreducible: span.dim() == n * n })
}

pub const DEFAULT_SPAN_STEPS: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityReport {
    pub group: GroupId,
    pub p: u64,
    pub q: u64,
    pub field_size: u64,
    pub full: SpanResult,
    /// G2 at p = 2: the span on V / <v4> when the zero-weight line is
    /// invariant under the generators
    pub quotient: Option<SpanResult>,
    pub zero_weight_line_invariant: Option<bool>,
}

/// Generators of Y = <A, U_c> over F_{p^2}: u_±(ξ) and u_c(ξ) for ξ in the
/// basis {1, t} of F_{p^2} over F_p.
pub fn y_generators(spec: &DiagonalA1Spec) -> Result<(ExtField, Vec<ExtMatrix>)> {
    let rep = spec.rep()?;
    let ext = ExtField::new(spec.field(), 2);
    let basis = [ext.one(), ext.gen()];
    let (i, j) = (spec.index(spec.pair[0]), spec.index(spec.pair[1]));
    let c = spec.index(spec.companion);
    let mut gens = vec![];
    for xi in &basis {
        let xq = ext.pow(xi, spec.q);
        for (a, b) in [(RootRef::Pos(i), RootRef::Pos(j)), (RootRef::Neg(i), RootRef::Neg(j))] {
            gens.push(ext_mul(&ext, &eval_at(&ext, rep.action(a), xi), &eval_at(&ext, rep.action(b), &xq)));
        }
        gens.push(eval_at(&ext, rep.action(RootRef::Pos(c)), xi));
    }
    Ok((ext, gens))
}

pub fn check_irreducible(spec: &DiagonalA1Spec, max_steps: u64) -> Result<IrreducibilityReport> {
    let (ext, gens) = y_generators(spec)?;
    let full = burnside_irreducible(&ext, &gens, max_steps)?;
    let (mut quotient, mut invariant) = (None, None);
    if spec.group == GroupId::G2 && spec.p == 2 {
        let rep = spec.rep()?;
        let z = rep.label_index("v4").expect("zero weight vector");
        let inv = gens.iter().all(|g| (0..g.len()).all(|r| r == z || ext.is_zero(&g[r][z])));
        invariant = Some(inv);
        if inv {
            let drop = |g: &ExtMatrix| -> ExtMatrix {
                g.iter()
                    .enumerate()
                    .filter(|(r, _)| *r != z)
                    .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != z).map(|(_, v)| v.clone()).collect())
                    .collect()
            };
            let qg: Vec<ExtMatrix> = gens.iter().map(drop).collect();
            quotient = Some(burnside_irreducible(&ext, &qg, max_steps)?);
        }
    }
    Ok(IrreducibilityReport {
        group: spec.group,
        p: spec.p,
        q: spec.q,
        field_size: ext.size(),
        full,
        quotient,
        zero_weight_line_invariant: invariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp4_torus_weights() {
        let s = DiagonalA1Spec::new(GroupId::Sp4, 2, 2).unwrap();
        let r = check_h_torus(&s);
        assert_eq!(r.simple_weights, [2, 1]);
        assert_eq!(r.companion_weight, 3);
        assert!(r.passed);
    }

    #[test]
    fn rejects_q_one() {
        assert!(DiagonalA1Spec::new(GroupId::G2, 3, 1).is_err());
        assert!(DiagonalA1Spec::new(GroupId::G2, 3, 6).is_err());
    }

    #[test]
    fn identity_only_is_reducible() {
        let f = ExtField::new(PrimeField::new(2).unwrap(), 1);
        let r = burnside_irreducible(&f, &[ext_identity(&f, 2)], 100).unwrap();
        assert_eq!(r.dim, 1);
        assert!(!r.irreducible);
    }

    #[test]
    fn sl2_natural_over_f2() {
        let f = ExtField::new(PrimeField::new(2).unwrap(), 1);
        let e = |a: u64, b: u64, c: u64, d: u64| vec![vec![f.embed(a), f.embed(b)], vec![f.embed(c), f.embed(d)]];
        let r = burnside_irreducible(&f, &[e(1, 1, 0, 1), e(1, 0, 1, 1)], 100).unwrap();
        assert_eq!(r.dim, 4);
    }
}
