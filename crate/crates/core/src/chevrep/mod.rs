//! Concrete representations with root-element matrices over F_p[x].

mod builtin;
pub mod functor;
pub mod validate;

pub use builtin::{build_rep, faithful_module, zform, ZForm};
pub use functor::{apply_functor, Key, ModuleExpr, Vector, DEFAULT_DIM_CAP};
pub use validate::{validate_rep, RepReport};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, PolyMatrix, PrimeField, X};
use crate::rootdata::{Cochar, GroupId, RootDatum, Weight};

/// Which root group: positive root i, or its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootRef {
    Pos(usize),
    Neg(usize),
}

#[derive(Clone, Debug)]
pub struct Representation {
    pub group: GroupId,
    pub name: String,
    pub field: PrimeField,
    pub labels: Vec<String>,
    pub weights: Vec<Weight>,
    pos: Vec<PolyMatrix>,
    neg: Vec<PolyMatrix>,
}

impl Representation {
    pub fn new(
        group: GroupId,
        name: impl Into<String>,
        field: PrimeField,
        labels: Vec<String>,
        weights: Vec<Weight>,
        pos: Vec<PolyMatrix>,
        neg: Vec<PolyMatrix>,
    ) -> Self {
        Self { group, name: name.into(), field, labels, weights, pos, neg }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn datum(&self) -> RootDatum {
        self.group.datum()
    }

    /// u_α(x) for the i-th positive root, in the variable x.
    pub fn pos_root_action(&self, i: usize) -> &PolyMatrix {
        &self.pos[i]
    }

    pub fn neg_root_action(&self, i: usize) -> &PolyMatrix {
        &self.neg[i]
    }

    pub fn action(&self, r: RootRef) -> &PolyMatrix {
        match r {
            RootRef::Pos(i) => &self.pos[i],
            RootRef::Neg(i) => &self.neg[i],
        }
    }

    pub fn has_negative_roots(&self) -> bool {
        !self.neg.is_empty()
    }

    /// u_α(param).
    pub fn root_element(&self, r: RootRef, param: &Poly) -> Result<PolyMatrix> {
        self.action(r).substitute(X, param)
    }

    /// Product of root elements, left to right.
    pub fn product(&self, factors: &[(RootRef, Poly)]) -> Result<PolyMatrix> {
        let mut acc = PolyMatrix::identity(self.field, self.dim());
        for (r, param) in factors {
            if param.is_zero() {
                continue;
            }
            acc = acc.mul(&self.root_element(*r, param)?)?;
        }
        Ok(acc)
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Entry of the linear part of u_α(x) used to read off the parameter in
    /// normal forms, with the inverse of its value.
    pub fn pivot(&self, i: usize) -> Result<(usize, usize, u64)> {
        let lin = self.pos[i].graded_piece(X, 1);
        let f = self.field;
        for (r, row) in lin.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v == 1 || v == f.p() - 1 {
                    return Ok((r, c, crate::exactalg::Field::inv(&f, &v).unwrap()));
                }
            }
        }
        for (r, row) in lin.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    return Ok((r, c, crate::exactalg::Field::inv(&f, &v).unwrap()));
                }
            }
        }
        Err(Error::ValidationFailure(format!("root {i} acts trivially in {}", self.name)))
    }
}

/// λ-exponents of the basis vectors under the cocharacter m1 α1^∨ + m2 α2^∨.
pub fn cocharacter_weights(rep: &Representation, t: Cochar) -> Vec<i64> {
    let d = rep.datum();
    rep.weights.iter().map(|&w| d.pairing(w, t)).collect()
}

/// Diagonal matrix λ^{w_i + shift} with shift making all exponents
/// nonnegative; returns (matrix, shift).
pub fn torus_matrix(rep: &Representation, t: Cochar, lambda: crate::exactalg::Var) -> Result<(PolyMatrix, i64)> {
    let w = cocharacter_weights(rep, t);
    let shift = -w.iter().copied().min().unwrap_or(0).min(0);
    let mut m = PolyMatrix::zero(rep.field, rep.dim(), rep.dim());
    for (i, &e) in w.iter().enumerate() {
        m.set(i, i, Poly::monomial(rep.field, 1, &[(lambda, (e + shift) as u64)])?);
    }
    Ok((m, shift))
}

type RepCache = Mutex<HashMap<(GroupId, String, PrimeField), Arc<Representation>>>;
static REP_CACHE: OnceLock<RepCache> = OnceLock::new();

/// build_rep with memoization; representations are immutable once built.
pub fn cached_rep(group: GroupId, module: &str, field: PrimeField) -> Result<Arc<Representation>> {
    let cache = REP_CACHE.get_or_init(Default::default);
    let key = (group, module.to_string(), field);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let rep = Arc::new(build_rep(group, module, field)?);
    cache.lock().unwrap().insert(key, rep.clone());
    Ok(rep)
}
