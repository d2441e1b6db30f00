//! Tensor, symmetric and exterior powers of representations.
//!
//! Vectors are sparse maps from basis keys to polynomials. Group elements act
//! on a basis key by acting on its constituent leaf vectors and multiplying
//! the images back together, so a single vector can be moved without
//! building the matrix of a large module.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{RootRef, Representation};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, PolyMatrix, PrimeField, X};
use crate::rootdata::{GroupId, Weight};

pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Leaf(u32),
    Multi(Vec<Key>),
}

pub type Vector = BTreeMap<Key, Poly>;

#[derive(Clone, Debug)]
pub enum Node {
    Leaf(usize),
    Tensor(Vec<Node>),
    Sym(u32, Box<Node>),
    Ext(u32, Box<Node>),
}

/// A module expression over representation leaves.
#[derive(Clone, Debug)]
pub struct ModuleExpr {
    pub root: Node,
    pub leaves: Vec<Arc<Representation>>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(usize::MAX as u128) as usize
}

pub fn add_into(v: &mut Vector, k: Key, c: &Poly) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(k.clone()).or_insert_with(|| Poly::zero(c.field()));
    *e = e.add(c);
    if e.is_zero() {
        v.remove(&k);
    }
}

pub fn vec_add(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (k, c) in b {
        add_into(&mut out, k.clone(), c);
    }
    out
}

pub fn vec_scale(a: &Vector, s: &Poly) -> Result<Vector> {
    let mut out = Vector::new();
    for (k, c) in a {
        add_into(&mut out, k.clone(), &c.mul(s)?);
    }
    Ok(out)
}

pub fn vec_sub(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (k, c) in b {
        add_into(&mut out, k.clone(), &c.neg());
    }
    out
}

/// Multilinear product of child vectors; `mode` decides ordering and signs.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Product {
    Tensor,
    Wedge,
    Sym,
}

pub fn vec_product(field: PrimeField, factors: &[Vector], mode: Product) -> Result<Vector> {
    let mut acc: BTreeMap<Vec<Key>, Poly> = BTreeMap::new();
    acc.insert(vec![], Poly::one(field));
    for f in factors {
        let mut next: BTreeMap<Vec<Key>, Poly> = BTreeMap::new();
        for (seq, c) in &acc {
            for (k, d) in f {
                let mut s = seq.clone();
                let mut sign = false;
                match mode {
                    Product::Tensor => s.push(k.clone()),
                    Product::Sym => {
                        let pos = s.partition_point(|x| x <= k);
                        s.insert(pos, k.clone());
                    }
                    Product::Wedge => {
                        if s.contains(k) {
                            continue;
                        }
                        let pos = s.partition_point(|x| x < k);
                        sign = (s.len() - pos) % 2 == 1;
                        s.insert(pos, k.clone());
                    }
                }
                let mut term = c.mul(d)?;
                if sign {
                    term = term.neg();
                }
                let e = next.entry(s.clone()).or_insert_with(|| Poly::zero(field));
                *e = e.add(&term);
                if e.is_zero() {
                    next.remove(&s);
                }
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|(s, c)| (Key::Multi(s), c)).collect())
}

impl ModuleExpr {
    pub fn leaf(rep: Arc<Representation>) -> Self {
        ModuleExpr { root: Node::Leaf(0), leaves: vec![rep] }
    }

    pub fn field(&self) -> PrimeField {
        self.leaves[0].field
    }

    pub fn group(&self) -> GroupId {
        self.leaves[0].group
    }

    fn node_dim(&self, n: &Node) -> usize {
        match n {
            Node::Leaf(i) => self.leaves[*i].dim(),
            Node::Tensor(cs) => cs.iter().map(|c| self.node_dim(c)).fold(1usize, |a, b| a.saturating_mul(b)),
            Node::Sym(a, c) => {
                let d = self.node_dim(c);
                binom(d + *a as usize - 1, *a as usize)
            }
            Node::Ext(k, c) => binom(self.node_dim(c), *k as usize),
        }
    }

    pub fn dim(&self) -> usize {
        self.node_dim(&self.root)
    }

    fn node_basis(&self, n: &Node) -> Vec<Key> {
        match n {
            Node::Leaf(i) => (0..self.leaves[*i].dim() as u32).map(Key::Leaf).collect(),
            Node::Tensor(cs) => {
                let mut acc: Vec<Vec<Key>> = vec![vec![]];
                for c in cs {
                    let b = self.node_basis(c);
                    acc = acc
                        .iter()
                        .flat_map(|pre| {
                            b.iter().map(move |k| {
                                let mut v = pre.clone();
                                v.push(k.clone());
                                v
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(Key::Multi).collect()
            }
            Node::Ext(k, c) => {
                let b = self.node_basis(c);
                combos(&b, *k as usize, false).into_iter().map(Key::Multi).collect()
            }
            Node::Sym(a, c) => {
                let b = self.node_basis(c);
                combos(&b, *a as usize, true).into_iter().map(Key::Multi).collect()
            }
        }
    }

    pub fn basis(&self, cap: usize) -> Result<Vec<Key>> {
        let d = self.dim();
        if d > cap {
            return Err(Error::DimensionOverflow { dim: d, cap });
        }
        let mut b = self.node_basis(&self.root);
        b.sort();
        Ok(b)
    }

    fn node_weight(&self, n: &Node, k: &Key) -> Weight {
        match (n, k) {
            (Node::Leaf(i), Key::Leaf(j)) => self.leaves[*i].weights[*j as usize],
            (Node::Tensor(cs), Key::Multi(ks)) => {
                cs.iter().zip(ks).fold([0, 0], |acc, (c, k)| add_w(acc, self.node_weight(c, k)))
            }
            (Node::Ext(_, c) | Node::Sym(_, c), Key::Multi(ks)) => {
                ks.iter().fold([0, 0], |acc, k| add_w(acc, self.node_weight(c, k)))
            }
            _ => panic!("key does not match module shape"),
        }
    }

    pub fn weight(&self, k: &Key) -> Weight {
        self.node_weight(&self.root, k)
    }

    fn node_label(&self, n: &Node, k: &Key) -> String {
        match (n, k) {
            (Node::Leaf(i), Key::Leaf(j)) => self.leaves[*i].labels[*j as usize].clone(),
            (Node::Tensor(cs), Key::Multi(ks)) => {
                let parts: Vec<String> = cs.iter().zip(ks).map(|(c, k)| self.node_label(c, k)).collect();
                format!("({})", parts.join("⊗"))
            }
            (Node::Ext(_, c), Key::Multi(ks)) => {
                ks.iter().map(|k| self.node_label(c, k)).collect::<Vec<_>>().join("∧")
            }
            (Node::Sym(_, c), Key::Multi(ks)) => {
                let mut parts: Vec<(String, usize)> = vec![];
                for k in ks {
                    let l = self.node_label(c, k);
                    match parts.last_mut() {
                        Some((last, n)) if *last == l => *n += 1,
                        _ => parts.push((l, 1)),
                    }
                }
                parts
                    .into_iter()
                    .map(|(l, n)| if n == 1 { l } else { format!("{l}^{n}") })
                    .collect::<Vec<_>>()
                    .join("·")
            }
            _ => panic!("key does not match module shape"),
        }
    }

    pub fn label(&self, k: &Key) -> String {
        self.node_label(&self.root, k)
    }

    pub fn format_vector(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter().map(|(k, c)| format!("({c})·{}", self.label(k))).collect::<Vec<_>>().join(" + ")
    }

    /// Leaf matrices of a product of root elements.
    pub fn leaf_matrices(&self, factors: &[(RootRef, Poly)]) -> Result<Vec<PolyMatrix>> {
        self.leaves.iter().map(|r| r.product(factors)).collect()
    }

    fn image(&self, n: &Node, k: &Key, mats: &[PolyMatrix], memo: &mut BTreeMap<Key, Vector>) -> Result<Vector> {
        let field = self.field();
        match (n, k) {
            (Node::Leaf(i), Key::Leaf(j)) => {
                let m = &mats[*i];
                let mut out = Vector::new();
                for r in 0..m.rows() {
                    add_into(&mut out, Key::Leaf(r as u32), m.get(r, *j as usize));
                }
                Ok(out)
            }
            (Node::Tensor(cs), Key::Multi(ks)) => {
                let imgs = cs
                    .iter()
                    .zip(ks)
                    .map(|(c, k)| self.image(c, k, mats, &mut BTreeMap::new()))
                    .collect::<Result<Vec<_>>>()?;
                vec_product(field, &imgs, Product::Tensor)
            }
            (Node::Ext(_, c) | Node::Sym(_, c), Key::Multi(ks)) => {
                let mut imgs = vec![];
                for k in ks {
                    if let Some(v) = memo.get(k) {
                        imgs.push(v.clone());
                    } else {
                        let v = self.image(c, k, mats, &mut BTreeMap::new())?;
                        memo.insert(k.clone(), v.clone());
                        imgs.push(v);
                    }
                }
                let mode = if matches!(n, Node::Ext(..)) { Product::Wedge } else { Product::Sym };
                vec_product(field, &imgs, mode)
            }
            _ => Err(Error::Precondition("key does not match module shape".into())),
        }
    }

    /// g·v for g the product of the given root elements.
    pub fn act(&self, factors: &[(RootRef, Poly)], v: &Vector) -> Result<Vector> {
        let mats = self.leaf_matrices(factors)?;
        self.act_with(&mats, v)
    }

    pub fn act_with(&self, mats: &[PolyMatrix], v: &Vector) -> Result<Vector> {
        let mut memo = BTreeMap::new();
        let mut out = Vector::new();
        for (k, c) in v {
            let img = self.image(&self.root, k, mats, &mut memo)?;
            for (k2, d) in img {
                add_into(&mut out, k2, &d.mul(c)?);
            }
        }
        Ok(out)
    }
}

fn add_w(a: Weight, b: Weight) -> Weight {
    [a[0] + b[0], a[1] + b[1]]
}

fn combos(b: &[Key], k: usize, repeat: bool) -> Vec<Vec<Key>> {
    fn rec(b: &[Key], k: usize, start: usize, repeat: bool, cur: &mut Vec<Key>, out: &mut Vec<Vec<Key>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..b.len() {
            cur.push(b[i].clone());
            rec(b, k, if repeat { i } else { i + 1 }, repeat, cur, out);
            cur.pop();
        }
    }
    let mut sorted = b.to_vec();
    sorted.sort();
    let mut out = vec![];
    rec(&sorted, k, 0, repeat, &mut vec![], &mut out);
    out
}

/// Realize a module expression as a representation with explicit matrices.
pub fn apply_functor(expr: &ModuleExpr, cap: usize) -> Result<Representation> {
    let basis = expr.basis(cap)?;
    let field = expr.field();
    let group = expr.group();
    let n_roots = group.datum().num_positive();
    let index: BTreeMap<&Key, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let x = Poly::var(field, X);
    let build = |r: RootRef| -> Result<PolyMatrix> {
        let mats = expr.leaf_matrices(&[(r, x.clone())])?;
        let mut m = PolyMatrix::zero(field, basis.len(), basis.len());
        let mut memo = BTreeMap::new();
        for (col, k) in basis.iter().enumerate() {
            for (k2, c) in expr.image(&expr.root, k, &mats, &mut memo)? {
                m.set(index[&k2], col, c);
            }
        }
        Ok(m)
    };
    let pos = (0..n_roots).map(|i| build(RootRef::Pos(i))).collect::<Result<_>>()?;
    let neg = if expr.leaves.iter().all(|l| l.has_negative_roots()) {
        (0..n_roots).map(|i| build(RootRef::Neg(i))).collect::<Result<_>>()?
    } else {
        vec![]
    };
    Ok(Representation::new(
        group,
        "functor",
        field,
        basis.iter().map(|k| expr.label(k)).collect(),
        basis.iter().map(|k| expr.weight(k)).collect(),
        pos,
        neg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevrep::build_rep;

    fn sl3(p: u64) -> Arc<Representation> {
        Arc::new(build_rep(GroupId::Sl3, "natural", PrimeField::new(p).unwrap()).unwrap())
    }

    #[test]
    fn exterior_square_of_natural() {
        let rep = sl3(5);
        let f = rep.field;
        let e = ModuleExpr { root: Node::Ext(2, Box::new(Node::Leaf(0))), leaves: vec![rep] };
        let m = apply_functor(&e, 100).unwrap();
        assert_eq!(m.dim(), 3);
        let k13 = m.label_index("e1∧e3").unwrap();
        let k23 = m.label_index("e2∧e3").unwrap();
        let u = m.pos_root_action(0);
        assert!(u.get(k13, k13).is_one());
        assert_eq!(u.get(k13, k23), &Poly::var(f, X));
        assert!(u.get(k23, k23).is_one());
    }

    #[test]
    fn sym1_is_the_rep() {
        let rep = sl3(3);
        let e = ModuleExpr { root: Node::Sym(1, Box::new(Node::Leaf(0))), leaves: vec![rep.clone()] };
        let m = apply_functor(&e, 100).unwrap();
        for i in 0..3 {
            assert_eq!(m.pos_root_action(i), rep.pos_root_action(i));
        }
    }

    #[test]
    fn ext_weights_are_sums() {
        let rep = sl3(7);
        let e = ModuleExpr { root: Node::Ext(2, Box::new(Node::Leaf(0))), leaves: vec![rep.clone()] };
        for k in e.basis(100).unwrap() {
            if let Key::Multi(ks) = &k {
                let w = ks.iter().fold([0, 0], |acc, k| match k {
                    Key::Leaf(i) => add_w(acc, rep.weights[*i as usize]),
                    _ => unreachable!(),
                });
                assert_eq!(w, e.weight(&k));
            }
        }
    }

    #[test]
    fn dimension_cap() {
        let rep = sl3(7);
        let e = ModuleExpr { root: Node::Sym(40, Box::new(Node::Leaf(0))), leaves: vec![rep] };
        assert!(matches!(e.basis(100), Err(Error::DimensionOverflow { .. })));
    }
}
