//! Parsers for module and vector expressions in the witness data.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chevrep::functor::{add_into, vec_product, Node, Product};
use crate::chevrep::{cached_rep, faithful_module, Key, ModuleExpr, Vector};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, PrimeField};
use crate::expr::Expr;
use crate::rootdata::GroupId;

#[derive(Clone, Debug, PartialEq)]
pub enum ModAst {
    Leaf(String),
    Tensor(Vec<ModAst>),
    Ext(u32, Box<ModAst>),
    Sym(Expr, Box<ModAst>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum VecAst {
    Label(String),
    /// sum of signed, scaled terms
    Sum(Vec<(bool, Option<Expr>, VecAst)>),
    Wedge(Vec<VecAst>),
    Tensor(Vec<VecAst>),
    Sym(Expr, Box<VecAst>),
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.s))
    }

    fn ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().unwrap().len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.ws();
        let r = self.rest();
        let n = r.find(|c: char| !c.is_ascii_alphanumeric() && c != '_').unwrap_or(r.len());
        if n == 0 || !r.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        self.pos += n;
        Some(&r[..n])
    }

    /// Raw text up to the delimiter at bracket depth zero.
    fn raw_until(&mut self, delim: char) -> Result<&'a str> {
        self.ws();
        let r = self.rest();
        let mut depth = 0i32;
        for (i, c) in r.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' if depth > 0 => depth -= 1,
                _ if c == delim && depth == 0 => {
                    self.pos += i;
                    return Ok(&r[..i]);
                }
                _ => {}
            }
        }
        Err(self.err(&format!("missing '{delim}'")))
    }

    fn done(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

pub fn parse_module(s: &str) -> Result<ModAst> {
    let mut c = Cursor::new(s);
    let m = module_product(&mut c)?;
    c.done()?;
    Ok(m)
}

fn module_product(c: &mut Cursor) -> Result<ModAst> {
    let mut parts = vec![module_atom(c)?];
    while c.eat('*') {
        parts.push(module_atom(c)?);
    }
    Ok(if parts.len() == 1 { parts.pop().unwrap() } else { ModAst::Tensor(parts) })
}

fn module_atom(c: &mut Cursor) -> Result<ModAst> {
    if c.eat('(') {
        let m = module_product(c)?;
        c.expect(')')?;
        return Ok(m);
    }
    let id = c.ident().ok_or_else(|| c.err("expected a module"))?;
    match id {
        "ext" => {
            c.expect('(')?;
            let k: u32 = c.raw_until(',')?.trim().parse().map_err(|_| c.err("bad exterior degree"))?;
            c.expect(',')?;
            let m = module_product(c)?;
            c.expect(')')?;
            Ok(ModAst::Ext(k, Box::new(m)))
        }
        "sym" => {
            c.expect('(')?;
            let a = Expr::parse(c.raw_until(',')?)?;
            c.expect(',')?;
            let m = module_product(c)?;
            c.expect(')')?;
            Ok(ModAst::Sym(a, Box::new(m)))
        }
        _ => Ok(ModAst::Leaf(id.to_string())),
    }
}

pub fn parse_vector(s: &str) -> Result<VecAst> {
    let mut c = Cursor::new(s);
    let v = vector_sum(&mut c)?;
    c.done()?;
    Ok(v)
}

fn vector_sum(c: &mut Cursor) -> Result<VecAst> {
    let mut terms = vec![];
    let mut neg = c.eat('-');
    loop {
        let coef = if c.eat('[') {
            let e = Expr::parse(c.raw_until(']')?)?;
            c.expect(']')?;
            Some(e)
        } else {
            None
        };
        terms.push((neg, coef, vector_product(c)?));
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            break;
        }
    }
    if terms.len() == 1 && !terms[0].0 && terms[0].1.is_none() {
        return Ok(terms.pop().unwrap().2);
    }
    Ok(VecAst::Sum(terms))
}

fn vector_product(c: &mut Cursor) -> Result<VecAst> {
    let first = vector_atom(c)?;
    let op = match c.peek() {
        Some(op @ ('^' | '*')) => op,
        _ => return Ok(first),
    };
    let mut parts = vec![first];
    while c.eat(op) {
        parts.push(vector_atom(c)?);
    }
    if matches!(c.peek(), Some('^' | '*')) {
        return Err(c.err("mixed products need parentheses"));
    }
    Ok(if op == '^' { VecAst::Wedge(parts) } else { VecAst::Tensor(parts) })
}

fn vector_atom(c: &mut Cursor) -> Result<VecAst> {
    if c.eat('(') {
        let v = vector_sum(c)?;
        c.expect(')')?;
        return Ok(v);
    }
    let id = c.ident().ok_or_else(|| c.err("expected a vector"))?;
    if id == "sym" {
        c.expect('(')?;
        let a = Expr::parse(c.raw_until(',')?)?;
        c.expect(',')?;
        let v = vector_sum(c)?;
        c.expect(')')?;
        return Ok(VecAst::Sym(a, Box::new(v)));
    }
    Ok(VecAst::Label(id.to_string()))
}

/// Values for the symbols of a witness: q exponents and p as integers,
/// coefficients c_i in F_p.
pub struct Env {
    pub ints: BTreeMap<String, i64>,
    pub coeffs: BTreeMap<String, u64>,
}

impl Env {
    pub fn int(&self, e: &Expr) -> Result<i64> {
        e.eval_int(&|s| self.ints.get(s).copied())
    }

    pub fn scalar(&self, f: &PrimeField, e: &Expr) -> Result<u64> {
        e.eval(f, &|s| self.coeffs.get(s).copied().or_else(|| self.ints.get(s).map(|&v| f.from_i64(v))))
    }
}

fn leaf_name(group: GroupId, name: &str) -> &str {
    if name == "V" {
        faithful_module(group)
    } else {
        name
    }
}

/// Instantiates a module expression; leaves with the same name are shared.
pub fn build_module(ast: &ModAst, group: GroupId, field: PrimeField, env: &Env) -> Result<ModuleExpr> {
    let mut leaves: Vec<(String, Arc<crate::chevrep::Representation>)> = vec![];
    fn go(
        ast: &ModAst,
        group: GroupId,
        field: PrimeField,
        env: &Env,
        leaves: &mut Vec<(String, Arc<crate::chevrep::Representation>)>,
    ) -> Result<Node> {
        Ok(match ast {
            ModAst::Leaf(name) => {
                let i = match leaves.iter().position(|(n, _)| n == name) {
                    Some(i) => i,
                    None => {
                        leaves.push((name.clone(), cached_rep(group, leaf_name(group, name), field)?));
                        leaves.len() - 1
                    }
                };
                Node::Leaf(i)
            }
            ModAst::Tensor(ps) => Node::Tensor(ps.iter().map(|p| go(p, group, field, env, leaves)).collect::<Result<_>>()?),
            ModAst::Ext(k, m) => Node::Ext(*k, Box::new(go(m, group, field, env, leaves)?)),
            ModAst::Sym(a, m) => {
                let a = env.int(a)?;
                if a < 1 {
                    return Err(Error::Precondition(format!("symmetric power exponent {a} < 1")));
                }
                Node::Sym(a as u32, Box::new(go(m, group, field, env, leaves)?))
            }
        })
    }
    let root = go(ast, group, field, env, &mut leaves)?;
    Ok(ModuleExpr { root, leaves: leaves.into_iter().map(|(_, r)| r).collect() })
}

/// Evaluates a vector expression in the given module.
pub fn build_vector(ast: &VecAst, module: &ModuleExpr, env: &Env) -> Result<Vector> {
    eval_at(ast, &module.root, module, env)
}

fn shape_err(what: &str) -> Error {
    Error::Parse(format!("vector does not fit the module: {what}"))
}

fn eval_at(ast: &VecAst, node: &Node, m: &ModuleExpr, env: &Env) -> Result<Vector> {
    let f = m.field();
    match (ast, node) {
        (VecAst::Sum(terms), _) => {
            let mut out = Vector::new();
            for (neg, coef, v) in terms {
                let mut s = match coef {
                    Some(e) => env.scalar(&f, e)?,
                    None => 1,
                };
                if *neg {
                    s = f.from_i64(-(s as i64));
                }
                let sp = Poly::constant(f, s);
                for (k, c) in eval_at(v, node, m, env)? {
                    add_into(&mut out, k, &c.mul(&sp)?);
                }
            }
            Ok(out)
        }
        (VecAst::Label(l), Node::Leaf(i)) => {
            let rep = &m.leaves[*i];
            let j = rep.label_index(l).ok_or_else(|| shape_err(&format!("no basis vector {l} in {}", rep.name)))?;
            Ok(Vector::from([(Key::Leaf(j as u32), Poly::one(f))]))
        }
        (VecAst::Wedge(ps), Node::Ext(k, child)) if ps.len() == *k as usize => {
            let vs = ps.iter().map(|p| eval_at(p, child, m, env)).collect::<Result<Vec<_>>>()?;
            vec_product(f, &vs, Product::Wedge)
        }
        (VecAst::Tensor(ps), Node::Tensor(cs)) if ps.len() == cs.len() => {
            let vs = ps.iter().zip(cs).map(|(p, c)| eval_at(p, c, m, env)).collect::<Result<Vec<_>>>()?;
            vec_product(f, &vs, Product::Tensor)
        }
        (VecAst::Sym(a, v), Node::Sym(b, child)) => {
            if env.int(a)? != *b as i64 {
                return Err(shape_err("symmetric power degrees differ"));
            }
            let inner = eval_at(v, child, m, env)?;
            vec_product(f, &vec![inner; *b as usize], Product::Sym)
        }
        _ => Err(shape_err(&format!("{ast:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_modules() {
        let m = parse_module("sym(2q1-q5, V) * sym(q1-q5, V)").unwrap();
        assert!(matches!(m, ModAst::Tensor(ref v) if v.len() == 2));
        assert_eq!(parse_module("ext(3, V)").unwrap(), ModAst::Ext(3, Box::new(ModAst::Leaf("V".into()))));
        assert!(parse_module("ext(3, V").is_err());
    }

    #[test]
    fn parses_vectors() {
        let v = parse_vector("[2(c6-1)] v2 + v4 - [2] v6").unwrap();
        assert!(matches!(v, VecAst::Sum(ref t) if t.len() == 3));
        let w = parse_vector("(v2 - v3) ^ v4 ^ v6").unwrap();
        assert!(matches!(w, VecAst::Wedge(ref t) if t.len() == 3));
        assert!(parse_vector("v1 ^ v2 * v3").is_err());
    }

    #[test]
    fn wedge_in_module() {
        let f = PrimeField::new(5).unwrap();
        let env = Env { ints: BTreeMap::new(), coeffs: BTreeMap::new() };
        let m = build_module(&parse_module("ext(2, V)").unwrap(), GroupId::Sl3, f, &env).unwrap();
        let v = build_vector(&parse_vector("e2 ^ e1").unwrap(), &m, &env).unwrap();
        assert_eq!(m.format_vector(&v), "(4)·e1∧e2");
    }
}
