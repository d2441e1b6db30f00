//! Small arithmetic expressions over named symbols, as they appear in the
//! case tables: "2q1", "(q1+q3)/3", "1/2(c5-3c4)", "-3/2 c4".

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exactalg::{ExtElem, ExtField, Field, PrimeField, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Q as a field, so one evaluator serves Q, F_p and F_{p^k}.
#[derive(Clone, Copy, Debug)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Q;
    fn zero(&self) -> Q {
        Q::from_integer(0)
    }
    fn one(&self) -> Q {
        Q::from_integer(1)
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn inv(&self, a: &Q) -> Option<Q> {
        if *a.numer() == 0 {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &Q) -> bool {
        *a.numer() == 0
    }
}

/// Fields that can embed integers.
pub trait Scalars: Field {
    fn int(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;
}

impl Scalars for Rationals {
    fn int(&self, n: i64) -> Q {
        Ratio::from_integer(n)
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

impl Scalars for PrimeField {
    fn int(&self, n: i64) -> u64 {
        self.from_i64(n)
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
}

impl Scalars for ExtField {
    fn int(&self, n: i64) -> ExtElem {
        self.embed(self.base().from_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.base().p()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Sym(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = vec![];
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("number {t}")))?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            i += 1;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Sym(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected '{c}' in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src)))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    lhs = Expr::Mul(lhs.into(), self.unary()?.into());
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    lhs = Expr::Div(lhs.into(), self.unary()?.into());
                }
                // implicit multiplication: 2q1, 1/2(c5-3c4)
                Some(Tok::Num(_) | Tok::Sym(_) | Tok::Op('(')) => {
                    lhs = Expr::Mul(lhs.into(), self.power()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n >= 0 => {
                    self.pos += 1;
                    return Ok(Expr::Pow(base.into(), n as u32));
                }
                _ => return self.err("expected exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Sym(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected operand"),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser { toks: lex(s)?, pos: 0, src: s.to_string() };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.symbols().is_empty()
    }

    /// Evaluate with symbol values from `env`. Division by an element that
    /// vanishes in the field is DenominatorVanishes.
    pub fn eval<F: Scalars>(&self, f: &F, env: &dyn Fn(&str) -> Option<F::Elem>) -> Result<F::Elem> {
        Ok(match self {
            Expr::Num(n) => f.int(*n),
            Expr::Sym(s) => env(s).ok_or_else(|| Error::Parse(format!("unbound symbol {s}")))?,
            Expr::Neg(a) => f.neg(&a.eval(f, env)?),
            Expr::Add(a, b) => f.add(&a.eval(f, env)?, &b.eval(f, env)?),
            Expr::Sub(a, b) => f.sub(&a.eval(f, env)?, &b.eval(f, env)?),
            Expr::Mul(a, b) => f.mul(&a.eval(f, env)?, &b.eval(f, env)?),
            Expr::Div(a, b) => {
                let d = b.eval(f, env)?;
                let inv = f.inv(&d).ok_or_else(|| match b.as_ref() {
                    Expr::Num(n) if *n != 0 => Error::DenominatorVanishes { den: *n, p: f.characteristic() },
                    Expr::Num(_) => Error::Precondition("zero denominator".into()),
                    other => Error::Precondition(format!("denominator {other} vanishes")),
                })?;
                f.mul(&a.eval(f, env)?, &inv)
            }
            Expr::Pow(a, k) => {
                let base = a.eval(f, env)?;
                let mut acc = f.one();
                for _ in 0..*k {
                    acc = f.mul(&acc, &base);
                }
                acc
            }
        })
    }

    pub fn eval_q(&self, env: &dyn Fn(&str) -> Option<Q>) -> Result<Q> {
        self.eval(&Rationals, env)
    }

    /// Integer value, failing if the result is not integral.
    pub fn eval_int(&self, env: &dyn Fn(&str) -> Option<i64>) -> Result<i64> {
        let q = self.eval_q(&|s| env(s).map(Q::from_integer))?;
        if !q.is_integer() {
            return Err(Error::Precondition(format!("{self} = {q} is not an integer")));
        }
        Ok(q.to_integer())
    }

    /// Linear form in the symbols: (constant, [(symbol, coefficient)]).
    pub fn linear_form(&self) -> Result<(Q, Vec<(String, Q)>)> {
        let syms: Vec<String> = self.symbols().into_iter().collect();
        let zero = |_: &str| Some(Q::from_integer(0));
        let c0 = self.eval_q(&zero)?;
        let mut coeffs = vec![];
        for s in &syms {
            let v = self.eval_q(&|t| Some(Q::from_integer(if t == s { 1 } else { 0 })))? - c0;
            // a second probe rules out nonlinear terms
            let w = self.eval_q(&|t| Some(Q::from_integer(if t == s { 2 } else { 0 })))? - c0;
            if w != v * Q::from_integer(2) {
                return Err(Error::Parse(format!("{self} is not linear in {s}")));
            }
            if *v.numer() != 0 {
                coeffs.push((s.clone(), v));
            }
        }
        Ok((c0, coeffs))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn implicit_products() {
        let e = Expr::parse("1/2(c5-3c4)").unwrap();
        let env = |s: &str| match s {
            "c5" => Some(q(7, 1)),
            "c4" => Some(q(1, 1)),
            _ => None,
        };
        assert_eq!(e.eval_q(&env).unwrap(), q(2, 1));
        assert_eq!(Expr::parse("-3/2 c4").unwrap().eval_q(&env).unwrap(), q(-3, 2));
        assert_eq!(Expr::parse("2q1").unwrap().eval_int(&|_| Some(5)).unwrap(), 10);
    }

    #[test]
    fn mod_p_ratios() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(Expr::parse("-1/10").unwrap().eval(&f, &|_| None).unwrap(), 2);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(
            Expr::parse("1/3").unwrap().eval(&f3, &|_| None),
            Err(Error::DenominatorVanishes { den: 3, p: 3 })
        );
    }

    #[test]
    fn linear_forms() {
        let (c, l) = Expr::parse("(2q3-q1)/3").unwrap().linear_form().unwrap();
        assert_eq!(c, q(0, 1));
        assert_eq!(l, vec![("q1".to_string(), q(-1, 3)), ("q3".to_string(), q(2, 3))]);
        assert!(Expr::parse("q1*q1").unwrap().linear_form().is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("2+").is_err());
        assert!(Expr::parse("(q1").is_err());
        assert!(Expr::parse("q1 $").is_err());
    }
}
