use std::fmt;

use super::field::PrimeField;
use super::poly::{Poly, Var};
use super::rational::QMatrix;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { rows, cols, field, entries: vec![Poly::zero(field); rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    /// Reduce an integer matrix mod p; fails if an entry has a denominator
    /// divisible by p.
    pub fn from_q(field: PrimeField, q: &QMatrix) -> Result<Self> {
        let mut m = Self::zero(field, q.rows(), q.cols());
        for r in 0..q.rows() {
            for c in 0..q.cols() {
                let v = q.get(r, c);
                if *v.numer() != 0 {
                    let e = field.ratio(*v.numer(), *v.denom())?;
                    m.set(r, c, Poly::constant(field, e));
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Poly) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        PolyMatrix { entries, ..*self }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        PolyMatrix { entries, ..*self }
    }

    pub fn scale(&self, s: &Poly) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|a| a.mul(s)).collect::<Result<_>>()?;
        Ok(PolyMatrix { entries, ..*self })
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b)?);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn substitute_many(&self, subs: &[(Var, &Poly)]) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|a| a.substitute_many(subs)).collect::<Result<_>>()?;
        Ok(PolyMatrix { entries, ..*self })
    }

    pub fn substitute(&self, v: Var, q: &Poly) -> Result<PolyMatrix> {
        self.substitute_many(&[(v, q)])
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let e = self.get(r, c);
                    if r == c { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Poly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn apply(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Poly::zero(self.field); self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, x) in v.iter().enumerate() {
                let a = self.get(r, c);
                if a.is_zero() || x.is_zero() {
                    continue;
                }
                *o = o.add(&a.mul(x)?);
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self, v: Var) -> u32 {
        self.entries.iter().map(|e| e.degree_in(v)).max().unwrap_or(0)
    }

    /// Constant matrix of the v^k coefficients (other variables must be absent).
    pub fn graded_piece(&self, v: Var, k: u32) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).coeff_in(v, k).constant_term()).collect())
            .collect()
    }

    pub fn determinant(&self) -> Result<Poly> {
        // Laplace expansion is fine at the sizes used here (n <= 7)
        assert_eq!(self.rows, self.cols);
        let idx: Vec<usize> = (0..self.cols).collect();
        self.det_rec(0, &idx)
    }

    fn det_rec(&self, row: usize, cols: &[usize]) -> Result<Poly> {
        if cols.is_empty() {
            return Ok(Poly::one(self.field));
        }
        let mut acc = Poly::zero(self.field);
        for (i, &c) in cols.iter().enumerate() {
            let e = self.get(row, c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = e.mul(&self.det_rec(row + 1, &rest)?)?;
            acc = if i % 2 == 0 { acc.add(&minor) } else { acc.sub(&minor) };
        }
        Ok(acc)
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over F{}", self.rows, self.cols, self.field.p())?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::X;

    #[test]
    fn unipotent_determinant() {
        let f = PrimeField::new(5).unwrap();
        let mut m = PolyMatrix::identity(f, 3);
        m.set(0, 1, Poly::var(f, X));
        m.set(0, 2, Poly::var(f, X).pow(2).unwrap());
        m.set(1, 2, Poly::var(f, X));
        assert!(m.determinant().unwrap().is_one());
    }
}
