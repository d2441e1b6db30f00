//! Small dense matrices over Q, used for the integral forms before reduction mod p.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::from_integer(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::from_integer(1));
        }
        m
    }

    /// From a list of (row, col, value) with 1-based indices, as matrix units E_ij.
    pub fn from_units(n: usize, units: &[(usize, usize, i64)]) -> Self {
        let mut m = Self::zero(n, n);
        for &(r, c, v) in units {
            let cur = *m.get(r - 1, c - 1);
            m.set(r - 1, c - 1, cur + Q::from_integer(v));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x.numer() == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn add(&self, o: &QMatrix) -> QMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        QMatrix { data, ..*self }
    }

    pub fn sub(&self, o: &QMatrix) -> QMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        QMatrix { data, ..*self }
    }

    pub fn scale(&self, s: Q) -> QMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        QMatrix { data, ..*self }
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = QMatrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = *self.get(i, k);
                if *a.numer() == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = *out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, *self.get(r, c));
            }
        }
        out
    }

    pub fn commutator(&self, o: &QMatrix) -> QMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Divided powers N^k / k! for k = 0.. until N^k vanishes.
    pub fn divided_powers(&self) -> Vec<QMatrix> {
        let mut out = vec![QMatrix::identity(self.rows)];
        let mut k = 1;
        loop {
            let next = out[k - 1].mul(self).scale(Q::new(1, k as i64));
            if next.is_zero() {
                break;
            }
            out.push(next);
            k += 1;
            assert!(k <= self.rows + 1, "matrix is not nilpotent");
        }
        out
    }
}

/// Solve A x = b over Q; returns one solution if consistent, preferring
/// zero on free variables.
pub fn solve_q(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, &v)| {
            let mut r = r.clone();
            r.push(v);
            r
        })
        .collect();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| *m[r][col].numer() != 0) else { continue };
        m.swap(row, pr);
        let inv = Q::from_integer(1) / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..rows {
            if r != row && *m[r][col].numer() != 0 {
                let f = m[r][col];
                for c in 0..=cols {
                    let v = m[row][c];
                    m[r][c] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| *r[cols].numer() != 0) {
        return Err(Error::ValidationFailure("inconsistent rational system".into()));
    }
    let mut x = vec![Q::from_integer(0); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Ok(x)
}

/// Basis of the integer kernel of a small integer matrix (columns are
/// variables), via rational kernel scaled to primitive integer vectors.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..rows).find(|&r| *m[r][col].numer() != 0) else { continue };
        m.swap(row, pr);
        let inv = Q::from_integer(1) / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..rows {
            if r != row && *m[r][col].numer() != 0 {
                let f = m[r][col];
                for c in 0..cols {
                    let v = m[row][c];
                    m[r][c] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Q::from_integer(0); cols];
            v[fc] = Q::from_integer(1);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][fc];
            }
            primitive(&v)
        })
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Scale a rational vector to a primitive integer vector (sign preserved).
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| {
        let d = *x.denom();
        acc / gcd(acc, d) * d
    });
    let ints: Vec<i64> = v.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0, |acc, &x| gcd(acc, x));
    if g == 0 { ints } else { ints.iter().map(|x| x / g).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_root_relations() {
        // roots a1, a1+a2, a2: one relation
        let k = integer_kernel(&[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(k, vec![vec![1, -1, 1]]);
    }

    #[test]
    fn divided_powers_integral() {
        let e = QMatrix::from_units(7, &[(1, 2, 1), (3, 4, 2), (4, 5, 1), (6, 7, 1)]);
        let d = e.divided_powers();
        assert_eq!(d.len(), 3);
        assert_eq!(d[2], QMatrix::from_units(7, &[(3, 5, 1)]));
    }
}
