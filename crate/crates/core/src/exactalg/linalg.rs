//! Row reduction over any finite field.

use super::field::Field;

/// Row-reduce in place, returning pivot columns. Rows are reduced to RREF.
pub fn rref<F: Field>(f: &F, m: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| !f.is_zero(&m[r][col])) else { continue };
        m.swap(row, pr);
        let inv = f.inv(&m[row][col]).expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for r in 0..rows {
            if r != row && !f.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let v = f.mul(&factor, &m[row][c]);
                    m[r][c] = f.sub(&m[r][c], &v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

pub fn rank<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut m = m.to_vec();
    rref(f, &mut m).len()
}

/// Basis of {v : M v = 0}.
pub fn kernel<F: Field>(f: &F, m: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = m.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[i][fc]);
            }
            v
        })
        .collect()
}

/// Solve M x = b, any solution.
pub fn solve<F: Field>(f: &F, m: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut aug: Vec<Vec<F::Elem>> = m
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Incrementally maintained row space, used by span saturation.
pub struct SpanBuilder<'a, F: Field> {
    f: &'a F,
    basis: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<'a, F: Field> SpanBuilder<'a, F> {
    pub fn new(f: &'a F) -> Self {
        Self { f, basis: vec![], pivots: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduce v against the current basis; insert and return true if new.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.f;
        let mut v = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            if !f.is_zero(&v[pc]) {
                let factor = v[pc].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        let Some(pc) = v.iter().position(|x| !f.is_zero(x)) else { return false };
        let inv = f.inv(&v[pc]).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for b in self.basis.iter_mut() {
            if !f.is_zero(&b[pc]) {
                let factor = b[pc].clone();
                for (x, y) in b.iter_mut().zip(&v) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        self.basis.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let f = self.f;
        let mut v = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            if !f.is_zero(&v[pc]) {
                let factor = v[pc].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        v.iter().all(|x| f.is_zero(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::PrimeField;

    #[test]
    fn kernel_and_rank() {
        let f = PrimeField::new(3).unwrap();
        let m = vec![vec![1, 2, 0], vec![2, 1, 0]];
        // rows are dependent mod 3
        assert_eq!(rank(&f, &m), 1);
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            for r in &m {
                let s = r.iter().zip(&v).fold(0, |acc, (a, b)| (acc + a * b) % 3);
                assert_eq!(s, 0);
            }
        }
    }
}
