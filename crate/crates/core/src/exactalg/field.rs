use crate::error::{Error, Result};

pub const DEFAULT_EXPONENT_BOUND: u32 = 1_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field operations shared by the prime field and its extensions, so the
/// linear algebra routines can run over either.
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// The prime field F_p. Carries the exponent bound used by polynomials
/// built over it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    exponent_bound: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p, exponent_bound: DEFAULT_EXPONENT_BOUND })
    }

    pub fn with_exponent_bound(mut self, bound: u32) -> Self {
        self.exponent_bound = bound;
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent_bound(&self) -> u32 {
        self.exponent_bound
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric lift to (-p/2, p/2].
    pub fn lift(&self, v: u64) -> i64 {
        if v > self.p / 2 {
            v as i64 - self.p as i64
        } else {
            v as i64
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn ratio(&self, num: i64, den: i64) -> Result<u64> {
        field_ratio(num, den, self)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }

    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// numerator / denominator reduced mod p.
pub fn field_ratio(num: i64, den: i64, field: &PrimeField) -> Result<u64> {
    if den == 0 {
        return Err(Error::Precondition("zero denominator".into()));
    }
    let d = field.from_i64(den);
    let inv = field.inv(&d).ok_or(Error::DenominatorVanishes { den, p: field.p })?;
    Ok(field.mul(&field.from_i64(num), &inv))
}

/// Splits z = x * y with y the largest power of p dividing z.
pub fn freshman_split(z: u64, field: &PrimeField) -> (u64, u64) {
    assert!(z >= 1, "freshman_split needs z >= 1");
    let (mut x, mut y) = (z, 1);
    while x % field.p == 0 {
        x /= field.p;
        y *= field.p;
    }
    (x, y)
}

pub fn is_power_of(n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// F_{p^k} as F_p[t]/(g) with g the lexicographically first monic
/// irreducible of degree k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    modulus: Vec<u64>,
}

pub type ExtElem = Vec<u64>;

impl ExtField {
    pub fn new(base: PrimeField, degree: usize) -> Self {
        assert!(degree >= 1);
        if degree == 1 {
            return Self { base, modulus: vec![0, 1] };
        }
        let p = base.p();
        let total = p.pow(degree as u32);
        for code in 0..total {
            let mut g = Vec::with_capacity(degree + 1);
            let mut c = code;
            for _ in 0..degree {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if is_irreducible(&base, &g) {
                return Self { base, modulus: g };
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn size(&self) -> u64 {
        self.base.p().pow(self.degree() as u32)
    }

    pub fn embed(&self, a: u64) -> ExtElem {
        let mut v = vec![0; self.degree()];
        v[0] = a % self.base.p();
        v
    }

    /// Generator of the polynomial basis, the class of t.
    pub fn gen(&self) -> ExtElem {
        let mut v = vec![0; self.degree()];
        if self.degree() == 1 {
            // F_p itself: any nonzero element will do as a basis
            v[0] = 1;
        } else {
            v[1] = 1;
        }
        v
    }

    /// The element back in F_p if it lies there.
    pub fn to_base(&self, a: &ExtElem) -> Option<u64> {
        if a[1..].iter().all(|&c| c == 0) {
            Some(a[0])
        } else {
            None
        }
    }

    pub fn element(&self, index: u64) -> ExtElem {
        let p = self.base.p();
        let mut c = index;
        (0..self.degree())
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// a^(integer), negative exponents through the inverse.
    pub fn zpow(&self, a: &ExtElem, e: i64) -> Option<ExtElem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|i| self.pow(&i, e.unsigned_abs()))
        }
    }
}

fn poly_mod(base: &PrimeField, a: &mut Vec<u64>, g: &[u64]) {
    let k = g.len() - 1;
    while a.len() > k {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let off = a.len() - k;
            for i in 0..k {
                a[off + i] = base.sub(&a[off + i], &base.mul(&lead, &g[i]));
            }
        }
    }
}

fn is_irreducible(base: &PrimeField, g: &[u64]) -> bool {
    // trial division by all monic polynomials of degree 1..=deg/2
    let n = g.len() - 1;
    let p = base.p();
    for d in 1..=n / 2 {
        for code in 0..p.pow(d as u32) {
            let mut h = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                h.push(c % p);
                c /= p;
            }
            h.push(1);
            let mut r = g.to_vec();
            poly_mod(base, &mut r, &h);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl Field for ExtField {
    type Elem = ExtElem;
    fn zero(&self) -> ExtElem {
        vec![0; self.degree()]
    }
    fn one(&self) -> ExtElem {
        self.embed(1)
    }
    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let k = self.degree();
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = self.base.add(&prod[i + j], &self.base.mul(x, y));
            }
        }
        poly_mod(&self.base, &mut prod, &self.modulus);
        prod.resize(k, 0);
        prod
    }
    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.size() - 2))
        }
    }
    fn is_zero(&self, a: &ExtElem) -> bool {
        a.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        let f3 = PrimeField::new(3).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(field_ratio(-1, 2, &f3).unwrap(), 1);
        assert_eq!(field_ratio(-1, 10, &f7).unwrap(), 2);
        assert!(matches!(field_ratio(1, 3, &f3), Err(Error::DenominatorVanishes { .. })));
    }

    #[test]
    fn split() {
        assert_eq!(freshman_split(12, &PrimeField::new(2).unwrap()), (3, 4));
        assert_eq!(freshman_split(9, &PrimeField::new(3).unwrap()), (1, 9));
        assert_eq!(freshman_split(10, &PrimeField::new(7).unwrap()), (10, 1));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn extension_is_a_field() {
        for (p, k) in [(2, 2), (3, 2), (2, 3), (5, 2)] {
            let f = ExtField::new(PrimeField::new(p).unwrap(), k);
            let mut units = 0;
            for a in f.elements() {
                if let Some(i) = f.inv(&a) {
                    assert_eq!(f.mul(&a, &i), f.one());
                    units += 1;
                }
            }
            assert_eq!(units, f.size() - 1);
        }
    }
}
