//! Finite fields: the prime field `F_q` and extensions `F_{q^N}` used to
//! carry the coefficients of Puiseux expansions at infinite places.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

/// Arithmetic in a finite field, with elements held outside the context.
pub trait FiniteField: Clone + Debug + Send + Sync {
    type El: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u32;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn order(&self) -> u128 {
        (self.characteristic() as u128).pow(self.degree() as u32)
    }

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_int(&self, v: i64) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// Panics on zero.
    fn inv(&self, a: &Self::El) -> Self::El;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::El;
    /// Coordinates over the prime field (length `degree()`).
    fn to_coords(&self, a: &Self::El) -> Vec<u32>;
    fn from_coords(&self, c: &[u32]) -> Self::El;

    fn is_one(&self, a: &Self::El) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b))
    }

    fn pow(&self, a: &Self::El, mut e: u128) -> Self::El {
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

    /// `a^p`, the absolute Frobenius.
    fn frobenius(&self, a: &Self::El) -> Self::El {
        self.pow(a, self.characteristic() as u128)
    }

    /// The unique `b` with `b^p = a`.
    fn pth_root(&self, a: &Self::El) -> Self::El {
        let p = self.characteristic() as u128;
        let d = self.degree() as u32;
        if d == 1 {
            return a.clone();
        }
        self.pow(a, p.pow(d - 1))
    }

    /// Enumerate all elements (only sensible for tiny fields).
    fn elements(&self) -> Vec<Self::El> {
        let p = self.characteristic();
        let d = self.degree();
        let total = self.order() as usize;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0u32; d];
        for _ in 0..total {
            out.push(self.from_coords(&digits));
            for x in digits.iter_mut() {
                *x += 1;
                if *x == p {
                    *x = 0;
                } else {
                    break;
                }
            }
        }
        out
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    pub p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        PrimeField { p }
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

impl FiniteField for PrimeField {
    type El = u32;

    fn characteristic(&self) -> u32 {
        self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_int(&self, v: i64) -> u32 {
        self.reduce(v)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u32) -> u32 {
        inv_mod(*a, self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn to_coords(&self, a: &u32) -> Vec<u32> {
        vec![*a]
    }
    fn from_coords(&self, c: &[u32]) -> u32 {
        c.first().copied().unwrap_or(0) % self.p
    }
}

/// `F_{p^N} = F_p[z]/(m(z))` with `m` monic irreducible of degree `N`.
/// Elements are coefficient vectors of length exactly `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    pub base: PrimeField,
    pub n: usize,
    /// Low-to-high coefficients of the monic modulus, length `n + 1`.
    pub modulus: Vec<u32>,
}

impl ExtField {
    /// Build `F_{p^n}` from the lexicographically first irreducible monic
    /// polynomial of degree `n`.
    pub fn new(p: u32, n: usize) -> Self {
        let base = PrimeField::new(p);
        if n == 1 {
            return ExtField { base, n, modulus: vec![0, 1] };
        }
        let modulus = super::upoly::first_irreducible(&base, n);
        ExtField { base, n, modulus }
    }

    /// Image of a prime-field element.
    pub fn embed(&self, a: u32) -> Vec<u32> {
        let mut v = vec![0; self.n];
        v[0] = a % self.base.p;
        v
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Vec<u32> {
        let order = self.order() - 1;
        let factors = small_prime_factors(order);
        let p = self.base.p;
        let mut digits = vec![0u32; self.n];
        loop {
            for x in digits.iter_mut() {
                *x += 1;
                if *x == p {
                    *x = 0;
                } else {
                    break;
                }
            }
            let cand = self.from_coords(&digits);
            if self.is_zero(&cand) {
                break;
            }
            if factors.iter().all(|&l| !self.is_one(&self.pow(&cand, order / l))) {
                return cand;
            }
        }
        unreachable!("finite field without a primitive element")
    }
}

pub(crate) fn small_prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FiniteField for ExtField {
    type El = Vec<u32>;

    fn characteristic(&self) -> u32 {
        self.base.p
    }
    fn degree(&self) -> usize {
        self.n
    }
    fn zero(&self) -> Vec<u32> {
        vec![0; self.n]
    }
    fn one(&self) -> Vec<u32> {
        self.embed(1)
    }
    fn from_int(&self, v: i64) -> Vec<u32> {
        self.embed(self.base.reduce(v))
    }
    fn is_zero(&self, a: &Vec<u32>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let n = self.n;
        if n == 1 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let p = self.base.p as u64;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
            if i % 8 == 7 {
                for c in prod.iter_mut() {
                    *c %= p;
                }
            }
        }
        let mut prod: Vec<u32> = prod.into_iter().map(|c| (c % p) as u32).collect();
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &m) in self.modulus[..n].iter().enumerate() {
                let t = mul_mod(c, m, self.base.p);
                prod[k - n + j] = self.base.sub(&prod[k - n + j], &t);
            }
        }
        prod.truncate(n);
        prod
    }
    fn inv(&self, a: &Vec<u32>) -> Vec<u32> {
        assert!(!self.is_zero(a), "inverse of zero in F_(p^n)");
        if self.n == 1 {
            return vec![self.base.inv(&a[0])];
        }
        // a^(q^n - 2)
        self.pow(a, self.order() - 2)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        (0..self.n).map(|_| rng.gen_range(0..self.base.p)).collect()
    }
    fn to_coords(&self, a: &Vec<u32>) -> Vec<u32> {
        a.clone()
    }
    fn from_coords(&self, c: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.n];
        for (i, &x) in c.iter().take(self.n).enumerate() {
            v[i] = x % self.base.p;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms<F: FiniteField>(f: &F) {
        let els = f.elements();
        for a in &els {
            assert_eq!(f.add(a, &f.zero()), *a);
            assert_eq!(f.mul(a, &f.one()), *a);
            assert!(f.is_zero(&f.add(a, &f.neg(a))));
            if !f.is_zero(a) {
                assert!(f.is_one(&f.mul(a, &f.inv(a))));
            }
            for b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in &els {
                    assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                    assert_eq!(f.mul(a, &f.mul(b, c)), f.mul(&f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn prime_field_axioms_exhaustive() {
        for p in [2, 3, 5, 7] {
            check_axioms(&PrimeField::new(p));
        }
    }

    #[test]
    fn extension_field_axioms() {
        check_axioms(&ExtField::new(2, 3));
        check_axioms(&ExtField::new(3, 2));
    }

    #[test]
    fn primitive_element_generates() {
        let f = ExtField::new(5, 2);
        let g = f.primitive_element();
        let mut seen = std::collections::HashSet::new();
        let mut x = f.one();
        for _ in 0..24 {
            seen.insert(x.clone());
            x = f.mul(&x, &g);
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let f = ExtField::new(3, 3);
        for a in f.elements() {
            assert_eq!(f.frobenius(&f.pth_root(&a)), a);
        }
    }
}
