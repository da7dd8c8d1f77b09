//! Polynomials in `k[x]` over a prime field `k = F_q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ff::{inv_mod, mul_mod, PrimeField};
use super::upoly;

/// Dense polynomial over `F_q`, lowest coefficient first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    q: u32,
    c: Vec<u32>,
}

/// `p = unit * prod f_i^{m_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, usize)>,
}

impl Poly {
    pub fn new(q: u32, mut c: Vec<u32>) -> Self {
        for x in c.iter_mut() {
            *x %= q;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { q, c }
    }

    pub fn from_i64(q: u32, c: &[i64]) -> Self {
        Poly::new(q, c.iter().map(|&v| v.rem_euclid(q as i64) as u32).collect())
    }

    pub fn zero(q: u32) -> Self {
        Poly { q, c: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Poly::constant(q, 1)
    }

    pub fn constant(q: u32, v: u32) -> Self {
        Poly::new(q, vec![v])
    }

    pub fn x(q: u32) -> Self {
        Poly::new(q, vec![0, 1])
    }

    /// `c * x^k`
    pub fn monomial(q: u32, c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::new(q, v)
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.q)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree as an integer, with the zero polynomial mapped to `i64::MIN`.
    pub fn deg_i64(&self) -> i64 {
        self.degree().map(|d| d as i64).unwrap_or(i64::MIN)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn scale(&self, s: u32) -> Poly {
        let s = s % self.q;
        if s == 0 {
            return Poly::zero(self.q);
        }
        Poly { q: self.q, c: self.c.iter().map(|&x| mul_mod(x, s, self.q)).collect() }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lc(), self.q))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { q: self.q, c }
    }

    pub fn divrem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let q = self.q;
        if self.c.len() < other.c.len() {
            return (Poly::zero(q), self.clone());
        }
        let mut r = self.c.clone();
        let db = other.c.len() - 1;
        let inv_lc = inv_mod(other.lc(), q);
        let mut quo = vec![0u32; self.c.len() - db];
        for k in (0..quo.len()).rev() {
            let coef = mul_mod(r[k + db], inv_lc, q);
            if coef == 0 {
                continue;
            }
            for (j, &bj) in other.c.iter().enumerate() {
                let t = mul_mod(coef, bj, q);
                let v = r[k + j];
                r[k + j] = if v >= t { v - t } else { v + q - t };
            }
            quo[k] = coef;
        }
        (Poly::new(q, quo), Poly::new(q, r))
    }

    pub fn rem(&self, other: &Poly) -> Poly {
        self.divrem(other).1
    }

    /// Exact division; panics if there is a remainder.
    pub fn exact_div(&self, other: &Poly) -> Poly {
        let (quo, r) = self.divrem(other);
        assert!(r.is_zero(), "inexact polynomial division");
        quo
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let q = self.q;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(q), Poly::zero(q));
        let (mut t0, mut t1) = (Poly::zero(q), Poly::one(q));
        while !r1.is_zero() {
            let (quo, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = &s0 - &(&quo * &s1);
            s0 = s1;
            s1 = s;
            let t = &t0 - &(&quo * &t1);
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lc(), q);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.q);
        }
        (self * &other.exact_div(&self.gcd(other))).monic()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powmod(&self, e: u128, m: &Poly) -> Poly {
        Poly::new(self.q, upoly::powmod(&self.field(), &self.c, e, &m.c))
    }

    pub fn eval(&self, x: u32) -> u32 {
        upoly::eval(&self.field(), &self.c, &(x % self.q))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.q, upoly::derivative(&self.field(), &self.c))
    }

    /// Largest `k` with `p^k | self` (self nonzero, p nonconstant).
    pub fn valuation(&self, p: &Poly) -> u32 {
        assert!(!self.is_zero());
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (quo, r) = cur.divrem(p);
            if !r.is_zero() {
                return k;
            }
            k += 1;
            cur = quo;
        }
    }

    pub fn is_irreducible(&self) -> bool {
        upoly::is_irreducible(&self.field(), &self.c)
    }

    /// Factor into monic irreducibles. Panics on the zero polynomial; use
    /// [`Poly::try_factor`] for a checked variant.
    pub fn factor(&self) -> Factorization {
        self.try_factor().expect("factor of the zero polynomial")
    }

    pub fn try_factor(&self) -> Option<Factorization> {
        if self.is_zero() {
            return None;
        }
        let unit = self.lc();
        let factors = upoly::factor(&self.field(), &self.monic().c)
            .into_iter()
            .map(|(g, m)| (Poly::new(self.q, g), m))
            .collect();
        Some(Factorization { unit, factors })
    }

    /// Iterate over all monic polynomials of exact degree `d`.
    pub fn monic_of_degree(q: u32, d: usize) -> impl Iterator<Item = Poly> {
        let total = (q as u64).pow(d as u32);
        (0..total).map(move |mut code| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((code % q as u64) as u32);
                code /= q as u64;
            }
            c.push(1);
            Poly::new(q, c)
        })
    }

    /// Iterate over all polynomials of degree at most `d` (including zero).
    pub fn all_of_degree_at_most(q: u32, d: usize) -> impl Iterator<Item = Poly> {
        let total = (q as u64).pow(d as u32 + 1);
        (0..total).map(move |mut code| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                c.push((code % q as u64) as u32);
                code /= q as u64;
            }
            Poly::new(q, c)
        })
    }

    /// All monic irreducible polynomials of degree `d`.
    pub fn irreducibles_of_degree(q: u32, d: usize) -> Vec<Poly> {
        Poly::monic_of_degree(q, d).filter(|p| p.is_irreducible()).collect()
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by degree, then by coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
            .then_with(|| self.q.cmp(&other.q))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let q = self.q;
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let s = self.coeff(i) + rhs.coeff(i);
            c.push(if s >= q { s - q } else { s });
        }
        Poly::new(q, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let q = self.q;
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (self.coeff(i), rhs.coeff(i));
            c.push(if a >= b { a - b } else { a + q - b });
        }
        Poly::new(q, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { q: self.q, c: self.c.iter().map(|&x| if x == 0 { 0 } else { self.q - x }).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.q);
        }
        let q = self.q as u64;
        let mut acc = vec![0u64; self.c.len() + rhs.c.len() - 1];
        // q < 2^31 and at most 2^(64-62) products between reductions for
        // large q; reduce each row for safety when q is large.
        let big = q > 1 << 16;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
                if big {
                    acc[i + j] %= q;
                }
            }
            if !big && i % 4096 == 4095 {
                for v in acc.iter_mut() {
                    *v %= q;
                }
            }
        }
        Poly::new(self.q, acc.into_iter().map(|v| (v % q) as u32).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.c, "x")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn write_poly(f: &mut impl fmt::Write, c: &[u32], var: &str) -> fmt::Result {
    if c.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (i, a) {
            (0, _) => write!(f, "{a}")?,
            (1, 1) => write!(f, "{var}")?,
            (1, _) => write!(f, "{a}*{var}")?,
            (_, 1) => write!(f, "{var}^{i}")?,
            _ => write!(f, "{a}*{var}^{i}")?,
        }
    }
    Ok(())
}
