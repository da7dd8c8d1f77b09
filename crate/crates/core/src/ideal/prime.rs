//! Prime ideals above a prime `p` of `k[x]` and valuations.
//!
//! Primes come from the idempotents of `O_F/pO_F` modulo its radical: the
//! elements `y` with `y^q = y` mod the radical form a split algebra
//! `k^s`, one factor per prime, and its primitive idempotents cut out the
//! maximal ideals.

use std::sync::Arc;

use crate::arith::Poly;
use crate::field::order::{flatten, lift, pow_mod, radical, reduce_mod, residue_basis, Order};
use crate::field::{FieldElement, FunctionField};
use crate::linalg::kmat::{self, Echelon};
use crate::rr::Divisor;

use super::FracIdeal;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: Poly,
    pub ideal: FracIdeal,
    pub e: usize,
    pub f: usize,
    /// `beta / p` has valuation `-1` here and is integral elsewhere.
    beta: Vec<Poly>,
}

fn divisible(a: &[Poly], p: &Poly) -> bool {
    a.iter().all(|c| p.divides(c))
}

fn val_with(o: &Order, p: &Poly, beta: &[Poly], a: &[Poly]) -> i64 {
    let mut a = a.to_vec();
    let mut k = 0;
    loop {
        let b = o.mul(&a, beta);
        if !divisible(&b, p) {
            return k;
        }
        a = b.iter().map(|c| c.exact_div(p)).collect();
        k += 1;
    }
}

impl PrimeIdeal {
    /// Degree of the place: residue degree over `k`.
    pub fn degree(&self) -> usize {
        self.f * self.p.degree().unwrap()
    }

    fn val_integral(&self, ff: &FunctionField, a: &[Poly]) -> i64 {
        let c = a.iter().filter(|x| !x.is_zero()).map(|x| x.valuation(&self.p)).min().expect("nonzero element");
        let pc = self.p.pow(c as u64);
        let a: Vec<Poly> = a.iter().map(|x| x.exact_div(&pc)).collect();
        c as i64 * self.e as i64 + val_with(ff.order_ops(), &self.p, &self.beta, &a)
    }

    /// `v_P(a)` for `a != 0`.
    pub fn valuation(&self, ff: &FunctionField, a: &FieldElement) -> i64 {
        self.val_integral(ff, a.num()) - self.e as i64 * a.den().valuation(&self.p) as i64
    }
}

struct Residue<'a> {
    o: &'a Order,
    p: &'a Poly,
    d: usize,
    rad: Echelon,
}

impl Residue<'_> {
    fn mul(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        reduce_mod(self.o.mul(a, b), self.p)
    }

    fn reduced(&self, a: &[Poly]) -> Vec<u32> {
        let mut v = flatten(a, self.d);
        self.rad.reduce(&mut v);
        v
    }

    fn one(&self) -> Vec<Poly> {
        let q = self.p.modulus();
        let mut v = vec![Poly::zero(q); self.o.dim()];
        v[0] = Poly::one(q);
        v
    }

    /// Split each idempotent along the eigenvalues of `y`.
    fn split(&self, idem: Vec<Vec<Poly>>, y: &[Poly]) -> Vec<Vec<Poly>> {
        let q = self.p.modulus();
        let mut out = Vec::new();
        for eps in idem {
            let z = self.mul(y, &eps);
            let roots = self.min_poly_roots(&z);
            if roots.len() <= 1 {
                out.push(eps);
                continue;
            }
            for &r in &roots {
                let mut acc = eps.clone();
                for &r2 in &roots {
                    if r2 == r {
                        continue;
                    }
                    let c = crate::arith::ff::inv_mod((r + q - r2) % q, q);
                    let mut lin: Vec<Poly> = z.iter().map(|x| x.scale(c)).collect();
                    lin[0] = &lin[0] - &Poly::constant(q, crate::arith::ff::mul_mod(r2, c, q));
                    acc = self.mul(&acc, &lin);
                }
                if self.reduced(&acc).iter().any(|&v| v != 0) {
                    out.push(acc);
                }
            }
        }
        out
    }

    /// Roots of the minimal polynomial of `z` in `A/J`, which splits.
    fn min_poly_roots(&self, z: &[Poly]) -> Vec<u32> {
        let q = self.p.modulus();
        let mut pows = vec![self.reduced(&self.one())];
        let mut cur = self.one();
        let mut span = Echelon::from_vectors(q, pows[0].len(), [pows[0].clone()]);
        loop {
            cur = self.mul(&cur, z);
            let v = self.reduced(&cur);
            pows.push(v.clone());
            if !span.insert(v) {
                break;
            }
        }
        let rel = kmat::left_nullspace(&pows, q);
        let c = rel.iter().find(|c| *c.last().unwrap() != 0).expect("dependency found");
        let mp = Poly::new(q, c.clone());
        mp.factor().factors.iter().filter(|(g, _)| g.degree() == Some(1)).map(|(g, _)| (q - g.coeff(0)) % q).collect()
    }
}

fn decompose(ff: &FunctionField, p: &Poly) -> Vec<PrimeIdeal> {
    let q = ff.q();
    let n = ff.degree();
    let o = ff.order_ops();
    let d = p.degree().expect("prime of positive degree");
    let dim = n * d;
    let rad = Echelon::from_vectors(q, dim, radical(o, p));
    let res = Residue { o, p, d, rad };
    let basis = residue_basis(n, d, q);
    let rows: Vec<Vec<u32>> = basis
        .iter()
        .map(|b| {
            let y = pow_mod(o, b, q as u64, p);
            let diff: Vec<Poly> = y.iter().zip(b).map(|(a, c)| (a - c).rem(p)).collect();
            res.reduced(&diff)
        })
        .collect();
    let bprime = kmat::left_nullspace(&rows, q);
    let mut idem = vec![res.one()];
    for v in &bprime {
        let y: Vec<Poly> = basis.iter().zip(v).filter(|(_, &c)| c != 0).fold(vec![Poly::zero(q); n], |acc, (b, &c)| {
            acc.iter().zip(b).map(|(a, x)| a + &x.scale(c)).collect()
        });
        idem = res.split(idem, &y);
    }
    let mut primes: Vec<PrimeIdeal> = idem
        .iter()
        .map(|eps| {
            let rows: Vec<Vec<u32>> = basis.iter().map(|b| res.reduced(&res.mul(b, eps))).collect();
            let m = kmat::left_nullspace(&rows, q);
            let f = (dim - m.len()) / d;
            let lifted: Vec<Vec<Poly>> = m.iter().map(|c| lift(c, n, d, q)).collect();
            let ideal = FracIdeal::from_module_rows(ff, &lifted, p, Poly::one(q));
            // annihilator of the maximal ideal in O/pO
            let ann_rows: Vec<Vec<u32>> = basis
                .iter()
                .map(|b| lifted.iter().flat_map(|mj| flatten(&res.mul(b, mj), d)).collect())
                .collect();
            let beta = if lifted.is_empty() {
                res.one()
            } else {
                let ann = kmat::left_nullspace(&ann_rows, q);
                lift(ann.first().expect("nonzero annihilator"), n, d, q)
            };
            let mut pv = vec![Poly::zero(q); n];
            pv[0] = p.clone();
            let e = val_with(o, p, &beta, &pv) as usize;
            PrimeIdeal { p: p.clone(), ideal, e, f, beta }
        })
        .collect();
    primes.sort_by(|a, b| (a.f, a.e, &a.ideal).cmp(&(b.f, b.e, &b.ideal)));
    let total: usize = primes.iter().map(|pr| pr.e * pr.f).sum();
    assert_eq!(total, n, "prime decomposition of {p:?} is inconsistent");
    primes
}

/// Primes of `O_F` above the monic irreducible `p`.
pub fn primes_above(ff: &FunctionField, p: &Poly) -> Arc<Vec<PrimeIdeal>> {
    if let Some(v) = ff.prime_cache().read().get(p) {
        return v.clone();
    }
    let v = Arc::new(decompose(ff, p));
    ff.prime_cache().write().insert(p.clone(), v.clone());
    v
}

/// `cO_F = prod P^{v_P(c)}`.
pub fn factor_in_of(ff: &FunctionField, c: &Poly) -> Vec<(PrimeIdeal, i64)> {
    let mut out = Vec::new();
    for (p, m) in c.factor().factors {
        for pr in primes_above(ff, &p).iter() {
            out.push((pr.clone(), (pr.e * m) as i64));
        }
    }
    out
}

pub fn ideal_val(ff: &FunctionField, i: &FracIdeal, pr: &PrimeIdeal) -> i64 {
    let m = i.matrix().iter().map(|r| pr.val_integral(ff, r)).min().unwrap();
    m - pr.e as i64 * i.den().valuation(&pr.p) as i64
}

/// Finite divisor of a fractional ideal.
pub fn divisor_of_ideal(ff: &FunctionField, i: &FracIdeal) -> Divisor {
    let mut d = Divisor::zero(ff);
    for p in i.support_polys() {
        for pr in primes_above(ff, &p).iter() {
            let v = ideal_val(ff, i, pr);
            if v != 0 {
                d.finite.insert(pr.clone(), v);
            }
        }
    }
    d
}
