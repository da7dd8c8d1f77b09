//! Orders of `F` given by bases over the power basis, and enlargement to the
//! maximal order at primes whose square divides the discriminant.

use crate::arith::{Poly, RatFunc};
use crate::linalg::kmat;
use crate::linalg::polymat::{self, det_poly, hnf, inverse_rat, triangular_inverse, vec_mul_rat, RatMat};

/// Multiplication table: `mult[i][j]` holds the coordinates of `b_i b_j`.
pub type MultTable = Vec<Vec<Vec<Poly>>>;

/// A `k[x]`-order with basis rows given in power-basis coordinates.
#[derive(Clone, Debug)]
pub struct Order {
    pub basis: RatMat,
    /// Maps power coordinates to basis coordinates (right multiplication).
    pub inv: RatMat,
    pub mult: MultTable,
}

/// Product in `k(x)[t]/(f)` in power coordinates.
pub fn power_mul(f: &[Poly], a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let n = f.len() - 1;
    let q = f[0].modulus();
    let mut prod = vec![RatFunc::zero(q); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] = &prod[i + j] + &(x * y);
            }
        }
    }
    for k in (n..2 * n - 1).rev() {
        let c = prod[k].clone();
        if c.is_zero() {
            continue;
        }
        for (i, fi) in f.iter().enumerate().take(n) {
            if !fi.is_zero() {
                prod[k - n + i] = &prod[k - n + i] - &(&c * &RatFunc::from_poly(fi.clone()));
            }
        }
    }
    prod.truncate(n);
    prod
}

fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    a.iter().map(|row| vec_mul_rat(row, b)).collect()
}

impl Order {
    pub fn new(f: &[Poly], basis: RatMat) -> Order {
        let n = f.len() - 1;
        let inv = inverse_rat(&basis).expect("order basis must be nonsingular");
        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let prod = power_mul(f, &basis[i], &basis[j]);
                let c: Vec<Poly> = vec_mul_rat(&prod, &inv)
                    .into_iter()
                    .map(|r| {
                        assert!(r.is_poly(), "basis does not span an order");
                        r.num().clone()
                    })
                    .collect();
                mult[i][j] = c.clone();
                mult[j][i] = c;
            }
        }
        Order { basis, inv, mult }
    }

    pub fn power(f: &[Poly]) -> Order {
        let n = f.len() - 1;
        let q = f[0].modulus();
        let id = (0..n).map(|i| (0..n).map(|j| if i == j { RatFunc::one(q) } else { RatFunc::zero(q) }).collect()).collect();
        Order::new(f, id)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn q(&self) -> u32 {
        self.mult[0][0][0].modulus()
    }

    pub fn mul(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        let n = self.dim();
        let mut out = vec![Poly::zero(self.q()); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !m.is_zero() {
                        *o = &*o + &(&xy * m);
                    }
                }
            }
        }
        out
    }

    pub fn traces(&self) -> Vec<Poly> {
        (0..self.dim()).map(|k| (0..self.dim()).fold(Poly::zero(self.q()), |acc, i| &acc + &self.mult[k][i][i])).collect()
    }

    /// `det(Tr(b_i b_j))`.
    pub fn discriminant(&self) -> Poly {
        let n = self.dim();
        let tr = self.traces();
        let m: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.mult[i][j].iter().zip(&tr).fold(Poly::zero(self.q()), |acc, (a, t)| &acc + &(a * t)))
                    .collect()
            })
            .collect();
        det_poly(&m)
    }
}

/// Flatten `n` residues mod `p` (degree `d`) into `k^{nd}`.
pub(crate) fn flatten(v: &[Poly], d: usize) -> Vec<u32> {
    let mut out = vec![0u32; v.len() * d];
    for (i, p) in v.iter().enumerate() {
        for (a, &c) in p.coeffs().iter().enumerate() {
            out[i * d + a] = c;
        }
    }
    out
}

pub(crate) fn lift(c: &[u32], n: usize, d: usize, q: u32) -> Vec<Poly> {
    (0..n).map(|i| Poly::new(q, c[i * d..(i + 1) * d].to_vec())).collect()
}

pub(crate) fn reduce_mod(v: Vec<Poly>, p: &Poly) -> Vec<Poly> {
    v.into_iter().map(|x| x.rem(p)).collect()
}

/// Basis of `O/pO` over `k`: `x^a b_i`, index `i*d + a`.
pub(crate) fn residue_basis(n: usize, d: usize, q: u32) -> Vec<Vec<Poly>> {
    let mut out = Vec::with_capacity(n * d);
    for i in 0..n {
        for a in 0..d {
            let mut v = vec![Poly::zero(q); n];
            v[i] = Poly::monomial(q, 1, a);
            out.push(v);
        }
    }
    out
}

pub(crate) fn pow_mod(o: &Order, y: &[Poly], e: u64, p: &Poly) -> Vec<Poly> {
    let q = p.modulus();
    let mut acc: Option<Vec<Poly>> = None;
    let mut base = y.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => reduce_mod(o.mul(&a, &base), p),
            });
        }
        e >>= 1;
        if e > 0 {
            base = reduce_mod(o.mul(&base, &base), p);
        }
    }
    acc.unwrap_or_else(|| {
        let mut one = vec![Poly::zero(q); o.dim()];
        one[0] = Poly::one(q);
        one
    })
}

/// Vectors in `k^{nd}` spanning the nilradical of `O/pO`.
pub fn radical(o: &Order, p: &Poly) -> Vec<Vec<u32>> {
    let q = p.modulus();
    let n = o.dim();
    let d = p.degree().expect("nonzero prime");
    let dim = n * d;
    let mut j = 0;
    let mut qj: u64 = 1;
    while qj < dim as u64 {
        qj *= q as u64;
        j += 1;
    }
    let rows: Vec<Vec<u32>> = residue_basis(n, d, q)
        .into_iter()
        .map(|b| {
            let mut y = b;
            for _ in 0..j {
                y = pow_mod(o, &y, q as u64, p);
            }
            flatten(&y, d)
        })
        .collect();
    kmat::left_nullspace(&rows, q)
}

/// One enlargement step at `p`; `None` if `o` is already `p`-maximal.
fn enlarge(f: &[Poly], o: &Order, p: &Poly) -> Option<Order> {
    let q = p.modulus();
    let n = o.dim();
    let d = p.degree().unwrap();
    let rad = radical(o, p);
    if rad.is_empty() {
        return None;
    }
    let gens: Vec<Vec<Poly>> = rad.iter().map(|c| lift(c, n, d, q)).collect();
    let r = hnf(&gens, n, Some(p)).expect("radical contains pO");
    let (rinv, rden) = triangular_inverse(&r);
    let rows: Vec<Vec<u32>> = residue_basis(n, d, q)
        .into_iter()
        .map(|b| {
            let mut row = Vec::with_capacity(n * n * d);
            for rj in &r {
                let prod = o.mul(&b, rj);
                let coords: Vec<Poly> = (0..n)
                    .map(|c| {
                        let s = prod.iter().zip(&rinv).fold(Poly::zero(q), |acc, (x, ri)| &acc + &(x * &ri[c]));
                        s.exact_div(&rden).rem(p)
                    })
                    .collect();
                row.extend(flatten(&coords, d));
            }
            row
        })
        .collect();
    let u = kmat::left_nullspace(&rows, q);
    if u.is_empty() {
        return None;
    }
    let gens: Vec<Vec<Poly>> = u.iter().map(|c| lift(c, n, d, q)).collect();
    let h = hnf(&gens, n, Some(p)).expect("contains pO");
    let pinv = RatFunc::new(Poly::one(q), p.clone());
    let hr: RatMat = h.iter().map(|row| row.iter().map(|e| &RatFunc::from_poly(e.clone()) * &pinv).collect()).collect();
    Some(Order::new(f, mat_mul(&hr, &o.basis)))
}

/// The maximal order, starting from the power basis.
pub fn maximal_order(f: &[Poly]) -> (Order, Poly) {
    let mut o = Order::power(f);
    let disc = o.discriminant();
    let fac = disc.factor();
    for (p, e) in fac.factors {
        if e < 2 {
            continue;
        }
        while let Some(next) = enlarge(f, &o, &p) {
            o = next;
        }
    }
    let disc_o = o.discriminant();
    (o, disc_o)
}

/// Rows of `m` as polynomials, or `None` if some entry is not integral.
pub fn integral_rows(m: &RatMat) -> Option<polymat::PolyMat> {
    m.iter().map(|r| r.iter().map(|e| e.is_poly().then(|| e.num().clone())).collect()).collect()
}
