//! Brute-force references: enumerate `sum lambda_i omega_i` over a box of
//! coefficient degrees and test each element directly.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::{FiniteField, Poly, PrimeField};
use crate::field::{FieldElement, FieldError, FunctionField};
use crate::ideal::primes_above;
use crate::rr::{Divisor, Place};
use crate::solvers::{dedup_associates, CoefficientBox, Limits, SolveError, SolverBounds};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("c must be nonzero")]
    ZeroC,
    #[error(transparent)]
    Search(#[from] SolveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `ceil(Theta) + 2`.
pub fn default_cap(bounds: &SolverBounds) -> i64 {
    bounds.big_theta.ceil().to_integer() + 2
}

/// All non-associate `alpha` with `deg lambda_i <= cap` and
/// `Norm(alpha) in c k^*`.
pub fn brute_solve(ff: &FunctionField, c: &Poly, cap: i64, limits: &Limits) -> Result<Vec<FieldElement>, OracleError> {
    if c.is_zero() {
        return Err(OracleError::ZeroC);
    }
    let target = c.monic();
    let pts = PointNorms::new(ff, &target);
    let bx = CoefficientBox::new(ff.q(), &vec![cap; ff.degree()]);
    let hits = bx.filter(limits, |lam| {
        if !pts.consistent(lam) {
            return false;
        }
        let nm = ff.norm(&FieldElement::integral(lam.to_vec()));
        nm.is_poly() && nm.num().monic() == target
    })?;
    let found = hits.iter().map(|&i| FieldElement::integral(bx.element(i))).collect();
    Ok(dedup_associates(ff, found))
}

/// `Norm(alpha)(x0)` at every `x0 in F_q`, compared against `c(x0)`. A
/// cheap necessary condition for `Norm(alpha) in c k^*`.
struct PointNorms {
    f: PrimeField,
    /// `mats[x0][i]`: multiplication by `omega_i`, evaluated at `x0`.
    mats: Vec<Vec<Vec<Vec<u32>>>>,
    target: Vec<u32>,
}

impl PointNorms {
    fn new(ff: &FunctionField, c: &Poly) -> Self {
        let m: Vec<Vec<Vec<Poly>>> = (0..ff.degree()).map(|i| ff.mul_matrix_num(&ff.basis_element(i))).collect();
        let mats = (0..ff.q())
            .map(|x0| m.iter().map(|mi| mi.iter().map(|row| row.iter().map(|p| p.eval(x0)).collect()).collect()).collect())
            .collect();
        PointNorms { f: PrimeField::new(ff.q()), mats, target: (0..ff.q()).map(|x0| c.eval(x0)).collect() }
    }

    fn det(&self, mut m: Vec<Vec<u32>>) -> u32 {
        let f = &self.f;
        let n = m.len();
        let mut d: u32 = 1;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| m[r][k] != 0) else { return 0 };
            if p != k {
                m.swap(p, k);
                d = f.reduce(-(d as i64));
            }
            d = f.reduce(d as i64 * m[k][k] as i64);
            let inv = f.inv(&m[k][k]);
            for r in k + 1..n {
                let t = f.reduce(m[r][k] as i64 * inv as i64);
                if t != 0 {
                    for j in k..n {
                        m[r][j] = f.reduce(m[r][j] as i64 - t as i64 * m[k][j] as i64);
                    }
                }
            }
        }
        d
    }

    /// Whether the values are one nonzero constant times those of `c`.
    fn consistent(&self, lam: &[Poly]) -> bool {
        let mut ratio = None;
        for (x0, mats) in self.mats.iter().enumerate() {
            let n = mats[0].len();
            let mut m = vec![vec![0u32; n]; n];
            for (l, mi) in lam.iter().zip(mats) {
                let v = l.eval(x0 as u32) as i64;
                if v != 0 {
                    for (row, src) in m.iter_mut().zip(mi) {
                        for (x, y) in row.iter_mut().zip(src) {
                            *x = self.f.reduce(*x as i64 + v * *y as i64);
                        }
                    }
                }
            }
            let d = self.det(m);
            let t = self.target[x0];
            if (d == 0) != (t == 0) {
                return false;
            }
            if t != 0 {
                let r = self.f.reduce(d as i64 * self.f.inv(&t) as i64);
                if *ratio.get_or_insert(r) != r {
                    return false;
                }
            }
        }
        true
    }
}

/// A polynomial `h` with `v_P(h) >= D_P` at every finite place.
fn clearing_poly(ff: &FunctionField, d: &Divisor) -> Poly {
    let mut h = Poly::one(ff.q());
    for (p, &n) in &d.finite {
        if n > 0 {
            let k = (n as usize).div_ceil(p.e);
            let have = h.valuation(&p.p) as usize;
            if k > have {
                h = &h * &p.p.pow((k - have) as u64);
            }
        }
    }
    h
}

/// Whether `div(b / h) >= -D`, for integral `b`.
fn dominates(ff: &FunctionField, b: &FieldElement, h: &Poly, polys: &BTreeSet<Poly>, d: &Divisor) -> Result<bool, FieldError> {
    for p in polys {
        for pr in primes_above(ff, p).iter() {
            let need = pr.e as i64 * h.valuation(p) as i64 - d.finite.get(pr).copied().unwrap_or(0);
            if pr.valuation(ff, b) < need {
                return Ok(false);
            }
        }
    }
    let vals = ff.inf_valuations(b)?;
    let dh = h.deg_i64();
    for (i, pl) in ff.infinite_places().iter().enumerate() {
        let need = -(pl.e as i64) * dh - Place::Infinite(i).coefficient(d);
        if vals[i] < need {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Row echelon basis over `F_q` of the given digit vectors.
fn echelon(q: u32, rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let f = PrimeField::new(q);
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    for mut r in rows {
        for (piv, b) in &basis {
            let c = r[*piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(b) {
                    *x = f.reduce(*x as i64 - c as i64 * *y as i64);
                }
            }
        }
        if let Some(piv) = r.iter().position(|&x| x != 0) {
            let inv = f.inv(&r[piv]);
            for x in r.iter_mut() {
                *x = f.reduce(*x as i64 * inv as i64);
            }
            for (_, b) in basis.iter_mut() {
                let c = b[piv];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&r) {
                        *x = f.reduce(*x as i64 - c as i64 * *y as i64);
                    }
                }
            }
            basis.push((piv, r));
        }
    }
    basis.into_iter().map(|(_, r)| r).collect()
}

fn digits_of(lam: &[Poly], cap: i64) -> Vec<u32> {
    lam.iter().flat_map(|p| (0..=cap as usize).map(move |k| p.coeff(k))).collect()
}

fn from_digits(q: u32, d: &[u32], cap: i64) -> Vec<Poly> {
    d.chunks(cap as usize + 1).map(|c| Poly::new(q, c.to_vec())).collect()
}

/// A `k`-basis of the elements `b / h` of `L(D)` with `b = sum lambda_i
/// omega_i`, `deg lambda_i <= cap`, where `h` clears the positive finite
/// part of `D`.
pub fn brute_rr(ff: &FunctionField, d: &Divisor, cap: i64, limits: &Limits) -> Result<Vec<FieldElement>, OracleError> {
    let h = clearing_poly(ff, d);
    let mut polys: BTreeSet<Poly> = h.factor().factors.into_iter().map(|(p, _)| p).collect();
    polys.extend(d.finite.keys().map(|p| p.p.clone()));
    let bx = CoefficientBox::new(ff.q(), &vec![cap; ff.degree()]);
    let hits = bx.filter(limits, |lam| {
        dominates(ff, &FieldElement::integral(lam.to_vec()), &h, &polys, d).unwrap_or(false)
    })?;
    let rows = hits.iter().map(|&i| digits_of(&bx.element(i), cap)).collect();
    Ok(echelon(ff.q(), rows)
        .into_iter()
        .map(|r| FieldElement::new(from_digits(ff.q(), &r, cap), h.clone()))
        .collect())
}

/// `alpha` with `div(alpha) = D`, searched among the elements of `L(-D)`
/// that `brute_rr` enumerates.
pub fn brute_principal(
    ff: &FunctionField,
    d: &Divisor,
    cap: i64,
    limits: &Limits,
) -> Result<Option<FieldElement>, OracleError> {
    if d.degree(ff) != 0 {
        return Ok(None);
    }
    Ok(brute_rr(ff, &d.neg(), cap, limits)?.into_iter().next())
}

#[cfg(test)]
mod tests;
