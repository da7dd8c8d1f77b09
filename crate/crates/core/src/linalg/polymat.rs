//! Matrices over `k[x]` and `k(x)`: Hermite normal form, determinants,
//! inverses.

use crate::arith::{Poly, RatFunc};

pub type PolyMat = Vec<Vec<Poly>>;
pub type RatMat = Vec<Vec<RatFunc>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("generators do not span a full-rank module")]
pub struct RankDeficient;

fn row_sub_mul(row: &mut [Poly], f: &Poly, piv: &[Poly], from: usize, modulus: Option<&Poly>) {
    for k in from..row.len() {
        if piv[k].is_zero() {
            continue;
        }
        let mut v = &row[k] - &(f * &piv[k]);
        if let Some(m) = modulus {
            v = v.rem(m);
        }
        row[k] = v;
    }
}

/// Upper-triangular Hermite normal form (rows) of the `k[x]`-module
/// generated by `gens`, each of length `n`. Pivots are monic and entries
/// above a pivot have smaller degree.
///
/// If `modulus` is given, the caller asserts that `modulus * k[x]^n` lies in
/// the module; entries are then reduced modulo it throughout.
pub fn hnf(gens: &[Vec<Poly>], n: usize, modulus: Option<&Poly>) -> Result<PolyMat, RankDeficient> {
    let q = match gens.first() {
        Some(r) if !r.is_empty() => r[0].modulus(),
        _ => match modulus {
            Some(m) => m.modulus(),
            None => return Err(RankDeficient),
        },
    };
    let modulus = modulus.filter(|m| !m.is_zero());
    let mut active: Vec<Vec<Poly>> = gens
        .iter()
        .map(|r| match modulus {
            Some(m) => r.iter().map(|e| e.rem(m)).collect::<Vec<_>>(),
            None => r.clone(),
        })
        .filter(|r: &Vec<Poly>| r.iter().any(|e| !e.is_zero()))
        .collect();
    if let Some(m) = modulus {
        if m.is_constant() {
            // the module is everything
            return Ok(identity(q, n));
        }
        for i in 0..n {
            let mut r = vec![Poly::zero(q); n];
            r[i] = m.clone();
            active.push(r);
        }
    }
    let mut h: PolyMat = Vec::with_capacity(n);
    for j in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in active.iter().enumerate() {
                if let Some(d) = r[j].degree() {
                    if best.is_none_or(|b| d < active[b][j].degree().unwrap()) {
                        best = Some(i);
                    }
                }
            }
            let Some(b) = best else { return Err(RankDeficient) };
            let piv = active[b].clone();
            let mut done = true;
            for (i, r) in active.iter_mut().enumerate() {
                if i == b || r[j].is_zero() {
                    continue;
                }
                let (qt, _) = r[j].divrem(&piv[j]);
                row_sub_mul(r, &qt, &piv, j, modulus);
                if !r[j].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut piv = active.swap_remove(b);
                let lc = piv[j].lc();
                if lc != 1 {
                    let inv = crate::arith::ff::inv_mod(lc, q);
                    for e in piv.iter_mut() {
                        *e = e.scale(inv);
                    }
                }
                active.retain(|r| r.iter().any(|e| !e.is_zero()));
                h.push(piv);
                break;
            }
        }
    }
    for j in 0..n {
        let (upper, lower) = h.split_at_mut(j);
        let pj = &lower[0];
        for row in upper.iter_mut() {
            if row[j].degree() >= pj[j].degree() && !row[j].is_zero() {
                let (qt, _) = row[j].divrem(&pj[j]);
                row_sub_mul(row, &qt, pj, j, None);
            }
        }
    }
    Ok(h)
}

pub fn identity(q: u32, n: usize) -> PolyMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one(q) } else { Poly::zero(q) }).collect()).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_poly(m: &PolyMat) -> Poly {
    let n = m.len();
    if n == 0 {
        panic!("determinant of empty matrix needs a modulus");
    }
    let q = m[0][0].modulus();
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = Poly::one(q);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return Poly::zero(q) };
            a.swap(k, s);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Determinant over `k(x)` by Gaussian elimination.
pub fn det_rat(m: &RatMat) -> RatFunc {
    let n = m.len();
    let q = m[0][0].modulus();
    let mut a = m.clone();
    let mut det = RatFunc::one(q);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return RatFunc::zero(q) };
        if p != k {
            a.swap(p, k);
            det = -&det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                let v = &a[i][j] - &(&f * &a[k][j]);
                a[i][j] = v;
            }
        }
    }
    det
}

/// Inverse over `k(x)`, or `None` if singular.
pub fn inverse_rat(m: &RatMat) -> Option<RatMat> {
    let n = m.len();
    let q = m[0][0].modulus();
    let mut a: RatMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { RatFunc::one(q) } else { RatFunc::zero(q) }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let inv = a[k][k].inv();
        for e in a[k].iter_mut() {
            *e = &*e * &inv;
        }
        let pivot = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for j in k..2 * n {
                if !pivot[j].is_zero() {
                    row[j] = &row[j] - &(&f * &pivot[j]);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix.
pub fn vec_mul_rat(v: &[RatFunc], m: &RatMat) -> Vec<RatFunc> {
    let q = m[0][0].modulus();
    let cols = m[0].len();
    (0..cols)
        .map(|j| {
            v.iter().zip(m).fold(RatFunc::zero(q), |acc, (a, r)| if a.is_zero() { acc } else { &acc + &(a * &r[j]) })
        })
        .collect()
}

/// Inverse of an upper-triangular nonsingular polynomial matrix, returned
/// as `(N, d)` with `M^{-1} = N / d` and `d` monic.
pub fn triangular_inverse(m: &PolyMat) -> (PolyMat, Poly) {
    let rat: RatMat = m.iter().map(|r| r.iter().map(|e| RatFunc::from_poly(e.clone())).collect()).collect();
    let inv = inverse_rat(&rat).expect("nonsingular");
    clear_denominators(&inv)
}

/// Write a rational matrix as `N / d` with `d` the monic lcm of denominators.
pub fn clear_denominators(m: &RatMat) -> (PolyMat, Poly) {
    let q = m[0][0].modulus();
    let mut d = Poly::one(q);
    for r in m {
        for e in r {
            d = d.lcm(e.den());
        }
    }
    let n = m.iter().map(|r| r.iter().map(|e| &e.num().clone() * &d.exact_div(e.den())).collect()).collect();
    (n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> Poly {
        Poly::new(5, c.to_vec())
    }

    #[test]
    fn hnf_is_canonical() {
        let gens = vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[1, 1]), p(&[2, 1])], vec![p(&[3]), p(&[0, 0, 1])]];
        let h = hnf(&gens, 2, None).unwrap();
        assert!(h[1][0].is_zero());
        assert!(h[0][0].is_monic() && h[1][1].is_monic());
        assert!(h[0][1].degree() < h[1][1].degree() || h[0][1].is_zero());
        // permuting and adding combinations of generators gives the same form
        let mut g2 = gens.clone();
        g2.reverse();
        let extra: Vec<Poly> = (0..2).map(|k| &gens[0][k] + &(&p(&[0, 2]) * &gens[1][k])).collect();
        g2.push(extra);
        assert_eq!(hnf(&g2, 2, None).unwrap(), h);
    }

    #[test]
    fn hnf_with_modulus_matches_plain() {
        let m = p(&[4, 1]).pow(2);
        let gens = vec![vec![p(&[4, 1]), p(&[1])], vec![m.clone(), p(&[0])], vec![p(&[0]), m.clone()]];
        let a = hnf(&gens, 2, None).unwrap();
        let b = hnf(&gens, 2, Some(&m)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rank_deficiency_detected() {
        let gens = vec![vec![p(&[1]), p(&[2])], vec![p(&[2]), p(&[4])]];
        assert!(hnf(&gens, 2, None).is_err());
    }

    #[test]
    fn bareiss_matches_gauss() {
        let m = vec![vec![p(&[1, 2]), p(&[0, 1]), p(&[3])], vec![p(&[2]), p(&[1, 0, 1]), p(&[1, 1])], vec![p(&[0]), p(&[4]), p(&[2, 3])]];
        let r: RatMat = m.iter().map(|row| row.iter().map(|e| RatFunc::from_poly(e.clone())).collect()).collect();
        assert_eq!(RatFunc::from_poly(det_poly(&m)), det_rat(&r));
        let inv = inverse_rat(&r).unwrap();
        let e0 = vec_mul_rat(&[RatFunc::one(5), RatFunc::zero(5), RatFunc::zero(5)], &inv);
        let back = vec_mul_rat(&e0, &r);
        assert!(back[0].is_one() && back[1].is_zero() && back[2].is_zero());
    }
}
