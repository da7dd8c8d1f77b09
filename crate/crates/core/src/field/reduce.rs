//! Evaluation at the infinite places and reduction of `k[x]`-lattices with
//! respect to them.

use std::collections::BTreeMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::arith::ff::{inv_mod, mul_mod, FiniteField};
use crate::arith::{LaurentSeries, Poly};
use crate::linalg::kmat;

use super::element::FieldElement;
use super::puiseux::{El, Expansion, Series};
use super::FieldError;

/// Embeddings of `F` into `K((w))`, one per infinite place, for elements
/// given in power-basis coordinates.
#[derive(Debug)]
pub struct InfEval {
    pub exp: Expansion,
    n: usize,
    base: i64,
    cap: i64,
    /// `(s-precision, powers[place][j] = rho_P^j)`.
    pows: RwLock<Option<(i64, Arc<Vec<Vec<Series>>>)>>,
}

fn poly_series(k: &crate::arith::ff::ExtField, p: &Poly, e_big: i64, prec: i64) -> Series {
    let coeffs: Vec<El> = p.coeffs().iter().map(|&c| k.embed(c)).collect();
    LaurentSeries::from_poly_in_inverse(k, &coeffs, e_big, prec)
}

impl InfEval {
    pub fn new(exp: Expansion, n: usize) -> Self {
        let c = exp.c;
        let g_est = n as i64 * c;
        let n0 = 2 * (n as i64 * c + 2 * g_est + 4);
        let base = n0 * exp.e_big;
        InfEval { exp, n, base, cap: base << 10, pows: RwLock::new(None) }
    }

    pub fn e_big(&self) -> i64 {
        self.exp.e_big
    }

    pub fn num_places(&self) -> usize {
        self.exp.places.len()
    }

    fn powers(&self, s_prec: i64) -> Arc<Vec<Vec<Series>>> {
        if let Some((p, v)) = self.pows.read().as_ref() {
            if *p >= s_prec {
                return v.clone();
            }
        }
        let k = &self.exp.ext;
        let shift = -self.exp.e_big * self.exp.c;
        let all: Vec<Vec<Series>> = self
            .exp
            .places
            .iter()
            .map(|pl| {
                let rho = pl.root.series(k, s_prec).shift(shift);
                let mut out = vec![LaurentSeries::from_terms(k, &[(0, k.one())], s_prec)];
                for j in 1..self.n {
                    let next = out[j - 1].mul(k, &rho);
                    out.push(next);
                }
                out
            })
            .collect();
        let v = Arc::new(all);
        *self.pows.write() = Some((s_prec, v.clone()));
        v
    }

    /// Expansion of a nonzero element (power coordinates) at every place,
    /// each known past its leading term.
    pub fn eval(&self, a: &FieldElement) -> Result<Vec<Series>, FieldError> {
        assert!(!a.is_zero());
        let k = &self.exp.ext;
        let eb = self.exp.e_big;
        let maxdeg = a.num().iter().filter_map(|p| p.degree()).max().unwrap_or(0) as i64;
        let mut extra = self.base;
        loop {
            let s_prec = eb * (maxdeg + self.exp.c * self.n as i64) + extra;
            let pows = self.powers(s_prec);
            let den_inv = poly_series(k, a.den(), eb, s_prec).inv(k).expect("nonzero denominator");
            let mut out = Vec::with_capacity(pows.len());
            let mut ok = true;
            for pw in pows.iter() {
                let mut acc: Option<Series> = None;
                for (p, rj) in a.num().iter().zip(pw) {
                    if p.is_zero() {
                        continue;
                    }
                    let term = poly_series(k, p, eb, s_prec).mul(k, rj);
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s.add(k, &term),
                    });
                }
                let v = acc.expect("nonzero element").mul(k, &den_inv);
                if v.is_zero_to_precision() {
                    ok = false;
                    break;
                }
                out.push(v);
            }
            if ok {
                return Ok(out);
            }
            extra *= 2;
            if extra > self.cap {
                return Err(FieldError::PrecisionExhausted("element vanishes to working precision".into()));
            }
        }
    }

    /// `ord_w` of `a` at every place.
    pub fn orders(&self, a: &FieldElement) -> Result<Vec<i64>, FieldError> {
        Ok(self.eval(a)?.iter().map(|s| s.lead_exp()).collect())
    }
}

/// Degree and leading data of one lattice vector.
struct Profile {
    nu: i64,
    lead: Vec<u32>,
}

fn profile(ev: &InfEval, s: &[Series], twist: &[i64]) -> Profile {
    let k = &ev.exp.ext;
    let sd: Vec<i64> = s.iter().zip(twist).map(|(x, t)| -x.lead_exp() - t).collect();
    let nu = *sd.iter().max().unwrap();
    let nk = k.degree();
    let mut lead = vec![0u32; nk * s.len()];
    for (i, x) in s.iter().enumerate() {
        if sd[i] == nu {
            lead[i * nk..(i + 1) * nk].copy_from_slice(&k.to_coords(&x.coeffs()[0]));
        }
    }
    Profile { nu, lead }
}

/// Reduce a `k[x]`-basis so that the twisted degree
/// `max_P (-ord_w(b(rho_P)) - twist_P)` is additive over `k[x]`-combinations.
/// `eval` expands an element at every infinite place. Returns the new basis
/// sorted by degree together with the degrees.
pub fn reduce<F>(ev: &InfEval, eval: F, basis: Vec<FieldElement>, twist: &[i64]) -> Result<(Vec<FieldElement>, Vec<i64>), FieldError>
where
    F: Fn(&FieldElement) -> Result<Vec<Series>, FieldError>,
{
    let series = basis.iter().map(&eval).collect::<Result<Vec<_>, _>>()?;
    reduce_with(ev, eval, basis, series, twist)
}

/// As [`reduce`], starting from known expansions of the basis. Expansions
/// of updated vectors are carried along linearly and recomputed only when
/// cancellation exhausts their precision.
pub fn reduce_with<F>(
    ev: &InfEval,
    eval: F,
    mut basis: Vec<FieldElement>,
    mut series: Vec<Vec<Series>>,
    twist: &[i64],
) -> Result<(Vec<FieldElement>, Vec<i64>), FieldError>
where
    F: Fn(&FieldElement) -> Result<Vec<Series>, FieldError>,
{
    let q = basis[0].modulus();
    let k = &ev.exp.ext;
    let eb = ev.e_big();
    let mut prof: Vec<Profile> = series.iter().map(|s| profile(ev, s, twist)).collect();
    'outer: loop {
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, p) in prof.iter().enumerate() {
            groups.entry(p.nu.rem_euclid(eb)).or_default().push(i);
        }
        for idx in groups.values() {
            if idx.len() < 2 {
                continue;
            }
            let rows: Vec<Vec<u32>> = idx.iter().map(|&i| prof[i].lead.clone()).collect();
            let Some(c) = kmat::left_nullspace(&rows, q).into_iter().next() else { continue };
            let (jj, _) = c
                .iter()
                .enumerate()
                .filter(|(_, &ci)| ci != 0)
                .max_by_key(|(t, _)| prof[idx[*t]].nu)
                .unwrap();
            let j = idx[jj];
            let cj_inv = inv_mod(c[jj], q);
            let mut nb = basis[j].clone();
            let mut ns = series[j].clone();
            for (t, &ci) in c.iter().enumerate() {
                if t == jj || ci == 0 {
                    continue;
                }
                let i = idx[t];
                let shift = (prof[j].nu - prof[i].nu) / eb;
                let coef = mul_mod(ci, cj_inv, q);
                nb = nb.add(&basis[i].scale_poly(&Poly::monomial(q, coef, shift as usize)));
                let ce = k.embed(coef);
                for (a, b) in ns.iter_mut().zip(&series[i]) {
                    *a = a.add(k, &b.scale(k, &ce).shift(-eb * shift));
                }
            }
            if ns.iter().any(|s| s.is_zero_to_precision()) {
                ns = eval(&nb)?;
            }
            prof[j] = profile(ev, &ns, twist);
            basis[j] = nb;
            series[j] = ns;
            continue 'outer;
        }
        break;
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| prof[i].nu);
    Ok((order.iter().map(|&i| basis[i].clone()).collect(), order.iter().map(|&i| prof[i].nu).collect()))
}

/// `dim L(m D_x)` for a reduced basis with scaled norms `nu` (norm = nu/E).
pub fn dim_multiple(nu: &[i64], e_big: i64, m: i64) -> i64 {
    nu.iter().map(|&v| (m + (-v).div_euclid(e_big) + 1).max(0)).sum()
}

/// Genus from dimension counts at two consecutive large multiples.
pub fn genus(nu: &[i64], e_big: i64) -> Result<usize, FieldError> {
    let n = nu.len() as i64;
    let maxn = nu.iter().copied().max().unwrap_or(0);
    let m = 2 * (maxn + e_big - 1).div_euclid(e_big) + 2;
    let g1 = m * n + 1 - dim_multiple(nu, e_big, m);
    let g2 = (m + 1) * n + 1 - dim_multiple(nu, e_big, m + 1);
    if g1 != g2 || g1 < 0 {
        return Err(FieldError::Internal(format!("inconsistent genus probes {g1} and {g2}")));
    }
    Ok(g1 as usize)
}
