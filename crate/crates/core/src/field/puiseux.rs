//! Places above `x = infinity` via Newton polygons over `k((1/x))`.
//!
//! With `C = C_f` the substitution `t = x^C s` turns `f` into a monic `g(s)`
//! whose coefficients are polynomials in `u = 1/x`. All roots of `g` are
//! expanded as power series in `w` with `w^E = u`, over `K = F_{q^N}`; `E`
//! and `N` grow until every Newton polygon slope is integral and every edge
//! polynomial splits. Once a root is isolated its tail is finished by
//! Newton iteration on an exact polynomial.

use std::sync::Arc;

use parking_lot::RwLock;

use crate::arith::ff::{ExtField, FiniteField};
use crate::arith::upoly;
use crate::arith::{LaurentSeries, Poly};

use super::FieldError;

pub type El = Vec<u32>;
pub type Series = LaurentSeries<El>;
/// Dense polynomial in `w`, lowest exponent first.
type WPoly = Vec<El>;

const MAX_E: i64 = 4096;
const MAX_N: usize = 48;

/// One root of `g`: `s = sum(prefix) + w^shift * s'` where `s'` is the
/// unique root of positive valuation of `tail_eq`.
#[derive(Debug)]
pub struct RootExpansion {
    prefix: Vec<(i64, El)>,
    shift: i64,
    tail_eq: Vec<WPoly>,
    tail: RwLock<Option<Series>>,
}

#[derive(Debug, Clone)]
pub struct PlaceData {
    pub e: usize,
    pub f: usize,
    pub root: Arc<RootExpansion>,
}

#[derive(Debug)]
pub struct Expansion {
    /// `w^E = 1/x`.
    pub e_big: i64,
    pub ext: ExtField,
    /// `t = w^{-E C} s`.
    pub c: i64,
    pub places: Vec<PlaceData>,
}

enum Restart {
    Ramify(i64),
    Extend(usize),
}

fn wtrim(k: &ExtField, a: &mut WPoly) {
    while a.last().is_some_and(|c| k.is_zero(c)) {
        a.pop();
    }
}

fn word(k: &ExtField, a: &WPoly) -> Option<i64> {
    a.iter().position(|c| !k.is_zero(c)).map(|i| i as i64)
}

fn multiplicative_order(q: u64, e: u64) -> usize {
    if e == 1 {
        return 1;
    }
    let mut acc = q % e;
    let mut k = 1;
    while acc != 1 {
        acc = acc * q % e;
        k += 1;
    }
    k
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

/// Expand `g(s) = x^{-nC} f(x^C s)` as polynomials in `w`.
fn initial_equation(k: &ExtField, f: &[Poly], c: i64, e_big: i64) -> Vec<WPoly> {
    let n = f.len() - 1;
    f.iter()
        .enumerate()
        .map(|(i, a)| {
            let mut out: WPoly = Vec::new();
            for (j, &co) in a.coeffs().iter().enumerate() {
                if co == 0 {
                    continue;
                }
                let ex = (e_big * (c * (n - i) as i64 - j as i64)) as usize;
                if out.len() <= ex {
                    out.resize(ex + 1, k.zero());
                }
                out[ex] = k.add(&out[ex], &k.embed(co));
            }
            out
        })
        .collect()
}

/// `w^{-lambda} G(w^m (c + s))`.
fn substitute(k: &ExtField, g: &[WPoly], m: i64, c: &El, lambda: i64) -> Vec<WPoly> {
    let deg = g.len() - 1;
    let mut acc: Vec<WPoly> = vec![Vec::new()];
    for i in (0..=deg).rev() {
        // acc *= (c + s)
        let mut next: Vec<WPoly> = vec![Vec::new(); acc.len() + 1];
        for (j, a) in acc.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            let scaled: WPoly = a.iter().map(|x| k.mul(x, c)).collect();
            next[j] = wadd(k, &next[j], &scaled);
            next[j + 1] = wadd(k, &next[j + 1], a);
        }
        if i == deg {
            next = vec![Vec::new()];
        }
        // + G_i w^{m i}
        let mut gi: WPoly = vec![k.zero(); (m as usize) * i];
        gi.extend(g[i].iter().cloned());
        wtrim(k, &mut gi);
        next[0] = wadd(k, &next[0], &gi);
        acc = next;
    }
    acc.resize(deg + 1, Vec::new());
    for a in acc.iter_mut() {
        if a.is_empty() {
            continue;
        }
        assert!(a.iter().take(lambda as usize).all(|x| k.is_zero(x)), "inexact division in Newton step");
        a.drain(..(lambda as usize).min(a.len()));
        wtrim(k, a);
    }
    acc
}

fn wadd(k: &ExtField, a: &WPoly, b: &WPoly) -> WPoly {
    let n = a.len().max(b.len());
    let z = k.zero();
    let mut out: WPoly = (0..n).map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    wtrim(k, &mut out);
    out
}

/// Lower convex hull of the finite points, as consecutive vertex indices.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // remove b if it lies on or above segment a-p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

struct Collector<'a> {
    k: &'a ExtField,
    roots: Vec<RootExpansion>,
}

impl Collector<'_> {
    fn recurse(&mut self, g: Vec<WPoly>, mu: usize, prefix: Vec<(i64, El)>, shift: i64, top: bool) -> Result<(), Restart> {
        let k = self.k;
        if mu == 1 && !top {
            self.roots.push(RootExpansion { prefix, shift, tail_eq: g, tail: RwLock::new(None) });
            return Ok(());
        }
        let pts: Vec<(i64, i64)> =
            (0..=mu).filter_map(|i| g.get(i).and_then(|gi| word(k, gi)).map(|v| (i as i64, v))).collect();
        let i0 = pts[0].0;
        if i0 > 0 {
            // s = 0 is an exact root; separable input forces multiplicity one
            debug_assert_eq!(i0, 1);
            self.roots.push(RootExpansion { prefix: prefix.clone(), shift, tail_eq: g.clone(), tail: RwLock::new(None) });
        }
        let hull = lower_hull(&pts);
        for win in hull.windows(2) {
            let (i1, v1) = win[0];
            let (i2, v2) = win[1];
            let num = v1 - v2;
            let den = i2 - i1;
            if num % den != 0 {
                let g = num_integer::gcd(num, den);
                return Err(Restart::Ramify(den / g));
            }
            let m = num / den;
            let lambda = v1 + m * i1;
            let mut phi: Vec<El> = vec![k.zero(); (den + 1) as usize];
            for i in i1..=i2 {
                let gi = &g[i as usize];
                if let Some(v) = word(k, gi) {
                    if v + m * i == lambda {
                        phi[(i - i1) as usize] = gi[v as usize].clone();
                    }
                }
            }
            let roots = upoly::roots(k, &phi);
            let found: usize = roots.iter().map(|r| r.1).sum();
            if found < den as usize {
                let mut d = 1;
                for deg in upoly::factor_degrees(k, &upoly::monic(k, &phi)) {
                    d = lcm(d, deg);
                }
                return Err(Restart::Extend(d.max(2)));
            }
            for (c, mc) in roots {
                let g2 = substitute(k, &g, m, &c, lambda);
                let mut p2 = prefix.clone();
                p2.push((shift + m, c));
                self.recurse(g2, mc, p2, shift + m, false)?;
            }
        }
        Ok(())
    }
}

impl RootExpansion {
    /// Root of `tail_eq` with positive valuation, to absolute precision `prec`.
    fn tail_series(&self, k: &ExtField, prec: i64) -> Series {
        if let Some(s) = self.tail.read().as_ref() {
            if s.prec() >= prec {
                return s.truncate(k, prec);
            }
        }
        let work = prec + 2;
        let coeffs: Vec<Series> = self.tail_eq.iter().map(|c| wseries(k, c, work)).collect();
        let eval = |s: &Series| -> (Series, Series) {
            // Horner for value and derivative
            let mut v = LaurentSeries::zero(work);
            let mut d = LaurentSeries::zero(work);
            for c in coeffs.iter().rev() {
                d = d.mul(k, s).add(k, &v);
                v = v.mul(k, s).add(k, c);
            }
            (v.truncate(k, work), d.truncate(k, work))
        };
        let mut s: Series = LaurentSeries::zero(work);
        for _ in 0..(2 * work + 4) {
            let (v, d) = eval(&s);
            if v.is_zero_to_precision() {
                break;
            }
            let step = v.mul(k, &d.inv(k).expect("simple root has unit derivative"));
            let next = s.sub(k, &step).truncate(k, work);
            if next == s {
                break;
            }
            s = next;
        }
        let s = s.truncate(k, prec);
        *self.tail.write() = Some(s.clone());
        s
    }

    /// The root `s` of `g` to absolute precision `prec`.
    pub fn series(&self, k: &ExtField, prec: i64) -> Series {
        let tail = self.tail_series(k, (prec - self.shift).max(1)).shift(self.shift);
        let terms: Vec<(i64, El)> = self.prefix.iter().filter(|t| t.0 < prec).cloned().collect();
        LaurentSeries::from_terms(k, &terms, prec).add(k, &tail.truncate(k, prec))
    }

    pub fn depth(&self) -> i64 {
        self.shift
    }
}

/// An exact `w`-polynomial as a series truncated at `prec`.
fn wseries(k: &ExtField, c: &WPoly, prec: i64) -> Series {
    let terms: Vec<(i64, El)> = c.iter().enumerate().filter(|(_, x)| !k.is_zero(x)).map(|(i, x)| (i as i64, x.clone())).collect();
    LaurentSeries::from_terms(k, &terms, prec)
}

fn galois_images(k: &ExtField, s: &Series, zeta: &El) -> [Series; 2] {
    let lead = s.lead_exp();
    let frob: Vec<El> = s.coeffs().iter().map(|c| k.frobenius(c)).collect();
    let tau: Vec<El> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = (lead + i as i64) as u128;
            k.mul(c, &k.pow(zeta, e))
        })
        .collect();
    [
        LaurentSeries::from_dense(k, lead, frob, s.prec()),
        LaurentSeries::from_dense(k, lead, tau, s.prec()),
    ]
}

fn find_root(list: &[Series], s: &Series) -> Option<usize> {
    list.iter().position(|r| r == s)
}

/// Compute the infinite places of `f` (monic, coefficients of `t^i`).
pub fn expand(q: u32, f: &[Poly], c: i64) -> Result<Expansion, FieldError> {
    let n = f.len() - 1;
    let mut e_big: i64 = 1;
    let mut nn: usize = 1;
    loop {
        if e_big % q as i64 == 0 {
            return Err(FieldError::WildAtInfinity);
        }
        nn = lcm(nn, multiplicative_order(q as u64, e_big as u64));
        if e_big > MAX_E || nn > MAX_N {
            return Err(FieldError::PrecisionExhausted("expansion at infinity needs too large an extension".into()));
        }
        let k = ExtField::new(q, nn);
        let g = initial_equation(&k, f, c, e_big);
        let mut col = Collector { k: &k, roots: Vec::new() };
        match col.recurse(g, n, Vec::new(), 0, true) {
            Err(Restart::Ramify(d)) => {
                e_big *= d;
                continue;
            }
            Err(Restart::Extend(d)) => {
                nn *= d;
                continue;
            }
            Ok(()) => {}
        }
        let roots = col.roots;
        if roots.len() != n {
            return Err(FieldError::Inseparable);
        }
        return group_places(q, k, e_big, c, roots, f);
    }
}

fn group_places(q: u32, k: ExtField, e_big: i64, c: i64, roots: Vec<RootExpansion>, f: &[Poly]) -> Result<Expansion, FieldError> {
    let n = roots.len();
    let deepest = roots.iter().map(|r| r.depth()).max().unwrap_or(0);
    let prec = (deepest + 1).max(e_big * c * n as i64 + 1) + e_big;
    let series: Vec<Series> = roots.iter().map(|r| r.series(&k, prec)).collect();
    let zeta = {
        let g = k.primitive_element();
        k.pow(&g, (k.order() - 1) / e_big as u128)
    };
    // union-find over the Galois action
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..n {
        for img in galois_images(&k, &series[i], &zeta) {
            let j = find_root(&series, &img).ok_or_else(|| FieldError::PrecisionExhausted("conjugate roots not matched".into()))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if seen[r] == usize::MAX {
            seen[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[seen[r]].push(i);
    }
    check_irreducible(q, &k, e_big, c, &series, &orbits, f)?;
    let mut places = Vec::new();
    for orb in &orbits {
        let rep = *orb.iter().min_by_key(|&&i| series_key(&k, &series[i])).unwrap();
        let s = &series[rep];
        let mut e = 1usize;
        for (i, co) in s.coeffs().iter().enumerate() {
            if !k.is_zero(co) {
                let ex = s.lead_exp() + i as i64;
                e = lcm(e, (e_big / num_integer::gcd(ex, e_big)) as usize);
            }
        }
        if orb.len() % e != 0 {
            return Err(FieldError::PrecisionExhausted("inconsistent ramification data".into()));
        }
        if e.is_multiple_of(q as usize) {
            return Err(FieldError::WildAtInfinity);
        }
        places.push((orb.len() / e, e, series_key(&k, s), rep));
    }
    places.sort();
    let mut by_index: Vec<Option<RootExpansion>> = roots.into_iter().map(Some).collect();
    let places = places
        .into_iter()
        .map(|(f_res, e, _, rep)| PlaceData { e, f: f_res, root: Arc::new(by_index[rep].take().unwrap()) })
        .collect();
    Ok(Expansion { e_big, ext: k, c, places })
}

fn series_key(k: &ExtField, s: &Series) -> Vec<u32> {
    let mut key = vec![s.lead_exp() as u32];
    for c in s.coeffs() {
        key.extend(k.to_coords(c));
    }
    key
}

/// Reject reducible `f`: a factor over `k(x)` would be a product over a
/// union of place orbits whose coefficients are polynomials in `x`.
fn check_irreducible(q: u32, k: &ExtField, e_big: i64, c: i64, series: &[Series], orbits: &[Vec<usize>], f: &[Poly]) -> Result<(), FieldError> {
    let m = orbits.len();
    if m <= 1 {
        return Ok(());
    }
    let n = f.len() - 1;
    let shift = -e_big * c;
    for mask in 1..(1u32 << m) - 1 {
        let idx: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).flat_map(|b| orbits[b].iter().copied()).collect();
        if idx.len() * 2 > n {
            continue;
        }
        // prod (t - rho_i) with rho = w^{-EC} s
        const EXACT: i64 = i64::MAX / 4;
        let mut poly: Vec<Series> = vec![LaurentSeries::from_terms(k, &[(0, k.one())], series[0].prec())];
        for &i in &idx {
            let rho = series[i].shift(shift).neg(k);
            let mut next: Vec<Series> = vec![LaurentSeries::zero(EXACT); poly.len() + 1];
            for (j, a) in poly.iter().enumerate() {
                next[j + 1] = next[j + 1].add(k, a);
                next[j] = next[j].add(k, &a.mul(k, &rho));
            }
            poly = next;
        }
        let mut cand: Vec<Poly> = Vec::new();
        let mut ok = true;
        for s in &poly {
            if s.prec() <= 0 {
                ok = false;
                break;
            }
            let mut coeffs: Vec<u32> = Vec::new();
            for (i, co) in s.coeffs().iter().enumerate() {
                let ex = s.lead_exp() + i as i64;
                if ex > 0 || k.is_zero(co) {
                    continue;
                }
                let cc = k.to_coords(co);
                if ex % e_big != 0 || cc[1..].iter().any(|&v| v != 0) {
                    ok = false;
                    break;
                }
                let d = (-ex / e_big) as usize;
                if coeffs.len() <= d {
                    coeffs.resize(d + 1, 0);
                }
                coeffs[d] = cc[0];
            }
            if !ok {
                break;
            }
            cand.push(Poly::new(q, coeffs));
        }
        if ok && divides_monic(&cand, f) {
            return Err(FieldError::Reducible);
        }
    }
    Ok(())
}

/// Exact division test of monic bivariate polynomials (coefficients of `t^i`).
fn divides_monic(h: &[Poly], f: &[Poly]) -> bool {
    let dh = h.len() - 1;
    let mut r: Vec<Poly> = f.to_vec();
    if !h[dh].is_one() {
        return false;
    }
    while r.len() > dh {
        let lead = r.pop().unwrap();
        let off = r.len() - dh;
        for i in 0..dh {
            r[off + i] = &r[off + i] - &(&lead * &h[i]);
        }
    }
    r.iter().all(|p| p.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_bivariate;

    fn places(q: u32, src: &str, c: i64) -> Vec<(usize, usize)> {
        let f = parse_bivariate(src, q).unwrap();
        let ex = expand(q, &f, c).unwrap();
        ex.places.iter().map(|p| (p.e, p.f)).collect()
    }

    #[test]
    fn elliptic_curve_ramifies() {
        assert_eq!(places(3, "t^2 - (x^3+x+1)", 2), vec![(2, 1)]);
    }

    #[test]
    fn example_cubic_has_two_places() {
        let p = places(5, "t^3+(4x^3+3x^2+1)t^2+(3x^3+4x^2+4x+2)t+2x^3+x", 3);
        assert_eq!(p, vec![(1, 1), (1, 2)]);
    }

    #[test]
    fn split_and_inert_conics() {
        // t^2 = x^2 + 1: u-adic roots +-(1 + ...) lie in F_3
        assert_eq!(places(3, "t^2 - (x^2+1)", 1), vec![(1, 1), (1, 1)]);
        // t^2 = 2x^2 + 1: leading coefficient 2 is a non-square mod 3
        assert_eq!(places(3, "t^2 - (2x^2+1)", 1), vec![(1, 2)]);
    }

    #[test]
    fn reducible_is_rejected() {
        let f = parse_bivariate("(t - x)(t + x + 1)", 5).unwrap();
        assert!(matches!(expand(5, &f, 1), Err(FieldError::Reducible)));
    }

    #[test]
    fn roots_satisfy_equation() {
        let q = 5;
        let f = parse_bivariate("t^3+(4x^3+3x^2+1)t^2+(3x^3+4x^2+4x+2)t+2x^3+x", q).unwrap();
        let ex = expand(q, &f, 3).unwrap();
        let k = &ex.ext;
        let g = initial_equation(k, &f, 3, ex.e_big);
        for p in &ex.places {
            let s = p.root.series(k, 40);
            let mut v: Series = LaurentSeries::zero(40);
            for c in g.iter().rev() {
                let cs = wseries(k, c, 40);
                v = v.mul(k, &s).add(k, &cs);
            }
            assert!(v.is_zero_to_precision());
        }
    }
}
