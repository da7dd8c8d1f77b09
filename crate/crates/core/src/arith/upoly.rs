//! Dense univariate polynomial algorithms over any [`FiniteField`].
//!
//! Polynomials are coefficient vectors, lowest degree first, with no
//! trailing zeros (the zero polynomial is the empty vector).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ff::{FiniteField, PrimeField};

pub type UPoly<F> = Vec<<F as FiniteField>::El>;

pub fn trim<F: FiniteField>(f: &F, a: &mut UPoly<F>) {
    while let Some(last) = a.last() {
        if f.is_zero(last) {
            a.pop();
        } else {
            break;
        }
    }
}

pub fn degree<F: FiniteField>(a: &UPoly<F>) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(f, &mut out);
    out
}

pub fn sub<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
    let nb: UPoly<F> = b.iter().map(|x| f.neg(x)).collect();
    add(f, a, &nb)
}

pub fn scale<F: FiniteField>(f: &F, a: &UPoly<F>, c: &F::El) -> UPoly<F> {
    if f.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub fn mul<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, &mut out);
    out
}

pub fn monic<F: FiniteField>(f: &F, a: &UPoly<F>) -> UPoly<F> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc)),
    }
}

pub fn divrem<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>) -> (UPoly<F>, UPoly<F>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv_lc = f.inv(&b[db]);
    let mut q = vec![f.zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &inv_lc);
        if f.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        q[k] = c;
    }
    trim(f, &mut q);
    trim(f, &mut r);
    (q, r)
}

pub fn rem<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
    divrem(f, a, b).1
}

/// Monic gcd.
pub fn gcd<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn derivative<F: FiniteField>(f: &F, a: &UPoly<F>) -> UPoly<F> {
    let mut out: UPoly<F> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
        .collect();
    trim(f, &mut out);
    out
}

pub fn mulmod<F: FiniteField>(f: &F, a: &UPoly<F>, b: &UPoly<F>, m: &UPoly<F>) -> UPoly<F> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: FiniteField>(f: &F, base: &UPoly<F>, mut e: u128, m: &UPoly<F>) -> UPoly<F> {
    let mut acc = rem(f, &vec![f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

pub fn eval<F: FiniteField>(f: &F, a: &UPoly<F>, x: &F::El) -> F::El {
    let mut acc = f.zero();
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

fn x_poly<F: FiniteField>(f: &F) -> UPoly<F> {
    vec![f.zero(), f.one()]
}

/// Square-free decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `a = prod g_i^i`, each `g_i` square-free and monic, pairwise coprime.
pub fn squarefree<F: FiniteField>(f: &F, a: &UPoly<F>) -> Vec<(UPoly<F>, usize)> {
    let a = monic(f, a);
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    let p = f.characteristic() as usize;
    let da = derivative(f, &a);
    if da.is_empty() {
        // a(x) = b(x^p)
        let b: UPoly<F> = a.iter().step_by(p).map(|c| f.pth_root(c)).collect();
        for (g, m) in squarefree(f, &b) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = gcd(f, &a, &da);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if c.len() > 1 {
        // remaining factor is a p-th power
        let b: UPoly<F> = c.iter().step_by(p).map(|x| f.pth_root(x)).collect();
        for (g, m) in squarefree(f, &b) {
            out.push((g, m * p));
        }
    }
    merge_equal(f, out)
}

fn merge_equal<F: FiniteField>(f: &F, v: Vec<(UPoly<F>, usize)>) -> Vec<(UPoly<F>, usize)> {
    // squarefree parts from the p-th power branch may share factors with
    // earlier parts; combine through gcds so the output stays coprime.
    let mut res: Vec<(UPoly<F>, usize)> = Vec::new();
    for (g, m) in v {
        let mut pending = vec![(g, m)];
        let mut next_res = Vec::new();
        for (h, k) in res.into_iter() {
            let mut h = h;
            let mut new_pending = Vec::new();
            for (g, m) in pending {
                let d = gcd(f, &g, &h);
                if d.len() > 1 {
                    let g2 = divrem(f, &g, &d).0;
                    h = divrem(f, &h, &d).0;
                    next_res.push((d, k + m));
                    if g2.len() > 1 {
                        new_pending.push((g2, m));
                    }
                } else {
                    new_pending.push((g, m));
                }
            }
            pending = new_pending;
            if h.len() > 1 {
                next_res.push((h, k));
            }
        }
        next_res.extend(pending);
        res = next_res;
    }
    res
}

/// Distinct-degree factorization of a square-free monic polynomial:
/// `(d, product of all irreducible factors of degree d)`.
pub fn ddf<F: FiniteField>(f: &F, a: &UPoly<F>) -> Vec<(usize, UPoly<F>)> {
    let q = f.order();
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let x = x_poly(f);
    let mut h = rem(f, &x, &rest);
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((deg, rest));
            break;
        }
        h = powmod(f, &h, q, &rest);
        let g = gcd(f, &sub(f, &h, &x), &rest);
        if g.len() > 1 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((d, g));
        }
    }
    out
}

/// Split a product of distinct monic irreducibles of common degree `d`.
pub fn edf<F: FiniteField>(f: &F, a: &UPoly<F>, d: usize, rng: &mut ChaCha8Rng) -> Vec<UPoly<F>> {
    let deg = a.len() - 1;
    if deg == d {
        return vec![monic(f, a)];
    }
    let q = f.order();
    let p = f.characteristic();
    loop {
        let r: UPoly<F> = {
            let mut r: UPoly<F> = (0..deg).map(|_| f.random(rng)).collect();
            trim(f, &mut r);
            r
        };
        if r.len() <= 1 {
            continue;
        }
        let s = if p == 2 {
            // absolute trace from F_{q^d} to F_2
            let m = (f.degree() * d) as u32;
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..m {
                t = mulmod(f, &t, &t, a);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            // r^{(q^d - 1)/2} = (r^{1 + q + ... + q^{d-1}})^{(q-1)/2}
            let mut t = rem(f, &r, a);
            let mut norm = t.clone();
            for _ in 1..d {
                t = powmod(f, &t, q, a);
                norm = mulmod(f, &norm, &t, a);
            }
            let e = powmod(f, &norm, (q - 1) / 2, a);
            sub(f, &e, &vec![f.one()])
        };
        let g = gcd(f, &s, a);
        if g.len() > 1 && g.len() < a.len() {
            let h = divrem(f, a, &g).0;
            let mut out = edf(f, &g, d, rng);
            out.extend(edf(f, &h, d, rng));
            return out;
        }
    }
}

/// Full factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities. Output sorted by (degree, coefficients) for determinism.
pub fn factor<F: FiniteField>(f: &F, a: &UPoly<F>) -> Vec<(UPoly<F>, usize)>
where
    F::El: Ord,
{
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, m) in squarefree(f, a) {
        for (d, prod) in ddf(f, &g) {
            for h in edf(f, &prod, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|x, y| {
        (x.0.len(), x.0.iter().rev().collect::<Vec<_>>()).cmp(&(y.0.len(), y.0.iter().rev().collect::<Vec<_>>()))
    });
    out
}

/// Degrees of the irreducible factors of a square-free polynomial.
pub fn factor_degrees<F: FiniteField>(f: &F, a: &UPoly<F>) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, _) in squarefree(f, a) {
        for (d, prod) in ddf(f, &g) {
            for _ in 0..(prod.len() - 1) / d {
                out.push(d);
            }
        }
    }
    out
}

/// All roots of `a` lying in the field, with multiplicities.
pub fn roots<F: FiniteField>(f: &F, a: &UPoly<F>) -> Vec<(F::El, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0001_2345);
    let mut out = Vec::new();
    for (g, m) in squarefree(f, a) {
        let x = x_poly(f);
        let xq = powmod(f, &x, f.order(), &g);
        let lin = gcd(f, &sub(f, &xq, &x), &g);
        if lin.len() <= 1 {
            continue;
        }
        for h in edf(f, &lin, 1, &mut rng) {
            // h = x - r
            let r = f.neg(&h[0]);
            out.push((r, m));
        }
    }
    out
}

pub fn is_irreducible<F: FiniteField>(f: &F, a: &UPoly<F>) -> bool {
    if a.len() <= 1 {
        return false;
    }
    let sf = squarefree(f, a);
    if sf.len() != 1 || sf[0].1 != 1 {
        return false;
    }
    let d = ddf(f, a);
    d.len() == 1 && d[0].0 == a.len() - 1
}

/// Lexicographically first monic irreducible polynomial of degree `n` over
/// `F_p` (low-to-high coefficient order, counting from the constant term).
pub fn first_irreducible(base: &PrimeField, n: usize) -> Vec<u32> {
    let p = base.p as u64;
    let total = p.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut poly = Vec::with_capacity(n + 1);
        for _ in 0..n {
            poly.push((c % p) as u32);
            c /= p;
        }
        poly.push(1);
        if poly[0] == 0 {
            continue;
        }
        if is_irreducible(base, &poly) {
            return poly;
        }
    }
    unreachable!("no irreducible polynomial of degree {n} over F_{p}")
}
