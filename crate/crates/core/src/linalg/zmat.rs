//! Integer lattices: Hermite and Smith normal forms, kernels, integer
//! linear systems, LLL reduction and Babai rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;

pub fn to_zmat(m: &[Vec<i64>]) -> ZMat {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn identity(n: usize) -> ZMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn row_axpy(dst: &mut [BigInt], f: &BigInt, src: &[BigInt]) {
    // dst -= f * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= f * s;
        }
    }
}

pub fn transpose(m: &ZMat, cols: usize) -> ZMat {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row echelon Hermite form with transform: returns `(H, U, rank)` where
/// `U * A = H`, `U` is unimodular, the first `rank` rows of `H` are in
/// Hermite form (positive pivots, entries above pivots reduced to
/// `[0, pivot)`) and the remaining rows are zero.
pub fn hnf_with_transform(a: &ZMat, cols: usize) -> (ZMat, ZMat, usize) {
    let m = a.len();
    let mut h = a.clone();
    let mut u = identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == m {
            break;
        }
        loop {
            let best = (r..m).filter(|&i| !h[i][c].is_zero()).min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(b) = best else { break };
            h.swap(r, b);
            u.swap(r, b);
            let mut clean = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let qt = h[i][c].div_floor(&h[r][c]);
                let (hr, hi) = pair(&mut h, r, i);
                row_axpy(hi, &qt, hr);
                let (ur, ui) = pair(&mut u, r, i);
                row_axpy(ui, &qt, ur);
                if !h[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < m && !h[r][c].is_zero() {
            if h[r][c].is_negative() {
                for v in h[r].iter_mut().chain(u[r].iter_mut()) {
                    *v = -&*v;
                }
            }
            for i in 0..r {
                let qt = h[i][c].div_floor(&h[r][c]);
                if !qt.is_zero() {
                    let (hr, hi) = pair(&mut h, r, i);
                    row_axpy(hi, &qt, hr);
                    let (ur, ui) = pair(&mut u, r, i);
                    row_axpy(ui, &qt, ur);
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    (h, u, r)
}

fn pair<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (x, y) = v.split_at_mut(b);
        (&x[a], &mut y[0])
    } else {
        let (x, y) = v.split_at_mut(a);
        (&y[0], &mut x[b])
    }
}

/// Nonzero rows of the Hermite form of the row lattice.
pub fn hnf(a: &ZMat, cols: usize) -> ZMat {
    let (h, _, r) = hnf_with_transform(a, cols);
    h.into_iter().take(r).collect()
}

/// Basis of `{c in Z^m : sum_i c_i a_i = 0}` for the rows `a_i`.
pub fn left_kernel(a: &ZMat, cols: usize) -> ZMat {
    let (_, u, r) = hnf_with_transform(a, cols);
    u.into_iter().skip(r).collect()
}

/// Solve `A x = b` over the integers. Returns a particular solution and a
/// basis of the kernel, or `None` if the system has no integral solution.
/// The kernel basis is LLL-reduced and the particular solution is
/// size-reduced against it.
pub fn solve_integer_system(a: &ZMat, cols: usize, b: &[BigInt]) -> Option<(Vec<BigInt>, ZMat)> {
    let m = a.len();
    assert_eq!(b.len(), m);
    if cols == 0 {
        return b.iter().all(|v| v.is_zero()).then(|| (Vec::new(), Vec::new()));
    }
    // U * A^T = H, so x^T A^T = b^T  <=>  y^T H = b^T with x = U^T y.
    let at = transpose(a, cols);
    let (h, u, r) = hnf_with_transform(&at, m);
    let mut y = vec![BigInt::zero(); cols];
    let mut col = 0;
    for i in 0..r {
        while h[i][col].is_zero() {
            col += 1;
        }
        let mut rhs = b[col].clone();
        for k in 0..i {
            rhs -= &y[k] * &h[k][col];
        }
        let (qt, rem) = rhs.div_rem(&h[i][col]);
        if !rem.is_zero() {
            return None;
        }
        y[i] = qt;
    }
    for j in 0..m {
        let mut s = BigInt::zero();
        for i in 0..r {
            s += &y[i] * &h[i][j];
        }
        if s != b[j] {
            return None;
        }
    }
    let mut x = vec![BigInt::zero(); cols];
    for i in 0..r {
        if y[i].is_zero() {
            continue;
        }
        for (xj, uij) in x.iter_mut().zip(&u[i]) {
            *xj += &y[i] * uij;
        }
    }
    let kernel: ZMat = u.into_iter().skip(r).collect();
    let kernel = if kernel.is_empty() { kernel } else { lll(&kernel) };
    if !kernel.is_empty() {
        let t: Vec<BigRational> = x.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        let close = babai(&kernel, &t);
        for (xi, ci) in x.iter_mut().zip(close) {
            *xi -= ci;
        }
    }
    Some((x, kernel))
}

/// Smith form of the row lattice: returns the diagonal `d` (length
/// `cols`, zeros for free directions) and a unimodular `V` such that
/// `x -> x V` maps `Z^cols / rowspan(A)` isomorphically onto
/// `prod Z / d_i`.
pub fn smith_col_transform(a: &ZMat, cols: usize) -> (Vec<BigInt>, ZMat) {
    let mut m: ZMat = a.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let rows = m.len();
    let mut v = identity(cols);
    let mut diag = vec![BigInt::zero(); cols];
    let mut t = 0;
    while t < rows.min(cols) {
        // pick the smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        if bj != t {
            for r in m.iter_mut() {
                r.swap(t, bj);
            }
            for r in v.iter_mut() {
                r.swap(t, bj);
            }
        }
        let mut changed = false;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let qt = m[i][t].div_floor(&m[t][t]);
            let (mt, mi) = pair(&mut m, t, i);
            row_axpy(mi, &qt, mt);
            if !m[i][t].is_zero() {
                changed = true;
            }
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let qt = m[t][j].div_floor(&m[t][t]);
            for r in m.iter_mut() {
                let s = &qt * &r[t];
                r[j] -= s;
            }
            for r in v.iter_mut() {
                let s = &qt * &r[t];
                r[j] -= s;
            }
            if !m[t][j].is_zero() {
                changed = true;
            }
        }
        if changed {
            continue;
        }
        // divisibility: pivot must divide the rest of the block
        let piv = m[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &piv).is_zero()));
        if let Some(i) = bad {
            let (mi, mt) = pair(&mut m, i, t);
            for (d, s) in mt.iter_mut().zip(mi) {
                *d += s;
            }
            continue;
        }
        diag[t] = piv.abs();
        t += 1;
    }
    (diag, v)
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_q(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Gram-Schmidt data `(b*, |b*|^2, mu)` of independent rows.
pub fn gram_schmidt(b: &ZMat) -> (Vec<Vec<BigRational>>, Vec<BigRational>, Vec<Vec<BigRational>>) {
    let k = b.len();
    let mut bs: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    let mut nb = Vec::with_capacity(k);
    let mut mu = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        let bi = to_q(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = if nb[j] == BigRational::zero() { BigRational::zero() } else { dot(&bi, &bs[j]) / &nb[j] };
            for (x, y) in v.iter_mut().zip(&bs[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        nb.push(dot(&v, &v));
        bs.push(v);
    }
    (bs, nb, mu)
}

fn round_half_up(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// LLL reduction with `delta = 3/4` of linearly independent rows.
pub fn lll(basis: &ZMat) -> ZMat {
    let mut b = basis.clone();
    let k = b.len();
    if k <= 1 {
        return b;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (_, mut nb, mut mu) = gram_schmidt(&b);
    let mut i = 1;
    while i < k {
        for j in (0..i).rev() {
            let qt = round_half_up(&mu[i][j]);
            if qt.is_zero() {
                continue;
            }
            let (bj, bi) = pair(&mut b, j, i);
            row_axpy(bi, &qt, bj);
            let qq = BigRational::from_integer(qt);
            for l in 0..j {
                let s = &qq * &mu[j][l];
                mu[i][l] -= s;
            }
            mu[i][j] -= &qq;
        }
        let lhs = nb[i].clone();
        let rhs = (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &nb[i - 1];
        if lhs < rhs {
            b.swap(i, i - 1);
            let gs = gram_schmidt(&b);
            nb = gs.1;
            mu = gs.2;
            i = (i - 1).max(1);
        } else {
            i += 1;
        }
    }
    b
}

/// Lattice vector near `t` by Babai's nearest-plane method.
pub fn babai(basis: &ZMat, t: &[BigRational]) -> Vec<BigInt> {
    let dim = t.len();
    let mut out = vec![BigInt::zero(); dim];
    if basis.is_empty() {
        return out;
    }
    let (bs, nb, _) = gram_schmidt(basis);
    let mut r = t.to_vec();
    for i in (0..basis.len()).rev() {
        if nb[i].is_zero() {
            continue;
        }
        let c = round_half_up(&(dot(&r, &bs[i]) / &nb[i]));
        if c.is_zero() {
            continue;
        }
        for ((rj, oj), bj) in r.iter_mut().zip(out.iter_mut()).zip(&basis[i]) {
            *rj -= BigRational::from_integer(&c * bj);
            *oj += &c * bj;
        }
    }
    out
}

/// Determinant of the Gram matrix `B B^T` (the squared covolume).
pub fn gram_det(b: &ZMat) -> BigInt {
    if b.is_empty() {
        return BigInt::one();
    }
    let (_, nb, _) = gram_schmidt(b);
    nb.iter().fold(BigRational::one(), |acc, x| acc * x).to_integer()
}
