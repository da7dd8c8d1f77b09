//! Dense linear algebra over a prime field `F_p` with `u32` entries.

use crate::arith::ff::{inv_mod, mul_mod};

pub type KMat = Vec<Vec<u32>>;

#[inline]
fn sub_mul(a: u32, c: u32, b: u32, p: u32) -> u32 {
    // a - c*b mod p
    let t = mul_mod(c, b, p);
    if a >= t {
        a - t
    } else {
        a + p - t
    }
}

/// Row-reduce in place to reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut KMat, p: u32) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for v in m[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = sub_mul(*x, f, y, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &KMat, p: u32) -> usize {
    let mut a = m.clone();
    rref(&mut a, p).len()
}

/// Basis of `{v : M v = 0}` where `M` has `cols` columns.
pub fn nullspace(m: &KMat, cols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, p);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            let x = a[i][free];
            v[pc] = if x == 0 { 0 } else { p - x };
        }
        out.push(v);
    }
    out
}

/// Basis of `{c : sum_i c_i rows[i] = 0}`.
pub fn left_nullspace(rows: &KMat, p: u32) -> Vec<Vec<u32>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    let t: KMat = (0..cols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    nullspace(&t, rows.len(), p)
}

/// A subspace of `F_p^dim` kept as a reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, dim: usize) -> Self {
        Echelon { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(p: u32, dim: usize, vs: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let mut e = Echelon::new(p, dim);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Reduce `v` against the basis (normal form modulo the subspace).
    pub fn reduce(&self, v: &mut [u32]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row).skip(pc) {
                    *x = sub_mul(*x, f, y, self.p);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns false if it was already in the span.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[pc], self.p);
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, self.p);
        }
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&v).skip(pc) {
                    *x = sub_mul(*x, f, y, self.p);
                }
            }
        }
        let at = self.pivots.partition_point(|&c| c < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }
}
