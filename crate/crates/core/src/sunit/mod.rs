//! Divisor class groups at desk scale, S-unit value lattices and the
//! integer lattice tools built on them.
//!
//! Classes are keyed by reduced divisors. Fix a degree-one place `P0`.
//! For a degree-zero `D` let `m >= 0` be minimal with `L(D + m P0) != 0`;
//! that space is one-dimensional, and `A = D + m P0 + div(gamma)` for its
//! generator `gamma` is an effective divisor depending only on `[D]`.
//! Subgroups generated by a few classes are enumerated breadth-first over
//! these keys, and the Cayley graph edges give the full relation lattice.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::Poly;
use crate::field::{FieldElement, FieldError, FunctionField};
use crate::ideal::{primes_above, FracIdeal};
use crate::linalg::zmat::{self, ZMat};
use crate::rr::{distinguished_place, expand_all, places_of_degree, rr_basis_of_ideal, rr_basis_with, Divisor, Place, RrError};

pub use crate::linalg::zmat::solve_integer_system;

pub const DEFAULT_BUDGET: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SunitError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rr(#[from] RrError),
    #[error("field has no place of degree one")]
    NoDegreeOnePlace,
    #[error("S must contain every infinite place")]
    MissingInfinitePlace,
    #[error("class group enumeration exceeds budget ({limit} classes)")]
    Budget { limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// A divisor stored as its finite ideal `prod P^{-n_P}` and the
/// coefficients at the infinite places.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ClassRep {
    ideal: FracIdeal,
    inf: Vec<i64>,
}

impl ClassRep {
    fn of(ff: &FunctionField, d: &Divisor) -> Self {
        ClassRep { ideal: d.finite_ideal(ff), inf: d.infinite.clone() }
    }

    fn add(&self, ff: &FunctionField, other: &Self) -> Self {
        ClassRep {
            ideal: self.ideal.mul(ff, &other.ideal),
            inf: self.inf.iter().zip(&other.inf).map(|(a, b)| a + b).collect(),
        }
    }

    fn degree(&self, ff: &FunctionField) -> i64 {
        let nm = self.ideal.norm();
        let fin = nm.den().deg_i64() - nm.num().deg_i64();
        fin + self.inf.iter().zip(ff.infinite_places()).map(|(n, p)| n * p.deg as i64).sum::<i64>()
    }
}

/// Canonical reduced representatives relative to a degree-one place.
struct Reducer<'a> {
    ff: &'a FunctionField,
    base: Place,
}

/// A place of degree one, infinite ones preferred.
fn base_place(ff: &FunctionField) -> Result<Place, SunitError> {
    if let Some(i) = distinguished_place(ff) {
        return Ok(Place::Infinite(i));
    }
    for a in 0..ff.q() {
        let p = Poly::new(ff.q(), vec![a, 1]);
        if let Some(pr) = primes_above(ff, &p).iter().find(|pr| pr.degree() == 1) {
            return Ok(Place::Finite(pr.clone()));
        }
    }
    Err(SunitError::NoDegreeOnePlace)
}

impl<'a> Reducer<'a> {
    fn new(ff: &'a FunctionField) -> Result<Self, SunitError> {
        Ok(Reducer { ff, base: base_place(ff)? })
    }

    fn shifted(&self, d: &ClassRep, s: i64) -> ClassRep {
        let mut out = d.clone();
        match &self.base {
            Place::Infinite(i) => out.inf[*i] += s,
            Place::Finite(p) => out.ideal = out.ideal.mul(self.ff, &p.ideal.pow(self.ff, -s)),
        }
        out
    }

    /// Reduced effective representative of `[D - deg(D) P0]`.
    fn reduce(&self, d: &ClassRep) -> Result<ClassRep, SunitError> {
        let ff = self.ff;
        let g = ff.genus() as i64;
        let deg = d.degree(ff);
        let series = match &self.base {
            Place::Infinite(_) => {
                let basis = d.ideal.basis();
                let s = expand_all(ff, &basis)?;
                Some((basis, s))
            }
            Place::Finite(_) => None,
        };
        let space = |m: i64| -> Result<(ClassRep, Vec<FieldElement>), SunitError> {
            let dm = self.shifted(d, m - deg);
            let b = match &series {
                Some((basis, s)) => rr_basis_with(ff, basis.clone(), s.clone(), &dm.inf)?,
                None => rr_basis_of_ideal(ff, &dm.ideal, &dm.inf)?,
            };
            Ok((dm, b))
        };
        // dim L(D + m P0) drops by at most one per step down from m = g
        let mut m = g;
        let mut best = space(m)?;
        loop {
            let dim = best.1.len() as i64;
            if dim == 0 {
                return Err(SunitError::Internal("empty Riemann-Roch space at the genus".into()));
            }
            if dim == 1 {
                if m == 0 {
                    break;
                }
                let cand = space(m - 1)?;
                if cand.1.is_empty() {
                    break;
                }
                m -= 1;
                best = cand;
            } else {
                let m2 = (m - dim + 1).max(0);
                if m2 == m {
                    return Err(SunitError::Internal("degree-zero class with a large space".into()));
                }
                m = m2;
                best = space(m)?;
            }
        }
        let (dm, basis) = best;
        if basis.len() != 1 {
            return Err(SunitError::Internal(format!("reduced space has dimension {}", basis.len())));
        }
        let gamma = &basis[0];
        let ginv = ff.inv(gamma).expect("nonzero");
        let vals = ff.inf_valuations(gamma)?;
        Ok(ClassRep {
            ideal: dm.ideal.mul(ff, &FracIdeal::principal(ff, &ginv)),
            inf: dm.inf.iter().zip(&vals).map(|(a, b)| a + b).collect(),
        })
    }

    /// `P - deg(P) P0` as a class generator.
    fn place_class(&self, p: &Place) -> ClassRep {
        let d = p.divisor(self.ff, 1).sub(&self.base.divisor(self.ff, p.degree(self.ff) as i64));
        ClassRep::of(self.ff, &d)
    }
}

/// Subgroup generated by a list of classes, with exponent vectors and the
/// relation lattice (full rank, Hermite form).
struct Subgroup {
    exps: HashMap<ClassRep, Vec<i64>>,
    relations: ZMat,
}

fn enumerate(red: &Reducer, gens: &[ClassRep], budget: usize) -> Result<Subgroup, SunitError> {
    let ff = red.ff;
    let k = gens.len();
    let id = red.reduce(&ClassRep::of(ff, &Divisor::zero(ff)))?;
    let mut exps: HashMap<ClassRep, Vec<i64>> = HashMap::new();
    exps.insert(id.clone(), vec![0; k]);
    let mut frontier = vec![id];
    let mut relations: ZMat = Vec::new();
    let mut pending: ZMat = Vec::new();
    while !frontier.is_empty() {
        let steps: Vec<(usize, usize)> = (0..frontier.len()).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
        let next: Vec<ClassRep> = steps
            .par_iter()
            .map(|&(i, j)| red.reduce(&frontier[i].add(ff, &gens[j])))
            .collect::<Result<_, _>>()?;
        let mut new_frontier = Vec::new();
        for (&(i, j), c) in steps.iter().zip(next) {
            let mut e = exps[&frontier[i]].clone();
            e[j] += 1;
            match exps.get(&c) {
                Some(old) => {
                    if *old != e {
                        pending.push(e.iter().zip(old).map(|(a, b)| BigInt::from(a - b)).collect());
                    }
                }
                None => {
                    exps.insert(c.clone(), e);
                    new_frontier.push(c);
                    if exps.len() > budget {
                        return Err(SunitError::Budget { limit: budget });
                    }
                }
            }
            if pending.len() > 4 * k + 4 {
                relations.append(&mut pending);
                relations = zmat::hnf(&relations, k);
            }
        }
        frontier = new_frontier;
    }
    relations.append(&mut pending);
    let relations = zmat::hnf(&relations, k);
    let det = (0..relations.len()).fold(BigInt::one(), |acc, i| acc * &relations[i][i]);
    if relations.len() != k || det != BigInt::from(exps.len()) {
        return Err(SunitError::Internal(format!("relation lattice of index {det} for {} classes", exps.len())));
    }
    Ok(Subgroup { exps, relations })
}

/// Number of places of each degree `1..=up_to`.
pub fn place_counts(ff: &FunctionField, up_to: usize) -> Vec<u64> {
    (1..=up_to).map(|d| places_of_degree(ff, d).len() as u64).collect()
}

/// Coefficients `a_0..a_2g` of the L-polynomial from place counts.
pub fn l_polynomial(ff: &FunctionField) -> Vec<BigInt> {
    let g = ff.genus();
    let q = BigInt::from(ff.q());
    let counts = place_counts(ff, g);
    // s_m = sum alpha_i^m = q^m + 1 - #points over F_{q^m}
    let s: Vec<BigInt> = (1..=g)
        .map(|m| {
            let pts: u64 = (1..=m).filter(|d| m % d == 0).map(|d| d as u64 * counts[d - 1]).sum();
            q.pow(m as u32) + 1 - BigInt::from(pts)
        })
        .collect();
    let mut a = vec![BigInt::one()];
    for i in 1..=g {
        let acc = (1..=i).fold(BigInt::zero(), |acc, j| acc + &s[j - 1] * &a[i - j]);
        a.push(-acc / BigInt::from(i));
    }
    for i in (0..g).rev() {
        a.push(q.pow((g - i) as u32) * &a[i]);
    }
    a
}

/// Order of `Cl^0(F)`.
pub fn class_number(ff: &FunctionField) -> BigInt {
    l_polynomial(ff).iter().sum()
}

/// `Cl^0(F)` with discrete logarithms.
#[derive(Debug)]
pub struct ClassGroupData {
    pub h: u64,
    /// Invariant factors greater than one.
    pub invariants: Vec<BigInt>,
    /// Degree-zero divisors whose classes generate the group.
    pub generators: Vec<Divisor>,
    base: Place,
    exps: HashMap<ClassRep, Vec<i64>>,
    diag: Vec<BigInt>,
    transform: ZMat,
}

pub fn class_group_small(ff: &FunctionField) -> Result<ClassGroupData, SunitError> {
    class_group_with_budget(ff, DEFAULT_BUDGET)
}

pub fn class_group_with_budget(ff: &FunctionField, budget: usize) -> Result<ClassGroupData, SunitError> {
    let h = class_number(ff);
    let h = h.to_u64().filter(|&h| h as usize <= budget).ok_or(SunitError::Budget { limit: budget })?;
    let red = Reducer::new(ff)?;
    let mut places = Vec::new();
    let mut gens = Vec::new();
    let mut sub = enumerate(&red, &[], budget)?;
    let max_deg = 2 * ff.genus() + 2;
    'deg: for d in 1..=max_deg {
        for p in places_of_degree(ff, d) {
            if sub.exps.len() as u64 == h {
                break 'deg;
            }
            let c = red.place_class(&p);
            if sub.exps.contains_key(&red.reduce(&c)?) {
                continue;
            }
            places.push(p);
            gens.push(c);
            sub = enumerate(&red, &gens, budget)?;
        }
    }
    if sub.exps.len() as u64 != h {
        return Err(SunitError::Internal(format!("generated {} of {h} classes", sub.exps.len())));
    }
    let (diag, transform) = zmat::smith_col_transform(&sub.relations, gens.len());
    let generators = places.iter().map(|p| p.divisor(ff, 1).sub(&red.base.divisor(ff, p.degree(ff) as i64))).collect();
    Ok(ClassGroupData {
        h,
        invariants: diag.iter().filter(|d| !d.is_one()).cloned().collect(),
        generators,
        base: red.base,
        exps: sub.exps,
        diag,
        transform,
    })
}

impl ClassGroupData {
    /// Coordinates of `[D - deg(D) P0]` in `prod Z/d_i` over the invariant
    /// factors, each reduced into `[0, d_i)`.
    pub fn dlog(&self, ff: &FunctionField, d: &Divisor) -> Result<Vec<BigInt>, SunitError> {
        let red = Reducer { ff, base: self.base.clone() };
        let key = red.reduce(&ClassRep::of(ff, d))?;
        let e = self.exps.get(&key).ok_or_else(|| SunitError::Internal("class not enumerated".into()))?;
        let mut out = Vec::new();
        for (c, dc) in self.diag.iter().enumerate() {
            if dc.is_one() {
                continue;
            }
            let y = e.iter().zip(&self.transform).fold(BigInt::zero(), |acc, (ei, row)| acc + BigInt::from(*ei) * &row[c]);
            out.push(((y % dc) + dc) % dc);
        }
        Ok(out)
    }
}

/// Rows generate the lattice of `v` with `sum v_i P_i` principal and of
/// degree zero: each row is the divisor of an S-unit.
#[derive(Clone, Debug)]
pub struct SUnitValMatrix {
    pub places: Vec<Place>,
    pub m: ZMat,
    /// Index of the row lattice in the degree-zero vectors.
    pub regulator: BigInt,
    /// Squared covolume of the row lattice.
    pub covolume_sq: BigInt,
}

impl SUnitValMatrix {
    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn rows_i64(&self) -> Vec<Vec<i64>> {
        self.m.iter().map(|r| r.iter().map(|v| v.to_i64().expect("entry fits")).collect()).collect()
    }

    /// `max |m_ij|`.
    pub fn max_entry(&self) -> BigInt {
        self.m.iter().flatten().map(|v| v.abs()).max().unwrap_or_default()
    }
}

/// Degree-zero integer vectors of length `degs.len()`.
fn degree_zero_basis(degs: &[BigInt]) -> ZMat {
    let col: ZMat = degs.iter().map(|d| vec![d.clone()]).collect();
    zmat::left_kernel(&col, 1)
}

pub fn sval_mat(ff: &FunctionField, s: &[Place]) -> Result<SUnitValMatrix, SunitError> {
    sval_mat_with_budget(ff, s, DEFAULT_BUDGET)
}

pub fn sval_mat_with_budget(ff: &FunctionField, s: &[Place], budget: usize) -> Result<SUnitValMatrix, SunitError> {
    let inf = ff.infinite_places().len();
    if (0..inf).any(|i| !s.contains(&Place::Infinite(i))) {
        return Err(SunitError::MissingInfinitePlace);
    }
    let red = Reducer::new(ff)?;
    let gens: Vec<ClassRep> = s.iter().map(|p| red.place_class(p)).collect();
    let sub = enumerate(&red, &gens, budget)?;
    let degs: Vec<BigInt> = s.iter().map(|p| BigInt::from(p.degree(ff))).collect();
    // relations of degree zero: combinations of relation rows
    let rel_degs: Vec<BigInt> =
        sub.relations.iter().map(|r| r.iter().zip(&degs).fold(BigInt::zero(), |a, (x, d)| a + x * d)).collect();
    let combos = degree_zero_basis(&rel_degs);
    let rows: ZMat = combos
        .iter()
        .map(|c| {
            (0..s.len())
                .map(|j| c.iter().zip(&sub.relations).fold(BigInt::zero(), |a, (ci, r)| a + ci * &r[j]))
                .collect()
        })
        .collect();
    let m = zmat::lll(&rows);
    let covolume_sq = zmat::gram_det(&m);
    let full = zmat::gram_det(&degree_zero_basis(&degs));
    let regulator = (&covolume_sq / &full).sqrt();
    Ok(SUnitValMatrix { places: s.to_vec(), m, regulator, covolume_sq })
}

/// `S` for the infinite places alone.
pub fn infinite_places_set(ff: &FunctionField) -> Vec<Place> {
    (0..ff.infinite_places().len()).map(Place::Infinite).collect()
}

/// Finite places dividing `c`, in factor order, then the infinite places.
pub fn s_of(ff: &FunctionField, c: &Poly) -> Vec<Place> {
    let mut s: Vec<Place> = crate::ideal::factor_in_of(ff, c).into_iter().map(|(p, _)| Place::Finite(p)).collect();
    s.extend(infinite_places_set(ff));
    s
}

/// Integer lattice given by independent rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: ZMat,
}

impl IntLattice {
    pub fn new(basis: ZMat) -> Self {
        IntLattice { basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// LLL reduction with `delta = 3/4`.
pub fn lll_int(m: &ZMat) -> ZMat {
    zmat::lll(m)
}

/// Babai nearest-plane approximation to the closest lattice vector.
pub fn cvp_babai(l: &IntLattice, t: &[BigRational]) -> Vec<BigInt> {
    zmat::babai(&l.basis, t)
}

#[cfg(test)]
mod tests;
