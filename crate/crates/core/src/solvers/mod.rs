//! Norm equations `Norm(alpha) = zeta * c` with `alpha` in the maximal
//! order: bounds, search-space sizes and three solvers.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{Poly, RatFunc};
use crate::compact::{comp_rep, cr_associate, cr_is_integral, cr_norm, CompactRep, CrError};
use crate::field::{FieldElement, FieldError, FunctionField};
use crate::ideal::{factor_in_of, FracIdeal, PrimeIdeal};
use crate::linalg::zmat;
use crate::rr::{distinguished_place, other_places, RrError};
use crate::sunit::{cvp_babai, infinite_places_set, s_of, sval_mat_with_budget, IntLattice, SUnitValMatrix, SunitError};

/// Default cap on the number of elements Gaal-Pohst may enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("constant c unsupported")]
    ConstantC,
    #[error("field has no infinite place of degree one")]
    NoDegreeOnePlace,
    #[error("search space of {count} elements exceeds budget {limit}")]
    Budget { count: Power, limit: u64 },
    #[error("deadline exceeded")]
    Timeout,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Sunit(#[from] SunitError),
    #[error(transparent)]
    Cr(#[from] CrError),
    #[error(transparent)]
    Rr(#[from] RrError),
}

/// `base^exp`, kept symbolic for printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Power {
    pub base: u64,
    pub exp: u64,
}

impl Power {
    pub fn value(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.base), self.exp as usize)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.base.checked_pow(u32::try_from(self.exp).ok()?)
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_u64() {
            Some(v) if v < 1_000_000_000 => write!(f, "{v}"),
            _ => write!(f, "{}^{}", self.base, self.exp),
        }
    }
}

/// Resource limits for a single solve.
#[derive(Clone, Debug)]
pub struct Limits {
    pub deadline: Option<Instant>,
    /// Largest number of elements an enumeration may visit.
    pub enumeration: u64,
    /// Class group enumeration budget for S-unit matrices.
    pub classes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { deadline: None, enumeration: DEFAULT_ENUMERATION_BUDGET, classes: crate::sunit::DEFAULT_BUDGET }
    }
}

impl Limits {
    pub fn with_timeout(mut self, t: Duration) -> Self {
        self.deadline = Some(Instant::now() + t);
        self
    }

    fn check(&self) -> Result<(), SolveError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(SolveError::Timeout),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverBounds {
    /// `theta_P` at each infinite place.
    pub theta: Vec<Rational64>,
    pub big_theta: Rational64,
    /// Degree caps for the coefficients over the reduced basis.
    pub deg_bounds: Vec<i64>,
    /// Integer ranges for the value at each infinite place.
    pub value_ranges: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub gp_count: Power,
    pub tuple_bound: BigInt,
    pub ideal_count: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Elements, `(ideal, values)` pairs or ideals visited.
    pub candidates: u64,
    pub comp_reps: u64,
    pub phases: Vec<(String, Duration)>,
}

#[derive(Clone, Debug)]
pub struct SolutionSet<T> {
    pub solutions: Vec<T>,
    pub c: Poly,
    pub stats: SolveStats,
}

/// Things that can be compared up to units of the maximal order.
pub trait Associates {
    fn is_associate(&self, ff: &FunctionField, other: &Self) -> bool;
}

impl Associates for FieldElement {
    fn is_associate(&self, ff: &FunctionField, other: &Self) -> bool {
        match (ff.div(self, other), ff.div(other, self)) {
            (Some(a), Some(b)) => a.is_integral() && b.is_integral(),
            _ => false,
        }
    }
}

impl Associates for CompactRep {
    fn is_associate(&self, ff: &FunctionField, other: &Self) -> bool {
        cr_associate(ff, self, other)
    }
}

/// Keeps the first element of every associate class.
pub fn dedup_associates<T: Associates>(ff: &FunctionField, items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for a in items {
        if !out.iter().any(|b| b.is_associate(ff, &a)) {
            out.push(a);
        }
    }
    out
}

fn has_norm(norm: &RatFunc, c: &Poly) -> bool {
    norm.is_poly() && norm.num().monic() == c.monic()
}

/// Elements `sum lambda_i omega_i` with `deg lambda_i <= caps[i]`, taken up
/// to multiplication by `k^*` (the last nonzero coefficient is 1).
pub struct CoefficientBox {
    q: u64,
    caps: Vec<i64>,
    digits: usize,
}

impl CoefficientBox {
    pub fn new(q: u32, caps: &[i64]) -> Self {
        let digits = caps.iter().map(|&c| (c + 1).max(0) as usize).sum();
        CoefficientBox { q: q as u64, caps: caps.to_vec(), digits }
    }

    /// Number of elements including `0` and all scalar multiples.
    pub fn size(&self) -> Power {
        Power { base: self.q, exp: self.digits as u64 }
    }

    /// Number of projective points, if it fits.
    pub fn projective_len(&self) -> Option<u64> {
        let total = self.size().to_u64()?;
        Some((total - 1) / (self.q - 1))
    }

    /// The `i`-th projective point: its last nonzero digit is 1.
    pub fn element(&self, i: u64) -> Vec<Poly> {
        // count points by the position of the last nonzero digit
        let mut i = i;
        let mut top = 0;
        let mut block = 1u64;
        while i >= block {
            i -= block;
            block *= self.q;
            top += 1;
        }
        let mut digits = vec![0u32; self.digits];
        digits[top] = 1;
        for d in digits.iter_mut().take(top) {
            *d = (i % self.q) as u32;
            i /= self.q;
        }
        let mut out = Vec::with_capacity(self.caps.len());
        let mut pos = 0;
        for &c in &self.caps {
            let len = (c + 1).max(0) as usize;
            out.push(Poly::new(self.q as u32, digits[pos..pos + len].to_vec()));
            pos += len;
        }
        out
    }

    /// Indices `i` with `keep(element(i))`, in order. Checks the deadline
    /// between chunks.
    pub fn filter<F>(&self, limits: &Limits, keep: F) -> Result<Vec<u64>, SolveError>
    where
        F: Fn(&[Poly]) -> bool + Sync,
    {
        let count = self.size();
        let len = match self.projective_len() {
            Some(l) if l <= limits.enumeration => l,
            _ => return Err(SolveError::Budget { count, limit: limits.enumeration }),
        };
        const CHUNK: u64 = 1 << 12;
        let mut hits = Vec::new();
        let mut start = 0;
        while start < len {
            limits.check()?;
            let end = (start + CHUNK).min(len);
            let mut found: Vec<u64> = (start..end).into_par_iter().filter(|&i| keep(&self.element(i))).collect();
            found.sort_unstable();
            hits.extend(found);
            start = end;
        }
        Ok(hits)
    }
}

fn require_nonconstant(c: &Poly) -> Result<(), SolveError> {
    if c.is_constant() {
        Err(SolveError::ConstantC)
    } else {
        Ok(())
    }
}

/// A norm equation over a fixed field with its unit lattice.
pub struct NormEquation<'a> {
    ff: &'a FunctionField,
    c: Poly,
    units: SUnitValMatrix,
    factors: Vec<(PrimeIdeal, i64)>,
}

impl<'a> NormEquation<'a> {
    pub fn new(ff: &'a FunctionField, c: &Poly) -> Result<Self, SolveError> {
        Self::with_limits(ff, c, &Limits::default())
    }

    pub fn with_limits(ff: &'a FunctionField, c: &Poly, limits: &Limits) -> Result<Self, SolveError> {
        require_nonconstant(c)?;
        let units = sval_mat_with_budget(ff, &infinite_places_set(ff), limits.classes)?;
        Ok(Self::with_units(ff, c, units))
    }

    /// Reuses a unit value matrix computed for `ff`.
    pub fn with_units(ff: &'a FunctionField, c: &Poly, units: SUnitValMatrix) -> Self {
        let factors = factor_in_of(ff, c);
        NormEquation { ff, c: c.clone(), units, factors }
    }

    pub fn field(&self) -> &FunctionField {
        self.ff
    }

    pub fn c(&self) -> &Poly {
        &self.c
    }

    pub fn units(&self) -> &SUnitValMatrix {
        &self.units
    }

    /// `cO_F = prod P^{v_P(c)}`.
    pub fn factors(&self) -> &[(PrimeIdeal, i64)] {
        &self.factors
    }

    pub fn bounds(&self) -> SolverBounds {
        let ff = self.ff;
        let n = ff.degree() as i64;
        let dc = self.c.deg_i64();
        let places = ff.infinite_places();
        let theta: Vec<Rational64> = (0..places.len())
            .map(|j| {
                let s: i64 = self.units.rows_i64().iter().map(|r| r[j].abs()).sum();
                Rational64::new(s, 2)
            })
            .collect();
        let shift = Rational64::new(dc, n);
        let big_theta =
            theta.iter().zip(places).map(|(t, p)| t / p.e as i64).max().unwrap_or_else(Rational64::zero) + shift;
        let deg_bounds = (0..n as usize).map(|i| (big_theta - ff.basis_norm(i)).floor().to_integer()).collect();
        let value_ranges = theta
            .iter()
            .zip(places)
            .map(|(t, p)| {
                let c = Rational64::new(p.e as i64 * dc, n);
                ((-t - c).ceil().to_integer(), (t - c).floor().to_integer())
            })
            .collect();
        SolverBounds { theta, big_theta, deg_bounds, value_ranges }
    }

    /// Search-space sizes of the three solvers.
    pub fn stats(&self) -> SearchStats {
        let b = self.bounds();
        let gp_count = CoefficientBox::new(self.ff.q(), &b.deg_bounds).size();
        let ideal_count: BigInt = self.factors.iter().map(|(_, v)| BigInt::from(v + 1)).product();
        // the value at the last infinite place is fixed by the degree condition
        let r = b.theta.len() - 1;
        let tuple_bound = b.theta[..r]
            .iter()
            .fold(ideal_count.clone(), |acc, t| acc * BigInt::from((t * 2).to_integer() + 1));
        SearchStats { gp_count, tuple_bound, ideal_count }
    }

    /// Exponent tuples `0 <= v_i <= v_{P_i}(c)` in mixed-radix order.
    fn finite_tuples(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for (_, m) in self.factors.iter().rev() {
            out = (0..=*m).flat_map(|v| out.iter().map(move |t| [vec![v], t.clone()].concat())).collect();
        }
        out
    }

    fn ideal_of(&self, tuple: &[i64]) -> FracIdeal {
        self.factors
            .iter()
            .zip(tuple)
            .filter(|(_, &v)| v > 0)
            .fold(FracIdeal::unit(self.ff), |acc, ((p, _), &v)| acc.mul(self.ff, &p.ideal.pow(self.ff, v)))
    }

    fn ideal_norm_matches(&self, tuple: &[i64]) -> bool {
        let q = self.ff.q();
        let norm = self
            .factors
            .iter()
            .zip(tuple)
            .fold(Poly::one(q), |acc, ((p, _), &v)| &acc * &p.p.pow((p.f as i64 * v) as u64));
        norm == self.c.monic()
    }

    fn accept(&self, t: &CompactRep) -> bool {
        cr_is_integral(self.ff, t) && has_norm(&cr_norm(self.ff, t), &self.c)
    }

    /// Exhaustive search over `deg lambda_i <= deg_bounds_i` in the standard
    /// representation.
    pub fn gaal_pohst(&self, limits: &Limits) -> Result<SolutionSet<FieldElement>, SolveError> {
        let t0 = Instant::now();
        let b = self.bounds();
        let bx = CoefficientBox::new(self.ff.q(), &b.deg_bounds);
        let ff = self.ff;
        let hits = bx.filter(limits, |lam| {
            let a = FieldElement::integral(lam.to_vec());
            has_norm(&ff.norm(&a), &self.c)
        })?;
        let found: Vec<FieldElement> = hits.iter().map(|&i| FieldElement::integral(bx.element(i))).collect();
        let solutions = dedup_associates(ff, found);
        let stats = SolveStats {
            candidates: bx.projective_len().unwrap_or(u64::MAX),
            comp_reps: 0,
            phases: vec![("enumerate".into(), t0.elapsed())],
        };
        Ok(SolutionSet { solutions, c: self.c.clone(), stats })
    }

    /// Compact representations for every admissible `(ideal, values)` pair.
    pub fn exhaustive_cr(&self, limits: &Limits) -> Result<SolutionSet<CompactRep>, SolveError> {
        let ff = self.ff;
        let d0 = distinguished_place(ff).ok_or(SolveError::NoDegreeOnePlace)?;
        let others = other_places(ff);
        let places = ff.infinite_places();
        let t0 = Instant::now();
        let b = self.bounds();
        let mut stats = SolveStats::default();
        let mut solutions: Vec<CompactRep> = Vec::new();
        for tuple in self.finite_tuples() {
            let ideal = self.ideal_of(&tuple);
            let fin_deg: i64 = self.factors.iter().zip(&tuple).map(|((p, _), v)| v * p.degree() as i64).sum();
            let ranges: Vec<(i64, i64)> = others.iter().map(|&i| b.value_ranges[i]).collect();
            if ranges.iter().any(|(lo, hi)| lo > hi) {
                continue;
            }
            let mut v: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            'values: loop {
                let inf_deg: i64 = others.iter().zip(&v).map(|(&i, x)| x * places[i].deg as i64).sum();
                let v0 = -(fin_deg + inf_deg);
                let (lo, hi) = b.value_ranges[d0];
                if lo <= v0 && v0 <= hi {
                    limits.check()?;
                    stats.candidates += 1;
                    stats.comp_reps += 1;
                    match comp_rep(ff, &ideal, &v) {
                        Ok(t) => {
                            if self.accept(&t) && !solutions.iter().any(|s| s.is_associate(ff, &t)) {
                                solutions.push(t);
                                break 'values;
                            }
                        }
                        Err(CrError::NotPrincipal) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
                // next value vector, lexicographic
                let mut k = v.len();
                loop {
                    if k == 0 {
                        break 'values;
                    }
                    k -= 1;
                    if v[k] < ranges[k].1 {
                        v[k] += 1;
                        for j in k + 1..v.len() {
                            v[j] = ranges[j].0;
                        }
                        break;
                    }
                }
            }
        }
        stats.phases.push(("search".into(), t0.elapsed()));
        Ok(SolutionSet { solutions, c: self.c.clone(), stats })
    }

    /// Principal ideal tests on the divisors of `cO_F` through the S-unit
    /// value matrix of `S_c`.
    pub fn index_calculus(&self, limits: &Limits) -> Result<SolutionSet<CompactRep>, SolveError> {
        let ff = self.ff;
        distinguished_place(ff).ok_or(SolveError::NoDegreeOnePlace)?;
        let mut stats = SolveStats::default();
        let t0 = Instant::now();
        let s = s_of(ff, &self.c);
        let msc = sval_mat_with_budget(ff, &s, limits.classes)?;
        stats.phases.push(("s-unit matrix".into(), t0.elapsed()));
        let t1 = Instant::now();
        let k0 = self.factors.len();
        let width = s.len();
        let rank = msc.rank();
        let a0: zmat::ZMat = (0..k0).map(|j| msc.m.iter().map(|row| row[j].clone()).collect()).collect();
        let lattice = IntLattice::new(self.units.m.clone());
        let others = other_places(ff);
        let mut solutions = Vec::new();
        for tuple in self.finite_tuples() {
            limits.check()?;
            stats.candidates += 1;
            if !self.ideal_norm_matches(&tuple) {
                continue;
            }
            let rhs: Vec<BigInt> = tuple.iter().map(|&v| BigInt::from(v)).collect();
            let Some((x, _)) = zmat::solve_integer_system(&a0, rank, &rhs) else {
                continue;
            };
            let v_inf: Vec<BigRational> = (k0..width)
                .map(|j| {
                    let s: BigInt = x.iter().zip(&msc.m).map(|(xi, row)| xi * &row[j]).sum();
                    BigRational::from_integer(s)
                })
                .collect();
            let v0 = cvp_babai(&lattice, &v_inf);
            let v: Vec<i64> = others
                .iter()
                .map(|&i| (v_inf[i].to_integer() - &v0[i]).to_i64().expect("value fits in i64"))
                .collect();
            let ideal = self.ideal_of(&tuple);
            stats.comp_reps += 1;
            let t = comp_rep(ff, &ideal, &v)?;
            if self.accept(&t) {
                solutions.push(t);
            }
        }
        stats.phases.push(("ideals".into(), t1.elapsed()));
        Ok(SolutionSet { solutions, c: self.c.clone(), stats })
    }
}

pub fn search_stats(ff: &FunctionField, c: &Poly) -> Result<SearchStats, SolveError> {
    Ok(NormEquation::new(ff, c)?.stats())
}

pub fn solve_gaal_pohst(ff: &FunctionField, c: &Poly, limits: &Limits) -> Result<SolutionSet<FieldElement>, SolveError> {
    NormEquation::with_limits(ff, c, limits)?.gaal_pohst(limits)
}

pub fn solve_exhaustive_cr(ff: &FunctionField, c: &Poly, limits: &Limits) -> Result<SolutionSet<CompactRep>, SolveError> {
    NormEquation::with_limits(ff, c, limits)?.exhaustive_cr(limits)
}

pub fn solve_index_calculus(ff: &FunctionField, c: &Poly, limits: &Limits) -> Result<SolutionSet<CompactRep>, SolveError> {
    NormEquation::with_limits(ff, c, limits)?.index_calculus(limits)
}

/// Whether `a / b` lies in `k^*`.
pub fn is_constant_multiple(ff: &FunctionField, a: &FieldElement, b: &FieldElement) -> bool {
    match ff.div(a, b) {
        Some(r) => {
            let c = r.coords();
            c[1..].iter().all(|x| x.is_zero()) && c[0].num().is_constant() && c[0].den().is_constant()
        }
        None => false,
    }
}

#[cfg(test)]
mod tests;
