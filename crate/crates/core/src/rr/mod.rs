//! Divisors, Riemann-Roch spaces, principality and minima of ideals.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::Poly;
use crate::field::reduce::reduce_with;
use crate::field::{FieldElement, FieldError, FunctionField, Series};
use crate::ideal::{primes_above, FracIdeal, PrimeIdeal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RrError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("no infinite place of degree one")]
    NoDegreeOnePlace,
    #[error("target has length {got}, expected {expected}")]
    TargetLength { got: usize, expected: usize },
    #[error("no nontrivial Riemann-Roch space in the search window")]
    NoMinimum,
}

/// `sum n_P P` over finite primes and infinite places (by index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    pub finite: BTreeMap<PrimeIdeal, i64>,
    pub infinite: Vec<i64>,
}

impl Divisor {
    pub fn zero(ff: &FunctionField) -> Self {
        Divisor { finite: BTreeMap::new(), infinite: vec![0; ff.infinite_places().len()] }
    }

    pub fn prime(ff: &FunctionField, p: &PrimeIdeal, n: i64) -> Self {
        let mut d = Divisor::zero(ff);
        if n != 0 {
            d.finite.insert(p.clone(), n);
        }
        d
    }

    pub fn infinite_place(ff: &FunctionField, index: usize, n: i64) -> Self {
        let mut d = Divisor::zero(ff);
        d.infinite[index] = n;
        d
    }

    pub fn degree(&self, ff: &FunctionField) -> i64 {
        let fin: i64 = self.finite.iter().map(|(p, n)| n * p.degree() as i64).sum();
        let inf: i64 = self.infinite.iter().zip(ff.infinite_places()).map(|(n, p)| n * p.deg as i64).sum();
        fin + inf
    }

    pub fn height(&self, ff: &FunctionField) -> i64 {
        let fin: i64 = self.finite.iter().map(|(p, n)| n.abs() * p.degree() as i64).sum();
        let inf: i64 = self.infinite.iter().zip(ff.infinite_places()).map(|(n, p)| n.abs() * p.deg as i64).sum();
        fin + inf
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut finite = self.finite.clone();
        for (p, n) in &other.finite {
            let e = finite.entry(p.clone()).or_insert(0);
            *e += n;
            if *e == 0 {
                finite.remove(p);
            }
        }
        let infinite = self.infinite.iter().zip(&other.infinite).map(|(a, b)| a + b).collect();
        Divisor { finite, infinite }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Divisor { finite: BTreeMap::new(), infinite: vec![0; self.infinite.len()] };
        }
        Divisor {
            finite: self.finite.iter().map(|(p, n)| (p.clone(), n * k)).collect(),
            infinite: self.infinite.iter().map(|n| n * k).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.infinite.iter().all(|&n| n == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.finite.values().all(|&n| n >= 0) && self.infinite.iter().all(|&n| n >= 0)
    }

    /// `prod P^{-n_P}` over the finite part: the elements with
    /// `v_P >= -n_P` at every finite prime.
    pub fn finite_ideal(&self, ff: &FunctionField) -> FracIdeal {
        let mut acc = FracIdeal::unit(ff);
        for (p, n) in &self.finite {
            acc = acc.mul(ff, &p.ideal.pow(ff, -n));
        }
        acc
    }
}

/// A place of `F`: a finite prime or an infinite place by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(PrimeIdeal),
    Infinite(usize),
}

impl Place {
    pub fn degree(&self, ff: &FunctionField) -> usize {
        match self {
            Place::Finite(p) => p.degree(),
            Place::Infinite(i) => ff.infinite_places()[*i].deg,
        }
    }

    /// `n P` as a divisor.
    pub fn divisor(&self, ff: &FunctionField, n: i64) -> Divisor {
        match self {
            Place::Finite(p) => Divisor::prime(ff, p, n),
            Place::Infinite(i) => Divisor::infinite_place(ff, *i, n),
        }
    }

    pub fn valuation(&self, ff: &FunctionField, a: &FieldElement) -> Result<i64, FieldError> {
        match self {
            Place::Finite(p) => Ok(p.valuation(ff, a)),
            Place::Infinite(i) => ff.inf_valuation(a, *i),
        }
    }

    /// Coefficient of this place in `d`.
    pub fn coefficient(&self, d: &Divisor) -> i64 {
        match self {
            Place::Finite(p) => d.finite.get(p).copied().unwrap_or(0),
            Place::Infinite(i) => d.infinite[*i],
        }
    }
}

/// All places of degree exactly `d`, finite ones first.
pub fn places_of_degree(ff: &FunctionField, d: usize) -> Vec<Place> {
    let mut out = Vec::new();
    for dp in (1..=d).filter(|dp| d.is_multiple_of(*dp)) {
        for p in Poly::irreducibles_of_degree(ff.q(), dp) {
            for pr in primes_above(ff, &p).iter() {
                if pr.degree() == d {
                    out.push(Place::Finite(pr.clone()));
                }
            }
        }
    }
    for (i, p) in ff.infinite_places().iter().enumerate() {
        if p.deg == d {
            out.push(Place::Infinite(i));
        }
    }
    out
}

/// Divisor of a nonzero element.
pub fn div_element(ff: &FunctionField, a: &FieldElement) -> Result<Divisor, FieldError> {
    let mut d = Divisor::zero(ff);
    for p in ff.support_polys(a) {
        for pr in primes_above(ff, &p).iter() {
            let v = pr.valuation(ff, a);
            if v != 0 {
                d.finite.insert(pr.clone(), v);
            }
        }
    }
    d.infinite = ff.inf_valuations(a)?;
    Ok(d)
}

/// Basis of `{a in I : v_P(a) >= -n_P at infinite P}`.
pub fn rr_basis_of_ideal(ff: &FunctionField, ideal: &FracIdeal, inf: &[i64]) -> Result<Vec<FieldElement>, FieldError> {
    let basis = ideal.basis();
    let series = expand_all(ff, &basis)?;
    rr_basis_with(ff, basis, series, inf)
}

/// Expansions at infinity of each element.
pub fn expand_all(ff: &FunctionField, basis: &[FieldElement]) -> Result<Vec<Vec<Series>>, FieldError> {
    basis.iter().map(|b| ff.expansions(b)).collect()
}

/// As [`rr_basis_of_ideal`] for an ideal basis with known expansions.
pub fn rr_basis_with(ff: &FunctionField, basis: Vec<FieldElement>, series: Vec<Vec<Series>>, inf: &[i64]) -> Result<Vec<FieldElement>, FieldError> {
    let e_big = ff.ramification_lcm();
    let twist: Vec<i64> = inf.iter().zip(ff.infinite_places()).map(|(n, p)| n * e_big / p.e as i64).collect();
    let (basis, nu) = reduce_with(ff.inf_eval(), |b| ff.expansions(b), basis, series, &twist)?;
    let mut out = Vec::new();
    for (b, v) in basis.iter().zip(&nu) {
        let top = (-v).div_euclid(e_big);
        for j in 0..=top {
            out.push(b.scale_poly(&Poly::monomial(ff.q(), 1, j as usize)));
        }
    }
    Ok(out)
}

/// `k`-basis of `L(D)`.
pub fn rr_basis(ff: &FunctionField, d: &Divisor) -> Result<Vec<FieldElement>, FieldError> {
    rr_basis_of_ideal(ff, &d.finite_ideal(ff), &d.infinite)
}

pub fn rr_dim(ff: &FunctionField, d: &Divisor) -> Result<usize, FieldError> {
    Ok(rr_basis(ff, d)?.len())
}

/// A generator `a` with `div(a) = D`, if `D` is principal.
pub fn is_principal(ff: &FunctionField, d: &Divisor) -> Result<Option<FieldElement>, FieldError> {
    if d.degree(ff) != 0 {
        return Ok(None);
    }
    let basis = rr_basis(ff, d)?;
    Ok(basis.first().map(|g| ff.inv(g).expect("nonzero")))
}

/// Index of the distinguished degree-one infinite place.
pub fn distinguished_place(ff: &FunctionField) -> Option<usize> {
    ff.infinite_places().iter().position(|p| p.deg == 1)
}

/// Indices of the other infinite places, in order.
pub fn other_places(ff: &FunctionField) -> Vec<usize> {
    let d0 = distinguished_place(ff);
    (0..ff.infinite_places().len()).filter(|&i| Some(i) != d0).collect()
}

/// Values at the non-distinguished infinite places.
pub fn val_inf(ff: &FunctionField, a: &FieldElement) -> Result<Vec<i64>, FieldError> {
    let all = ff.inf_valuations(a)?;
    Ok(other_places(ff).iter().map(|&i| all[i]).collect())
}

fn lex_key(a: &FieldElement) -> (Vec<Vec<u32>>, Vec<u32>) {
    (a.num().iter().map(|p| p.coeffs().to_vec()).collect(), a.den().coeffs().to_vec())
}

/// A minimum of `I` close to `v` (values at the non-distinguished places).
pub fn reduce_min(ff: &FunctionField, ideal: &FracIdeal, v: &[i64]) -> Result<FieldElement, RrError> {
    let d0 = distinguished_place(ff).ok_or(RrError::NoDegreeOnePlace)?;
    let others = other_places(ff);
    if v.len() != others.len() {
        return Err(RrError::TargetLength { got: v.len(), expected: others.len() });
    }
    let places = ff.infinite_places();
    let mut inf = vec![0i64; places.len()];
    for (&i, &vi) in others.iter().zip(v) {
        inf[i] = -vi;
    }
    let norm = ideal.norm();
    let deg_i = norm.num().deg_i64() - norm.den().deg_i64();
    let deg_d: i64 = -deg_i + inf.iter().zip(places).map(|(n, p)| n * p.deg as i64).sum::<i64>();
    for l in -deg_d..=-deg_d + ff.genus() as i64 {
        inf[d0] = l;
        let basis = rr_basis_of_ideal(ff, ideal, &inf)?;
        if let Some(g) = basis.into_iter().min_by_key(lex_key) {
            return Ok(g);
        }
    }
    Err(RrError::NoMinimum)
}
