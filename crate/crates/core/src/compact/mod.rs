//! Compact representations `alpha = mu * prod (1/beta_i)^(2^(l-i))` and
//! arithmetic on power products.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_poly, ParseError, Poly, RatFunc};
use crate::field::{FieldElement, FieldError, FunctionField};
use crate::ideal::{ideal_val, primes_above, FracIdeal, PrimeIdeal};
use crate::rr::{other_places, reduce_min, val_inf, Place, RrError};

/// Largest `||val_inf||` for which `cr_expand` builds the element.
pub const DEFAULT_EXPANSION_CAP: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Rr(#[from] RrError),
    #[error("ideal has no generator with the requested infinite values")]
    NotPrincipal,
    #[error("expansion refused: ||val_inf|| = {norm} exceeds cap {cap}")]
    ExpansionCap { norm: i64, cap: i64 },
    #[error("malformed compact representation: {0}")]
    Malformed(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactRep {
    pub mu: FieldElement,
    pub betas: Vec<FieldElement>,
}

/// `prod f_i^(e_i)` with nonzero factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    pub factors: Vec<(FieldElement, i64)>,
}

fn round_half_up(num: i64, den: i64) -> i64 {
    (2 * num + den).div_euclid(2 * den)
}

impl CompactRep {
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// The element `a` itself, with no `beta`s.
    pub fn trivial(a: FieldElement) -> Self {
        CompactRep { mu: a, betas: Vec::new() }
    }

    pub fn power_product(&self) -> PowerProduct {
        let l = self.betas.len();
        let mut factors = vec![(self.mu.clone(), 1)];
        for (i, b) in self.betas.iter().enumerate() {
            factors.push((b.clone(), -(1i64 << (l - 1 - i))));
        }
        PowerProduct { factors }
    }

    /// Largest height among the stored elements.
    pub fn max_beta_height(&self) -> usize {
        self.betas.iter().map(|b| b.height()).max().unwrap_or(0)
    }
}

impl PowerProduct {
    pub fn one(ff: &FunctionField) -> Self {
        PowerProduct { factors: vec![(ff.one(), 1)] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        PowerProduct { factors: self.factors.iter().chain(&other.factors).cloned().collect() }
    }

    pub fn pow(&self, k: i64) -> Self {
        PowerProduct { factors: self.factors.iter().map(|(f, e)| (f.clone(), e * k)).collect() }
    }

    pub fn value(&self, ff: &FunctionField, p: &Place) -> Result<i64, FieldError> {
        let mut s = 0;
        for (f, e) in &self.factors {
            if *e != 0 {
                s += e * p.valuation(ff, f)?;
            }
        }
        Ok(s)
    }

    /// Values at all infinite places.
    pub fn inf_values(&self, ff: &FunctionField) -> Result<Vec<i64>, FieldError> {
        let mut out = vec![0; ff.infinite_places().len()];
        for (f, e) in &self.factors {
            for (o, v) in out.iter_mut().zip(ff.inf_valuations(f)?) {
                *o += e * v;
            }
        }
        Ok(out)
    }

    pub fn norm(&self, ff: &FunctionField) -> RatFunc {
        self.factors.iter().fold(RatFunc::one(ff.q()), |acc, (f, e)| &acc * &ff.norm(f).pow(*e))
    }

    /// Primes of `k[x]` below the finite support of some factor.
    pub fn support_polys(&self, ff: &FunctionField) -> BTreeSet<Poly> {
        let mut out = BTreeSet::new();
        for (f, e) in &self.factors {
            if *e == 0 {
                continue;
            }
            out.extend(ff.support_polys(f));
        }
        out
    }

    /// Nonzero values at the primes above `polys`.
    pub fn finite_values(&self, ff: &FunctionField, polys: &BTreeSet<Poly>) -> BTreeMap<PrimeIdeal, i64> {
        let mut out = BTreeMap::new();
        for p in polys {
            for pr in primes_above(ff, p).iter() {
                let v: i64 = self.factors.iter().filter(|(_, e)| *e != 0).map(|(f, e)| e * pr.valuation(ff, f)).sum();
                if v != 0 {
                    out.insert(pr.clone(), v);
                }
            }
        }
        out
    }

    pub fn is_integral(&self, ff: &FunctionField) -> bool {
        self.finite_values(ff, &self.support_polys(ff)).values().all(|&v| v >= 0)
    }

    pub fn is_associate(&self, ff: &FunctionField, other: &Self) -> bool {
        let mut polys = self.support_polys(ff);
        polys.extend(other.support_polys(ff));
        self.finite_values(ff, &polys) == other.finite_values(ff, &polys)
    }

    pub fn expand(&self, ff: &FunctionField, cap: i64) -> Result<FieldElement, CrError> {
        let norm = self.inf_values(ff)?.iter().map(|v| v.abs()).max().unwrap_or(0);
        if norm > cap {
            return Err(CrError::ExpansionCap { norm, cap });
        }
        let mut acc = ff.one();
        for (f, e) in &self.factors {
            let p = ff.pow(f, *e).expect("nonzero factor");
            acc = ff.mul(&acc, &p);
        }
        Ok(acc)
    }
}

/// Compact representation of a generator `alpha` of `a` whose values at
/// the non-distinguished infinite places are `v`. Fails with
/// `NotPrincipal` when the result does not generate `a` with those values.
pub fn comp_rep(ff: &FunctionField, a: &FracIdeal, v: &[i64]) -> Result<CompactRep, CrError> {
    let t = comp_rep_unchecked(ff, a, v)?;
    let pp = t.power_product();
    let inf = pp.inf_values(ff)?;
    if other_places(ff).iter().zip(v).any(|(&i, &vi)| inf[i] != vi) {
        return Err(CrError::NotPrincipal);
    }
    let mut polys = pp.support_polys(ff);
    polys.extend(a.support_polys());
    for p in &polys {
        for pr in primes_above(ff, p).iter() {
            if pp.value(ff, &Place::Finite(pr.clone()))? != ideal_val(ff, a, pr) {
                return Err(CrError::NotPrincipal);
            }
        }
    }
    Ok(t)
}

/// The square-and-multiply construction without the final check.
pub fn comp_rep_unchecked(ff: &FunctionField, a: &FracIdeal, v: &[i64]) -> Result<CompactRep, CrError> {
    let r = other_places(ff).len();
    if v.len() != r {
        return Err(RrError::TargetLength { got: v.len(), expected: r }.into());
    }
    let mu = reduce_min(ff, a, &vec![0; r])?;
    let diff: Vec<i64> = val_inf(ff, &mu)?.iter().zip(v).map(|(m, a)| m - a).collect();
    let top = diff.iter().map(|d| d.unsigned_abs()).max().unwrap_or(0);
    let l = if top == 0 { 0 } else { top.ilog2() as usize + 1 };
    let mut b = FracIdeal::unit(ff);
    let mut prev: Option<FieldElement> = None;
    let mut v_beta = vec![0i64; r];
    let mut betas = Vec::with_capacity(l);
    for i in 1..=l {
        let scale = 1i64 << (l - i);
        let target: Vec<i64> = diff.iter().zip(&v_beta).map(|(d, vb)| round_half_up(*d, scale) - 2 * vb).collect();
        if let Some(p) = &prev {
            let c = b.scale(ff, &ff.inv(p).expect("nonzero"));
            b = c.mul(ff, &c);
        }
        let beta = reduce_min(ff, &b, &target)?;
        for (vb, x) in v_beta.iter_mut().zip(val_inf(ff, &beta)?) {
            *vb = 2 * *vb + x;
        }
        prev = Some(beta.clone());
        betas.push(beta);
    }
    Ok(CompactRep { mu, betas })
}

pub fn cr_value(ff: &FunctionField, t: &CompactRep, p: &Place) -> Result<i64, FieldError> {
    t.power_product().value(ff, p)
}

pub fn cr_norm(ff: &FunctionField, t: &CompactRep) -> RatFunc {
    t.power_product().norm(ff)
}

pub fn cr_is_integral(ff: &FunctionField, t: &CompactRep) -> bool {
    t.power_product().is_integral(ff)
}

pub fn cr_associate(ff: &FunctionField, a: &CompactRep, b: &CompactRep) -> bool {
    a.power_product().is_associate(ff, &b.power_product())
}

pub fn cr_mul(a: &CompactRep, b: &CompactRep) -> PowerProduct {
    a.power_product().mul(&b.power_product())
}

pub fn cr_pow(t: &CompactRep, k: i64) -> PowerProduct {
    t.power_product().pow(k)
}

pub fn cr_expand(ff: &FunctionField, t: &CompactRep) -> Result<FieldElement, CrError> {
    t.power_product().expand(ff, DEFAULT_EXPANSION_CAP)
}

#[derive(Serialize, Deserialize)]
struct Wire {
    mu: Vec<String>,
    betas: Vec<Vec<String>>,
    l: usize,
}

fn element_strings(a: &FieldElement) -> Vec<String> {
    a.coords().iter().map(|c| c.to_string()).collect()
}

fn parse_coord(s: &str, q: u32) -> Result<RatFunc, CrError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('(') {
        if let Some((num, den)) = rest.strip_suffix(')').and_then(|r| r.split_once(")/(")) {
            let den = parse_poly(den, q)?;
            if den.is_zero() {
                return Err(CrError::Malformed("zero denominator".into()));
            }
            return Ok(RatFunc::new(parse_poly(num, q)?, den));
        }
    }
    Ok(RatFunc::from_poly(parse_poly(s, q)?))
}

fn parse_element(ff: &FunctionField, v: &[String]) -> Result<FieldElement, CrError> {
    if v.len() != ff.degree() {
        return Err(CrError::Malformed(format!("expected {} coordinates, got {}", ff.degree(), v.len())));
    }
    let coords = v.iter().map(|s| parse_coord(s, ff.q())).collect::<Result<Vec<_>, _>>()?;
    let e = FieldElement::from_coords(&coords);
    if e.is_zero() {
        return Err(CrError::Malformed("zero factor".into()));
    }
    Ok(e)
}

impl CompactRep {
    pub fn to_json(&self) -> serde_json::Value {
        let w = Wire { mu: element_strings(&self.mu), betas: self.betas.iter().map(element_strings).collect(), l: self.betas.len() };
        serde_json::to_value(w).expect("plain data")
    }

    pub fn from_json(ff: &FunctionField, v: &serde_json::Value) -> Result<Self, CrError> {
        let w: Wire = serde_json::from_value(v.clone()).map_err(|e| CrError::Malformed(e.to_string()))?;
        if w.l != w.betas.len() {
            return Err(CrError::Malformed(format!("l = {} but {} betas", w.l, w.betas.len())));
        }
        Ok(CompactRep {
            mu: parse_element(ff, &w.mu)?,
            betas: w.betas.iter().map(|b| parse_element(ff, b)).collect::<Result<_, _>>()?,
        })
    }
}

#[cfg(test)]
mod tests;
