//! Global function fields `F = k(x)[t]/(f)` with `k = F_q`, `q` prime.

pub mod element;
pub mod order;
pub mod puiseux;
pub mod reduce;

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64;
use parking_lot::RwLock;
use thiserror::Error;

use crate::arith::ff::is_prime;
use crate::arith::{parse_bivariate, ParseError, Poly, RatFunc};
use crate::ideal::PrimeIdeal;
use crate::linalg::polymat::{det_poly, inverse_rat, vec_mul_rat, PolyMat, RatMat};

pub use element::FieldElement;
pub use order::MultTable;
pub use puiseux::Series;

use order::Order;
use reduce::InfEval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("q = {0} is not prime")]
    NotPrime(u32),
    #[error("defining polynomial must have degree at least 1 in t")]
    Constant,
    #[error("defining polynomial is not monic in t")]
    NotMonic,
    #[error("wild ramification excluded: gcd(n, q) = gcd({n}, {q}) != 1")]
    WildDegree { n: usize, q: u32 },
    #[error("wild ramification at infinity")]
    WildAtInfinity,
    #[error("defining polynomial is inseparable (zero discriminant)")]
    Inseparable,
    #[error("defining polynomial is reducible")]
    Reducible,
    #[error("full constant field is larger than F_q")]
    ConstantFieldExtension,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Basis of the maximal order over the power basis.
#[derive(Clone, Debug)]
pub struct OrderBasis {
    /// Rows are basis elements in power coordinates.
    pub basis: RatMat,
    pub mult_table: MultTable,
    pub disc: Poly,
}

/// Reduced integral basis `omega_1 = 1, ..., omega_n`.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    /// Rows are basis elements in power coordinates.
    pub basis: RatMat,
    /// `||omega_i||`, non-decreasing.
    pub inf_norms: Vec<Rational64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfinitePlace {
    pub index: usize,
    pub e: usize,
    pub deg: usize,
}

/// The field together with its maximal order, reduced basis and infinite
/// places. Immutable after construction. Elements are written over the
/// reduced basis.
#[derive(Debug)]
pub struct FunctionField {
    q: u32,
    f: Vec<Poly>,
    n: usize,
    cf: i64,
    order: OrderBasis,
    reduced: ReducedBasis,
    red: Order,
    nu: Vec<i64>,
    ev: InfEval,
    places: Vec<InfinitePlace>,
    genus: usize,
    primes: RwLock<HashMap<Poly, Arc<Vec<PrimeIdeal>>>>,
}

/// `max_i ceil(deg a_i / i)` over the non-leading coefficients, indexed
/// by the codegree `i = n - (power of t)`.
pub fn size_parameter(f: &[Poly]) -> i64 {
    let n = f.len() - 1;
    (0..n)
        .filter_map(|j| f[j].degree().map(|d| (d as i64, (n - j) as i64)))
        .map(|(d, i)| (d + i - 1).div_euclid(i))
        .max()
        .unwrap_or(0)
        .max(0)
}

/// Parse and validate a field given by `q` and `f(x, t)`.
pub fn build_field(q: u32, f: &str) -> Result<FunctionField, FieldError> {
    if !is_prime(q as u64) {
        return Err(FieldError::NotPrime(q));
    }
    FunctionField::new(q, parse_bivariate(f, q)?)
}

impl FunctionField {
    pub fn new(q: u32, f: Vec<Poly>) -> Result<Self, FieldError> {
        if !is_prime(q as u64) {
            return Err(FieldError::NotPrime(q));
        }
        if f.len() < 2 {
            return Err(FieldError::Constant);
        }
        let n = f.len() - 1;
        if !f[n].is_one() {
            return Err(FieldError::NotMonic);
        }
        if n.is_multiple_of(q as usize) {
            return Err(FieldError::WildDegree { n, q });
        }
        if f[0].is_zero() {
            // t divides f
            return Err(FieldError::Reducible);
        }
        if Order::power(&f).discriminant().is_zero() {
            return Err(FieldError::Inseparable);
        }
        let cf = size_parameter(&f);
        let exp = puiseux::expand(q, &f, cf)?;
        let places = exp
            .places
            .iter()
            .enumerate()
            .map(|(index, p)| InfinitePlace { index, e: p.e, deg: p.f })
            .collect();
        let ev = InfEval::new(exp, n);
        let (mo, disc) = order::maximal_order(&f);
        let order = OrderBasis { basis: mo.basis.clone(), mult_table: mo.mult.clone(), disc };
        let start: Vec<FieldElement> = mo.basis.iter().map(|r| FieldElement::from_coords(r)).collect();
        let twist = vec![0; ev.num_places()];
        let (mut red_basis, nu) = reduce::reduce(&ev, |b| ev.eval(b), start, &twist)?;
        if nu.iter().filter(|&&v| v <= 0).count() != 1 {
            return Err(FieldError::ConstantFieldExtension);
        }
        red_basis[0] = FieldElement::unit_vector(q, n, 0);
        let e_big = ev.e_big();
        let genus = reduce::genus(&nu, e_big)?;
        let rows: RatMat = red_basis.iter().map(|b| b.coords()).collect();
        let red = Order::new(&f, rows.clone());
        let inf_norms = nu.iter().map(|&v| Rational64::new(v, e_big)).collect();
        Ok(FunctionField {
            q,
            f,
            n,
            cf,
            order,
            reduced: ReducedBasis { basis: rows, inf_norms },
            red,
            nu,
            ev,
            places,
            genus,
            primes: RwLock::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &[Poly] {
        &self.f
    }

    pub fn size_parameter(&self) -> i64 {
        self.cf
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn maximal_order(&self) -> &OrderBasis {
        &self.order
    }

    pub fn reduced_basis(&self) -> &ReducedBasis {
        &self.reduced
    }

    pub fn mult_table(&self) -> &MultTable {
        &self.red.mult
    }

    pub fn infinite_places(&self) -> &[InfinitePlace] {
        &self.places
    }

    /// `E` with `w^E = 1/x` in the common expansion ring.
    pub fn ramification_lcm(&self) -> i64 {
        self.ev.e_big()
    }

    /// `E * ||omega_i||`.
    pub fn scaled_norms(&self) -> &[i64] {
        &self.nu
    }

    pub fn basis_norm(&self, i: usize) -> Rational64 {
        self.reduced.inf_norms[i]
    }

    pub(crate) fn inf_eval(&self) -> &InfEval {
        &self.ev
    }

    pub(crate) fn order_ops(&self) -> &Order {
        &self.red
    }

    pub(crate) fn prime_cache(&self) -> &RwLock<HashMap<Poly, Arc<Vec<PrimeIdeal>>>> {
        &self.primes
    }

    // ---- construction of elements ----

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.q, self.n)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::unit_vector(self.q, self.n, 0)
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        FieldElement::unit_vector(self.q, self.n, i)
    }

    pub fn from_ratfunc(&self, r: &RatFunc) -> FieldElement {
        self.one().scale(r)
    }

    pub fn from_poly(&self, p: &Poly) -> FieldElement {
        self.one().scale_poly(p)
    }

    pub fn x(&self) -> FieldElement {
        self.from_poly(&Poly::x(self.q))
    }

    /// The generator `t` of `F/k(x)`.
    pub fn generator(&self) -> FieldElement {
        let mut c = vec![RatFunc::zero(self.q); self.n];
        if self.n > 1 {
            c[1] = RatFunc::one(self.q);
        } else {
            c[0] = RatFunc::from_poly(-&self.f[0]);
        }
        self.from_power(&c)
    }

    pub fn from_power(&self, coords: &[RatFunc]) -> FieldElement {
        FieldElement::from_coords(&vec_mul_rat(coords, &self.red.inv))
    }

    pub fn to_power(&self, a: &FieldElement) -> Vec<RatFunc> {
        vec_mul_rat(&a.coords(), &self.red.basis)
    }

    /// Element from integral coordinates over the maximal-order basis.
    pub fn from_order_coords(&self, c: &[Poly]) -> FieldElement {
        let rc: Vec<RatFunc> = c.iter().map(|p| RatFunc::from_poly(p.clone())).collect();
        self.from_power(&vec_mul_rat(&rc, &self.order.basis))
    }

    // ---- arithmetic ----

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(self.red.mul(a.num(), b.num()), a.den() * b.den())
    }

    /// Product of integral coordinate vectors.
    pub fn mul_integral(&self, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
        self.red.mul(a, b)
    }

    /// Rows: coordinates of `num(a) * omega_i`.
    pub fn mul_matrix_num(&self, a: &FieldElement) -> PolyMat {
        (0..self.n).map(|i| self.red.mul(a.num(), self.basis_element(i).num())).collect()
    }

    pub fn norm(&self, a: &FieldElement) -> RatFunc {
        if a.is_zero() {
            return RatFunc::zero(self.q);
        }
        let d = det_poly(&self.mul_matrix_num(a));
        RatFunc::new(d, a.den().pow(self.n as u64))
    }

    /// Monic primes of `k[x]` below every finite place where `a` has a
    /// nonzero value (possibly more).
    pub fn support_polys(&self, a: &FieldElement) -> Vec<Poly> {
        if a.is_zero() {
            return Vec::new();
        }
        let d = det_poly(&self.mul_matrix_num(a));
        let mut ps: Vec<Poly> = d.factor().factors.into_iter().map(|f| f.0).collect();
        ps.extend(a.den().factor().factors.into_iter().map(|f| f.0));
        ps.sort();
        ps.dedup();
        ps
    }

    pub fn trace(&self, a: &FieldElement) -> RatFunc {
        let tr = self.red.traces();
        let s = a.num().iter().zip(&tr).fold(Poly::zero(self.q), |acc, (x, t)| &acc + &(x * t));
        RatFunc::new(s, a.den().clone())
    }

    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let m: RatMat = self
            .mul_matrix_num(a)
            .into_iter()
            .map(|r| r.into_iter().map(RatFunc::from_poly).collect())
            .collect();
        let mi = inverse_rat(&m)?;
        let row = mi[0].clone();
        Some(FieldElement::from_coords(&row).scale_poly(a.den()))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        Some(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Option<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        Some(acc)
    }

    // ---- infinite places ----

    /// Expansion of `a != 0` at every infinite place in `w` with `w^E = 1/x`.
    pub fn expansions(&self, a: &FieldElement) -> Result<Vec<Series>, FieldError> {
        let p = FieldElement::from_coords(&self.to_power(a));
        self.ev.eval(&p)
    }

    /// `v_P(a)` at every infinite place.
    pub fn inf_valuations(&self, a: &FieldElement) -> Result<Vec<i64>, FieldError> {
        let e_big = self.ev.e_big();
        Ok(self
            .expansions(a)?
            .iter()
            .zip(&self.places)
            .map(|(s, p)| {
                let v = s.lead_exp() * p.e as i64;
                debug_assert_eq!(v % e_big, 0);
                v / e_big
            })
            .collect())
    }

    pub fn inf_valuation(&self, a: &FieldElement, place: usize) -> Result<i64, FieldError> {
        Ok(self.inf_valuations(a)?[place])
    }

    /// `||a|| = max_P -v_P(a)/e_P`.
    pub fn max_norm(&self, a: &FieldElement) -> Result<Rational64, FieldError> {
        let e_big = self.ev.e_big();
        let m = self.expansions(a)?.iter().map(|s| -s.lead_exp()).max().unwrap();
        Ok(Rational64::new(m, e_big))
    }

    /// `||sum lambda_i omega_i||` from coefficient degrees alone.
    pub fn max_norm_from_coords(&self, a: &FieldElement) -> Option<Rational64> {
        let dd = a.den().deg_i64();
        a.num()
            .iter()
            .zip(&self.reduced.inf_norms)
            .filter_map(|(p, w)| p.degree().map(|d| Rational64::from_integer(d as i64 - dd) + w))
            .max()
    }

    /// Basis of the Riemann-Roch space of `m` times the pole divisor of `x`.
    pub fn dim_multiple_of_infinity(&self, m: i64) -> i64 {
        reduce::dim_multiple(&self.nu, self.ev.e_big(), m)
    }
}

#[cfg(test)]
pub(crate) mod tests;
