use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Poly, RatFunc};

/// An element of `F` as `(sum_i num_i b_i) / den` over some fixed basis
/// `b_1..b_n` (the reduced integral basis for public values). `den` is
/// monic and coprime to the content of `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: Vec<Poly>,
    den: Poly,
}

impl FieldElement {
    pub fn new(num: Vec<Poly>, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let q = den.modulus();
        if num.iter().all(|p| p.is_zero()) {
            return FieldElement { num, den: Poly::one(q) };
        }
        let mut g = den.clone();
        for p in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(p);
        }
        let lc = den.lc();
        let inv = crate::arith::ff::inv_mod(lc, q);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.iter().map(|p| p.exact_div(&g)).collect(), den.exact_div(&g))
        };
        if inv == 1 {
            FieldElement { num, den }
        } else {
            FieldElement { num: num.iter().map(|p| p.scale(inv)).collect(), den: den.scale(inv) }
        }
    }

    pub fn integral(num: Vec<Poly>) -> Self {
        let q = num[0].modulus();
        FieldElement { num, den: Poly::one(q) }
    }

    pub fn zero(q: u32, n: usize) -> Self {
        FieldElement { num: vec![Poly::zero(q); n], den: Poly::one(q) }
    }

    pub fn unit_vector(q: u32, n: usize, i: usize) -> Self {
        let mut num = vec![Poly::zero(q); n];
        num[i] = Poly::one(q);
        FieldElement { num, den: Poly::one(q) }
    }

    pub fn from_coords(coords: &[RatFunc]) -> Self {
        let q = coords[0].modulus();
        let mut d = Poly::one(q);
        for c in coords {
            d = d.lcm(c.den());
        }
        let num = coords.iter().map(|c| c.num() * &d.exact_div(c.den())).collect();
        FieldElement::new(num, d)
    }

    pub fn coords(&self) -> Vec<RatFunc> {
        self.num.iter().map(|p| RatFunc::new(p.clone(), self.den.clone())).collect()
    }

    pub fn num(&self) -> &[Poly] {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn modulus(&self) -> u32 {
        self.den.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|p| p.is_zero())
    }

    /// All coordinates are polynomials.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Largest coordinate degree of the numerator and the denominator degree.
    pub fn height(&self) -> usize {
        self.num.iter().filter_map(|p| p.degree()).max().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.den.lcm(&other.den);
        let a = l.exact_div(&self.den);
        let b = l.exact_div(&other.den);
        let num = self.num.iter().zip(&other.num).map(|(x, y)| &(x * &a) + &(y * &b)).collect();
        FieldElement::new(num, l)
    }

    pub fn neg(&self) -> Self {
        FieldElement { num: self.num.iter().map(|p| -p).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let num = self.num.iter().map(|p| p * c.num()).collect();
        FieldElement::new(num, &self.den * c.den())
    }

    pub fn scale_poly(&self, c: &Poly) -> Self {
        FieldElement::new(self.num.iter().map(|p| p * c).collect(), self.den.clone())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p:?}")?;
        }
        write!(f, ")")?;
        if !self.den.is_one() {
            write!(f, " / ({:?})", self.den)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    q: u32,
    num: Vec<Vec<u32>>,
    den: Vec<u32>,
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            q: self.modulus(),
            num: self.num.iter().map(|p| p.coeffs().to_vec()).collect(),
            den: self.den.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.num.is_empty() {
            return Err(serde::de::Error::custom("element with no coordinates"));
        }
        let den = Poly::new(w.q, w.den);
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(FieldElement::new(w.num.into_iter().map(|c| Poly::new(w.q, c)).collect(), den))
    }
}
