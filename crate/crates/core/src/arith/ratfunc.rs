//! Rational functions in `k(x)` kept in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::ff::inv_mod;
use super::poly::Poly;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let q = num.modulus();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(q) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lc = d.lc();
        if lc != 1 {
            let inv = inv_mod(lc, q);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        let q = p.modulus();
        RatFunc { num: p, den: Poly::one(q) }
    }

    pub fn zero(q: u32) -> Self {
        RatFunc::from_poly(Poly::zero(q))
    }

    pub fn one(q: u32) -> Self {
        RatFunc::from_poly(Poly::one(q))
    }

    pub fn constant(q: u32, c: u32) -> Self {
        RatFunc::from_poly(Poly::constant(q, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn modulus(&self) -> u32 {
        self.num.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// `h(num/den) = max(deg num, deg den)`, with `h(0) = 0`.
    pub fn height(&self) -> u64 {
        if self.is_zero() {
            return 0;
        }
        self.num.degree().unwrap().max(self.den.degree().unwrap()) as u64
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.degree().unwrap() as i64 - self.den.degree().unwrap() as i64)
        }
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: u32) -> RatFunc {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        if e >= 0 {
            RatFunc { num: self.num.pow(e as u64), den: self.den.pow(e as u64) }
        } else {
            self.inv().pow(-e)
        }
    }

    /// The leading coefficient `lc(num)` (den is monic).
    pub fn lc(&self) -> u32 {
        self.num.lc()
    }

    /// Monic representative of `self * k^x` (zero stays zero).
    pub fn monic(&self) -> RatFunc {
        if self.is_zero() {
            return self.clone();
        }
        RatFunc { num: self.num.monic(), den: self.den.clone() }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.modulus());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn heights() {
        let q = 3;
        assert_eq!(RatFunc::one(q).height(), 0);
        let r = RatFunc::new(Poly::new(q, vec![1, 0, 1]), Poly::x(q));
        assert_eq!(r.height(), 2);
        assert_eq!(RatFunc::from_poly(Poly::x(q).pow(3)).height(), 3);
        assert_eq!(RatFunc::zero(q).height(), 0);
    }

    fn arb(q: u32) -> impl Strategy<Value = RatFunc> {
        (proptest::collection::vec(0..q, 0..5), proptest::collection::vec(0..q, 1..5)).prop_filter_map(
            "nonzero den",
            move |(n, d)| {
                let d = Poly::new(q, d);
                if d.is_zero() {
                    None
                } else {
                    Some(RatFunc::new(Poly::new(q, n), d))
                }
            },
        )
    }

    proptest! {
        #[test]
        fn height_subadditive(a in arb(5), b in arb(5)) {
            prop_assert!((&a * &b).height() <= a.height() + b.height());
        }

        #[test]
        fn canonical_form(a in arb(7), b in arb(7)) {
            let s = &a + &b;
            prop_assert!(s.den().is_monic());
            prop_assert!(s.num().gcd(s.den()).is_one());
            prop_assert_eq!(&s - &b, a);
        }
    }
}
