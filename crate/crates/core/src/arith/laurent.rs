//! Truncated Laurent series `sum_{e >= val} c_e w^e + O(w^prec)` over a
//! finite field.

use super::ff::{FiniteField, PrimeField};
use super::ratfunc::RatFunc;

/// Coefficients are stored densely from `val` up to (excluding) `prec`.
/// After normalization the first stored coefficient is nonzero, or the
/// series is zero to the known precision (then `val == prec`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries<E> {
    val: i64,
    coeffs: Vec<E>,
    prec: i64,
}

impl<E: Clone + PartialEq> LaurentSeries<E> {
    pub fn zero(prec: i64) -> Self {
        LaurentSeries { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first stored coefficient (== `prec` for zero).
    pub fn lead_exp(&self) -> i64 {
        self.val
    }

    /// Valuation, or `None` if the series vanishes to the known precision.
    pub fn order(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<E: Clone + PartialEq> LaurentSeries<E> {
    pub fn from_dense<F: FiniteField<El = E>>(f: &F, val: i64, coeffs: Vec<E>, prec: i64) -> Self {
        assert!(val + coeffs.len() as i64 >= prec || coeffs.len() as i64 == prec - val);
        let mut s = LaurentSeries { val, coeffs, prec };
        s.coeffs.truncate((prec - val).max(0) as usize);
        s.normalize(f);
        s
    }

    /// Series from sparse `(exponent, coefficient)` terms, truncated at `prec`.
    pub fn from_terms<F: FiniteField<El = E>>(f: &F, terms: &[(i64, E)], prec: i64) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(prec).min(prec);
        let mut coeffs = vec![f.zero(); (prec - lo).max(0) as usize];
        for (e, c) in terms {
            if *e < prec {
                let i = (e - lo) as usize;
                coeffs[i] = f.add(&coeffs[i], c);
            }
        }
        let mut s = LaurentSeries { val: lo, coeffs, prec };
        s.normalize(f);
        s
    }

    fn normalize<F: FiniteField<El = E>>(&mut self, f: &F) {
        let skip = self.coeffs.iter().take_while(|c| f.is_zero(c)).count();
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.val += skip as i64;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
    }

    /// Coefficient of `w^e`; `e` must be below the precision.
    pub fn coeff<F: FiniteField<El = E>>(&self, f: &F, e: i64) -> E {
        assert!(e < self.prec, "coefficient beyond known precision");
        if e < self.val {
            f.zero()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    pub fn truncate<F: FiniteField<El = E>>(&self, f: &F, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        let keep = (prec - self.val).max(0) as usize;
        let mut s = LaurentSeries { val: self.val.min(prec), coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec(), prec };
        s.normalize(f);
        s
    }

    pub fn add<F: FiniteField<El = E>>(&self, f: &F, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let val = self.val.min(other.val).min(prec);
        let mut coeffs = vec![f.zero(); (prec - val) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e >= prec {
                break;
            }
            coeffs[(e - val) as usize] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let e = other.val + i as i64;
            if e >= prec {
                break;
            }
            let j = (e - val) as usize;
            coeffs[j] = f.add(&coeffs[j], c);
        }
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize(f);
        s
    }

    pub fn neg<F: FiniteField<El = E>>(&self, f: &F) -> Self {
        LaurentSeries { val: self.val, coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(), prec: self.prec }
    }

    pub fn sub<F: FiniteField<El = E>>(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn scale<F: FiniteField<El = E>>(&self, f: &F, c: &E) -> Self {
        if f.is_zero(c) {
            return LaurentSeries::zero(self.prec);
        }
        LaurentSeries { val: self.val, coeffs: self.coeffs.iter().map(|x| f.mul(x, c)).collect(), prec: self.prec }
    }

    /// Multiply by `w^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn mul<F: FiniteField<El = E>>(&self, f: &F, other: &Self) -> Self {
        let prec = (self.val + other.prec).min(other.val + self.prec);
        let val = self.val + other.val;
        if self.coeffs.is_empty() || other.coeffs.is_empty() || prec <= val {
            return LaurentSeries::zero(prec);
        }
        let len = (prec - val) as usize;
        let mut coeffs = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize(f);
        s
    }

    /// Multiplicative inverse; `None` if the series is zero to precision.
    pub fn inv<F: FiniteField<El = E>>(&self, f: &F) -> Option<Self> {
        if self.coeffs.is_empty() {
            return None;
        }
        let rel = self.coeffs.len();
        let inv0 = f.inv(&self.coeffs[0]);
        let mut out = vec![f.zero(); rel];
        out[0] = inv0.clone();
        for k in 1..rel {
            let mut acc = f.zero();
            for j in 1..=k {
                acc = f.add(&acc, &f.mul(&self.coeffs[j], &out[k - j]));
            }
            out[k] = f.neg(&f.mul(&acc, &inv0));
        }
        Some(LaurentSeries { val: -self.val, coeffs: out, prec: -self.val + rel as i64 })
    }

    /// Evaluate a polynomial in `x = w^{-scale}` exactly, truncated at `prec`.
    pub fn from_poly_in_inverse<F: FiniteField<El = E>>(f: &F, coeffs: &[E], scale: i64, prec: i64) -> Self {
        let terms: Vec<(i64, E)> =
            coeffs.iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(k, c)| (-(k as i64) * scale, c.clone())).collect();
        LaurentSeries::from_terms(f, &terms, prec)
    }
}

/// Expansion of `lambda` in `u = 1/x` known through the term `u^through`.
pub fn laurent_embed(lambda: &RatFunc, through: i64) -> LaurentSeries<u32> {
    let f = PrimeField::new(lambda.modulus());
    let prec = through + 1;
    if lambda.is_zero() {
        return LaurentSeries::zero(prec);
    }
    let dn = lambda.num().degree().unwrap() as i64;
    let dd = lambda.den().degree().unwrap() as i64;
    let lead = dd - dn;
    // extra relative precision so the product reaches `prec`
    let rel = (prec - lead).max(1);
    let num = LaurentSeries::from_poly_in_inverse(&f, lambda.num().coeffs(), 1, -dn + rel);
    let den = LaurentSeries::from_poly_in_inverse(&f, lambda.den().coeffs(), 1, -dd + rel);
    let inv = den.inv(&f).expect("nonzero denominator");
    num.mul(&f, &inv).truncate(&f, prec)
}
