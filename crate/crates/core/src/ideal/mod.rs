//! Fractional ideals of the maximal order in Hermite normal form.

mod prime;

pub use prime::{divisor_of_ideal, factor_in_of, ideal_val, primes_above, PrimeIdeal};

use crate::arith::{Poly, RatFunc};
use crate::field::{FieldElement, FunctionField};
use crate::linalg::polymat::{hnf, identity, triangular_inverse, PolyMat};

/// `I = (1/d) * rowspan(M)` over the reduced basis, `M` in row HNF and `d`
/// the minimal monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracIdeal {
    m: PolyMat,
    d: Poly,
}

fn content_gcd(m: &PolyMat, d: &Poly) -> Poly {
    let mut g = d.clone();
    for r in m {
        for e in r {
            if g.is_one() {
                return g;
            }
            g = g.gcd(e);
        }
    }
    g
}

impl FracIdeal {
    /// `(1/d) M` for an integral HNF `M`; removes common content.
    fn normalized(m: PolyMat, d: Poly) -> Self {
        let d = d.monic();
        let g = content_gcd(&m, &d).monic();
        if g.is_one() {
            return FracIdeal { m, d };
        }
        FracIdeal { m: m.iter().map(|r| r.iter().map(|e| e.exact_div(&g)).collect()).collect(), d: d.exact_div(&g) }
    }

    pub fn unit(ff: &FunctionField) -> Self {
        FracIdeal { m: identity(ff.q(), ff.degree()), d: Poly::one(ff.q()) }
    }

    /// The `O_F`-module generated by nonzero elements.
    pub fn from_generators(ff: &FunctionField, gens: &[FieldElement]) -> Self {
        let q = ff.q();
        let n = ff.degree();
        let gens: Vec<&FieldElement> = gens.iter().filter(|g| !g.is_zero()).collect();
        assert!(!gens.is_empty(), "zero ideal");
        let mut d = Poly::one(q);
        for g in &gens {
            d = d.lcm(g.den());
        }
        let mut rows = Vec::with_capacity(n * gens.len());
        let mut modulus: Option<Poly> = None;
        for g in &gens {
            let scaled = g.scale_poly(&d);
            let integral = FieldElement::integral(scaled.num().to_vec());
            if modulus.is_none() {
                modulus = Some(ff.norm(&integral).num().clone());
            }
            rows.extend(ff.mul_matrix_num(&integral));
        }
        let m = hnf(&rows, n, modulus.as_ref()).expect("nonzero ideal has full rank");
        FracIdeal::normalized(m, d)
    }

    pub fn principal(ff: &FunctionField, a: &FieldElement) -> Self {
        FracIdeal::from_generators(ff, std::slice::from_ref(a))
    }

    pub fn from_poly(ff: &FunctionField, c: &Poly) -> Self {
        FracIdeal::principal(ff, &ff.from_poly(c))
    }

    /// Ideal with the given integral generators over the reduced basis,
    /// which must already span an `O_F`-module containing `modulus * O_F`.
    pub fn from_module_rows(ff: &FunctionField, rows: &[Vec<Poly>], modulus: &Poly, d: Poly) -> Self {
        let m = hnf(rows, ff.degree(), Some(modulus)).expect("full rank");
        FracIdeal::normalized(m, d)
    }

    pub fn matrix(&self) -> &PolyMat {
        &self.m
    }

    pub fn den(&self) -> &Poly {
        &self.d
    }

    pub fn is_integral(&self) -> bool {
        self.d.is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.d.is_one() && self.m.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    /// `k[x]`-basis of the ideal.
    pub fn basis(&self) -> Vec<FieldElement> {
        self.m.iter().map(|r| FieldElement::new(r.clone(), self.d.clone())).collect()
    }

    /// `det M`, the norm of the integral numerator.
    fn det(&self) -> Poly {
        self.m.iter().enumerate().fold(Poly::one(self.d.modulus()), |acc, (i, r)| &acc * &r[i])
    }

    /// Monic primes below the support of the ideal (possibly more).
    pub fn support_polys(&self) -> Vec<Poly> {
        let mut ps: Vec<Poly> = self.det().factor().factors.into_iter().map(|f| f.0).collect();
        ps.extend(self.d.factor().factors.into_iter().map(|f| f.0));
        ps.sort();
        ps.dedup();
        ps
    }

    /// Monic generator of the norm ideal in `k(x)`.
    pub fn norm(&self) -> RatFunc {
        let n = self.m.len() as u64;
        RatFunc::new(self.det(), self.d.pow(n)).monic()
    }

    pub fn mul(&self, ff: &FunctionField, other: &Self) -> Self {
        let n = ff.degree();
        let modulus = &self.det() * &other.det();
        let mut rows = Vec::with_capacity(n * n);
        for a in &self.m {
            for b in &other.m {
                rows.push(ff.mul_integral(a, b));
            }
        }
        let m = hnf(&rows, n, Some(&modulus)).expect("product of nonzero ideals");
        FracIdeal::normalized(m, &self.d * &other.d)
    }

    pub fn scale(&self, ff: &FunctionField, a: &FieldElement) -> Self {
        self.mul(ff, &FracIdeal::principal(ff, a))
    }

    /// `{a in F : a I in O_F}`.
    pub fn inv(&self, ff: &FunctionField) -> Self {
        let n = ff.degree();
        // columns of [M(b_1) | ... | M(b_n)] span the lattice dual to I^{-1}
        let mut cols: Vec<Vec<Poly>> = Vec::with_capacity(n * n);
        for b in &self.m {
            let mb = ff.mul_matrix_num(&FieldElement::integral(b.clone()));
            for c in 0..n {
                cols.push((0..n).map(|i| mb[i][c].clone()).collect());
            }
        }
        let det = self.det();
        let r = hnf(&cols, n, Some(&det)).expect("nonsingular");
        let (rinv, rd) = triangular_inverse(&r);
        let rows: PolyMat = (0..n).map(|i| (0..n).map(|j| rinv[j][i].clone()).collect()).collect();
        let gens: Vec<Vec<Poly>> = rows.iter().map(|r| r.iter().map(|e| e * &self.d).collect()).collect();
        let m = hnf(&gens, n, None).expect("nonsingular");
        FracIdeal::normalized(m, rd)
    }

    pub fn pow(&self, ff: &FunctionField, e: i64) -> Self {
        let base = if e < 0 { self.inv(ff) } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = FracIdeal::unit(ff);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ff, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(ff, &b);
            }
        }
        acc
    }

    pub fn div(&self, ff: &FunctionField, other: &Self) -> Self {
        self.mul(ff, &other.inv(ff))
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        if a.is_zero() {
            return true;
        }
        // coordinates of d*a over the rows of M must be polynomials
        let (minv, md) = triangular_inverse(&self.m);
        let n = self.m.len();
        let num: Vec<Poly> = a.num().iter().map(|p| p * &self.d).collect();
        let den = a.den() * &md;
        (0..n).all(|c| {
            let s = num.iter().zip(&minv).fold(Poly::zero(self.d.modulus()), |acc, (x, r)| &acc + &(x * &r[c]));
            den.divides(&s)
        })
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }
}
