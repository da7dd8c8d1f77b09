use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub const E1: (u32, &str) = (3, "t^2 - (x^3+x+1)");
pub const E2: (u32, &str) = (5, "t^3+(4x^3+3x^2+1)t^2+(3x^3+4x^2+4x+2)t+2x^3+x");

fn random_element(ff: &FunctionField, rng: &mut ChaCha8Rng, deg: usize) -> FieldElement {
    let q = ff.q();
    loop {
        let num: Vec<Poly> =
            (0..ff.degree()).map(|_| Poly::new(q, (0..=rng.gen_range(0..=deg)).map(|_| rng.gen_range(0..q)).collect())).collect();
        let a = FieldElement::integral(num);
        if !a.is_zero() {
            return a;
        }
    }
}

#[test]
fn elliptic_example() {
    let ff = build_field(E1.0, E1.1).unwrap();
    assert_eq!(ff.degree(), 2);
    assert_eq!(ff.size_parameter(), 2);
    assert_eq!(ff.genus(), 1);
    assert_eq!(ff.infinite_places(), &[InfinitePlace { index: 0, e: 2, deg: 1 }]);
    assert_eq!(ff.reduced_basis().inf_norms, vec![Rational64::from_integer(0), Rational64::new(3, 2)]);
    let y = ff.generator();
    assert_eq!(ff.max_norm(&y).unwrap(), Rational64::new(3, 2));
    assert_eq!(ff.inf_valuation(&y, 0).unwrap(), -3);
    assert_eq!(ff.norm(&y), RatFunc::from_poly(Poly::new(3, vec![2, 2, 0, 2])));
    assert_eq!(ff.maximal_order().basis, order::Order::power(ff.f()).basis);
}

#[test]
fn example_cubic() {
    let ff = build_field(E2.0, E2.1).unwrap();
    assert_eq!(ff.degree(), 3);
    let pl = ff.infinite_places();
    assert_eq!(pl.len(), 2);
    assert_eq!((pl[0].e, pl[0].deg, pl[1].e, pl[1].deg), (1, 1, 1, 2));
    let norms = &ff.reduced_basis().inf_norms;
    assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    let g = ff.genus() as i64;
    let bound = (2 * g - 1 + 2).div_euclid(3) + 1;
    assert!(*norms.last().unwrap() <= Rational64::from_integer(bound));
}

#[test]
fn validation_errors() {
    assert!(matches!(build_field(4, "t^2 - x"), Err(FieldError::NotPrime(4))));
    assert!(matches!(build_field(3, "t^3 + x"), Err(FieldError::WildDegree { .. })));
    assert!(matches!(build_field(5, "2t^2 + x"), Err(FieldError::NotMonic)));
    assert!(matches!(build_field(5, "(t-x)(t-x^2-1)"), Err(FieldError::Reducible)));
    assert!(matches!(build_field(5, "t^3 + x t"), Err(FieldError::Reducible)));
    assert!(matches!(build_field(3, "t^4 + (x+2)t^3 + 2t^2 + 2t + 1"), Err(FieldError::WildAtInfinity)));
    assert!(matches!(build_field(5, "(t-x)^2"), Err(FieldError::Inseparable)));
    // t^2 - 2 over F_5 only adjoins sqrt(2) to the constants
    assert!(matches!(build_field(5, "t^2 - 2"), Err(FieldError::ConstantFieldExtension)));
    assert!(matches!(build_field(5, "t^2 - 2x^2"), Err(FieldError::ConstantFieldExtension)));
}

#[test]
fn rational_conic_has_genus_zero() {
    let ff = build_field(3, "t^2 - (x^2+1)").unwrap();
    assert_eq!(ff.genus(), 0);
    assert_eq!(ff.reduced_basis().inf_norms[1], Rational64::from_integer(1));
}

#[test]
fn x_has_unit_norm() {
    for (q, f) in [E1, E2] {
        let ff = build_field(q, f).unwrap();
        let x = ff.x();
        assert_eq!(ff.max_norm(&x).unwrap(), Rational64::from_integer(1));
        let v = ff.inf_valuations(&x).unwrap();
        for (p, vp) in ff.infinite_places().iter().zip(v) {
            assert_eq!(vp, -(p.e as i64));
        }
        let scalar = RatFunc::new(Poly::new(q, vec![1, 2]), Poly::new(q, vec![3, 0, 1]));
        assert_eq!(ff.norm(&ff.from_ratfunc(&scalar)), scalar.pow(ff.degree() as i64));
    }
}

#[test]
fn reduced_basis_is_additive() {
    for (q, f) in [E1, E2] {
        let ff = build_field(q, f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_element(&ff, &mut rng, 4);
            assert_eq!(ff.max_norm(&a).unwrap(), ff.max_norm_from_coords(&a).unwrap());
        }
    }
}

#[test]
fn norm_is_multiplicative_and_inverse_works() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = random_element(&ff, &mut rng, 3);
        let b = random_element(&ff, &mut rng, 3);
        let ab = ff.mul(&a, &b);
        assert_eq!(ff.norm(&ab), &ff.norm(&a) * &ff.norm(&b));
        let ai = ff.inv(&a).unwrap();
        assert_eq!(ff.mul(&a, &ai), ff.one());
        assert_eq!(ff.norm(&ai), ff.norm(&a).inv());
    }
}

#[test]
fn power_coordinates_round_trip() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let t = ff.generator();
    let p = ff.to_power(&t);
    assert!(p[1].is_one() && p[0].is_zero() && p[2].is_zero());
    // t satisfies f
    let mut acc = ff.zero();
    for c in ff.f().iter().rev() {
        acc = ff.mul(&acc, &t).add(&ff.from_poly(c));
    }
    assert!(acc.is_zero());
}

#[test]
fn genus_matches_dimension_counts() {
    for (q, f) in [E1, E2] {
        let ff = build_field(q, f).unwrap();
        let g = ff.genus() as i64;
        let n = ff.degree() as i64;
        for m in [2 * g + 2, 2 * g + 3, 2 * g + 7] {
            assert_eq!(ff.dim_multiple_of_infinity(m), m * n + 1 - g);
        }
    }
}
