use super::*;
use crate::field::build_field;
use crate::field::tests::{E1, E2};
use crate::ideal::factor_in_of;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_integral(ff: &FunctionField, deg: usize, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let num: Vec<Poly> = (0..ff.degree())
            .map(|_| Poly::new(ff.q(), (0..=rng.gen_range(0..=deg)).map(|_| rng.gen_range(0..ff.q())).collect()))
            .collect();
        let a = FieldElement::integral(num);
        if !a.is_zero() {
            return a;
        }
    }
}

fn ratio_is_constant(ff: &FunctionField, a: &FieldElement, b: &FieldElement) -> bool {
    let r = ff.div(a, b).unwrap();
    let c = r.coords();
    c[1..].iter().all(|x| x.is_zero()) && c[0].num().is_constant() && c[0].den().is_constant()
}

fn check_roundtrip(ff: &FunctionField, alpha: &FieldElement) -> CompactRep {
    let a = FracIdeal::principal(ff, alpha);
    let v = val_inf(ff, alpha).unwrap();
    let t = comp_rep(ff, &a, &v).unwrap();
    let g = ff.genus() as i64;
    let top = v.iter().map(|x| x.abs()).max().unwrap_or(0);
    let bound = if top + g == 0 { 1 } else { (top + g).ilog2() as usize + 1 };
    assert!(t.len() <= bound, "l = {} exceeds {bound}", t.len());
    let e = cr_expand(ff, &t).unwrap();
    assert!(ratio_is_constant(ff, &e, alpha), "expansion is not a constant multiple");
    assert_eq!(cr_norm(ff, &t), ff.norm(&e));
    let n = ff.degree();
    let gu = ff.genus();
    for b in &t.betas {
        assert!(b.height() <= 16 * (n * n + n * gu + gu + n));
    }
    let dn = ff.norm(alpha).num().degree().unwrap_or(0);
    assert!(t.mu.height() <= 16 * (n * dn + gu + n));
    t
}

#[test]
fn unit_ideal_gives_constants() {
    for (q, f) in [E1, E2] {
        let ff = build_field(q, f).unwrap();
        let r = other_places(&ff).len();
        let t = comp_rep(&ff, &FracIdeal::unit(&ff), &vec![0; r]).unwrap();
        let e = cr_expand(&ff, &t).unwrap();
        assert!(ratio_is_constant(&ff, &e, &ff.one()));
        for p in factor_in_of(&ff, &Poly::x(q)) {
            assert_eq!(cr_value(&ff, &t, &Place::Finite(p.0)).unwrap(), 0);
        }
    }
}

#[test]
fn principal_ideal_of_polynomial() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let c = ff.from_poly(&Poly::new(5, vec![1, 2, 1]));
    let t = check_roundtrip(&ff, &c);
    assert!(cr_is_integral(&ff, &t));
    assert!(cr_associate(&ff, &t, &CompactRep::trivial(c.clone())));
}

#[test]
fn example_prime_generator() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let c = Poly::new(5, vec![4, 1]);
    let primes = factor_in_of(&ff, &c);
    let p1 = &primes[0].0;
    assert_eq!(p1.f, 1);
    let t = comp_rep(&ff, &p1.ideal, &[158]).unwrap();
    let nm = cr_norm(&ff, &t);
    assert_eq!(nm.monic(), RatFunc::from_poly(c));
    assert!(cr_is_integral(&ff, &t));
    assert_eq!(cr_value(&ff, &t, &Place::Infinite(1)).unwrap(), 158);
    assert_eq!(cr_value(&ff, &t, &Place::Infinite(0)).unwrap(), -317);
    assert!(t.len() <= 9);
    // the other prime above x+4 is not principal
    assert_eq!(comp_rep(&ff, &primes[1].0.ideal, &[0]), Err(CrError::NotPrincipal));
}

#[test]
fn random_elements_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (q, f) in [E1, E2, (5, "t^2 - (x^4 + x + 2)")] {
        let ff = build_field(q, f).unwrap();
        for _ in 0..8 {
            let a = random_integral(&ff, 6, &mut rng);
            check_roundtrip(&ff, &a);
        }
    }
}

#[test]
fn products_powers_and_units() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_integral(&ff, 3, &mut rng);
    let b = random_integral(&ff, 3, &mut rng);
    let ta = check_roundtrip(&ff, &a);
    let tb = check_roundtrip(&ff, &b);
    let prod = cr_mul(&ta, &tb);
    let p = ff.mul(&a, &b);
    for pl in [Place::Infinite(0), Place::Infinite(1)] {
        let lhs = prod.value(&ff, &pl).unwrap();
        assert_eq!(lhs, cr_value(&ff, &ta, &pl).unwrap() + cr_value(&ff, &tb, &pl).unwrap());
        assert_eq!(lhs, pl.valuation(&ff, &p).unwrap());
    }
    assert_eq!(cr_pow(&ta, 2).norm(&ff), cr_norm(&ff, &ta).pow(2));
    let e0 = cr_pow(&ta, 0).expand(&ff, DEFAULT_EXPANSION_CAP).unwrap();
    assert!(ratio_is_constant(&ff, &e0, &ff.one()));
    assert!(prod.is_associate(&ff, &CompactRep::trivial(p).power_product()));
    assert!(!cr_associate(&ff, &ta, &CompactRep::trivial(ff.from_poly(&Poly::x(5)))));
}

#[test]
fn json_round_trip() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_integral(&ff, 4, &mut rng);
    let t = check_roundtrip(&ff, &a);
    let js = t.to_json();
    assert_eq!(js["l"], serde_json::json!(t.len()));
    assert_eq!(CompactRep::from_json(&ff, &js).unwrap(), t);
    assert!(CompactRep::from_json(&ff, &serde_json::json!({"mu": ["1"], "betas": [], "l": 0})).is_err());
}

#[test]
fn expansion_cap_is_enforced() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let t = CompactRep::trivial(ff.from_poly(&Poly::monomial(5, 1, 3)));
    assert!(matches!(t.power_product().expand(&ff, 2), Err(CrError::ExpansionCap { .. })));
}
