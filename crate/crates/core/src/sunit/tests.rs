use super::*;
use crate::field::build_field;
use crate::field::tests::{E1, E2};
use crate::rr::{is_principal, Divisor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_divisor(ff: &FunctionField, places: &[Place], rng: &mut ChaCha8Rng) -> Divisor {
    let mut d = Divisor::zero(ff);
    for _ in 0..3 {
        let p = &places[rng.gen_range(0..places.len())];
        d = d.add(&p.divisor(ff, rng.gen_range(-2..=2)));
    }
    d
}

#[test]
fn elliptic_class_number() {
    let ff = build_field(E1.0, E1.1).unwrap();
    assert_eq!(place_counts(&ff, 1), vec![4]);
    assert_eq!(class_number(&ff), BigInt::from(4));
    let cg = class_group_small(&ff).unwrap();
    assert_eq!(cg.h, 4);
    let order: BigInt = cg.invariants.iter().product();
    assert_eq!(order, BigInt::from(4));
}

#[test]
fn rational_field_has_trivial_group() {
    let ff = build_field(3, "t^2 - x").unwrap();
    assert_eq!(ff.genus(), 0);
    let cg = class_group_small(&ff).unwrap();
    assert_eq!(cg.h, 1);
    assert!(cg.invariants.is_empty());
}

#[test]
fn dlog_is_a_homomorphism_detecting_principality() {
    let ff = build_field(E1.0, E1.1).unwrap();
    let cg = class_group_small(&ff).unwrap();
    let mut places = places_of_degree(&ff, 1);
    places.extend(places_of_degree(&ff, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base = Place::Infinite(0);
    for _ in 0..20 {
        let d1 = small_divisor(&ff, &places, &mut rng);
        let d2 = small_divisor(&ff, &places, &mut rng);
        let z1 = d1.sub(&base.divisor(&ff, d1.degree(&ff)));
        let z2 = d2.sub(&base.divisor(&ff, d2.degree(&ff)));
        let a = cg.dlog(&ff, &z1).unwrap();
        let b = cg.dlog(&ff, &z2).unwrap();
        let s = cg.dlog(&ff, &z1.add(&z2)).unwrap();
        for i in 0..a.len() {
            assert_eq!((&a[i] + &b[i]) % &cg.invariants[i], s[i]);
        }
        let principal = is_principal(&ff, &z1).unwrap().is_some();
        assert_eq!(principal, a.iter().all(|v| v.is_zero()));
        assert!(cg.dlog(&ff, &z1.scale(cg.h as i64)).unwrap().iter().all(|v| v.is_zero()));
    }
}

#[test]
fn genus_two_class_number_matches_group() {
    let ff = build_field(3, "t^2 - (x^5 + 2x + 1)").unwrap();
    assert_eq!(ff.genus(), 2);
    let lp = l_polynomial(&ff);
    assert_eq!(lp.len(), 5);
    assert_eq!(lp[4], BigInt::from(9));
    let cg = class_group_small(&ff).unwrap();
    assert_eq!(BigInt::from(cg.h), class_number(&ff));
    let order: BigInt = cg.invariants.iter().product();
    assert_eq!(order, BigInt::from(cg.h));
}

#[test]
fn elliptic_unit_lattice_is_empty() {
    let ff = build_field(E1.0, E1.1).unwrap();
    let m = sval_mat(&ff, &infinite_places_set(&ff)).unwrap();
    assert_eq!(m.rank(), 0);
    assert_eq!(m.regulator, BigInt::one());
}

#[test]
fn example_unit_lattice() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let m = sval_mat(&ff, &infinite_places_set(&ff)).unwrap();
    let rows = m.rows_i64();
    assert_eq!(rows.len(), 1);
    assert!(rows[0] == vec![-694, 347] || rows[0] == vec![694, -347]);
    assert_eq!(m.regulator, BigInt::from(347));
    let bound = (5f64.sqrt() + 1.0).powi(2 * ff.genus() as i32);
    assert!(m.regulator.to_f64().unwrap() <= bound);
}

#[test]
fn s_unit_rows_are_principal() {
    let ff = build_field(E2.0, E2.1).unwrap();
    let c = Poly::new(5, vec![4, 1]);
    let s = s_of(&ff, &c);
    assert_eq!(s.len(), 4);
    let m = sval_mat(&ff, &s).unwrap();
    assert_eq!(m.rank(), 3);
    let k = 3usize;
    let bound = BigInt::from(2).pow(((k - 1) * (k - 2) / 4) as u32 + 1) * &m.regulator;
    assert!(m.max_entry() <= bound);
    for row in m.rows_i64() {
        let mut d = Divisor::zero(&ff);
        for (p, v) in s.iter().zip(&row) {
            d = d.add(&p.divisor(&ff, *v));
        }
        assert_eq!(d.degree(&ff), 0);
        assert!(is_principal(&ff, &d).unwrap().is_some(), "row {row:?}");
    }
}

#[test]
fn quotient_by_unit_lattice_embeds_in_class_group() {
    let ff = build_field(3, "t^2 - (x^5 + 2x + 1)").unwrap();
    let cg = class_group_small(&ff).unwrap();
    let mut s = places_of_degree(&ff, 1);
    s.truncate(3);
    if !s.contains(&Place::Infinite(0)) {
        s.push(Place::Infinite(0));
    }
    let m = sval_mat(&ff, &s).unwrap();
    let lat = IntLattice::new(m.m.clone());
    for i in 0..s.len() {
        for j in 0..s.len() {
            let (di, dj) = (s[i].degree(&ff) as i64, s[j].degree(&ff) as i64);
            let mut v = vec![0i64; s.len()];
            v[i] += dj;
            v[j] -= di;
            let d = s[i].divisor(&ff, dj).sub(&s[j].divisor(&ff, di));
            let in_lattice = {
                let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                solve_integer_system(&zmat::transpose(&lat.basis, s.len()), lat.rank(), &b).is_some()
            };
            let trivial = cg.dlog(&ff, &d).unwrap().iter().all(|x| x.is_zero());
            assert_eq!(in_lattice, trivial);
        }
    }
}

#[test]
fn babai_on_example_unit_lattice() {
    let lat = IntLattice::new(zmat::to_zmat(&[vec![-694, 347]]));
    let t: Vec<BigRational> = [-1011, 505].iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    let v = cvp_babai(&lat, &t);
    assert_eq!(v, vec![BigInt::from(-694), BigInt::from(347)]);
    assert!(cvp_babai(&IntLattice::new(Vec::new()), &t).iter().all(|x| x.is_zero()));
}
