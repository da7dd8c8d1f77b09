use super::*;
use crate::field::build_field;
use crate::field::tests::E1;
use crate::rr::{div_element, is_principal, places_of_degree, rr_dim};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly(q: u32, s: &str) -> Poly {
    crate::arith::parse_poly(s, q).unwrap()
}

fn e1() -> FunctionField {
    build_field(E1.0, E1.1).unwrap()
}

fn random_divisor(ff: &FunctionField, places: &[Place], terms: usize, rng: &mut ChaCha8Rng) -> Divisor {
    let mut d = Divisor::zero(ff);
    for _ in 0..terms {
        let p = &places[rng.gen_range(0..places.len())];
        d = d.add(&p.divisor(ff, rng.gen_range(-1..=2)));
    }
    d
}

#[test]
fn finds_the_generator() {
    let ff = e1();
    let c = poly(3, "x^3+x+1");
    let sols = brute_solve(&ff, &c, 2, &Limits::default()).unwrap();
    assert_eq!(sols.len(), 1);
    let y = ff.generator();
    let r = ff.div(&sols[0], &y).unwrap();
    assert!(r.is_integral() && ff.norm(&r).num().is_constant());
}

#[test]
fn parity_instance_is_empty() {
    let ff = e1();
    assert!(brute_solve(&ff, &poly(3, "x"), 4, &Limits::default()).unwrap().is_empty());
}

#[test]
fn zero_c_is_rejected() {
    let ff = e1();
    assert_eq!(brute_solve(&ff, &Poly::zero(3), 1, &Limits::default()), Err(OracleError::ZeroC));
}

#[test]
fn principal_generators() {
    let ff = e1();
    let lim = Limits::default();
    let one = brute_principal(&ff, &Divisor::zero(&ff), 1, &lim).unwrap().unwrap();
    assert!(one.num()[1].is_zero() && one.num()[0].is_constant());
    let dx = div_element(&ff, &ff.x()).unwrap();
    let g = brute_principal(&ff, &dx, 2, &lim).unwrap().unwrap();
    let r = ff.div(&g, &ff.x()).unwrap();
    assert!(r.num()[1].is_zero() && r.num()[0].is_constant() && r.den().is_constant());
}

#[test]
fn principality_agrees_with_riemann_roch() {
    let ff = e1();
    let mut places = places_of_degree(&ff, 1);
    places.extend(places_of_degree(&ff, 2));
    let base = Place::Infinite(0);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let lim = Limits::default();
    let mut seen = 0;
    while seen < 16 {
        let d = random_divisor(&ff, &places, 2, &mut rng);
        let d = d.sub(&base.divisor(&ff, d.degree(&ff)));
        if d.height(&ff) > 4 {
            continue;
        }
        seen += 1;
        let expected = is_principal(&ff, &d).unwrap().is_some();
        assert_eq!(brute_principal(&ff, &d, 4, &lim).unwrap().is_some(), expected, "{d:?}");
    }
}

#[test]
fn dimensions_agree_with_riemann_roch() {
    let ff = e1();
    let places = places_of_degree(&ff, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let lim = Limits::default();
    for _ in 0..50 {
        let d = random_divisor(&ff, &places, 3, &mut rng);
        let h = clearing_poly(&ff, &d);
        let cap = h.deg_i64() + (d.infinite[0].max(0) + 1) / 2;
        let basis = brute_rr(&ff, &d, cap, &lim).unwrap();
        assert_eq!(basis.len(), rr_dim(&ff, &d).unwrap(), "{d:?}");
        for b in &basis {
            let div = div_element(&ff, b).unwrap();
            assert!(div.add(&d).is_effective(), "{d:?} {b:?} {div:?}");
        }
    }
}

#[test]
fn negative_degree_has_no_sections() {
    let ff = e1();
    let d = Place::Infinite(0).divisor(&ff, -1);
    assert!(brute_rr(&ff, &d, 3, &Limits::default()).unwrap().is_empty());
    assert_eq!(brute_rr(&ff, &Divisor::zero(&ff), 3, &Limits::default()).unwrap().len(), 1);
}

#[test]
fn point_norms_match_the_norm() {
    let ff = e1();
    let c = poly(3, "x^3 + x + 1");
    let pts = PointNorms::new(&ff, &c);
    assert!(pts.consistent(ff.generator().num()));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let lam: Vec<Poly> = (0..2).map(|_| Poly::new(3, (0..4).map(|_| rng.gen_range(0..3)).collect())).collect();
        let nm = ff.norm(&FieldElement::integral(lam.clone()));
        for x0 in 0..3u32 {
            let m = (0..2)
                .map(|i| (0..2).map(|j| (0..2).map(|k| lam[k].eval(x0) * pts.mats[x0 as usize][k][i][j]).sum::<u32>() % 3).collect())
                .collect();
            assert_eq!(pts.det(m), nm.num().eval(x0));
        }
        if nm.is_poly() && nm.num().monic() == c {
            assert!(pts.consistent(&lam));
        }
    }
}
