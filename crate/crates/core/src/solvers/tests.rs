use std::sync::OnceLock;

use super::*;
use crate::compact::cr_value;
use crate::field::build_field;
use crate::field::tests::{E1, E2};
use crate::oracle::{brute_solve, default_cap};
use crate::rr::Place;
use crate::sunit::sval_mat;

fn e2() -> &'static (FunctionField, SUnitValMatrix) {
    static CELL: OnceLock<(FunctionField, SUnitValMatrix)> = OnceLock::new();
    CELL.get_or_init(|| {
        let ff = build_field(E2.0, E2.1).unwrap();
        let m = sval_mat(&ff, &infinite_places_set(&ff)).unwrap();
        (ff, m)
    })
}

fn poly(q: u32, s: &str) -> Poly {
    crate::arith::parse_poly(s, q).unwrap()
}

fn wrap(a: &FieldElement) -> CompactRep {
    CompactRep::trivial(a.clone())
}

/// Same associate classes, in any order.
fn same_classes(ff: &FunctionField, a: &[CompactRep], b: &[CompactRep]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| cr_associate(ff, x, y)))
}

#[test]
fn example_bounds_and_search_space() {
    let (ff, m) = e2();
    let eq = NormEquation::with_units(ff, &poly(5, "x+4"), m.clone());
    let b = eq.bounds();
    assert_eq!(b.theta, vec![Rational64::from(347), Rational64::new(347, 2)]);
    assert_eq!(b.big_theta, Rational64::new(1042, 3));
    assert_eq!(b.deg_bounds, vec![347, 344, 344]);
    assert_eq!(b.value_ranges[0], (-347, 346));
    let st = eq.stats();
    assert_eq!(st.gp_count, Power { base: 5, exp: 1038 });
    assert_eq!(st.gp_count.to_string(), "5^1038");
    assert_eq!(st.tuple_bound, BigInt::from(2 * 2 * (2 * 347 + 1)));
    assert!(st.tuple_bound <= BigInt::from(2980));
    assert_eq!(st.ideal_count, BigInt::from(4));
}

#[test]
fn gaal_pohst_refuses_example() {
    let (ff, m) = e2();
    let eq = NormEquation::with_units(ff, &poly(5, "x+4"), m.clone());
    match eq.gaal_pohst(&Limits::default()) {
        Err(SolveError::Budget { count, .. }) => assert_eq!(count, Power { base: 5, exp: 1038 }),
        other => panic!("expected refusal, got {other:?}"),
    }
}

#[test]
fn index_calculus_on_example() {
    let (ff, m) = e2();
    let c = poly(5, "x+4");
    let eq = NormEquation::with_units(ff, &c, m.clone());
    let sol = eq.index_calculus(&Limits::default()).unwrap();
    assert_eq!(sol.stats.candidates, 4);
    assert_eq!(sol.solutions.len(), 1);
    let t = &sol.solutions[0];
    assert_eq!(cr_norm(ff, t).monic(), RatFunc::from_poly(c));
    assert!(cr_is_integral(ff, t));
    assert_eq!(cr_value(ff, t, &Place::Infinite(1)).unwrap(), 158);
}

#[test]
fn constant_c_is_rejected() {
    let ff = build_field(E1.0, E1.1).unwrap();
    assert!(matches!(NormEquation::new(&ff, &poly(3, "2")), Err(SolveError::ConstantC)));
    assert!(matches!(solve_index_calculus(&ff, &poly(3, "1"), &Limits::default()), Err(SolveError::ConstantC)));
}

#[test]
fn elliptic_generator_found_by_all_solvers() {
    let ff = build_field(E1.0, E1.1).unwrap();
    let c = poly(3, "x^3+x+1");
    let y = ff.generator();
    let eq = NormEquation::new(&ff, &c).unwrap();
    let lim = Limits::default();
    let gp = eq.gaal_pohst(&lim).unwrap().solutions;
    assert_eq!(gp.len(), 1);
    assert!(gp[0].is_associate(&ff, &y));
    let ex = eq.exhaustive_cr(&lim).unwrap().solutions;
    let ic = eq.index_calculus(&lim).unwrap().solutions;
    assert!(same_classes(&ff, &ex, &[wrap(&y)]));
    assert!(same_classes(&ff, &ic, &[wrap(&y)]));
}

#[test]
fn negative_instance_is_empty() {
    let ff = build_field(E1.0, E1.1).unwrap();
    let c = poly(3, "x");
    let eq = NormEquation::new(&ff, &c).unwrap();
    let lim = Limits::default();
    assert!(eq.gaal_pohst(&lim).unwrap().solutions.is_empty());
    assert!(eq.exhaustive_cr(&lim).unwrap().solutions.is_empty());
    assert!(eq.index_calculus(&lim).unwrap().solutions.is_empty());
    assert!(brute_solve(&ff, &c, default_cap(&eq.bounds()), &lim).unwrap().is_empty());
}

#[test]
fn dedup_keeps_first_of_each_class() {
    // genus 0 with two infinite places; t + x is a unit
    let ff = build_field(3, "t^2 - (x^2 + 1)").unwrap();
    let a = ff.from_poly(&poly(3, "x^2 + 2x + 2"));
    let unit = ff.generator().add(&ff.x());
    assert!(ff.norm(&unit).num().is_constant());
    let za = a.scale_poly(&Poly::constant(3, 2));
    let ua = ff.mul(&unit, &a);
    let b = ff.x();
    let out = dedup_associates(&ff, vec![a.clone(), za, ua, b.clone()]);
    assert_eq!(out, vec![a.clone(), b]);
    assert_eq!(dedup_associates(&ff, vec![a.clone()]), vec![a]);
}

#[test]
fn genus_zero_solvers_match_oracle() {
    let lim = Limits::default();
    let wide = Limits { enumeration: 20_000_000, ..Limits::default() };
    for (q, f, cs) in [
        (3, "t^2 - (x^2 + 1)", &["x^2 + 1", "x + 1", "x^2 + x + 2", "x^2"][..]),
        (3, "t^2 - x", &["x^2 + 1", "x", "x^2 + 2"][..]),
        (5, "t^2 - (x^2 + 2)", &["x^2 + 3", "x + 4", "x^2 + x + 1"][..]),
    ] {
        let ff = build_field(q, f).unwrap();
        for c in cs {
            let c = poly(q, c);
            let eq = NormEquation::new(&ff, &c).unwrap();
            let oracle: Vec<CompactRep> =
                brute_solve(&ff, &c, default_cap(&eq.bounds()), &wide).unwrap().iter().map(wrap).collect();
            let gp: Vec<CompactRep> = eq.gaal_pohst(&lim).unwrap().solutions.iter().map(wrap).collect();
            let ex = eq.exhaustive_cr(&lim).unwrap().solutions;
            let ic = eq.index_calculus(&lim).unwrap().solutions;
            assert!(same_classes(&ff, &gp, &oracle), "{f} / {c}: gp");
            assert!(same_classes(&ff, &ex, &oracle), "{f} / {c}: exhaustive");
            assert!(same_classes(&ff, &ic, &oracle), "{f} / {c}: index calculus");
            for t in &ic {
                assert!(has_norm(&cr_norm(&ff, t), &c));
            }
        }
    }
}

#[test]
fn coefficient_box_enumerates_projective_points() {
    let bx = CoefficientBox::new(3, &[1, 0]);
    assert_eq!(bx.size(), Power { base: 3, exp: 3 });
    assert_eq!(bx.projective_len(), Some(13));
    let pts: Vec<Vec<Poly>> = (0..13).map(|i| bx.element(i)).collect();
    for (i, a) in pts.iter().enumerate() {
        assert!(a.iter().any(|p| !p.is_zero()));
        for b in &pts[i + 1..] {
            // no two points are scalar multiples
            assert!((1..3).all(|s| a.iter().zip(b).any(|(x, y)| &x.scale(s) != y)));
        }
    }
    let lim = Limits { enumeration: 5, ..Limits::default() };
    assert!(matches!(bx.filter(&lim, |_| true), Err(SolveError::Budget { .. })));
}

#[test]
fn deadline_is_honoured() {
    let ff = build_field(E1.0, E1.1).unwrap();
    let eq = NormEquation::new(&ff, &poly(3, "x^3+x+1")).unwrap();
    let lim = Limits { deadline: Some(Instant::now() - Duration::from_secs(1)), ..Limits::default() };
    assert_eq!(eq.index_calculus(&lim).unwrap_err(), SolveError::Timeout);
}
