//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ffnorm::arith::{parse_poly, Poly};
use ffnorm::compact::{comp_rep, cr_associate, cr_expand, cr_is_integral, cr_norm, CompactRep};
use ffnorm::field::{build_field, FieldElement, FunctionField};
use ffnorm::ideal::{factor_in_of, FracIdeal};
use ffnorm::oracle::{brute_solve, default_cap};
use ffnorm::rr::{distinguished_place, places_of_degree, rr_dim, val_inf, Divisor, Place};
use ffnorm::solvers::{CoefficientBox, Limits, NormEquation, Power, SolveError};
use ffnorm::sunit::{infinite_places_set, sval_mat};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const E1: (u32, &str) = (3, "t^2 - (x^3 + x + 1)");
const E2: (u32, &str) = (5, "t^3 + (4x^3 + 3x^2 + 1)t^2 + (3x^3 + 4x^2 + 4x + 2)t + 2x^3 + x");

// wall-clock limits
const FIELD_FACTS: Duration = Duration::from_secs(5);
const STATS: Duration = Duration::from_secs(60);
const UNIT_LATTICE: Duration = Duration::from_secs(60);
const INDEX_CALCULUS: Duration = Duration::from_secs(30);
const EXHAUSTIVE_CR: Duration = Duration::from_secs(30 * 60);
const SWEEP: Duration = Duration::from_secs(2 * 3600);
const NEGATIVE: Duration = Duration::from_secs(60);
const TREND: Duration = Duration::from_secs(4 * 3600);

// sizes
const SWEEP_INSTANCES: usize = 50;
const SWEEP_ORACLE_BUDGET: u64 = 65_000_000;
const RR_DIVISORS: usize = 120;
const CR_ELEMENTS: usize = 100;
const CR_MAX_VALUE: i64 = 64;
const TREND_PER_DEGREE: usize = 5;
const TREND_GP_BUDGET: u64 = 5_000_000;

type Outcome = Result<String, String>;

fn poly(q: u32, s: &str) -> Poly {
    parse_poly(s, q).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(t <= limit, || format!("{what} took {t:.1?}, limit {limit:?}"))
}

fn e2() -> FunctionField {
    build_field(E2.0, E2.1).unwrap()
}

fn same_classes(ff: &FunctionField, a: &[CompactRep], b: &[CompactRep]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| cr_associate(ff, x, y))) && b.iter().all(|y| a.iter().any(|x| cr_associate(ff, x, y)))
}

fn has_norm(ff: &FunctionField, t: &CompactRep, c: &Poly) -> bool {
    let nm = cr_norm(ff, t);
    nm.is_poly() && nm.num().monic() == c.monic()
}

fn wrap(v: &[FieldElement]) -> Vec<CompactRep> {
    v.iter().map(|a| CompactRep::trivial(a.clone())).collect()
}

/// Random monic `t^n + ...` with small coefficient degrees.
fn random_field(q: u32, n: usize, rng: &mut ChaCha8Rng) -> Option<FunctionField> {
    let mut f: Vec<Poly> = (0..n)
        .map(|i| {
            let d = rng.gen_range(0..=(2 * (n - i) / n + 1));
            Poly::new(q, (0..=d).map(|_| rng.gen_range(0..q)).collect())
        })
        .collect();
    f.push(Poly::one(q));
    let ff = FunctionField::new(q, f).ok()?;
    distinguished_place(&ff).map(|_| ff)
}

fn random_monic(q: u32, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
    c.push(1);
    Poly::new(q, c)
}

fn field_facts() -> Outcome {
    let t = Instant::now();
    let ff = e2();
    let places: Vec<(usize, usize)> = ff.infinite_places().iter().map(|p| (p.e, p.deg)).collect();
    ensure(places.len() == 2 && places.iter().all(|p| p.0 == 1), || format!("infinite places {places:?}"))?;
    let unit_rank = places.len() - 1;
    let fac = factor_in_of(&ff, &poly(5, "x + 4"));
    let exps: Vec<i64> = fac.iter().map(|(_, v)| *v).collect();
    ensure(exps == [1, 1], || format!("x+4 exponents {exps:?}"))?;
    within(t.elapsed(), FIELD_FACTS, "field facts")?;
    Ok(format!("places (e,deg) {places:?}, unit rank {unit_rank}, (x+4) = p1 p2, {:.2?}", t.elapsed()))
}

fn search_stats() -> Outcome {
    let t = Instant::now();
    let ff = e2();
    let eq = NormEquation::new(&ff, &poly(5, "x + 4")).map_err(|e| e.to_string())?;
    let st = eq.stats();
    let theta1 = eq.bounds().theta[0];
    let expect = BigInt::from(2 * 2 * ((theta1 * 2).to_integer() + 1));
    ensure(st.gp_count == Power { base: 5, exp: 1038 }, || format!("gp_count {}", st.gp_count))?;
    ensure(st.tuple_bound == expect, || format!("tuple_bound {} != {expect}", st.tuple_bound))?;
    ensure(st.tuple_bound <= BigInt::from(2980), || format!("tuple_bound {} > 2980", st.tuple_bound))?;
    ensure(st.ideal_count == BigInt::from(4), || format!("ideal_count {}", st.ideal_count))?;
    within(t.elapsed(), STATS, "stats")?;
    Ok(format!("{} / {} / {}, {:.1?}", st.gp_count, st.tuple_bound, st.ideal_count, t.elapsed()))
}

fn unit_lattice() -> Outcome {
    let ff = e2();
    let t = Instant::now();
    let m = sval_mat(&ff, &infinite_places_set(&ff)).map_err(|e| e.to_string())?;
    let el = t.elapsed();
    let rows = m.rows_i64();
    ensure(rows == [vec![-694, 347]] || rows == [vec![694, -347]], || format!("rows {rows:?}"))?;
    let deg: i64 = rows[0].iter().zip(ff.infinite_places()).map(|(v, p)| v * p.deg as i64).sum();
    ensure(deg == 0, || format!("degree {deg}"))?;
    within(el, UNIT_LATTICE, "unit lattice")?;
    Ok(format!("{rows:?}, {el:.1?}"))
}

fn solver_agreement() -> Outcome {
    let ff = e2();
    let c = poly(5, "x + 4");
    let eq = NormEquation::new(&ff, &c).map_err(|e| e.to_string())?;
    let lim = Limits::default();
    let t = Instant::now();
    let ic = eq.index_calculus(&lim).map_err(|e| e.to_string())?.solutions;
    let tic = t.elapsed();
    let t = Instant::now();
    let ex = eq.exhaustive_cr(&lim).map_err(|e| e.to_string())?.solutions;
    let tex = t.elapsed();
    ensure(!ic.is_empty(), || "no solutions".into())?;
    ensure(same_classes(&ff, &ic, &ex), || format!("{} vs {} solutions", ic.len(), ex.len()))?;
    for s in ic.iter().chain(&ex) {
        ensure(has_norm(&ff, s, &c) && cr_is_integral(&ff, s), || "bad solution".into())?;
    }
    within(tic, INDEX_CALCULUS, "index calculus")?;
    within(tex, EXHAUSTIVE_CR, "exhaustive search")?;
    Ok(format!("{} class(es); index calculus {tic:.1?}, exhaustive {tex:.1?}", ic.len()))
}

fn oracle_sweep() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let combos = [(3, 2), (5, 2), (7, 2), (5, 3), (7, 3)];
    let oracle_lim = Limits { enumeration: SWEEP_ORACLE_BUDGET, ..Limits::default() };
    let lim = Limits::default();
    let (mut done, mut skipped, mut per_n, mut gp_runs) = (0, 0, [0usize; 2], 0);
    while done < SWEEP_INSTANCES {
        let (q, n) = combos[rng.gen_range(0..combos.len())];
        let Some(ff) = random_field(q, n, &mut rng) else { continue };
        if ff.genus() > 3 {
            continue;
        }
        let c = random_monic(q, rng.gen_range(1..=2), &mut rng);
        let eq = NormEquation::new(&ff, &c).map_err(|e| e.to_string())?;
        let cap = default_cap(&eq.bounds());
        let fits = CoefficientBox::new(q, &vec![cap; n]).projective_len().is_some_and(|l| l <= SWEEP_ORACLE_BUDGET);
        if !fits {
            skipped += 1;
            continue;
        }
        let tag = || format!("q={q} f={:?} c={c}", ff.f());
        let oracle = wrap(&brute_solve(&ff, &c, cap, &oracle_lim).map_err(|e| format!("{}: {e}", tag()))?);
        match eq.gaal_pohst(&lim) {
            Ok(s) => {
                gp_runs += 1;
                ensure(same_classes(&ff, &wrap(&s.solutions), &oracle), || format!("{}: gp", tag()))?;
            }
            Err(SolveError::Budget { .. }) => {}
            Err(e) => return Err(format!("{}: {e}", tag())),
        }
        let ex = eq.exhaustive_cr(&lim).map_err(|e| format!("{}: {e}", tag()))?.solutions;
        ensure(same_classes(&ff, &ex, &oracle), || format!("{}: exhaustive {} vs oracle {}", tag(), ex.len(), oracle.len()))?;
        let ic = eq.index_calculus(&lim).map_err(|e| format!("{}: {e}", tag()))?.solutions;
        ensure(same_classes(&ff, &ic, &oracle), || format!("{}: index calculus {} vs oracle {}", tag(), ic.len(), oracle.len()))?;
        done += 1;
        per_n[n - 2] += 1;
    }
    within(start.elapsed(), SWEEP, "sweep")?;
    Ok(format!(
        "{done} instances (n=2: {}, n=3: {}), gp ran on {gp_runs}, {skipped} skipped as too large for the oracle, {:.1?}",
        per_n[0],
        per_n[1],
        start.elapsed()
    ))
}

fn random_divisor(ff: &FunctionField, places: &[Place], rng: &mut ChaCha8Rng) -> Divisor {
    let mut d = Divisor::zero(ff);
    for _ in 0..rng.gen_range(1..=4) {
        let p = &places[rng.gen_range(0..places.len())];
        d = d.add(&p.divisor(ff, rng.gen_range(-3..=4)));
    }
    d
}

fn riemann_roch() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    for (q, f) in [E1, (3, "t^2 - (x^5 + x^2 + 1)")] {
        let ff = build_field(q, f).unwrap();
        let g = ff.genus() as i64;
        if q == 3 && f.contains("x^5") {
            ensure(g == 2, || format!("expected genus 2, got {g}"))?;
        }
        let zero = rr_dim(&ff, &Divisor::zero(&ff)).map_err(|e| e.to_string())?;
        ensure(zero == 1, || format!("dim L(0) = {zero}"))?;
        let mut places = places_of_degree(&ff, 1);
        places.extend(places_of_degree(&ff, 2));
        for _ in 0..RR_DIVISORS {
            let d = random_divisor(&ff, &places, &mut rng);
            let deg = d.degree(&ff);
            let dim = rr_dim(&ff, &d).map_err(|e| e.to_string())? as i64;
            ensure(dim >= deg + 1 - g, || format!("{f}: dim {dim} < deg {deg} + 1 - g for {d:?}"))?;
            if deg > 2 * g - 2 {
                ensure(dim == deg + 1 - g, || format!("{f}: dim {dim} != deg {deg} + 1 - g for {d:?}"))?;
            }
            total += 1;
        }
    }
    Ok(format!("{total} divisors, no violations"))
}

fn compact_reps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let fields = [(3, "t^2 - (x^2 + 1)"), E1, (5, "t^2 - (x^4 + x + 2)")];
    let mut count = 0;
    let mut longest = 0;
    while count < CR_ELEMENTS {
        let (q, f) = fields[count % fields.len()];
        let ff = build_field(q, f).unwrap();
        let deg = rng.gen_range(0..=24);
        let num: Vec<Poly> = (0..ff.degree()).map(|_| Poly::new(q, (0..=deg).map(|_| rng.gen_range(0..q)).collect())).collect();
        let mut a = FieldElement::integral(num);
        if a.is_zero() {
            continue;
        }
        if f == "t^2 - (x^2 + 1)" {
            // t + x is a unit; its powers move the infinite values
            let u = ff.generator().add(&ff.x());
            for _ in 0..rng.gen_range(0..=40) {
                a = ff.mul(&a, &u);
            }
        }
        let all = ff.inf_valuations(&a).map_err(|e| e.to_string())?;
        let top = all.iter().map(|v| v.abs()).max().unwrap_or(0);
        if top > CR_MAX_VALUE {
            continue;
        }
        let ideal = FracIdeal::principal(&ff, &a);
        let v = val_inf(&ff, &a).map_err(|e| e.to_string())?;
        let t = comp_rep(&ff, &ideal, &v).map_err(|e| format!("{f}: {e}"))?;
        let e = cr_expand(&ff, &t).map_err(|e| e.to_string())?;
        ensure(FracIdeal::principal(&ff, &e) == ideal, || format!("{f}: ideal differs"))?;
        let got = ff.inf_valuations(&e).map_err(|e| e.to_string())?;
        ensure(got == all, || format!("{f}: infinite values {got:?} != {all:?}"))?;
        let g = ff.genus() as i64;
        let vtop = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        let bound = if vtop + g == 0 { 1 } else { (vtop + g).ilog2() as usize + 1 };
        ensure(t.len() <= bound, || format!("{f}: l = {} > {bound}", t.len()))?;
        ensure(cr_norm(&ff, &t) == ff.norm(&e), || format!("{f}: norm mismatch"))?;
        longest = longest.max(t.len());
        count += 1;
    }
    Ok(format!("{count} elements, longest l = {longest}"))
}

fn negative_instance() -> Outcome {
    let t = Instant::now();
    let ff = build_field(E1.0, E1.1).unwrap();
    let c = poly(3, "x");
    let eq = NormEquation::new(&ff, &c).map_err(|e| e.to_string())?;
    let lim = Limits::default();
    let err = |e: SolveError| e.to_string();
    ensure(eq.gaal_pohst(&lim).map_err(err)?.solutions.is_empty(), || "gp found a solution".into())?;
    ensure(eq.exhaustive_cr(&lim).map_err(err)?.solutions.is_empty(), || "exhaustive found a solution".into())?;
    ensure(eq.index_calculus(&lim).map_err(err)?.solutions.is_empty(), || "index calculus found a solution".into())?;
    let o = brute_solve(&ff, &c, default_cap(&eq.bounds()), &lim).map_err(|e| e.to_string())?;
    ensure(o.is_empty(), || "oracle found a solution".into())?;
    within(t.elapsed(), NEGATIVE, "negative instance")?;
    Ok(format!("all empty, {:.2?}", t.elapsed()))
}

fn gp_refusal() -> Outcome {
    let ff = e2();
    let eq = NormEquation::new(&ff, &poly(5, "x + 4")).map_err(|e| e.to_string())?;
    let t = Instant::now();
    match eq.gaal_pohst(&Limits::default()) {
        Err(SolveError::Budget { count, limit }) if count == (Power { base: 5, exp: 1038 }) => {
            Ok(format!("refused {count} against budget {limit} in {:.2?}", t.elapsed()))
        }
        other => Err(format!("expected refusal, got {:?}", other.map(|s| s.solutions.len()))),
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len().max(1) as f64
}

/// Average times per degree at g = 1, q = 3, deg c = 1. Degree 3 is wildly
/// ramified over F_3 and cannot be built.
fn trend() -> Outcome {
    let start = Instant::now();
    let gp_lim = Limits { enumeration: TREND_GP_BUDGET, ..Limits::default() };
    let lim = Limits::default();
    let mut rows = Vec::new();
    for n in [2usize, 4, 5] {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        let (mut ic_t, mut ex_t, mut gp_t) = (Vec::new(), Vec::new(), Vec::new());
        let mut gp_refused = 0;
        let mut tries = 0;
        while ic_t.len() < TREND_PER_DEGREE && tries < 50_000 {
            tries += 1;
            let Some(ff) = random_field(3, n, &mut rng) else { continue };
            if ff.genus() != 1 {
                continue;
            }
            let c = random_monic(3, 1, &mut rng);
            let eq = NormEquation::new(&ff, &c).map_err(|e| e.to_string())?;
            let t = Instant::now();
            let ic = eq.index_calculus(&lim).map_err(|e| e.to_string())?;
            let a = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let ex = eq.exhaustive_cr(&lim).map_err(|e| e.to_string())?;
            let b = t.elapsed().as_secs_f64();
            ensure(ic.solutions.len() == ex.solutions.len(), || format!("n={n}: solvers disagree"))?;
            let t = Instant::now();
            match eq.gaal_pohst(&gp_lim) {
                Ok(_) => {
                    gp_t.push(t.elapsed().as_secs_f64());
                    ic_t.push(a);
                    ex_t.push(b);
                }
                Err(SolveError::Budget { .. }) => gp_refused += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
        rows.push((n, mean(&ic_t), mean(&ex_t), mean(&gp_t), ic_t.len(), gp_refused));
    }
    within(start.elapsed(), TREND, "trend")?;
    let table: Vec<String> = rows
        .iter()
        .map(|(n, a, b, c, k, r)| format!("n={n}: ic {a:.4}s ex {b:.4}s gp {c:.4}s ({k} rows, {r} gp refusals)"))
        .collect();
    let table = table.join("; ");
    let bad: Vec<usize> = rows.iter().filter(|r| r.4 > 0 && !(r.1 <= r.2 && r.2 <= r.3)).map(|r| r.0).collect();
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    let gp_growth = last.3 / first.3;
    let ex_growth = last.2 / first.2;
    if !bad.is_empty() {
        return Err(format!("ordering ic <= ex <= gp fails at n = {bad:?}; {table}"));
    }
    ensure(gp_growth > ex_growth, || format!("gp grows {gp_growth:.1}x, ex {ex_growth:.1}x; {table}"))?;
    Ok(format!("gp grows {gp_growth:.1}x, ex {ex_growth:.1}x; {table}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("E2 field facts", field_facts),
        ("E2 search-space sizes", search_stats),
        ("E2 unit lattice", unit_lattice),
        ("E2 solver agreement", solver_agreement),
        ("oracle sweep", oracle_sweep),
        ("Riemann-Roch law", riemann_roch),
        ("compact representations", compact_reps),
        ("negative instance", negative_instance),
        ("Gaal-Pohst refusal", gp_refusal),
        ("timing trend", trend),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        match run() {
            Ok(detail) => println!("criterion {id} ({name}): PASS: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL: {detail}");
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
