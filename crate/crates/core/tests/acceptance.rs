//! Acceptance battery. Each criterion prints one PASS or FAIL line with its
//! measured runtime against the pinned bound.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use graphoid::algebra::{int, rat, rat_to_f64, BiPoly, Rat, DEFAULT_PRECISION_BITS};
use graphoid::degree::{
    additivity_check, class_probes, default_outer_radius, mobius_check, obstruction_report, winding_degree,
    z2_degree, CircleChart, Parity, SampledCircleMap,
};
use graphoid::graphoid::{fiber, fiber_radius, sample_boundary_map, tuple_dist, Family};
use graphoid::limits::limit_along;
use graphoid::parser::{parse_rational_fn, RationalFn};
use graphoid::projective::{chordal_dist, from_turn, ProjValue};
use graphoid::puiseux::{expand_branches, BranchSet, Direction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fam(members: &[&str]) -> Family {
    let fs = members.iter().map(|s| parse_rational_fn(s).unwrap()).collect();
    Family::new(fs, DEFAULT_PRECISION_BITS).unwrap()
}

fn curve(s: &str) -> BiPoly {
    parse_rational_fn(s).unwrap().numerator().clone()
}

fn origin() -> (Rat, Rat) {
    (int(0), int(0))
}

fn expand(p: &BiPoly) -> Result<BranchSet, String> {
    expand_branches(p, &origin(), 12, DEFAULT_PRECISION_BITS).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Sign changes of `p` around the circle of radius `r` about the origin.
fn polar_sign_changes(p: &BiPoly, r: f64, n: usize) -> usize {
    let sign = |k: usize| {
        let th = 2.0 * PI * k as f64 / n as f64;
        p.eval_f64(r * th.cos(), r * th.sin()).signum()
    };
    (0..n).filter(|&k| sign(k) * sign((k + 1) % n) < 0.0).count()
}

fn involution(set: &BranchSet) -> bool {
    set.branches.iter().all(|b| {
        let c = set.conjugate_of(b);
        c.id != b.id && set.conjugate_of(c).id == b.id
    })
}

/// Random integer polynomial of total degree at most `deg`, vanishing at
/// the origin.
fn random_curve(rng: &mut ChaCha8Rng, deg: u32) -> BiPoly {
    loop {
        let mut terms = Vec::new();
        for d in 1..=deg {
            for i in 0..=d {
                if rng.gen_bool(0.4) {
                    terms.push((rng.gen_range(-3i64..=3), i, d - i));
                }
            }
        }
        let p = BiPoly::from_int_terms(&terms);
        if !p.is_zero() {
            return p;
        }
    }
}

fn c1_cusp() -> Outcome {
    let set = expand(&curve("y^2 - x^3"))?;
    ensure(set.branches.len() == 2, || format!("{} branches", set.branches.len()))?;
    ensure(involution(&set) && set.branches[0].conj_id == 1, || "not one conjugate pair".into())?;
    let mut lead = Vec::new();
    for b in &set.branches {
        ensure(b.direction == Direction::E && b.m == 2, || format!("branch {} is {:?}, m = {}", b.id, b.direction, b.m))?;
        ensure(b.order_in_u() == Some(rat(3, 2)), || format!("order {:?}", b.order_in_u()))?;
        lead.push(b.psi.coeff(3).map_or(f64::NAN, |c| c.to_f64()));
    }
    lead.sort_by(f64::total_cmp);
    ensure((lead[0] + 1.0).abs() <= 1e-12 && (lead[1] - 1.0).abs() <= 1e-12, || format!("leading {lead:?}"))?;
    Ok("2 east branches, m = 2, ±x^(3/2)".into())
}

fn c2_odd() -> Outcome {
    let set = expand(&curve("x - y^3"))?;
    ensure(set.branches.len() == 2 && involution(&set), || format!("{} branches", set.branches.len()))?;
    let (a, b) = (&set.branches[0], &set.branches[1]);
    ensure(a.direction.opposite() == b.direction, || format!("{:?} and {:?}", a.direction, b.direction))?;
    ensure(a.m % 2 == 1, || format!("m = {}", a.m))?;
    // the halves share only the origin: opposite sides at every radius
    for t in [1e-3, 1e-2, 0.1, 0.3] {
        let (p, q) = (a.point_f64(t), b.point_f64(t));
        ensure(p.1 * q.1 < 0.0, || format!("same side at t = {t}"))?;
        ensure((p.0 - p.1.powi(3)).abs() < 1e-15, || "off the curve".into())?;
    }
    Ok(format!("{:?}/{:?}, m = {}", a.direction, b.direction, a.m))
}

fn c3_even_branches() -> Outcome {
    let named = [
        "y^2 - x^3",
        "y^2 - x^2*(x + 1)",
        "y^2 - x^5",
        "(y - x)*(y + x)",
        "x*y",
        "(y - 2*x)*(y + 3*x)*(y - x/2)",
        "(y^2 - x^3)*(y - 2*x)",
        "x^3 - 3*x*y^2 + y^4",
        "y^3 - x^2*y + x^4",
        "x^2 + y^2",
        "(x^2 + y^2)^2 - x^3 + 3*x*y^2",
        "x - y^3",
    ];
    let mut curves: Vec<(String, BiPoly)> = named.iter().map(|s| (s.to_string(), curve(s))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let p = random_curve(&mut rng, 4);
        curves.push((p.to_string(), p));
    }
    let mut total = 0;
    for (name, p) in &curves {
        let set = expand(p).map_err(|e| format!("{name}: {e}"))?;
        let n = set.branches.len();
        ensure(n % 2 == 0 && involution(&set), || format!("{name}: {n} branches"))?;
        let oracle = polar_sign_changes(&set.curve, rat_to_f64(&set.radius) / 2.0, 1 << 15);
        ensure(oracle == n, || format!("{name}: {n} branches, {oracle} sign changes"))?;
        total += n;
    }
    Ok(format!("{} curves, {total} branches", curves.len()))
}

fn c4_conjugate_limits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0;
    let mut tries = 0;
    while pairs < 100 {
        tries += 1;
        if tries > 5000 {
            return Err(format!("only {pairs} certified pairs"));
        }
        let (p, q, c) = (random_curve(&mut rng, 3), random_curve(&mut rng, 3), random_curve(&mut rng, 3));
        let Ok(f) = RationalFn::new(p, q) else { continue };
        if f.is_constant() {
            continue;
        }
        let Ok(set) = expand(&c) else { continue };
        for b in &set.branches {
            let conj = set.conjugate_of(b);
            if conj.id < b.id {
                continue;
            }
            let (Ok(l1), Ok(l2)) = (limit_along(&f, b), limit_along(&f, conj)) else { continue };
            if !(l1.certified && l2.certified) {
                continue;
            }
            let same = match (&l1.value, &l2.value) {
                (ProjValue::Exact(a), ProjValue::Exact(b)) => a == b,
                (ProjValue::Infinity, ProjValue::Infinity) => true,
                (a, b) => chordal_dist(a, b) <= 1e-9,
            };
            ensure(same, || format!("{f} on {c}: {} vs {}", l1.value, l2.value))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} certified conjugate pairs"))
}

fn c5_fibers() -> Outcome {
    let cot = fiber(&fam(&["x/y"]), &origin(), 1e-6).map_err(|e| e.to_string())?;
    let gap = (0..4096).map(|k| cot.distance_to(&[from_turn(k as f64 / 4096.0)])).fold(0.0, f64::max);
    ensure(gap < 0.01, || format!("x/y fiber misses ℝ̄ by {gap}"))?;
    let arc = fiber(&fam(&["x*y/(x^2 + y^2)"]), &origin(), 1e-6).map_err(|e| e.to_string())?;
    let vals: Vec<f64> = arc.tuples().iter().map(|t| t[0]).collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ensure((lo + 0.5).abs() < 1e-6 && (hi - 0.5).abs() < 1e-6, || format!("arc [{lo}, {hi}]"))?;
    let holes = (0..=200).map(|k| arc.distance_to(&[-0.5 + k as f64 / 200.0])).fold(0.0, f64::max);
    ensure(holes < 1e-3, || format!("arc has a gap of {holes}"))?;
    let family = fam(&["x/y", "x*y/(x^2 + y^2)", "(x^2 - y)/(x + y^2 - 1)"]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 1000 {
        let z = (
            Rat::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=97).into()),
            Rat::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=97).into()),
        );
        if !family.is_regular(&z.0, &z.1) {
            continue;
        }
        let fib = fiber(&family, &z, 1e-6).map_err(|e| e.to_string())?;
        let want = family.eval_f64(rat_to_f64(&z.0), rat_to_f64(&z.1));
        ensure(fib.points.len() == 1 && fib.arcs.is_empty(), || format!("not a singleton at {z:?}"))?;
        ensure(tuple_dist(&fib.points[0], &want) <= 1e-9, || format!("wrong value at {z:?}"))?;
        checked += 1;
    }
    Ok(format!("gap {gap:.2e}, arc [{lo:.9}, {hi:.9}], {checked} singletons"))
}

const CORPUS: &[&[&str]] = &[
    &["x/y"],
    &["x*y/(x^2 + y^2)"],
    &["x/y", "y/x"],
    &["(x^2 - y^2)/(x^2 + y^2)"],
    &["(y^2 - x^3)/(x^2 + y^2)"],
    &["x^2/(x^2 + y^4)"],
    &["(x + y^2)/y"],
    &["x/y", "(x - 1)/y"],
    &["(x^2 + y^2 - 1)/(x - y)"],
    &["y/(x^2 - y)", "x"],
    &["(x^3 - y^2)/(x*y)"],
    &["(x - 1)/(y + 2)", "x/y"],
    &["x/y", "(x - 1)/(y - 1)", "(x + 1)/y"],
    &["(y^2 - x^2*(x + 1))/x"],
];

fn center_of(p: &graphoid::parser::IndeterminacyPoint) -> (Rat, Rat) {
    p.exact().unwrap_or_else(|| (p.x.mid().clone(), p.y.mid().clone()))
}

fn c6_monotone() -> Outcome {
    let mut checked = 0;
    for f in CORPUS {
        let family = fam(f);
        for p in family.singular_points() {
            let z = center_of(p);
            let r0 = fiber_radius(&family, &z);
            for r in [r0.clone(), &r0 / int(16)] {
                let s = sample_boundary_map(&family, &z, &r, 2048).map_err(|e| e.to_string())?;
                let bad = s.monotone_violations();
                ensure(bad.is_empty(), || format!("{f:?} at {:?}, radius {r}: {bad:?}", p.to_f64()))?;
                checked += s.num_pieces();
            }
        }
    }
    Ok(format!("{checked} pieces"))
}

fn c7_parity() -> Outcome {
    let family = fam(&["x/y"]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut parities = Vec::new();
    for n in [1024, 4096] {
        let s = sample_boundary_map(&family, &origin(), &int(1), n).map_err(|e| e.to_string())?;
        let m = SampledCircleMap::from_samples(&s, &CircleChart::Coordinate(0)).map_err(|e| e.to_string())?;
        let w = winding_degree(&m).map_err(|e| e.to_string())?;
        ensure(w.abs() == 2, || format!("winding {w} at n = {n}"))?;
        for _ in 0..10 {
            let r = z2_degree(&m, None, &mut rng).map_err(|e| e.to_string())?;
            ensure(r.preimage_count == 2 && r.z2_trivial, || format!("{r:?} at n = {n}"))?;
            parities.push(r.parity);
        }
    }
    ensure(parities.iter().all(|p| *p == Parity::Even), || "parities differ".into())?;
    Ok("winding -2, 2 preimages at 20 regular values".into())
}

const ADDITIVITY: &[&[&str]] = &[
    &["x/y"],
    &["x*y/(x^2 + y^2)"],
    &["x/y", "y/x"],
    &["(x^2 - y^2)/(x^2 + y^2)"],
    &["(y^2 - x^3)/(x^2 + y^2)"],
    &["(x + y^2)/y"],
    &["x/y", "(x - 1)/y"],
    &["(x^2 + y^2 - 1)/(x - y)"],
    &["(x^3 - y^2)/(x*y)"],
    &["(x - 1)/(y + 2)", "x/y"],
    &["x/y", "(x - 1)/(y - 1)", "(x + 1)/y"],
];

fn c8_additivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut classes = 0;
    for f in ADDITIVITY {
        let family = fam(f);
        let k = family.singular_points().len();
        ensure((1..=3).contains(&k), || format!("{f:?} has {k} singular points"))?;
        let big = default_outer_radius(&family);
        for chart in [CircleChart::Coordinate(0), CircleChart::TurnSum] {
            let rep = additivity_check(&family, &big, &chart, 4096, &mut rng).map_err(|e| format!("{f:?}: {e}"))?;
            ensure(rep.consistent, || format!("{f:?} {chart:?}: {rep:?}"))?;
        }
        for p in family.singular_points() {
            for c in class_probes(&family, p, 1e-6, 4096, &mut rng).map_err(|e| format!("{f:?}: {e}"))? {
                ensure(c.report.z2_trivial, || format!("{f:?} at {:?}: {c:?}", p.to_f64()))?;
                classes += 1;
            }
        }
    }
    Ok(format!("{} families, {classes} coherent classes even", ADDITIVITY.len()))
}

fn c9_obstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let family = fam(&["x/y"]);
    let rep = obstruction_report(&family, &default_outer_radius(&family), &CircleChart::Coordinate(0), 4096, &mut rng)
        .map_err(|e| e.to_string())?;
    ensure(rep.applies && rep.radial_winding == 1 && rep.radial_parity == Parity::Odd, || format!("{rep:?}"))?;
    ensure(rep.inner_xor == Parity::Even && rep.obstruction, || format!("{rep:?}"))?;
    Ok("radial degree 1 (odd) vs inner parity 0 (even)".into())
}

fn c10_mobius() -> Outcome {
    let centers = [(int(0), int(0)), (int(1), int(-2)), (rat(1, 2), rat(3, 7)), (int(-5), int(4)), (rat(-7, 3), int(0))];
    for (a, b) in &centers {
        let f = parse_rational_fn(&format!("(x - ({a}))/(y - ({b}))")).unwrap();
        let rep = mobius_check(&f, &(a.clone(), b.clone()), &rat(1, 2), 1024).map_err(|e| e.to_string())?;
        ensure(rep.passed && rep.antipodal_max <= 1e-9 && rep.winding.abs() == 2, || format!("({a}, {b}): {rep:?}"))?;
    }
    Ok(format!("{} centers", centers.len()))
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("family.txt");
    std::fs::write(&path, "x/y\n(x - 1)/y\n").map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_graphoid"))
            .args(["verify", "--seed", "0"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("cusp branches", 1, c1_cusp),
        ("odd-parity conjugation", 1, c2_odd),
        ("even-branch law", 60, c3_even_branches),
        ("conjugate-limit law", 120, c4_conjugate_limits),
        ("fibers", 30, c5_fibers),
        ("monotone-segment law", 60, c6_monotone),
        ("parity laws", 10, c7_parity),
        ("additivity", 120, c8_additivity),
        ("obstruction report", 10, c9_obstruction),
        ("Möbius double cover", 10, c10_mobius),
        ("determinism", 60, c11_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit} s bound")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("{status} {:>2} {name}: {detail} ({:.2} s)", k + 1, took.as_secs_f64());
        if status == "FAIL" {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
