//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p flowcomp --test acceptance`.

use std::time::Instant;

use flowcomp::completion::{complete_flow, ChartHandle, Completion, CompletionConfig};
use flowcomp::integrator::{flow, order_check, FlowStatus};
use flowcomp::report::{identification_report, QuotientDiagnostic, Region, ReportRequest};
use flowcomp::scenarios::{builtin, Scenario};
use flowcomp::separability::{SeparabilityProbe, VerdictKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(20240601)
}

fn point_in(s: &Scenario, rng: &mut ChaCha8Rng, half: f64) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..s.field.dim()).map(|_| rng.random_range(-half..half)).collect();
        if s.field.contains(&x).unwrap() {
            return x;
        }
    }
}

/// Grid locations within 1.5 grid steps of the excluded set.
fn near_excluded(s: &Scenario, x: &[f64], h: f64) -> bool {
    let r = 1.5 * h;
    [(-r, -r), (-r, 0.0), (-r, r), (0.0, -r), (0.0, 0.0), (0.0, r), (r, -r), (r, 0.0), (r, r)]
        .iter()
        .any(|(dx, dy)| !s.field.contains(&[x[0] + dx, x[1] + dy]).unwrap())
}

fn criterion_1() -> Outcome {
    let s = builtin("example2").unwrap();
    let req = ReportRequest::from_scenario(&s).unwrap();
    let start = Instant::now();
    let r = identification_report(&req).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let h = req.grid.spacing(1);
    let mut bad = Vec::new();
    for l in &r.locations {
        let on_axis = l.position[1] == 0.0;
        let ok = if on_axis {
            l.classes == 2 && l.region == Region::DoubledNonseparable
        } else {
            l.classes == 1 && l.region == Region::Single
        };
        if !ok {
            bad.push(format!("{:?}", l.position));
        }
    }
    let stray_unknown = r
        .locations
        .iter()
        .filter(|l| l.region == Region::Unknown && !near_excluded(&s, &l.position, h))
        .count();
    check(
        bad.is_empty() && stray_unknown == 0 && r.diagnostic == QuotientDiagnostic::LocallyManifold && secs <= 60.0,
        format!(
            "{} axis locations doubled_nonseparable, {} off-axis single, misclassified {:?}, unknown away from excluded set {stray_unknown}, diagnostic {}, {secs:.1} s",
            r.region_count(Region::DoubledNonseparable),
            r.region_count(Region::Single),
            bad.iter().take(5).collect::<Vec<_>>(),
            r.diagnostic
        ),
    )
}

fn criterion_2() -> Outcome {
    let s = builtin("example3").unwrap();
    let req = ReportRequest::from_scenario(&s).unwrap();
    let start = Instant::now();
    let r = identification_report(&req).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let mut bad = Vec::new();
    let mut lines = 0;
    for l in &r.locations {
        let y = l.position[1].abs();
        let ok = if y < 1.0 {
            l.classes == 2 && l.region == Region::DoubledSeparated
        } else if y == 1.0 {
            lines += 1;
            let sheets = r
                .edges
                .iter()
                .find(|e| r.locations[e.location].position == l.position)
                .and_then(|e| e.sheets);
            l.classes == 2
                && l.region == Region::DoubledNonseparable
                && matches!(sheets, Some((2, 1)) | Some((1, 2)))
        } else {
            l.classes == 1 && l.region == Region::Single
        };
        if !ok {
            bad.push(format!("{:?}", l.position));
        }
    }
    check(
        bad.is_empty() && lines == 82 && r.diagnostic == QuotientDiagnostic::BranchingDetected && secs <= 120.0,
        format!(
            "strip {} doubled_separated, lines {} doubled_nonseparable with sheet patterns {:?}, outside {} single, misclassified {:?}, diagnostic {}, {secs:.1} s",
            r.region_count(Region::DoubledSeparated),
            r.region_count(Region::DoubledNonseparable),
            r.sheet_patterns(),
            r.region_count(Region::Single),
            bad.iter().take(5).collect::<Vec<_>>(),
            r.diagnostic
        ),
    )
}

fn escape_time(name: &str, x0: &[f64], t: f64) -> Option<f64> {
    let s = builtin(name).unwrap();
    let out = flow(&s.field, x0, t, &s.config.completion.integrator).ok()?;
    (out.status == FlowStatus::Escaped).then_some(out.escape_time_estimate?)
}

fn criterion_3() -> Outcome {
    let a = escape_time("blowup1d", &[1.0], 2.0);
    let b = escape_time("example2", &[-1.0, 0.0], 2.0);
    let ea = a.map_or(f64::INFINITY, |t| (t - 1.0).abs());
    let eb = b.map_or(f64::INFINITY, |t| (t - 1.0).abs());
    check(
        ea <= 1e-6 && eb <= 1e-8,
        format!("blowup1d escape error {ea:.2e} (tol 1e-6), example2 escape error {eb:.2e} (tol 1e-8)"),
    )
}

fn criterion_4() -> Outcome {
    let s = builtin("example2").unwrap();
    let c = Completion::new(&s.field, s.config.completion);
    let mut rng = rng();
    let mut errors = 0;
    for _ in 0..10_000 {
        let tag = rng.random_range(-1e6..1e6);
        let x = point_in(&s, &mut rng, 2.0);
        let t = rng.random_range(-1e6..1e6);
        let p = c.embed(tag, &x).unwrap();
        let q = complete_flow(&p, t);
        let back = complete_flow(&q, -t);
        let ok = q.tag().is_finite()
            && q.coords() == x.as_slice()
            && q.tag() == tag - t
            && (back.tag() - tag).abs() <= 1e-9 * (1.0 + tag.abs() + t.abs());
        if !ok {
            errors += 1;
        }
    }
    check(errors == 0, format!("10000 samples, {errors} errors"))
}

fn criterion_5() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for name in ["example2", "rotation2d"] {
        let s = builtin(name).unwrap();
        let cfg = CompletionConfig {
            match_tol: 1e-5,
            ..s.config.completion
        };
        let c = Completion::new(&s.field, cfg);
        let mut rng = rng();
        let (mut defined, mut passed) = (0, 0);
        for _ in 0..200 {
            let tag = rng.random_range(-3.0..3.0);
            let x = point_in(&s, &mut rng, 2.0);
            let t = rng.random_range(-3.0..3.0);
            let out = flow(&s.field, &x, t, &cfg.integrator).unwrap();
            if out.status != FlowStatus::Completed {
                continue;
            }
            defined += 1;
            let lhs = complete_flow(&c.embed(tag, &x).unwrap(), t);
            let rhs = c.embed(tag, &out.last_state).unwrap();
            if c.same_point(&lhs, &rhs) == Ok(true) {
                passed += 1;
            }
        }
        ok &= defined > 0 && passed == defined;
        details.push(format!("{name} {passed}/{defined}"));
    }
    check(ok, format!("defined cases passing: {}", details.join(", ")))
}

fn criterion_6() -> Outcome {
    let s = builtin("example2").unwrap();
    let c = Completion::new(&s.field, s.config.completion);
    let cfg = s.config.completion.integrator;
    let mut rng = rng();
    let mut cocycle = (0, 0.0f64);
    while cocycle.0 < 200 {
        let x = point_in(&s, &mut rng, 2.0);
        let [q, r, u]: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let direct = c.transition(q, u, &x);
        let via = c.transition(q, r, &x).and_then(|m| c.transition(r, u, &m));
        if let (Ok(a), Ok(b)) = (direct, via) {
            cocycle.0 += 1;
            cocycle.1 = cocycle.1.max(dist(&a, &b));
        }
    }
    let mut group = (0, 0.0f64, 0.0f64);
    for name in ["example2", "rotation2d"] {
        let s = builtin(name).unwrap();
        let mut taken = 0;
        while taken < 250 {
            let x = point_in(&s, &mut rng, 2.0);
            let a = rng.random_range(-2.0..2.0);
            let b = rng.random_range(-2.0..2.0);
            let fa = flow(&s.field, &x, a, &cfg).unwrap();
            let Some(y) = fa.endpoint() else { continue };
            let fab = flow(&s.field, y, b, &cfg).unwrap();
            let sum = flow(&s.field, &x, a + b, &cfg).unwrap();
            let back = flow(&s.field, y, -a, &cfg).unwrap();
            let (Some(ab), Some(sum), Some(back)) = (fab.endpoint(), sum.endpoint(), back.endpoint()) else {
                continue;
            };
            taken += 1;
            group.0 += 1;
            group.1 = group.1.max(dist(ab, sum));
            group.2 = group.2.max(dist(back, &x));
        }
    }
    check(
        cocycle.1 <= 1e-6 && group.1 <= 1e-6 && group.2 <= 1e-6,
        format!(
            "cocycle max defect {:.2e} on {} triple overlaps, group law {:.2e} and inversion {:.2e} on {} samples",
            cocycle.1, cocycle.0, group.1, group.2, group.0
        ),
    )
}

fn criterion_7() -> Outcome {
    let s = builtin("rotation2d").unwrap();
    let c = Completion::new(&s.field, s.config.completion);
    let mut rng = rng();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..500 {
        let tag = rng.random_range(-20.0..20.0);
        let x = point_in(&s, &mut rng, 2.0);
        let p = c.embed(tag, &x).unwrap();
        match c.to_chart(&p, ChartHandle { s: 0.0 }) {
            Ok(z) => {
                let q = c.embed(0.0, &z).unwrap();
                match c.to_chart(&q, ChartHandle { s: tag }) {
                    Ok(back) => worst = worst.max(dist(&back, &x)),
                    Err(_) => failures += 1,
                }
            }
            Err(_) => failures += 1,
        }
    }
    let req = ReportRequest::from_scenario(&s).unwrap();
    let r = identification_report(&req).map_err(|e| e.to_string())?;
    let nonsep = r.edges.iter().filter(|e| e.verdict == VerdictKind::NonSeparable).count();
    check(
        failures == 0 && worst <= 1e-6 && nonsep == 0 && r.region_count(Region::Single) == r.locations.len(),
        format!(
            "500 points, {failures} outside chart 0, round-trip error {worst:.2e}; report: {} locations single, {nonsep} non-separable pairs",
            r.region_count(Region::Single)
        ),
    )
}

fn criterion_8() -> Outcome {
    let s = builtin("example2").unwrap();
    let f = s.morphism("inclusion").unwrap();
    let c = Completion::new(&s.field, s.config.completion);
    let cfg = s.config.completion.integrator;
    let mut rng = rng();
    let mut exact_fail = 0;
    let mut equiv = 0.0f64;
    for _ in 0..100 {
        let x = point_in(&s, &mut rng, 2.0);
        let p = c.embed(0.0, &x).unwrap();
        if c.lift_morphism(f, &p, f64::INFINITY).unwrap() != f.apply(&x).unwrap() {
            exact_fail += 1;
        }
        let tag = rng.random_range(-3.0..3.0);
        let t = rng.random_range(-3.0..3.0);
        let p = c.embed(tag, &x).unwrap();
        let lhs = c.lift_morphism(f, &complete_flow(&p, t), f64::INFINITY).unwrap();
        let base = c.lift_morphism(f, &p, f64::INFINITY).unwrap();
        let rhs = flow(&f.target, &base, t, &cfg).unwrap();
        equiv = equiv.max(dist(&lhs, &rhs.last_state));
    }
    let mut doubled = 0.0f64;
    for k in -20..=20 {
        let a = k as f64 * 0.1;
        let minus = c.embed(-1.0 - a, &[-1.0, 0.0]).unwrap();
        let plus = c.embed(1.0 - a, &[1.0, 0.0]).unwrap();
        let fm = c.lift_morphism(f, &minus, f64::INFINITY).unwrap();
        let fp = c.lift_morphism(f, &plus, f64::INFINITY).unwrap();
        doubled = doubled.max(dist(&fm, &fp)).max(dist(&fm, &[a, 0.0]));
    }
    check(
        exact_fail == 0 && equiv <= 1e-6 && doubled <= 1e-6,
        format!(
            "f_R o j_0 = f exactly: {} of 100; equivariance defect {equiv:.2e}; doubled axis points map together within {doubled:.2e} (41 locations)",
            100 - exact_fail
        ),
    )
}

fn criterion_9() -> Outcome {
    let s = builtin("example2").unwrap();
    let c = Completion::new(&s.field, s.config.completion);
    let mut rng = rng();
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let v: f64 = rng.random_range(-2.0..2.0);
        if v.abs() > 1e-3 {
            break v;
        }
    };
    let (mut agree, mut disagree, mut unknown, mut same) = (0, 0, 0, 0);
    for i in 0..50 {
        // Three kinds of pair: unrelated points, points on one horizontal
        // line off the axis, and points on the axis (cut apart by the origin
        // when their signs differ).
        let (x, y) = match i % 3 {
            0 => (point_in(&s, &mut rng, 2.0), point_in(&s, &mut rng, 2.0)),
            1 => {
                let h = nonzero(&mut rng);
                (vec![rng.random_range(-2.0..2.0), h], vec![rng.random_range(-2.0..2.0), h])
            }
            _ => (vec![nonzero(&mut rng), 0.0], vec![nonzero(&mut rng), 0.0]),
        };
        let in_m = c.same_orbit_m(&x, &y, 10.0);
        let in_completion = c.same_orbit_completion(&c.embed(0.0, &x).unwrap(), &c.embed(0.0, &y).unwrap());
        match (in_m, in_completion) {
            (Ok(m), Ok(r)) => {
                same += m as usize;
                if m == r {
                    agree += 1;
                } else {
                    disagree += 1;
                }
            }
            _ => unknown += 1,
        }
    }
    check(
        disagree == 0 && unknown <= 5,
        format!("{agree} agree ({same} on a common orbit), {disagree} disagree, {unknown} unknown (max 5)"),
    )
}

fn criterion_10() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for name in ["example2", "example3"] {
        let s = builtin(name).unwrap();
        let c = Completion::new(&s.field, s.config.completion);
        let probe = SeparabilityProbe::new(&c, s.config.separability.clone());
        let (mut confirmed, mut total) = (0, 0);
        let mut failures = Vec::new();
        for f in &s.fixtures.nonseparable_pairs {
            let p = c.embed(f.p.s, &f.p.x).unwrap();
            let q = c.embed(f.q.s, &f.q.x).unwrap();
            total += 1;
            match probe.flow_invariance(&p, &q, &f.times) {
                Ok(o) if o.confirmed() => confirmed += 1,
                Ok(o) => failures.push(format!("{} {} {:?}", f.p, f.q, o.per_time)),
                Err(e) => failures.push(format!("{} {} {e}", f.p, f.q)),
            }
        }
        ok &= total == 10 && confirmed == total;
        details.push(format!("{name} {confirmed}/{total} pairs x 3 times {failures:?}"));
    }
    check(ok, details.join("; "))
}

fn criterion_11() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (name, x0, t) in [("rotation2d", vec![1.0, 0.5], 10.0), ("linear1d", vec![1.0], 5.0)] {
        let s = builtin(name).unwrap();
        let r = order_check(&s.field, &x0, t, &s.config.completion.integrator).map_err(|e| e.to_string())?;
        let p = r.order.unwrap_or(f64::NAN);
        ok &= p >= 3.8;
        details.push(format!("{name} order {p:.2}"));
    }
    check(ok, details.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("example2 structure", criterion_1),
        ("example3 structure", criterion_2),
        ("escape-time accuracy", criterion_3),
        ("completeness of the complete flow", criterion_4),
        ("charts intertwine the flows", criterion_5),
        ("cocycle and group law", criterion_6),
        ("complete-field degeneracy", criterion_7),
        ("universal property of the lift", criterion_8),
        ("orbit partition agreement", criterion_9),
        ("non-separability is flow invariant", criterion_10),
        ("integrator order", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1} s]", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
