use flowcomp::report::{identification_report, BaseGrid, QuotientDiagnostic, Region, ReportRequest};
use flowcomp::scenarios::builtin;

fn small(name: &str, lower: f64, upper: f64, points: usize) -> flowcomp::report::IdentificationReport {
    let s = builtin(name).unwrap();
    let mut req = ReportRequest::from_scenario(&s).unwrap();
    let n = s.field.dim();
    req.grid = BaseGrid::new(vec![lower; n], vec![upper; n], vec![points; n]).unwrap();
    req.ring = 2;
    identification_report(&req).unwrap()
}

#[test]
fn region_fixtures_hold_on_default_grids() {
    for name in ["example2", "example3"] {
        let s = builtin(name).unwrap();
        let req = ReportRequest::from_scenario(&s).unwrap();
        let report = identification_report(&req).unwrap();
        for f in &s.fixtures.regions {
            let loc = report.location_at(&f.at).unwrap();
            assert_eq!(loc.classes, f.classes, "{name} at {:?}", f.at);
            assert_eq!(loc.region.as_str(), f.region, "{name} at {:?}", f.at);
        }
    }
}

#[test]
fn rotation_is_all_single() {
    let r = small("rotation2d", -1.0, 1.0, 9);
    assert!(r.locations.iter().all(|l| l.region == Region::Single), "{}", r.render_text());
    assert!(r.edges.is_empty());
    assert_eq!(r.diagnostic, QuotientDiagnostic::LocallyManifold);
}

#[test]
fn reports_are_deterministic() {
    let a = small("example3", -2.0, 2.0, 9);
    let b = small("example3", -2.0, 2.0, 9);
    assert_eq!(a, b);
    assert_eq!(a.render_text(), b.render_text());
}

#[test]
fn class_counts_match_same_point() {
    let s = builtin("example2").unwrap();
    let r = small("example2", -2.0, 2.0, 9);
    let c = flowcomp::completion::Completion::new(&s.field, s.config.completion);
    for l in r.locations.iter().filter(|l| l.classes > 1) {
        for (i, a) in l.representatives.iter().enumerate() {
            for b in &l.representatives[i + 1..] {
                let pa = c.embed(a.s, &a.x).unwrap();
                let pb = c.embed(b.s, &b.x).unwrap();
                assert_eq!(c.same_point(&pa, &pb), Ok(false), "{a} {b}");
            }
        }
    }
}
