use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn flowcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowcomp"))
        .args(args)
        .output()
        .expect("flowcomp runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored golden file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs; rerun with UPDATE_GOLDEN=1 to accept");
}

#[test]
fn list_names_every_builtin() {
    let out = flowcomp(&["list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in ["example2", "example3", "blowup1d", "rotation2d", "linear1d"] {
        assert!(text.contains(name), "{name} missing from {text}");
    }
}

#[test]
fn show_prints_a_loadable_scenario() {
    let out = flowcomp(&["show", "example3"]);
    assert_eq!(code(&out), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.toml");
    std::fs::write(&path, stdout(&out)).unwrap();
    let copy = flowcomp(&["same-point", path.to_str().unwrap(), "--p", "0:0.5,0.5", "--q", "1:1.5,0.5"]);
    assert_eq!(code(&copy), 0, "{}", String::from_utf8_lossy(&copy.stderr));
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    assert_eq!(code(&flowcomp(&["show", "no-such-scenario"])), 2);
    assert_eq!(code(&flowcomp(&["flow", "example2", "--x0", "1,2,3", "--t", "1"])), 2);
    assert_eq!(code(&flowcomp(&["frobnicate"])), 2);
}

#[test]
fn flow_reports_escape_from_the_axis() {
    let out = flowcomp(&["flow", "example2", "--x0", "-1,0", "--t", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("status=Escaped"), "{text}");
    let t: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("escape_time="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((t - 1.0).abs() < 1e-8, "{t}");
}

#[test]
fn flow_writes_csv_samples() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rot.csv");
    let out = flowcomp(&["flow", "rotation2d", "--x0", "1,0", "--t", "3.14159", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "x1", "x2"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.len() > 2);
    let last = rows.last().unwrap();
    let x1: f64 = last[1].parse().unwrap();
    assert!((x1 + 1.0).abs() < 1e-4, "{x1}");
}

#[test]
fn separability_exit_codes_follow_the_verdict() {
    let nonsep = flowcomp(&["separability", "example2", "--p", "-1:-1,0", "--q", "1:1,0"]);
    assert_eq!(code(&nonsep), 4, "{}", stdout(&nonsep));
    assert!(stdout(&nonsep).contains("NonSeparable"));

    let separated = flowcomp(&["separability", "example3", "--p", "-1:-1,0.5", "--q", "1:1,0.5"]);
    assert_eq!(code(&separated), 3, "{}", stdout(&separated));

    let equal = flowcomp(&["separability", "example2", "--p", "0:1,1", "--q", "1:2,1"]);
    assert_eq!(code(&equal), 0, "{}", stdout(&equal));
}

#[test]
fn same_point_exit_codes() {
    assert_eq!(code(&flowcomp(&["same-point", "example2", "--p", "0:1,1", "--q", "1:2,1"])), 0);
    assert_eq!(code(&flowcomp(&["same-point", "example2", "--p", "-1:-1,0", "--q", "1:1,0"])), 3);
}

#[test]
fn orbit_separates_the_axis_halves() {
    assert_eq!(code(&flowcomp(&["orbit", "example2", "--p", "0:-1,0.5", "--q", "0:1,0.5"])), 0);
    assert_eq!(code(&flowcomp(&["orbit", "example2", "--p", "0:-1,0", "--q", "0:1,0"])), 3);
}

#[test]
fn lift_maps_both_doubled_points_to_one_target() {
    let a = flowcomp(&["lift", "example2", "--morphism", "inclusion", "--p", "-1:-1,0"]);
    let b = flowcomp(&["lift", "example2", "--morphism", "inclusion", "--p", "1:1,0"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let blowup = flowcomp(&["lift", "blowup1d", "--morphism", "identity", "--p", "-2:1"]);
    assert_eq!(code(&blowup), 1);
}

#[test]
fn report_text_is_pinned_for_small_grids() {
    for name in ["example2", "example3"] {
        let out = flowcomp(&["report", name, "--points", "9,9", "--tags=-2,0,2", "--ring", "1", "--seed", "7"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_golden(&format!("report_{name}.txt"), &stdout(&out));
    }
}

#[test]
fn report_is_independent_of_the_thread_count() {
    let args = ["report", "example3", "--points", "9,9", "--tags=-2,0,2", "--ring", "1"];
    let one = flowcomp(&[&args[..], &["--jobs", "1"]].concat());
    let two = flowcomp(&[&args[..], &["--jobs", "2"]].concat());
    assert_eq!(stdout(&one), stdout(&two));
}

#[test]
fn report_writes_its_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = flowcomp(&[
        "report",
        "example2",
        "--points",
        "5,5",
        "--tags=-1,0,1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    for file in ["report.txt", "locations.csv", "edges.csv", "doubled_loci.svg"] {
        assert!(dir.path().join(file).is_file(), "{file} missing");
    }
    let locations = csv::Reader::from_path(dir.path().join("locations.csv")).unwrap().into_records().count();
    assert_eq!(locations, 25);
    let svg = std::fs::read_to_string(dir.path().join("doubled_loci.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn figures_writes_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = flowcomp(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let written: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(written.iter().any(|f| f.to_string_lossy().ends_with(".csv")));
    assert!(written.iter().any(|f| f.to_string_lossy().ends_with(".svg")));
}
