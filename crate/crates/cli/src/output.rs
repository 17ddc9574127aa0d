//! CSV and SVG writers.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use flowcomp::integrator::flow;
use flowcomp::report::{IdentificationReport, Region};
use flowcomp::scenarios::builtin;
use flowcomp::separability::VerdictKind;

fn join(x: &[f64], sep: &str) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn coord_header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}x{i}")).collect()
}

pub fn write_samples(path: &Path, dim: usize, samples: &[(f64, Vec<f64>)]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["t".to_string()];
    header.extend(coord_header("", dim));
    w.write_record(&header)?;
    for (t, x) in samples {
        let mut row = vec![t.to_string()];
        row.extend(x.iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()
}

fn region_color(r: Region) -> &'static str {
    match r {
        Region::Empty => "none",
        Region::Single => "#c8c8c8",
        Region::DoubledSeparated => "#3b6fd8",
        Region::DoubledNonseparable => "#d8323b",
        Region::Unknown => "#f0a020",
    }
}

/// Affine map from data coordinates to a square canvas.
struct Canvas {
    lo: (f64, f64),
    hi: (f64, f64),
    size: f64,
    pad: f64,
}

impl Canvas {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let w = self.size - 2.0 * self.pad;
        (
            self.pad + (x - self.lo.0) / (self.hi.0 - self.lo.0) * w,
            self.size - self.pad - (y - self.lo.1) / (self.hi.1 - self.lo.1) * w,
        )
    }

    fn open(&self, title: &str) -> String {
        let mut s = String::new();
        writeln!(
            s,
            r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">
<title>{1}</title>
<rect x="0" y="0" width="{0}" height="{0}" fill="white"/>"##,
            self.size, title
        )
        .unwrap();
        let (x0, y0) = self.px(self.lo.0, self.lo.1);
        let (x1, y1) = self.px(self.hi.0, self.hi.1);
        writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##,
            x1 - x0,
            y0 - y1
        )
        .unwrap();
        s
    }
}

fn report_svg(report: &IdentificationReport) -> String {
    let g = &report.grid;
    let two_d = g.dim() == 2;
    let (lo, hi) = if two_d {
        ((g.lower()[0], g.lower()[1]), (g.upper()[0], g.upper()[1]))
    } else {
        ((g.lower()[0], -1.0), (g.upper()[0], 1.0))
    };
    let canvas = Canvas {
        lo,
        hi,
        size: 640.0,
        pad: 40.0,
    };
    let mut s = canvas.open(&format!("{}: doubled loci", report.scenario));
    let at = |x: &[f64]| canvas.px(x[0], if two_d { x[1] } else { 0.0 });
    for e in &report.edges {
        if e.verdict != VerdictKind::NonSeparable || e.a.x.len() > 2 {
            continue;
        }
        let (ax, ay) = at(&e.a.x);
        let (bx, by) = at(&e.b.x);
        writeln!(
            s,
            r##"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="#d8323b" stroke-opacity="0.15" stroke-width="1"/>"##
        )
        .unwrap();
    }
    for l in &report.locations {
        if l.region == Region::Empty || l.position.len() > 2 {
            continue;
        }
        let (cx, cy) = at(&l.position);
        let r = 1.5 + 1.0 * l.classes.min(4) as f64;
        writeln!(
            s,
            r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r:.1}" fill="{}"/>"##,
            region_color(l.region)
        )
        .unwrap();
    }
    let mut y = 18.0;
    for r in [
        Region::Single,
        Region::DoubledSeparated,
        Region::DoubledNonseparable,
        Region::Unknown,
    ] {
        writeln!(
            s,
            r##"<circle cx="12" cy="{y}" r="4" fill="{}"/><text x="20" y="{}" font-family="sans-serif" font-size="11">{}</text>"##,
            region_color(r),
            y + 4.0,
            r
        )
        .unwrap();
        y += 14.0;
    }
    writeln!(
        s,
        r##"<text x="{}" y="18" font-family="sans-serif" font-size="12" text-anchor="end">quotient: {}</text>"##,
        canvas.size - 10.0,
        report.diagnostic
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

pub fn write_report(dir: &Path, report: &IdentificationReport, text: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.txt"), text)?;

    let n = report.grid.dim();
    let mut w = csv::Writer::from_path(dir.join("locations.csv"))?;
    let mut header = coord_header("", n);
    header.extend(
        ["samples", "classes", "quotient_classes", "region", "representatives"]
            .iter()
            .map(|s| s.to_string()),
    );
    w.write_record(&header)?;
    for l in &report.locations {
        let mut row: Vec<String> = l.position.iter().map(|v| v.to_string()).collect();
        row.push(l.samples.to_string());
        row.push(l.classes.to_string());
        row.push(l.quotient_classes.to_string());
        row.push(l.region.to_string());
        row.push(
            l.representatives
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" | "),
        );
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("edges.csv"))?;
    let mut header = coord_header("", n);
    header.extend(
        ["a", "b", "verdict", "final_distance", "sheets_negative", "sheets_positive"]
            .iter()
            .map(|s| s.to_string()),
    );
    w.write_record(&header)?;
    for e in &report.edges {
        let mut row: Vec<String> = report.locations[e.location]
            .position
            .iter()
            .map(|v| v.to_string())
            .collect();
        row.push(e.a.to_string());
        row.push(e.b.to_string());
        row.push(e.verdict.to_string());
        row.push(e.final_distance.map_or(String::new(), |d| format!("{d:e}")));
        row.push(e.sheets.map_or(String::new(), |s| s.0.to_string()));
        row.push(e.sheets.map_or(String::new(), |s| s.1.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;

    if n <= 2 {
        fs::write(dir.join("doubled_loci.svg"), report_svg(report))?;
    }
    Ok(())
}

type Curve = (String, Vec<(f64, Vec<f64>)>);

fn curves_csv(path: &Path, dim: usize, curves: &[Curve]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["curve".to_string(), "t".to_string()];
    header.extend(coord_header("", dim));
    w.write_record(&header)?;
    for (name, pts) in curves {
        for (t, x) in pts {
            let mut row = vec![name.clone(), t.to_string()];
            row.extend(x.iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()
}

fn curves_svg(title: &str, canvas: &Canvas, curves: &[(String, Vec<(f64, f64)>)], extra: &str) -> String {
    let mut s = canvas.open(title);
    for (_, pts) in curves {
        let path: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                let (a, b) = canvas.px(
                    x.clamp(canvas.lo.0, canvas.hi.0),
                    y.clamp(canvas.lo.1, canvas.hi.1),
                );
                format!("{a:.2},{b:.2}")
            })
            .collect();
        writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#2a5db0" stroke-width="1.5"/>"##,
            path.join(" ")
        )
        .unwrap();
    }
    s.push_str(extra);
    s.push_str("</svg>\n");
    s
}

/// Trajectory families of the two planar examples and of the blow-up field.
pub fn write_figures(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let err = |e: String| io::Error::other(e);
    for name in ["example2", "example3"] {
        let s = builtin(name).map_err(|e| err(e.to_string()))?;
        let cfg = s.config.completion.integrator;
        let mut curves: Vec<Curve> = Vec::new();
        for k in -6..=6 {
            let y = k as f64 * 0.25;
            for (label, x0, t) in [("fwd", -2.0, 4.0), ("bwd", 2.0, -4.0)] {
                let out = flow(&s.field, &[x0, y], t, &cfg).map_err(|e| err(e.to_string()))?;
                curves.push((format!("{label}_y{}", join(&[y], "")), out.dense_samples));
            }
        }
        curves_csv(&dir.join(format!("{name}_trajectories.csv")), 2, &curves)?;
        let canvas = Canvas {
            lo: (-2.0, -2.0),
            hi: (2.0, 2.0),
            size: 480.0,
            pad: 30.0,
        };
        let extra = if name == "example2" {
            let (cx, cy) = canvas.px(0.0, 0.0);
            format!(r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="white" stroke="black"/>"##)
        } else {
            let (x, y0) = canvas.px(0.0, -1.0);
            let (_, y1) = canvas.px(0.0, 1.0);
            format!(r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="black" stroke-width="3"/>"##)
        };
        let planar: Vec<(String, Vec<(f64, f64)>)> = curves
            .iter()
            .map(|(n, pts)| (n.clone(), pts.iter().map(|(_, x)| (x[0], x[1])).collect()))
            .collect();
        fs::write(
            dir.join(format!("{name}_trajectories.svg")),
            curves_svg(&format!("{name} trajectories"), &canvas, &planar, &extra),
        )?;
    }

    let s = builtin("blowup1d").map_err(|e| err(e.to_string()))?;
    let cfg = s.config.completion.integrator;
    let mut curves: Vec<Curve> = Vec::new();
    for x0 in [0.25, 0.5, 1.0, 2.0, -1.0] {
        let out = flow(&s.field, &[x0], 3.0, &cfg).map_err(|e| err(e.to_string()))?;
        curves.push((format!("x0_{x0}"), out.dense_samples));
    }
    curves_csv(&dir.join("blowup1d_trajectories.csv"), 1, &curves)?;
    let canvas = Canvas {
        lo: (0.0, -2.0),
        hi: (3.0, 10.0),
        size: 480.0,
        pad: 30.0,
    };
    let graphs: Vec<(String, Vec<(f64, f64)>)> = curves
        .iter()
        .map(|(n, pts)| (n.clone(), pts.iter().map(|(t, x)| (*t, x[0])).collect()))
        .collect();
    fs::write(
        dir.join("blowup1d_trajectories.svg"),
        curves_svg("blowup1d: t against x", &canvas, &graphs, ""),
    )
}
