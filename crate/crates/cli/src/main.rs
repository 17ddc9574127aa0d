//! `flowcomp`: command-line front end for flow completion queries.
//!
//! Exit codes: 0 Equal / true / success, 1 inconclusive integration or an
//! incomplete lift target, 2 bad arguments, 3 Separated / false,
//! 4 NonSeparable, 5 Unknown.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flowcomp::completion::{Completion, CompletionError, CompletionPoint};
use flowcomp::geometry::{parse_coords, TaggedPoint};
use flowcomp::integrator::{existence_window, flow, EscapeCause, FlowStatus};
use flowcomp::report::{identification_report, BaseGrid, Region, ReportRequest};
use flowcomp::scenarios::{builtin_names, resolve, Scenario};
use flowcomp::separability::{SeparabilityProbe, VerdictKind};

const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FALSE: u8 = 3;
const EXIT_NONSEPARABLE: u8 = 4;
const EXIT_UNKNOWN: u8 = 5;

#[derive(Parser)]
#[command(name = "flowcomp", version, about = "Flow completion of vector fields on open subsets of R^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Built-in scenario name or path to a scenario file.
    scenario: String,
    /// Override the integrator's relative tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Override the integrator's absolute tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
}

#[derive(Args, Clone)]
struct Pair {
    /// First point, `s:x1,...,xn`.
    #[arg(long, allow_hyphen_values = true)]
    p: TaggedPoint,
    /// Second point, `s:x1,...,xn`.
    #[arg(long, allow_hyphen_values = true)]
    q: TaggedPoint,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Print a scenario as TOML.
    Show {
        scenario: String,
    },
    /// Integrate the flow from `x0` for time `t`.
    Flow {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x0: Coords,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Write dense samples as CSV rows `t, x1..xn`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Maximal existence interval of the trajectory through `x0`.
    Window {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x0: Coords,
        #[arg(long, default_value_t = 10.0)]
        horizon: f64,
    },
    /// Whether two tagged points name the same completion point.
    SamePoint {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Probe whether two completion points can be separated.
    Separability {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the probe evidence per radius.
        #[arg(long)]
        verbose: bool,
    },
    /// Whether two completion points lie on the same complete orbit.
    Orbit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Classify the doubled loci over a grid.
    Report {
        #[command(flatten)]
        common: Common,
        /// Output directory for report.txt, CSV files and the SVG sketch.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated tags.
        #[arg(long, allow_hyphen_values = true)]
        tags: Option<Coords>,
        #[arg(long, allow_hyphen_values = true)]
        lower: Option<Coords>,
        #[arg(long, allow_hyphen_values = true)]
        upper: Option<Coords>,
        /// Points per axis, comma-separated.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<usize>>,
        /// Sheet-count ring radius in grid steps.
        #[arg(long)]
        ring: Option<usize>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lift an equivariant morphism to the completion.
    Lift {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        morphism: String,
        #[arg(long, allow_hyphen_values = true)]
        p: TaggedPoint,
    },
    /// Write trajectory data and sketches for the built-in examples.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Comma-separated coordinates, `x1,...,xn`.
#[derive(Clone, Debug)]
struct Coords(Vec<f64>);

impl std::str::FromStr for Coords {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        parse_coords(text).map(Coords)
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load(common: &Common) -> Result<Scenario, ExitCode> {
    let mut s = resolve(&common.scenario).map_err(|e| fail(EXIT_USAGE, e))?;
    if let Some(r) = common.rel_tol {
        s.config.completion.integrator.rel_tol = r;
    }
    if let Some(a) = common.abs_tol {
        s.config.completion.integrator.abs_tol = a;
    }
    s.config
        .completion
        .integrator
        .validate()
        .map_err(|e| fail(EXIT_USAGE, e))?;
    Ok(s)
}

/// Coordinates rounded to 12 decimals, so that integration noise does not
/// obscure exact answers.
fn fmt_vec(x: &[f64]) -> String {
    let parts: Vec<String> = x
        .iter()
        .map(|v| format!("{}", (v * 1e12).round() / 1e12 + 0.0))
        .collect();
    format!("({})", parts.join(", "))
}

fn embed(c: &Completion<'_>, tp: &TaggedPoint) -> Result<CompletionPoint, ExitCode> {
    c.embed(tp.s, &tp.x).map_err(|e| fail(EXIT_USAGE, e))
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::List => {
            for name in builtin_names() {
                let s = resolve(name).map_err(|e| fail(EXIT_USAGE, e))?;
                println!("{name}\t{}", s.description);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Show { scenario } => {
            let s = resolve(&scenario).map_err(|e| fail(EXIT_USAGE, e))?;
            print!("{}", s.to_toml());
            Ok(ExitCode::SUCCESS)
        }
        Command::Flow { common, x0, t, csv } => {
            let s = load(&common)?;
            let out = flow(&s.field, &x0.0, t, &s.config.completion.integrator).map_err(|e| fail(EXIT_USAGE, e))?;
            println!("status={:?}", out.status);
            println!("t_requested={}", out.t_requested);
            println!("t_reached={}", out.t_reached);
            println!("state={}", fmt_vec(&out.last_state));
            if let Some(te) = out.escape_time_estimate {
                println!("escape_time={te}");
            }
            if let Some((a, b)) = out.escape_bracket {
                println!("escape_bracket=[{a}, {b}]");
            }
            if let Some(cause) = out.escape_cause {
                let cause = match cause {
                    EscapeCause::DomainExit => "domain_exit",
                    EscapeCause::BlowUp => "blow_up",
                };
                println!("escape_cause={cause}");
            }
            if let Some(why) = &out.inconclusive_reason {
                println!("reason={why}");
            }
            println!("steps={} rejected={}", out.stats.steps, out.stats.rejected);
            if let Some(path) = csv {
                output::write_samples(&path, s.field.dim(), &out.dense_samples).map_err(|e| fail(EXIT_USAGE, e))?;
            }
            Ok(match out.status {
                FlowStatus::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Window { common, x0, horizon } => {
            let s = load(&common)?;
            let w = existence_window(&s.field, &x0.0, horizon, &s.config.completion.integrator).map_err(|e| match e {
                flowcomp::integrator::FlowError::Inconclusive(_) => fail(EXIT_INCONCLUSIVE, e),
                e => fail(EXIT_USAGE, e),
            })?;
            println!("window={w}");
            Ok(ExitCode::SUCCESS)
        }
        Command::SamePoint { common, pair } => {
            let s = load(&common)?;
            let c = Completion::new(&s.field, s.config.completion);
            let (p, q) = (embed(&c, &pair.p)?, embed(&c, &pair.q)?);
            Ok(match c.same_point(&p, &q) {
                Ok(true) => {
                    println!("Equal");
                    ExitCode::SUCCESS
                }
                Ok(false) => {
                    println!("Distinct");
                    ExitCode::from(EXIT_FALSE)
                }
                Err(e) => {
                    println!("Unknown ({e})");
                    ExitCode::from(EXIT_UNKNOWN)
                }
            })
        }
        Command::Separability {
            common,
            pair,
            seed,
            verbose,
        } => {
            let s = load(&common)?;
            let c = Completion::new(&s.field, s.config.completion);
            let (p, q) = (embed(&c, &pair.p)?, embed(&c, &pair.q)?);
            let mut cfg = s.config.separability.clone();
            cfg.seed = seed;
            let v = SeparabilityProbe::new(&c, cfg).test(&p, &q);
            println!("{}", v.kind);
            println!("note: {}", v.note);
            if let Some(r) = v.separated_at {
                println!("separated_at_radius={r}");
            }
            if let Some(d) = v.final_image_distance() {
                println!("final_image_distance={d:e}");
            }
            if verbose {
                for (label, levels) in [("p", &v.evidence), ("q", &v.mirror_evidence)] {
                    for l in levels {
                        println!(
                            "probe around {label}: radius={} sampled={} refined={} completed={} escaped={} inconclusive={}",
                            l.radius,
                            l.image_distance.map_or("-".into(), |d| format!("{d:e}")),
                            l.refined_distance.map_or("-".into(), |d| format!("{d:e}")),
                            l.completed,
                            l.escaped,
                            l.inconclusive
                        );
                    }
                }
            }
            Ok(ExitCode::from(match v.kind {
                VerdictKind::Equal => 0,
                VerdictKind::Separated => EXIT_FALSE,
                VerdictKind::NonSeparable => EXIT_NONSEPARABLE,
                VerdictKind::Unknown => EXIT_UNKNOWN,
            }))
        }
        Command::Orbit { common, pair } => {
            let s = load(&common)?;
            let c = Completion::new(&s.field, s.config.completion);
            let (p, q) = (embed(&c, &pair.p)?, embed(&c, &pair.q)?);
            Ok(match c.same_orbit_completion(&p, &q) {
                Ok(true) => {
                    println!("same_orbit=true");
                    ExitCode::SUCCESS
                }
                Ok(false) => {
                    println!("same_orbit=false");
                    ExitCode::from(EXIT_FALSE)
                }
                Err(e) => {
                    println!("same_orbit=unknown ({e})");
                    ExitCode::from(EXIT_UNKNOWN)
                }
            })
        }
        Command::Report {
            common,
            out,
            tags,
            lower,
            upper,
            points,
            ring,
            jobs,
            seed,
        } => {
            let s = load(&common)?;
            if let Some(j) = jobs {
                if j == 0 {
                    return Err(fail(EXIT_USAGE, "--jobs must be positive"));
                }
                rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build_global()
                    .map_err(|e| fail(EXIT_USAGE, e))?;
            }
            let mut req = ReportRequest::from_scenario(&s).map_err(|e| fail(EXIT_USAGE, e))?;
            if let Some(t) = tags {
                req.tags = t.0;
            }
            if lower.is_some() || upper.is_some() || points.is_some() {
                req.grid = BaseGrid::new(
                    lower.map_or_else(|| req.grid.lower().to_vec(), |c| c.0),
                    upper.map_or_else(|| req.grid.upper().to_vec(), |c| c.0),
                    points.unwrap_or_else(|| req.grid.points().to_vec()),
                )
                .map_err(|e| fail(EXIT_USAGE, e))?;
            }
            if let Some(r) = ring {
                req.ring = r;
            }
            req.separability.seed = seed;
            let report = identification_report(&req).map_err(|e| fail(EXIT_USAGE, e))?;
            let text = report.render_text();
            print!("{text}");
            if let Some(dir) = out {
                output::write_report(&dir, &report, &text).map_err(|e| fail(EXIT_USAGE, e))?;
            }
            let unknown = report.region_count(Region::Unknown);
            if unknown > 0 {
                eprintln!("warning: {unknown} location(s) left undecided");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift { common, morphism, p } => {
            let s = load(&common)?;
            let f = s
                .morphism(&morphism)
                .ok_or_else(|| fail(EXIT_USAGE, format!("scenario has no morphism `{morphism}`")))?;
            let c = Completion::new(&s.field, s.config.completion);
            let p = embed(&c, &p)?;
            match c.lift_morphism(f, &p, f64::INFINITY) {
                Ok(y) => {
                    println!("{}", fmt_vec(&y));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ CompletionError::TargetNotComplete { .. }) => Err(fail(EXIT_INCONCLUSIVE, e)),
                Err(e @ CompletionError::Unknown(_)) => Err(fail(EXIT_INCONCLUSIVE, e)),
                Err(e) => Err(fail(EXIT_USAGE, e)),
            }
        }
        Command::Figures { out } => {
            output::write_figures(&out).map_err(|e| fail(EXIT_USAGE, e))?;
            println!("wrote figures to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli).unwrap_or_else(|code| code)
}
