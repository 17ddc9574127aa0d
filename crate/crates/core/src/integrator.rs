//! Adaptive Dormand-Prince 5(4) realization of the flow `Fl_t` with
//! detection of finite-time escape from `M`.
//!
//! After every accepted step the dense output is scanned for the first time
//! at which the trajectory leaves `M`, comes within `contact_tol` of the
//! complement (when the manifold supplies a margin hint), or exceeds
//! `blowup_norm`. The crossing is then bracketed by bisection on the dense
//! output down to `escape_refine_tol`.

use crate::expr::EvalError;
use crate::geometry::{ExistenceWindow, GeometryError, VectorFieldSpec, WindowEnd, WindowQuality};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("initial point {0:?} is outside the domain")]
    OutsideDomain(Vec<f64>),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("field evaluation failed inside the domain: {0}")]
    Eval(#[from] EvalError),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("integration inconclusive: {0}")]
    Inconclusive(String),
    #[error("no closed-form flow available")]
    NoOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Trajectories whose norm exceeds this are treated as blown up.
    pub blowup_norm: f64,
    /// Final width of the bisection bracket around an escape event.
    pub escape_refine_tol: f64,
    /// With a margin hint, a trajectory that comes this close to the
    /// complement of `M` is treated as having left it.
    pub contact_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: 1.0,
            min_step: 1e-12,
            blowup_norm: 1e8,
            escape_refine_tol: 1e-10,
            contact_tol: 1e-10,
            max_steps: 200_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), FlowError> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("min_step", self.min_step),
            ("blowup_norm", self.blowup_norm),
            ("escape_refine_tol", self.escape_refine_tol),
            ("contact_tol", self.contact_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(FlowError::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.min_step < self.max_step) {
            return Err(FlowError::InvalidConfig(format!(
                "need 0 < min_step < max_step, got {} and {}",
                self.min_step, self.max_step
            )));
        }
        if self.max_steps == 0 {
            return Err(FlowError::InvalidConfig("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowStatus {
    Completed,
    Escaped,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeCause {
    DomainExit,
    BlowUp,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FlowStats {
    pub steps: usize,
    pub rejected: usize,
    pub max_error_estimate: f64,
}

/// One accepted step's continuous extension.
#[derive(Debug, Clone)]
struct DenseSegment {
    t0: f64,
    h: f64,
    /// Five coefficient vectors, stored back to back.
    coeffs: Vec<f64>,
}

impl DenseSegment {
    fn eval_theta(&self, theta: f64, out: &mut [f64]) {
        let n = out.len();
        let c = |k: usize, i: usize| self.coeffs[k * n + i];
        let th1 = 1.0 - theta;
        for (i, o) in out.iter_mut().enumerate() {
            *o = c(0, i) + theta * (c(1, i) + th1 * (c(2, i) + theta * (c(3, i) + th1 * c(4, i))));
        }
    }
}

/// Piecewise dense interpolant of an integrated trajectory.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    dim: usize,
    segments: Vec<DenseSegment>,
    /// Signed time up to which the interpolant is trusted.
    end: f64,
}

impl Trajectory {
    /// Signed time covered by the trajectory, from 0.
    pub fn t_end(&self) -> f64 {
        self.end
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// State at signed time `t`, if `t` lies in the covered range.
    pub fn eval(&self, t: f64) -> Option<Vec<f64>> {
        let end = self.t_end();
        let (lo, hi) = if end >= 0.0 { (0.0, end) } else { (end, 0.0) };
        if self.segments.is_empty() || t < lo || t > hi {
            return None;
        }
        let forward = self.segments[0].h > 0.0;
        let idx = self
            .segments
            .partition_point(|s| if forward { s.t0 + s.h < t } else { s.t0 + s.h > t })
            .min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        let theta = ((t - seg.t0) / seg.h).clamp(0.0, 1.0);
        let mut out = vec![0.0; self.dim];
        seg.eval_theta(theta, &mut out);
        Some(out)
    }
}

/// Result of integrating for a requested time.
#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub status: FlowStatus,
    pub t_requested: f64,
    /// Signed time up to which the trajectory was followed.
    pub t_reached: f64,
    /// Last state reached; the flow endpoint iff `Completed`.
    pub last_state: Vec<f64>,
    /// Signed escape time, valid iff `Escaped`.
    pub escape_time_estimate: Option<f64>,
    /// Bisection bracket around the escape event, ordered by absolute time.
    pub escape_bracket: Option<(f64, f64)>,
    pub escape_cause: Option<EscapeCause>,
    pub inconclusive_reason: Option<String>,
    /// `(t, x)` samples: every accepted step end plus interior dense points.
    pub dense_samples: Vec<(f64, Vec<f64>)>,
    pub trajectory: Trajectory,
    pub stats: FlowStats,
}

impl FlowOutcome {
    pub fn is_completed(&self) -> bool {
        self.status == FlowStatus::Completed
    }

    pub fn endpoint(&self) -> Option<&[f64]> {
        self.is_completed().then_some(self.last_state.as_slice())
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Shampine's fourth-order continuous extension.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAMPLE_THETAS: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];
const MAX_MARCH_POINTS: usize = 100_000;

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn scaled_rms(v: &[f64], y0: &[f64], y1: &[f64], cfg: &IntegratorConfig) -> f64 {
    let n = v.len() as f64;
    let sum: f64 = v
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

enum Scan {
    Clear,
    Bracket(f64, f64),
    TooManyPoints,
}

struct Integrator<'a> {
    field: &'a VectorFieldSpec,
    cfg: &'a IntegratorConfig,
}

impl Integrator<'_> {
    /// True when `x` is no longer a trustworthy point of `M`.
    fn flagged(&self, x: &[f64]) -> bool {
        if !x.iter().all(|v| v.is_finite()) || norm(x) > self.cfg.blowup_norm {
            return true;
        }
        let manifold = self.field.manifold();
        if !manifold.inside().evaluate(x).unwrap_or(false) {
            return true;
        }
        match manifold.margin(x) {
            Some(Ok(m)) => m <= self.cfg.contact_tol,
            Some(Err(_)) => true,
            None => false,
        }
    }

    fn initial_step(&self, y0: &[f64], f0: &[f64], t: f64) -> f64 {
        let cfg = self.cfg;
        let n = y0.len();
        let sc: Vec<f64> = y0.iter().map(|y| cfg.abs_tol + cfg.rel_tol * y.abs()).collect();
        let rms = |v: &[f64]| (v.iter().zip(&sc).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt();
        let d0 = rms(y0);
        let d1 = rms(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let dir = t.signum();
        let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + dir * h0 * f).collect();
        let mut f1 = vec![0.0; n];
        let h1 = match self.field.eval_into(&y1, &mut f1) {
            Ok(()) => {
                let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
                let d2 = rms(&diff) / h0;
                let dm = d1.max(d2);
                if dm <= 1e-15 {
                    (h0 * 1e-3).max(1e-6)
                } else {
                    (0.01 / dm).powf(0.2)
                }
            }
            Err(_) => h0,
        };
        (100.0 * h0).min(h1).min(cfg.max_step).min(t.abs()).max(cfg.min_step)
    }

    /// Scans the dense output of one accepted step for the first flagged
    /// time, returning a `theta` bracket.
    fn scan(&self, seg: &DenseSegment, speed_bound: f64, buf: &mut [f64]) -> Scan {
        let has_margin = self.field.manifold().margin_hint().is_some();
        let h = seg.h.abs();
        let mut theta = 0.0;
        let mut next_fixed = 0;
        let mut points = 0;
        let mut margin_here = if has_margin {
            seg.eval_theta(0.0, buf);
            self.margin_or_zero(buf)
        } else {
            0.0
        };
        while next_fixed < SAMPLE_THETAS.len() {
            let mut target = SAMPLE_THETAS[next_fixed];
            if has_margin && speed_bound > 0.0 {
                let reach = margin_here.max(self.cfg.contact_tol) / (speed_bound * h);
                if theta + reach < target {
                    target = theta + reach;
                }
            }
            if target >= SAMPLE_THETAS[next_fixed] {
                next_fixed += 1;
            }
            seg.eval_theta(target, buf);
            if self.flagged(buf) {
                return Scan::Bracket(theta, target);
            }
            if has_margin {
                margin_here = self.margin_or_zero(buf);
            }
            theta = target;
            points += 1;
            if points > MAX_MARCH_POINTS {
                return Scan::TooManyPoints;
            }
        }
        Scan::Clear
    }

    fn margin_or_zero(&self, x: &[f64]) -> f64 {
        match self.field.manifold().margin(x) {
            Some(Ok(m)) => m.max(0.0),
            _ => 0.0,
        }
    }

    fn run(&self, x0: &[f64], t: f64) -> Result<FlowOutcome, FlowError> {
        let cfg = self.cfg;
        cfg.validate()?;
        let field = self.field;
        let n = field.dim();
        if x0.len() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: x0.len(),
            }
            .into());
        }
        if !field.contains(x0)? {
            return Err(FlowError::OutsideDomain(x0.to_vec()));
        }
        if !t.is_finite() {
            return Err(FlowError::InvalidConfig(format!("flow time must be finite, got {t}")));
        }

        let mut out = FlowOutcome {
            status: FlowStatus::Completed,
            t_requested: t,
            t_reached: 0.0,
            last_state: x0.to_vec(),
            escape_time_estimate: None,
            escape_bracket: None,
            escape_cause: None,
            inconclusive_reason: None,
            dense_samples: vec![(0.0, x0.to_vec())],
            trajectory: Trajectory {
                dim: n,
                segments: Vec::new(),
                end: 0.0,
            },
            stats: FlowStats::default(),
        };
        if t == 0.0 {
            return Ok(out);
        }
        if norm(x0) > cfg.blowup_norm {
            return Ok(inconclusive(out, "initial point already exceeds blowup_norm"));
        }

        let mut y = x0.to_vec();
        let mut k = vec![vec![0.0; n]; 7];
        field.eval_into(&y, &mut k[0])?;
        let dir = t.signum();
        let mut h = dir * self.initial_step(&y, &k[0], t);
        let mut tcur = 0.0;
        let mut stage = vec![0.0; n];
        let mut y1 = vec![0.0; n];
        let mut err = vec![0.0; n];
        let mut buf = vec![0.0; n];

        loop {
            if out.stats.steps + out.stats.rejected >= cfg.max_steps {
                out.last_state = y;
                out.t_reached = tcur;
                return Ok(inconclusive(out, "step budget exhausted"));
            }
            let remaining = t - tcur;
            let last = h.abs() >= remaining.abs();
            if last {
                h = remaining;
            }

            // Stages 2..7; stage 7 is evaluated at the proposed endpoint.
            let mut stage_failed = false;
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    stage[i] = y[i] + h * acc;
                }
                if s == 6 {
                    y1.copy_from_slice(&stage);
                }
                if field.eval_into(&stage, &mut k[s]).is_err() || !k[s].iter().all(|v| v.is_finite()) {
                    stage_failed = true;
                    break;
                }
            }

            let err_norm = if stage_failed {
                f64::INFINITY
            } else {
                for (i, e) in err.iter_mut().enumerate() {
                    *e = h * E.iter().zip(&k).map(|(c, kj)| c * kj[i]).sum::<f64>();
                }
                let v = scaled_rms(&err, &y, &y1, cfg);
                if v.is_finite() && y1.iter().all(|v| v.is_finite()) {
                    v
                } else {
                    f64::INFINITY
                }
            };

            if err_norm > 1.0 {
                out.stats.rejected += 1;
                let factor = if err_norm.is_finite() {
                    (0.9 * err_norm.powf(-0.25)).max(0.2)
                } else {
                    0.25
                };
                h *= factor;
                if h.abs() < cfg.min_step {
                    out.last_state = y;
                    out.t_reached = tcur;
                    return Ok(inconclusive(out, "step size fell below min_step"));
                }
                continue;
            }

            out.stats.steps += 1;
            out.stats.max_error_estimate = out.stats.max_error_estimate.max(err_norm);

            let mut coeffs = vec![0.0; 5 * n];
            for i in 0..n {
                let ydiff = y1[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                coeffs[i] = y[i];
                coeffs[n + i] = ydiff;
                coeffs[2 * n + i] = bspl;
                coeffs[3 * n + i] = ydiff - h * k[6][i] - bspl;
                coeffs[4 * n + i] = h * D.iter().zip(&k).map(|(d, kj)| d * kj[i]).sum::<f64>();
            }
            let seg = DenseSegment { t0: tcur, h, coeffs };
            let speed_bound = 2.0 * k.iter().map(|kj| norm(kj)).fold(0.0, f64::max);

            match self.scan(&seg, speed_bound, &mut buf) {
                Scan::Clear => {}
                Scan::TooManyPoints => {
                    out.last_state = y;
                    out.t_reached = tcur;
                    return Ok(inconclusive(out, "trajectory grazes the domain boundary"));
                }
                Scan::Bracket(lo, hi) => {
                    let (lo, hi) = self.bisect(&seg, lo, hi, &mut buf);
                    for &th in SAMPLE_THETAS.iter().take_while(|&&th| th <= lo) {
                        seg.eval_theta(th, &mut buf);
                        out.dense_samples.push((tcur + th * h, buf.clone()));
                    }
                    seg.eval_theta(hi, &mut buf);
                    let cause = if !buf.iter().all(|v| v.is_finite()) || norm(&buf) > cfg.blowup_norm {
                        EscapeCause::BlowUp
                    } else {
                        EscapeCause::DomainExit
                    };
                    seg.eval_theta(lo, &mut buf);
                    let (ta, tb) = (tcur + lo * h, tcur + hi * h);
                    out.last_state = buf.clone();
                    out.t_reached = ta;
                    out.dense_samples.push((ta, buf.clone()));
                    out.trajectory.segments.push(seg);
                    out.trajectory.end = ta;
                    out.status = FlowStatus::Escaped;
                    out.escape_time_estimate = Some(0.5 * (ta + tb));
                    out.escape_bracket = Some((ta, tb));
                    out.escape_cause = Some(cause);
                    return Ok(out);
                }
            }

            for &th in &SAMPLE_THETAS[..4] {
                seg.eval_theta(th, &mut buf);
                out.dense_samples.push((tcur + th * h, buf.clone()));
            }
            out.trajectory.segments.push(seg);
            tcur = if last { t } else { tcur + h };
            out.trajectory.end = tcur;
            y.copy_from_slice(&y1);
            out.dense_samples.push((tcur, y.clone()));
            if last {
                out.last_state = y;
                out.t_reached = t;
                return Ok(out);
            }
            // FSAL: the last stage is the field at the new point.
            k.swap(0, 6);
            if field.eval_into(&y, &mut k[0]).is_err() {
                return Err(FlowError::Eval(EvalError::Domain(format!(
                    "field failed at accepted point {y:?}"
                ))));
            }

            let factor = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = dir * (h.abs() * factor).min(cfg.max_step);
        }
    }

    fn bisect(&self, seg: &DenseSegment, mut lo: f64, mut hi: f64, buf: &mut [f64]) -> (f64, f64) {
        let h = seg.h.abs();
        while (hi - lo) * h > self.cfg.escape_refine_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            seg.eval_theta(mid, buf);
            if self.flagged(buf) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }
}

fn inconclusive(mut out: FlowOutcome, reason: &str) -> FlowOutcome {
    out.status = FlowStatus::Inconclusive;
    out.inconclusive_reason = Some(reason.to_string());
    out
}

/// Integrates `x' = X(x)` from `x0` for signed time `t`.
pub fn flow(
    field: &VectorFieldSpec,
    x0: &[f64],
    t: f64,
    cfg: &IntegratorConfig,
) -> Result<FlowOutcome, FlowError> {
    Integrator { field, cfg }.run(x0, t)
}

/// Estimates the maximal existence interval of the trajectory through `x0`,
/// capped at `horizon` in both directions.
pub fn existence_window(
    field: &VectorFieldSpec,
    x0: &[f64],
    horizon: f64,
    cfg: &IntegratorConfig,
) -> Result<ExistenceWindow, FlowError> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(FlowError::InvalidConfig(format!("horizon must be positive, got {horizon}")));
    }
    let mut certified = field.oracle_flow().is_some();
    let mut end = |t: f64| -> Result<WindowEnd, FlowError> {
        let out = flow(field, x0, t, cfg)?;
        if certified {
            certified = agrees_with_oracle(field, x0, &out);
        }
        match out.status {
            FlowStatus::Completed => Ok(WindowEnd::Unbounded { horizon }),
            FlowStatus::Escaped => Ok(WindowEnd::Finite(out.escape_time_estimate.unwrap_or(t))),
            FlowStatus::Inconclusive => Err(FlowError::Inconclusive(
                out.inconclusive_reason.unwrap_or_default(),
            )),
        }
    };
    let t_plus = end(horizon)?;
    let t_minus = end(-horizon)?;
    Ok(ExistenceWindow {
        t_minus,
        t_plus,
        quality: if certified {
            WindowQuality::CertifiedByOracle
        } else {
            WindowQuality::NumericallyEstimated
        },
    })
}

fn agrees_with_oracle(field: &VectorFieldSpec, x0: &[f64], out: &FlowOutcome) -> bool {
    let samples = &out.dense_samples;
    let stride = (samples.len() / 16).max(1);
    samples.iter().step_by(stride).chain(samples.last()).all(|(t, x)| {
        match field.oracle_at(x0, *t) {
            Some(Ok(o)) => {
                let scale = 1.0 + norm(x);
                o.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-6 * scale)
            }
            _ => false,
        }
    })
}

/// Tolerance-refinement study against a closed-form flow.
#[derive(Debug, Clone)]
pub struct OrderReport {
    /// `(rel_tol, accepted steps, endpoint error)` per run.
    pub runs: Vec<(f64, usize, f64)>,
    /// Fitted order `p` in `error ~ steps^(-p)`; `None` when every run is
    /// exact to rounding.
    pub order: Option<f64>,
    /// Endpoint error at the caller's configuration.
    pub error_at_config: f64,
}

/// Measures the global convergence order of the integrator on a field with a
/// closed-form flow, by fitting `log(error)` against `log(steps)` over a
/// ladder of tolerances.
pub fn order_check(
    field: &VectorFieldSpec,
    x0: &[f64],
    t: f64,
    cfg: &IntegratorConfig,
) -> Result<OrderReport, FlowError> {
    let exact = field
        .oracle_at(x0, t)
        .ok_or(FlowError::NoOracle)??;
    let error_of = |c: &IntegratorConfig| -> Result<(usize, f64), FlowError> {
        let out = flow(field, x0, t, c)?;
        let end = out
            .endpoint()
            .ok_or_else(|| FlowError::Inconclusive("trajectory did not complete".into()))?;
        let e = end.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        Ok((out.stats.steps, e))
    };
    let (_, error_at_config) = error_of(cfg)?;
    let mut runs = Vec::new();
    for k in 6..=12 {
        let tol = 10f64.powi(-k);
        let c = IntegratorConfig {
            rel_tol: tol,
            abs_tol: tol * 1e-3,
            max_step: t.abs().max(cfg.min_step * 2.0),
            ..*cfg
        };
        let (steps, e) = error_of(&c)?;
        runs.push((tol, steps, e));
    }
    // Points at rounding level carry no slope information.
    let usable: Vec<(f64, f64)> = runs
        .iter()
        .filter(|(_, steps, e)| *e > 1e-13 && *steps >= 2)
        .map(|&(_, steps, e)| ((steps as f64).ln(), e.ln()))
        .collect();
    let order = (usable.len() >= 3).then(|| {
        let m = usable.len() as f64;
        let mx = usable.iter().map(|p| p.0).sum::<f64>() / m;
        let my = usable.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
        -sxy / sxx
    });
    Ok(OrderReport {
        runs,
        order,
        error_at_config,
    })
}
