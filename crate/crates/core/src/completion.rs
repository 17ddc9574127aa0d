//! Points of the flow completion `M_R`, its charts `j_s`, the complete flow
//! `X_R`, lifts of equivariant morphisms and orbit queries.
//!
//! `M_R` is the orbit space of the extended field `d/ds x X` on `R x M`. A
//! point is stored as an arbitrary representative `(s, x)`; two
//! representatives name the same point iff the flow carries one onto the
//! other, `(s, x) ~ (s + t, Fl_t(x))`. There is no canonical representative:
//! flowing back to tag 0 is undefined exactly on the doubled loci.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{EvalError, Expression};
use crate::geometry::{GeometryError, TaggedPoint, VectorFieldSpec};
use crate::integrator::{flow, FlowError, FlowOutcome, FlowStatus, IntegratorConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompletionError {
    #[error("point {0:?} is outside the domain")]
    OutsideDomain(Vec<f64>),
    #[error("undecided: {0}")]
    Unknown(String),
    #[error("point is not in chart j_{chart}: its trajectory leaves the domain in {escape_bracket:?}")]
    NotInChart {
        chart: f64,
        escape_bracket: Option<(f64, f64)>,
    },
    #[error("point is not in the chart overlap: its trajectory leaves the domain in {escape_bracket:?}")]
    NotInOverlap { escape_bracket: Option<(f64, f64)> },
    #[error("target field is not complete: its flow escapes at t = {escape_time}")]
    TargetNotComplete { escape_time: f64 },
    #[error("tag {tag} exceeds the lift horizon {horizon}")]
    BeyondHorizon { tag: f64, horizon: f64 },
    #[error("morphism `{0}` is not equivariant")]
    NotEquivariant(String),
    #[error("morphism maps {0:?} outside its target")]
    MapOutsideTarget(Vec<f64>),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error(transparent)]
    Flow(FlowError),
}

impl From<FlowError> for CompletionError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::OutsideDomain(x) => CompletionError::OutsideDomain(x),
            FlowError::Inconclusive(why) => CompletionError::Unknown(why),
            other => CompletionError::Flow(other),
        }
    }
}

impl From<GeometryError> for CompletionError {
    fn from(e: GeometryError) -> Self {
        CompletionError::Flow(FlowError::Geometry(e))
    }
}

impl From<EvalError> for CompletionError {
    fn from(e: EvalError) -> Self {
        CompletionError::Flow(FlowError::Eval(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompletionConfig {
    pub integrator: IntegratorConfig,
    /// Endpoint tolerance of `same_point`, scaled by `(1 + |ds|)` and by the
    /// local field magnitude.
    pub match_tol: f64,
    /// Chart tags searched by orbit queries run over `[-H, H]`.
    pub chart_horizon: f64,
    /// Time horizon of `same_orbit_m`.
    pub orbit_horizon: f64,
    /// Spacing of the chart-tag grid refined by orbit searches.
    pub orbit_grid_step: f64,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            integrator: IntegratorConfig::default(),
            match_tol: 1e-6,
            chart_horizon: 10.0,
            orbit_horizon: 10.0,
            orbit_grid_step: 0.25,
        }
    }
}

/// A point of `M_R`, held through one of its representatives.
///
/// Deliberately not `PartialEq`: equality of completion points is
/// [`Completion::same_point`].
#[derive(Debug, Clone)]
pub struct CompletionPoint {
    pub rep: TaggedPoint,
}

impl CompletionPoint {
    pub fn tag(&self) -> f64 {
        self.rep.s
    }

    pub fn coords(&self) -> &[f64] {
        &self.rep.x
    }
}

/// The chart `j_s : M -> M_R`, `x -> [(s, x)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartHandle {
    pub s: f64,
}

/// The complete flow `X_R`: pure tag arithmetic, defined for every `t`.
///
/// The representative moves from `(s, x)` to `(s - t, x)`, which makes
/// `complete_flow(j_s(x), t) = j_s(Fl_t(x))` wherever the right side exists.
pub fn complete_flow(p: &CompletionPoint, t: f64) -> CompletionPoint {
    CompletionPoint {
        rep: TaggedPoint::new(p.rep.s - t, p.rep.x.clone()),
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Golden-section minimization of `f` on `[a, b]`; non-finite values count
/// as `+inf`.
pub(crate) fn golden_min(mut a: f64, mut b: f64, iters: usize, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let clean = |v: f64| if v.is_finite() { v } else { f64::INFINITY };
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = clean(f(c));
    let mut fd = clean(f(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = clean(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = clean(f(d));
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Operations on the completion of one vector field.
#[derive(Debug, Clone)]
pub struct Completion<'a> {
    field: &'a VectorFieldSpec,
    cfg: CompletionConfig,
}

impl<'a> Completion<'a> {
    pub fn new(field: &'a VectorFieldSpec, cfg: CompletionConfig) -> Self {
        Completion { field, cfg }
    }

    pub fn field(&self) -> &'a VectorFieldSpec {
        self.field
    }

    pub fn config(&self) -> &CompletionConfig {
        &self.cfg
    }

    fn flow(&self, x: &[f64], t: f64) -> Result<FlowOutcome, CompletionError> {
        Ok(flow(self.field, x, t, &self.cfg.integrator)?)
    }

    /// Endpoint tolerance for comparing against `target` after flowing for
    /// time `dt`.
    fn tolerance(&self, dt: f64, target: &[f64]) -> f64 {
        let speed = self
            .field
            .field_at(target)
            .map(|v| norm(&v))
            .unwrap_or(1.0);
        self.cfg.match_tol * (1.0 + dt.abs()) * speed.max(1.0)
    }

    /// `j_s(x)`.
    pub fn embed(&self, s: f64, x: &[f64]) -> Result<CompletionPoint, CompletionError> {
        if !self.field.contains(x)? {
            return Err(CompletionError::OutsideDomain(x.to_vec()));
        }
        Ok(CompletionPoint {
            rep: TaggedPoint::new(s, x.to_vec()),
        })
    }

    /// Whether `p` and `q` are the same point of `M_R`, i.e. whether
    /// `Fl_{q.s - p.s}(p.x)` exists and lands on `q.x`.
    pub fn same_point(&self, p: &CompletionPoint, q: &CompletionPoint) -> Result<bool, CompletionError> {
        let dt = q.rep.s - p.rep.s;
        if dt == 0.0 {
            return Ok(dist(&p.rep.x, &q.rep.x) <= self.tolerance(0.0, &q.rep.x));
        }
        let fwd = self.flow(&p.rep.x, dt)?;
        match fwd.status {
            FlowStatus::Completed => {
                Ok(dist(&fwd.last_state, &q.rep.x) <= self.tolerance(dt, &q.rep.x))
            }
            FlowStatus::Inconclusive => Err(CompletionError::Unknown(
                fwd.inconclusive_reason.unwrap_or_default(),
            )),
            FlowStatus::Escaped => {
                let bwd = self.flow(&q.rep.x, -dt)?;
                match bwd.status {
                    FlowStatus::Escaped => Ok(false),
                    FlowStatus::Inconclusive => Err(CompletionError::Unknown(
                        bwd.inconclusive_reason.unwrap_or_default(),
                    )),
                    FlowStatus::Completed => {
                        if dist(&bwd.last_state, &p.rep.x) <= self.tolerance(dt, &p.rep.x) {
                            Err(CompletionError::Unknown(
                                "forward flow escapes but backward flow matches".into(),
                            ))
                        } else {
                            Ok(false)
                        }
                    }
                }
            }
        }
    }

    /// Whether `p` lies in the image of the chart `j_c`.
    pub fn in_chart(&self, p: &CompletionPoint, c: ChartHandle) -> Result<bool, CompletionError> {
        match self.to_chart(p, c) {
            Ok(_) => Ok(true),
            Err(CompletionError::NotInChart { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// The coordinate of `p` in the chart `j_c`.
    pub fn to_chart(&self, p: &CompletionPoint, c: ChartHandle) -> Result<Vec<f64>, CompletionError> {
        let dt = c.s - p.rep.s;
        if dt == 0.0 {
            return Ok(p.rep.x.clone());
        }
        let out = self.flow(&p.rep.x, dt)?;
        match out.status {
            FlowStatus::Completed => Ok(out.last_state),
            FlowStatus::Escaped => Err(CompletionError::NotInChart {
                chart: c.s,
                escape_bracket: out.escape_bracket,
            }),
            FlowStatus::Inconclusive => Err(CompletionError::Unknown(
                out.inconclusive_reason.unwrap_or_default(),
            )),
        }
    }

    /// The chart change `j_s^{-1} o j_r = Fl_{s - r}` on the overlap.
    pub fn transition(&self, r: f64, s: f64, x: &[f64]) -> Result<Vec<f64>, CompletionError> {
        if !self.field.contains(x)? {
            return Err(CompletionError::OutsideDomain(x.to_vec()));
        }
        if r == s {
            return Ok(x.to_vec());
        }
        let out = self.flow(x, s - r)?;
        match out.status {
            FlowStatus::Completed => Ok(out.last_state),
            FlowStatus::Escaped => Err(CompletionError::NotInOverlap {
                escape_bracket: out.escape_bracket,
            }),
            FlowStatus::Inconclusive => Err(CompletionError::Unknown(
                out.inconclusive_reason.unwrap_or_default(),
            )),
        }
    }

    /// Moves the representative of `p` to the tag `s`, if `p` is in chart `j_s`.
    pub fn rebase(&self, p: &CompletionPoint, s: f64) -> Result<CompletionPoint, CompletionError> {
        let x = self.to_chart(p, ChartHandle { s })?;
        Ok(CompletionPoint {
            rep: TaggedPoint::new(s, x),
        })
    }

    /// `f_R(p) = Fl^Y_{-s}(f(x))` for the representative `(s, x)`.
    pub fn lift_morphism(
        &self,
        f: &MorphismSpec,
        p: &CompletionPoint,
        horizon: f64,
    ) -> Result<Vec<f64>, CompletionError> {
        if !f.is_equivariant() {
            return Err(CompletionError::NotEquivariant(f.name.clone()));
        }
        let y = f.apply(&p.rep.x)?;
        let s = p.rep.s;
        if s == 0.0 {
            return Ok(y);
        }
        if s.abs() > horizon {
            return Err(CompletionError::BeyondHorizon { tag: s, horizon });
        }
        let out = flow(&f.target, &y, -s, &self.cfg.integrator)?;
        match out.status {
            FlowStatus::Completed => Ok(out.last_state),
            FlowStatus::Escaped => Err(CompletionError::TargetNotComplete {
                escape_time: out.escape_time_estimate.unwrap_or(-s),
            }),
            FlowStatus::Inconclusive => Err(CompletionError::Unknown(
                out.inconclusive_reason.unwrap_or_default(),
            )),
        }
    }

    /// Whether `y` lies on the `X`-trajectory through `x` within
    /// `|t| <= horizon`.
    ///
    /// Follows the trajectory from `x` in both directions and minimizes the
    /// distance to `y` along the dense output.
    pub fn same_orbit_m(&self, x: &[f64], y: &[f64], horizon: f64) -> Result<bool, CompletionError> {
        for pt in [x, y] {
            if !self.field.contains(pt)? {
                return Err(CompletionError::OutsideDomain(pt.to_vec()));
            }
        }
        if dist(x, y) <= self.tolerance(0.0, y) {
            return Ok(true);
        }
        let mut undecided = None;
        for t in [horizon, -horizon] {
            let out = self.flow(x, t)?;
            if out.status == FlowStatus::Inconclusive {
                undecided = out.inconclusive_reason.clone();
            }
            if self.trajectory_hits(&out, y) {
                return Ok(true);
            }
        }
        match undecided {
            Some(why) => Err(CompletionError::Unknown(why)),
            None => Ok(false),
        }
    }

    fn trajectory_hits(&self, out: &FlowOutcome, y: &[f64]) -> bool {
        let samples = &out.dense_samples;
        let d: Vec<f64> = samples.iter().map(|(_, x)| dist(x, y)).collect();
        for i in 0..samples.len() {
            let left = if i > 0 { d[i - 1] } else { f64::INFINITY };
            let right = d.get(i + 1).copied().unwrap_or(f64::INFINITY);
            if d[i] > left || d[i] > right {
                continue;
            }
            let t_at = samples[i].0;
            if d[i] <= self.tolerance(t_at, y) {
                return true;
            }
            let a = samples[i.saturating_sub(1)].0;
            let b = samples[(i + 1).min(samples.len() - 1)].0;
            let (t_best, d_best) = golden_min(a.min(b), a.max(b), 60, |t| {
                out.trajectory.eval(t).map_or(f64::INFINITY, |x| dist(&x, y))
            });
            if d_best <= self.tolerance(t_best, y) {
                return true;
            }
        }
        false
    }

    /// Whether `q` lies on the `X_R`-orbit of `p`.
    ///
    /// `complete_flow(p, p.s - c)` is `(c, p.x)`, so `q` is on the orbit iff
    /// its coordinate in some chart `j_c` equals `p.x`. The chart tag `c` is
    /// searched on a grid over `q.s + [-H, H]`, refined by golden section, and the
    /// best alignment is confirmed with `same_point`.
    pub fn same_orbit_completion(
        &self,
        p: &CompletionPoint,
        q: &CompletionPoint,
    ) -> Result<bool, CompletionError> {
        let h = self.cfg.chart_horizon;
        let step = self.cfg.orbit_grid_step;
        let n = (2.0 * h / step).round() as i64;
        let mut undecided = None;
        let mut any_chart = false;
        let mut misalignment = |c: f64| -> f64 {
            match self.to_chart(q, ChartHandle { s: c }) {
                Ok(y) => {
                    any_chart = true;
                    dist(&y, &p.rep.x)
                }
                Err(CompletionError::NotInChart { .. }) => f64::INFINITY,
                Err(e) => {
                    undecided = Some(e.to_string());
                    f64::INFINITY
                }
            }
        };
        let grid: Vec<f64> = (0..=n).map(|k| q.rep.s - h + k as f64 * step).collect();
        let values: Vec<f64> = grid.iter().map(|&c| misalignment(c)).collect();

        let mut candidates: Vec<(f64, f64)> = Vec::new();
        for i in 0..grid.len() {
            let left = if i > 0 { values[i - 1] } else { f64::INFINITY };
            let right = values.get(i + 1).copied().unwrap_or(f64::INFINITY);
            if values[i].is_finite() && values[i] <= left && values[i] <= right {
                let a = grid[i.saturating_sub(1)];
                let b = grid[(i + 1).min(grid.len() - 1)];
                candidates.push(golden_min(a, b, 60, &mut misalignment));
            }
        }
        candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (c, d) in candidates {
            let tol = self.tolerance(c - q.rep.s, &q.rep.x) * 10.0;
            if d > tol {
                break;
            }
            let aligned = complete_flow(p, p.rep.s - c);
            match self.same_point(&aligned, q) {
                Ok(true) => return Ok(true),
                Ok(false) => {}
                Err(e) => undecided = Some(e.to_string()),
            }
        }
        if let Some(why) = undecided {
            return Err(CompletionError::Unknown(why));
        }
        if !any_chart {
            return Err(CompletionError::Unknown(
                "no chart of the tag grid contains the second point".into(),
            ));
        }
        Ok(false)
    }
}

/// An equivariant map `f : (M, X) -> (N, Y)` into a field `Y` on `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphismSpec {
    pub name: String,
    pub source_dim: usize,
    pub target: VectorFieldSpec,
    pub map: Vec<Expression>,
    pub claimed_equivariant: bool,
    verified_equivariant: bool,
}

/// Finite-difference comparison of `Tf o X` with `Y o f`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivarianceCheck {
    pub samples: usize,
    pub max_defect: f64,
    pub worst_point: Option<Vec<f64>>,
}

pub const EQUIVARIANCE_TOL: f64 = 1e-4;

impl MorphismSpec {
    /// Builds the morphism and spot-checks equivariance against `source` at
    /// seeded sample points of `M` in `[-2, 2]^n`. A morphism claimed
    /// equivariant that fails the check is rejected.
    pub fn new(
        name: impl Into<String>,
        source: &VectorFieldSpec,
        target: VectorFieldSpec,
        map: Vec<Expression>,
        claimed_equivariant: bool,
    ) -> Result<Self, CompletionError> {
        let name = name.into();
        if map.len() != target.dim() {
            return Err(CompletionError::InvalidMorphism(format!(
                "`{name}` has {} components but the target has dimension {}",
                map.len(),
                target.dim()
            )));
        }
        if let Some(e) = map.iter().find(|e| e.uses_time() || e.max_variable() > source.dim()) {
            return Err(CompletionError::InvalidMorphism(format!(
                "`{name}`: component `{e}` must only use x1..x{}",
                source.dim()
            )));
        }
        let mut f = MorphismSpec {
            name,
            source_dim: source.dim(),
            target,
            map,
            claimed_equivariant,
            verified_equivariant: false,
        };
        let check = f.check_equivariance(source, 64, 0)?;
        f.verified_equivariant = check.max_defect <= EQUIVARIANCE_TOL;
        if claimed_equivariant && !f.verified_equivariant {
            return Err(CompletionError::NotEquivariant(format!(
                "{}: defect {:.3e} at {:?}",
                f.name, check.max_defect, check.worst_point
            )));
        }
        Ok(f)
    }

    pub fn is_equivariant(&self) -> bool {
        self.verified_equivariant
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, CompletionError> {
        let y = self
            .map
            .iter()
            .map(|e| e.evaluate(x, 0.0))
            .collect::<Result<Vec<_>, _>>()?;
        if !self.target.contains(&y)? {
            return Err(CompletionError::MapOutsideTarget(y));
        }
        Ok(y)
    }

    pub fn check_equivariance(
        &self,
        source: &VectorFieldSpec,
        samples: usize,
        seed: u64,
    ) -> Result<EquivarianceCheck, CompletionError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = source.dim();
        let mut check = EquivarianceCheck {
            samples: 0,
            max_defect: 0.0,
            worst_point: None,
        };
        let mut attempts = 0;
        while check.samples < samples && attempts < samples * 50 {
            attempts += 1;
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            if !source.contains(&x).unwrap_or(false) {
                continue;
            }
            let v = source.field_at(&x)?;
            let h = 1e-5 * (1.0 + norm(&x)) / norm(&v).max(1.0);
            let xp: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + h * b).collect();
            let xm: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a - h * b).collect();
            let eval = |p: &[f64]| -> Result<Vec<f64>, EvalError> {
                self.map.iter().map(|e| e.evaluate(p, 0.0)).collect()
            };
            let (fx, fp, fm) = (eval(&x)?, eval(&xp)?, eval(&xm)?);
            let mut y = vec![0.0; self.target.dim()];
            self.target.eval_into(&fx, &mut y)?;
            let defect = fp
                .iter()
                .zip(&fm)
                .zip(&y)
                .map(|((a, b), yv)| ((a - b) / (2.0 * h) - yv).abs())
                .fold(0.0, f64::max)
                / norm(&y).max(1.0);
            check.samples += 1;
            if defect > check.max_defect {
                check.max_defect = defect;
                check.worst_point = Some(x);
            }
        }
        Ok(check)
    }

    /// `g o self`, where `g : (N, Y) -> (P, Z)`.
    pub fn then(&self, g: &MorphismSpec, source: &VectorFieldSpec) -> Result<MorphismSpec, CompletionError> {
        if g.source_dim != self.target.dim() {
            return Err(CompletionError::InvalidMorphism(format!(
                "cannot compose `{}` after `{}`: dimensions differ",
                g.name, self.name
            )));
        }
        let map = g.map.iter().map(|e| e.substitute(&self.map)).collect();
        MorphismSpec::new(
            format!("{}.{}", g.name, self.name),
            source,
            g.target.clone(),
            map,
            self.claimed_equivariant && g.claimed_equivariant,
        )
    }
}
