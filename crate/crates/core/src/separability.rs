//! Heuristic detection of non-separable pairs of completion points.
//!
//! Two distinct points `p = [(s, x)]` and `q = [(s', y)]` of `M_R` cannot be
//! separated iff every neighbourhood of `x`, flowed for `s' - s`, comes
//! arbitrarily close to `y`. The probe shrinks a ball around `x` through a
//! radius schedule, flows probe points, and records how close the images
//! get. Verdicts are evidence, not certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::completion::{complete_flow, Completion, CompletionError, CompletionPoint};
use crate::integrator::{flow, FlowStatus};

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeparabilityConfig {
    /// Probe radii, largest first.
    pub radii: Vec<f64>,
    /// Probe directions per radius; `None` means 16 in the plane and `8n`
    /// otherwise.
    pub directions: Option<usize>,
    /// Final image distance required for a non-separable verdict.
    pub merge_tol: f64,
    /// Function evaluations spent on the local refinement at each radius.
    pub refine_evals: usize,
    /// Escapes this close (in time) to the requested flow time do not count
    /// as clean evidence of separation.
    pub escape_time_gap: f64,
    pub seed: u64,
}

impl Default for SeparabilityConfig {
    fn default() -> Self {
        SeparabilityConfig {
            radii: vec![1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
            directions: None,
            merge_tol: 1e-4,
            refine_evals: 60,
            escape_time_gap: 1e-3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum VerdictKind {
    Equal,
    Separated,
    NonSeparable,
    Unknown,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Equal => "Equal",
            VerdictKind::Separated => "Separated",
            VerdictKind::NonSeparable => "NonSeparable",
            VerdictKind::Unknown => "Unknown",
        }
    }
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Probe results at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeLevel {
    pub radius: f64,
    /// Probe whose image came closest to the target, after refinement.
    pub best_probe: Option<Vec<f64>>,
    /// Closest image among the probes on the sphere of this radius.
    pub image_distance: Option<f64>,
    /// Closest image after the local refinement inside the ball.
    pub refined_distance: Option<f64>,
    pub completed: usize,
    pub escaped: usize,
    pub inconclusive: usize,
    /// Smallest `|escape time - requested time|` among escaped probes.
    pub min_escape_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityVerdict {
    pub kind: VerdictKind,
    /// Probing around the first point towards the second.
    pub evidence: Vec<ProbeLevel>,
    /// Probing around the second point towards the first.
    pub mirror_evidence: Vec<ProbeLevel>,
    /// For `Separated`: the smallest radius at which every probe image kept
    /// its distance.
    pub separated_at: Option<f64>,
    pub note: String,
}

impl SeparabilityVerdict {
    fn bare(kind: VerdictKind, note: impl Into<String>) -> Self {
        SeparabilityVerdict {
            kind,
            evidence: Vec::new(),
            mirror_evidence: Vec::new(),
            separated_at: None,
            note: note.into(),
        }
    }

    /// Refined image distance at the smallest radius of the primary probe.
    pub fn final_image_distance(&self) -> Option<f64> {
        self.evidence.last().and_then(|l| l.refined_distance)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Quasi-uniform unit directions: equally spaced angles with a seeded phase
/// in the plane, `+-1` on the line, seeded random directions otherwise.
pub fn probe_directions(dim: usize, count: Option<usize>, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            let k = count.unwrap_or(16).max(3);
            let phase: f64 = rng.random();
            (0..k)
                .map(|i| {
                    let a = std::f64::consts::TAU * (i as f64 + phase) / k as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect()
        }
        n => {
            let k = count.unwrap_or(8 * n);
            let mut dirs = Vec::with_capacity(k);
            while dirs.len() < k {
                let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if r > 1e-3 && r <= 1.0 {
                    dirs.push(v.into_iter().map(|a| a / r).collect());
                }
            }
            dirs
        }
    }
}

/// Nelder-Mead minimization with a fixed evaluation budget.
fn nelder_mead(
    start: &[f64],
    scale: &[f64],
    budget: usize,
    f: &mut dyn FnMut(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(start, &mut evals);
    simplex.push((start.to_vec(), v0));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += scale[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let reflected = along(1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = eval(&expanded, &mut evals);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { along(0.5) } else { along(-0.5) };
            let fc = eval(&contracted, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    let v = eval(&x, &mut evals);
                    *vertex = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideVerdict {
    Separated,
    NonSeparable,
    Unknown,
}

enum ProbeResult {
    Outside,
    Completed(f64),
    Escaped(f64),
    Inconclusive,
}

/// Separability probing for one completion.
pub struct SeparabilityProbe<'c, 'a> {
    completion: &'c Completion<'a>,
    cfg: SeparabilityConfig,
    directions: Vec<Vec<f64>>,
}

impl<'c, 'a> SeparabilityProbe<'c, 'a> {
    pub fn new(completion: &'c Completion<'a>, cfg: SeparabilityConfig) -> Self {
        let directions = probe_directions(completion.field().dim(), cfg.directions, cfg.seed);
        SeparabilityProbe {
            completion,
            cfg,
            directions,
        }
    }

    pub fn config(&self) -> &SeparabilityConfig {
        &self.cfg
    }

    pub fn completion(&self) -> &'c Completion<'a> {
        self.completion
    }

    fn probe(&self, x: &[f64], dt: f64, target: &[f64]) -> ProbeResult {
        let field = self.completion.field();
        if !field.contains(x).unwrap_or(false) {
            return ProbeResult::Outside;
        }
        match flow(field, x, dt, &self.completion.config().integrator) {
            Ok(out) => match out.status {
                FlowStatus::Completed => ProbeResult::Completed(dist(&out.last_state, target)),
                FlowStatus::Escaped => {
                    ProbeResult::Escaped((out.escape_time_estimate.unwrap_or(0.0) - dt).abs())
                }
                FlowStatus::Inconclusive => ProbeResult::Inconclusive,
            },
            Err(_) => ProbeResult::Inconclusive,
        }
    }

    fn level(&self, center: &[f64], dt: f64, target: &[f64], radius: f64) -> ProbeLevel {
        let probes: Vec<(Vec<f64>, ProbeResult)> = self
            .directions
            .par_iter()
            .map(|u| {
                let x: Vec<f64> = center.iter().zip(u).map(|(c, d)| c + radius * d).collect();
                let r = self.probe(&x, dt, target);
                (x, r)
            })
            .collect();
        let mut level = ProbeLevel {
            radius,
            best_probe: None,
            image_distance: None,
            refined_distance: None,
            completed: 0,
            escaped: 0,
            inconclusive: 0,
            min_escape_gap: None,
        };
        for (x, r) in probes {
            match r {
                ProbeResult::Outside => {}
                ProbeResult::Completed(d) => {
                    level.completed += 1;
                    if level.image_distance.is_none_or(|best| d < best) {
                        level.image_distance = Some(d);
                        level.best_probe = Some(x);
                    }
                }
                ProbeResult::Escaped(gap) => {
                    level.escaped += 1;
                    level.min_escape_gap = Some(level.min_escape_gap.map_or(gap, |g: f64| g.min(gap)));
                }
                ProbeResult::Inconclusive => level.inconclusive += 1,
            }
        }
        if let Some(start) = level.best_probe.clone() {
            let mut objective = |x: &[f64]| -> f64 {
                if dist(x, center) > radius * (1.0 + 1e-9) {
                    return f64::INFINITY;
                }
                match self.probe(x, dt, target) {
                    ProbeResult::Completed(d) => d,
                    _ => f64::INFINITY,
                }
            };
            // Simplex edges point back into the ball.
            let scale: Vec<f64> = start
                .iter()
                .zip(center)
                .map(|(s, c)| if s > c { -0.25 * radius } else { 0.25 * radius })
                .collect();
            let (x, d) = nelder_mead(&start, &scale, self.cfg.refine_evals, &mut objective);
            level.refined_distance = level.image_distance;
            if d < level.image_distance.unwrap_or(f64::INFINITY) {
                level.refined_distance = Some(d);
                level.best_probe = Some(x);
            }
        }
        level
    }

    fn side(&self, center: &[f64], dt: f64, target: &[f64]) -> (SideVerdict, Vec<ProbeLevel>, Option<f64>) {
        let levels: Vec<ProbeLevel> = self
            .cfg
            .radii
            .iter()
            .map(|&r| self.level(center, dt, target, r))
            .collect();
        let merge_tol = self.cfg.merge_tol;
        // The sampled sphere distances carry the rate; the refinement only
        // has to push the final image within merge_tol.
        let distances: Vec<Option<f64>> = levels.iter().map(|l| l.image_distance).collect();
        if levels.len() >= 3 {
            let tail = &distances[distances.len() - 3..];
            let last = levels[levels.len() - 1].refined_distance;
            if let ([Some(a), Some(b), Some(c)], Some(fin)) = (tail, last) {
                if *a >= 2.0 * b && *b >= 2.0 * c && fin <= merge_tol {
                    return (SideVerdict::NonSeparable, levels, None);
                }
            }
        }
        let Some(last) = levels.last() else {
            return (SideVerdict::Unknown, levels, None);
        };
        if last.inconclusive > 0 {
            return (SideVerdict::Unknown, levels, None);
        }
        let last_clear = last.refined_distance.is_none_or(|d| d >= 10.0 * merge_tol);
        let any_completed = levels.iter().any(|l| l.completed > 0);
        // Some neighbourhood whose probes all leave M well away from the
        // requested time.
        let clean_escapes = levels.iter().any(|l| {
            l.escaped > 0
                && l.completed == 0
                && l.inconclusive == 0
                && l.min_escape_gap.is_some_and(|g| g >= self.cfg.escape_time_gap)
        });
        if last_clear && (any_completed || clean_escapes) {
            let radius = last.radius;
            return (SideVerdict::Separated, levels, Some(radius));
        }
        (SideVerdict::Unknown, levels, None)
    }

    /// Classifies the pair `(p, q)` as `Equal`, `Separated`, `NonSeparable`
    /// or `Unknown`. Both directions are probed and must agree.
    pub fn test(&self, p: &CompletionPoint, q: &CompletionPoint) -> SeparabilityVerdict {
        match self.completion.same_point(p, q) {
            Ok(true) => return SeparabilityVerdict::bare(VerdictKind::Equal, "same point"),
            Ok(false) => {}
            Err(e) => return SeparabilityVerdict::bare(VerdictKind::Unknown, e.to_string()),
        }
        let dt = q.rep.s - p.rep.s;
        let (a, evidence, sep_a) = self.side(&p.rep.x, dt, &q.rep.x);
        let (b, mirror_evidence, sep_b) = self.side(&q.rep.x, -dt, &p.rep.x);
        let (kind, note) = match (a, b) {
            (SideVerdict::NonSeparable, SideVerdict::NonSeparable) => {
                (VerdictKind::NonSeparable, "probe images merge from both sides (heuristic)")
            }
            (SideVerdict::Separated, SideVerdict::Separated) => {
                (VerdictKind::Separated, "probe images stay apart from both sides (heuristic)")
            }
            (x, y) if x == y => (VerdictKind::Unknown, "insufficient evidence"),
            _ => (VerdictKind::Unknown, "the two probing directions disagree"),
        };
        SeparabilityVerdict {
            kind,
            evidence,
            mirror_evidence,
            separated_at: match kind {
                VerdictKind::Separated => sep_a.into_iter().chain(sep_b).reduce(f64::max),
                _ => None,
            },
            note: note.into(),
        }
    }

    /// Checks that non-separability of `(p, q)` persists along the complete
    /// flow for each of `times`.
    ///
    /// The flowed points are moved back to their original tags where their
    /// trajectories allow it, so each check probes genuinely moved base
    /// points rather than re-running the original probe.
    pub fn flow_invariance(
        &self,
        p: &CompletionPoint,
        q: &CompletionPoint,
        times: &[f64],
    ) -> Result<InvarianceOutcome, InvarianceError> {
        let base = self.test(p, q);
        if base.kind != VerdictKind::NonSeparable {
            return Err(InvarianceError::NotNonSeparable(base.kind));
        }
        let moved = |pt: &CompletionPoint, t: f64| -> CompletionPoint {
            let flowed = complete_flow(pt, t);
            self.completion.rebase(&flowed, pt.rep.s).unwrap_or(flowed)
        };
        let per_time = times
            .iter()
            .map(|&t| (t, self.test(&moved(p, t), &moved(q, t)).kind))
            .collect();
        Ok(InvarianceOutcome { per_time })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvarianceError {
    #[error("the initial pair is {0}, not NonSeparable")]
    NotNonSeparable(VerdictKind),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceOutcome {
    pub per_time: Vec<(f64, VerdictKind)>,
}

impl InvarianceOutcome {
    /// Every flowed pair was found non-separable.
    pub fn confirmed(&self) -> bool {
        self.per_time.iter().all(|(_, k)| *k == VerdictKind::NonSeparable)
    }

    /// Some flowed pair was positively found separated or equal.
    pub fn refuted(&self) -> bool {
        self.per_time
            .iter()
            .any(|(_, k)| matches!(k, VerdictKind::Separated | VerdictKind::Equal))
    }

    /// Not refuted, but some check was undecided.
    pub fn unconfirmed(&self) -> bool {
        !self.refuted() && self.per_time.iter().any(|(_, k)| *k == VerdictKind::Unknown)
    }
}
