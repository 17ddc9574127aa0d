//! Identification report: which completion points sit over which base
//! locations, which of them coincide, and which distinct ones cannot be
//! separated.
//!
//! Every tagged point `(s, x)` with `s` in the tag grid and `x` in the base
//! grid is embedded and placed over the base location of its *shadow*, its
//! image under the lift of an equivariant map into a complete field (the
//! inclusion into the plane for the translation examples). Points over the
//! same location are merged into classes with `same_point`; distinct
//! classes over one location are probed for separability.

use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::completion::{Completion, CompletionConfig, MorphismSpec};
use crate::expr::Expression;
use crate::geometry::{ManifoldSpec, TaggedPoint, VectorFieldSpec};
use crate::scenarios::Scenario;
use crate::separability::{SeparabilityConfig, SeparabilityProbe, VerdictKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("no shadow map: {0}")]
    NoShadow(String),
}

/// Grid defaults stored in a scenario's `[config.report]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSettings {
    pub tags: Vec<f64>,
    /// Lower corner of the base grid; empty means `-2` on every axis.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lower: Vec<f64>,
    /// Upper corner of the base grid; empty means `2` on every axis.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub upper: Vec<f64>,
    /// Points per axis; empty means 41.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<usize>,
    /// Name of the morphism that places points over base locations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shadow: Option<String>,
    /// Sheet-count ring radius in grid steps.
    pub ring: usize,
}

impl Default for ReportSettings {
    fn default() -> Self {
        ReportSettings {
            tags: (-3..=3).map(f64::from).collect(),
            lower: Vec::new(),
            upper: Vec::new(),
            points: Vec::new(),
            shadow: None,
            ring: 5,
        }
    }
}

impl ReportSettings {
    pub fn grid(&self, dim: usize) -> Result<BaseGrid, ReportError> {
        let fill = |v: &[f64], d: f64| if v.is_empty() { vec![d; dim] } else { v.to_vec() };
        let points = if self.points.is_empty() {
            vec![41; dim]
        } else {
            self.points.clone()
        };
        BaseGrid::new(fill(&self.lower, -2.0), fill(&self.upper, 2.0), points)
    }
}

/// A rectangular lattice with `points[i]` samples on axis `i`, endpoints
/// included.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseGrid {
    lower: Vec<f64>,
    upper: Vec<f64>,
    points: Vec<usize>,
}

impl BaseGrid {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, points: Vec<usize>) -> Result<Self, ReportError> {
        if lower.is_empty() || lower.len() != upper.len() || lower.len() != points.len() {
            return Err(ReportError::Grid("lower, upper and points must have equal, positive length".into()));
        }
        for i in 0..lower.len() {
            if !(lower[i].is_finite() && upper[i].is_finite() && lower[i] < upper[i]) {
                return Err(ReportError::Grid(format!("axis {}: need finite lower < upper", i + 1)));
            }
            if points[i] < 2 {
                return Err(ReportError::Grid(format!("axis {}: need at least 2 points", i + 1)));
            }
        }
        Ok(BaseGrid { lower, upper, points })
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / (self.points[axis] - 1) as f64
    }

    fn coord(&self, axis: usize, i: usize) -> f64 {
        let n = (self.points[axis] - 1) as f64;
        let i = i as f64;
        (self.lower[axis] * (n - i) + self.upper[axis] * i) / n
    }

    /// Multi-index of a flat index; the first axis varies slowest.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.points[axis];
            flat /= self.points[axis];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.points).fold(0, |acc, (i, n)| acc * n + i)
    }

    pub fn position(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .into_iter()
            .enumerate()
            .map(|(axis, i)| self.coord(axis, i))
            .collect()
    }

    /// The grid point within `1e-6` grid steps of `x`, if any.
    pub fn snap(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut idx = Vec::with_capacity(self.dim());
        for (axis, &v) in x.iter().enumerate() {
            let h = self.spacing(axis);
            let r = ((v - self.lower[axis]) / h).round();
            if r < 0.0 || r > (self.points[axis] - 1) as f64 {
                return None;
            }
            let i = r as usize;
            if (self.coord(axis, i) - v).abs() > 1e-6 * h {
                return None;
            }
            idx.push(i);
        }
        Some(self.flat_index(&idx))
    }

    pub fn offset(&self, flat: usize, by: &[isize]) -> Option<usize> {
        let idx: Option<Vec<usize>> = self
            .multi_index(flat)
            .into_iter()
            .zip(by)
            .zip(&self.points)
            .map(|((i, d), &n)| i.checked_add_signed(*d).filter(|j| *j < n))
            .collect();
        idx.map(|i| self.flat_index(&i))
    }

    pub fn describe(&self) -> String {
        let ranges: Vec<String> = (0..self.dim())
            .map(|a| format!("[{}, {}]", self.lower[a], self.upper[a]))
            .collect();
        let counts: Vec<String> = self.points.iter().map(|n| n.to_string()).collect();
        format!("{}, {} points", ranges.join(" x "), counts.join(" x "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// No sampled point lies over the location.
    Empty,
    Single,
    DoubledSeparated,
    DoubledNonseparable,
    Unknown,
}

impl Region {
    pub const ALL: [Region; 5] = [
        Region::Single,
        Region::DoubledSeparated,
        Region::DoubledNonseparable,
        Region::Unknown,
        Region::Empty,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Empty => "empty",
            Region::Single => "single",
            Region::DoubledSeparated => "doubled_separated",
            Region::DoubledNonseparable => "doubled_nonseparable",
            Region::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientDiagnostic {
    LocallyManifold,
    BranchingDetected,
}

impl QuotientDiagnostic {
    pub fn as_str(self) -> &'static str {
        match self {
            QuotientDiagnostic::LocallyManifold => "locally_manifold",
            QuotientDiagnostic::BranchingDetected => "branching_detected",
        }
    }
}

impl std::fmt::Display for QuotientDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocationSummary {
    pub position: Vec<f64>,
    /// Sampled tagged points whose shadow is this location.
    pub samples: usize,
    /// Classes of those points under `same_point`.
    pub classes: usize,
    /// Classes left after identifying non-separable pairs.
    pub quotient_classes: usize,
    pub region: Region,
    /// One representative per class, the member with the tag nearest 0.
    pub representatives: Vec<TaggedPoint>,
    /// Some `same_point` comparison was undecided.
    pub undecided: bool,
}

/// Verdict between two classes over the same location.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEdge {
    pub location: usize,
    pub a: TaggedPoint,
    pub b: TaggedPoint,
    pub verdict: VerdictKind,
    pub final_distance: Option<f64>,
    /// For non-separable pairs: quotient sheet counts on the two sides of
    /// the flow line through the location (negative side first).
    pub sheets: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentificationReport {
    pub scenario: String,
    pub tags: Vec<f64>,
    pub grid: BaseGrid,
    pub shadow: String,
    pub seed: u64,
    pub samples: usize,
    /// Samples whose shadow was undefined or off the grid.
    pub unplaced: usize,
    pub classes: usize,
    pub locations: Vec<LocationSummary>,
    pub edges: Vec<ClassEdge>,
    pub diagnostic: QuotientDiagnostic,
}

/// Everything `identification_report` needs.
pub struct ReportRequest<'a> {
    pub name: String,
    pub field: &'a VectorFieldSpec,
    /// `None` uses the field itself extended to all of `R^n`.
    pub shadow: Option<&'a MorphismSpec>,
    pub tags: Vec<f64>,
    pub grid: BaseGrid,
    pub completion: CompletionConfig,
    pub separability: SeparabilityConfig,
    pub ring: usize,
}

impl<'a> ReportRequest<'a> {
    pub fn from_scenario(s: &'a Scenario) -> Result<Self, ReportError> {
        Ok(ReportRequest {
            name: s.name.clone(),
            field: &s.field,
            shadow: s.shadow_morphism(),
            tags: s.config.report.tags.clone(),
            grid: s.config.report.grid(s.field.dim())?,
            completion: s.config.completion,
            separability: s.config.separability.clone(),
            ring: s.config.report.ring,
        })
    }
}

fn ambient_shadow(field: &VectorFieldSpec) -> Result<MorphismSpec, ReportError> {
    let n = field.dim();
    let target = VectorFieldSpec::new(
        ManifoldSpec::euclidean(n),
        field.rhs().to_vec(),
        field.oracle_flow().map(|o| o.to_vec()),
    )
    .map_err(|e| ReportError::NoShadow(format!("the field does not extend to R^{n}: {e}")))?;
    let map = (0..n).map(Expression::Var).collect();
    MorphismSpec::new("ambient", field, target, map, true).map_err(|e| ReportError::NoShadow(e.to_string()))
}

/// Ring offsets (in grid steps) used for sheet counting.
fn ring_offsets(dim: usize, ring: usize) -> Vec<Vec<isize>> {
    let r = ring as isize;
    match dim {
        1 => vec![vec![-r], vec![r]],
        2 => [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
            .iter()
            .map(|&(a, b)| vec![a * r, b * r])
            .collect(),
        _ => Vec::new(),
    }
}

/// Side of the flow line through a location on which an offset lies:
/// the sign of `v x d` in the plane, the sign of `d` on the line.
fn side(v: &[f64], d: &[isize]) -> Option<bool> {
    let c = match (v, d) {
        ([_], [d]) => *d as f64,
        ([v1, v2], [d1, d2]) => v1 * (*d2 as f64) - v2 * (*d1 as f64),
        _ => return None,
    };
    if c.abs() < 1e-12 {
        None
    } else {
        Some(c > 0.0)
    }
}

struct LocalClasses {
    classes: Vec<Vec<usize>>,
    undecided: bool,
}

pub fn identification_report(req: &ReportRequest<'_>) -> Result<IdentificationReport, ReportError> {
    let field = req.field;
    let n = field.dim();
    if req.grid.dim() != n {
        return Err(ReportError::Grid(format!(
            "grid has dimension {} but the field has dimension {n}",
            req.grid.dim()
        )));
    }
    if req.tags.iter().any(|t| !t.is_finite()) {
        return Err(ReportError::Grid("tags must be finite".into()));
    }
    let ambient;
    let shadow = match req.shadow {
        Some(f) => f,
        None => {
            ambient = ambient_shadow(field)?;
            &ambient
        }
    };
    let completion = Completion::new(field, req.completion);
    let probe = SeparabilityProbe::new(&completion, req.separability.clone());
    let grid = &req.grid;

    let base: Vec<usize> = (0..grid.len())
        .into_par_iter()
        .filter(|&i| field.contains(&grid.position(i)).unwrap_or(false))
        .collect();
    let points: Vec<TaggedPoint> = req
        .tags
        .iter()
        .flat_map(|&s| base.iter().map(move |&i| (s, i)))
        .map(|(s, i)| TaggedPoint::new(s, grid.position(i)))
        .collect();

    let placement: Vec<Option<usize>> = points
        .par_iter()
        .map(|tp| {
            let p = completion.embed(tp.s, &tp.x).ok()?;
            let y = completion.lift_morphism(shadow, &p, f64::INFINITY).ok()?;
            grid.snap(&y)
        })
        .collect();
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); grid.len()];
    for (k, loc) in placement.iter().enumerate() {
        if let Some(l) = loc {
            over[*l].push(k);
        }
    }
    let unplaced = placement.iter().filter(|p| p.is_none()).count();

    let embed = |k: usize| {
        completion
            .embed(points[k].s, &points[k].x)
            .expect("sampled base points lie in M")
    };

    let local: Vec<LocalClasses> = over
        .par_iter()
        .map(|members| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            let mut undecided = false;
            for &k in members {
                let pk = embed(k);
                let mut home = None;
                for (c, class) in classes.iter().enumerate() {
                    match completion.same_point(&embed(class[0]), &pk) {
                        Ok(true) => {
                            home = Some(c);
                            break;
                        }
                        Ok(false) => {}
                        Err(_) => undecided = true,
                    }
                }
                match home {
                    Some(c) => classes[c].push(k),
                    None => classes.push(vec![k]),
                }
            }
            LocalClasses { classes, undecided }
        })
        .collect();

    let mut uf = UnionFind::<usize>::new(points.len());
    for lc in &local {
        for class in &lc.classes {
            for &k in &class[1..] {
                uf.union(class[0], k);
            }
        }
    }
    let labels = uf.into_labeling();
    let placed_labels: std::collections::BTreeSet<usize> = placement
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_some())
        .map(|(k, _)| labels[k])
        .collect();

    let representative = |class: &[usize]| -> usize {
        *class
            .iter()
            .min_by(|&&a, &&b| {
                let (sa, sb) = (points[a].s, points[b].s);
                sa.abs().total_cmp(&sb.abs()).then(sa.total_cmp(&sb))
            })
            .expect("classes are non-empty")
    };
    let reps: Vec<Vec<usize>> = local
        .iter()
        .map(|lc| lc.classes.iter().map(|c| representative(c)).collect())
        .collect();

    let pair_jobs: Vec<(usize, usize, usize)> = reps
        .iter()
        .enumerate()
        .flat_map(|(loc, r)| {
            (0..r.len()).flat_map(move |i| (i + 1..r.len()).map(move |j| (loc, i, j)))
        })
        .collect();
    let verdicts: Vec<(usize, usize, usize, VerdictKind, Option<f64>)> = pair_jobs
        .par_iter()
        .map(|&(loc, i, j)| {
            let v = probe.test(&embed(reps[loc][i]), &embed(reps[loc][j]));
            (loc, i, j, v.kind, v.final_image_distance())
        })
        .collect();

    let class_base: Vec<usize> = reps
        .iter()
        .scan(0, |acc, r| {
            let b = *acc;
            *acc += r.len();
            Some(b)
        })
        .collect();
    let class_total = reps.iter().map(Vec::len).sum();
    let mut quotient = UnionFind::<usize>::new(class_total);
    for &(loc, i, j, kind, _) in &verdicts {
        if kind == VerdictKind::NonSeparable {
            quotient.union(class_base[loc] + i, class_base[loc] + j);
        }
    }

    let mut locations: Vec<LocationSummary> = (0..grid.len())
        .map(|loc| {
            let members = &over[loc];
            let k = reps[loc].len();
            let quotient_classes = (0..k)
                .map(|i| quotient.find(class_base[loc] + i))
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            let mine: Vec<VerdictKind> = verdicts
                .iter()
                .filter(|v| v.0 == loc)
                .map(|v| v.3)
                .collect();
            let region = if members.is_empty() {
                Region::Empty
            } else if local[loc].undecided || mine.iter().any(|v| matches!(v, VerdictKind::Unknown | VerdictKind::Equal)) {
                Region::Unknown
            } else if k == 1 {
                Region::Single
            } else if mine.contains(&VerdictKind::NonSeparable) {
                Region::DoubledNonseparable
            } else {
                Region::DoubledSeparated
            };
            LocationSummary {
                position: grid.position(loc),
                samples: members.len(),
                classes: k,
                quotient_classes,
                region,
                representatives: reps[loc].iter().map(|&r| points[r].clone()).collect(),
                undecided: local[loc].undecided,
            }
        })
        .collect();

    let offsets = ring_offsets(n, req.ring);
    let sheets_at = |loc: usize, locations: &[LocationSummary]| -> Option<(usize, usize)> {
        if offsets.is_empty() {
            return None;
        }
        let mut v = vec![0.0; n];
        shadow.target.eval_into(&locations[loc].position, &mut v).ok()?;
        let mut counts = [None::<usize>; 2];
        for d in &offsets {
            let Some(side) = side(&v, d) else { continue };
            let Some(other) = grid.offset(loc, d) else { continue };
            let l = &locations[other];
            if matches!(l.region, Region::Empty | Region::Unknown) {
                continue;
            }
            let slot = &mut counts[side as usize];
            *slot = Some(slot.map_or(l.quotient_classes, |c| c.max(l.quotient_classes)));
        }
        Some((counts[0]?, counts[1]?))
    };
    let edges: Vec<ClassEdge> = verdicts
        .iter()
        .map(|&(loc, i, j, verdict, final_distance)| ClassEdge {
            location: loc,
            a: points[reps[loc][i]].clone(),
            b: points[reps[loc][j]].clone(),
            verdict,
            final_distance,
            sheets: if verdict == VerdictKind::NonSeparable {
                sheets_at(loc, &locations)
            } else {
                None
            },
        })
        .collect();
    let branching = edges.iter().any(|e| matches!(e.sheets, Some((a, b)) if a != b));
    locations.shrink_to_fit();

    Ok(IdentificationReport {
        scenario: req.name.clone(),
        tags: req.tags.clone(),
        grid: grid.clone(),
        shadow: shadow.name.clone(),
        seed: req.separability.seed,
        samples: points.len(),
        unplaced,
        classes: placed_labels.len(),
        locations,
        edges,
        diagnostic: if branching {
            QuotientDiagnostic::BranchingDetected
        } else {
            QuotientDiagnostic::LocallyManifold
        },
    })
}

fn fmt_point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
    format!("({})", parts.join(", "))
}

impl IdentificationReport {
    pub fn region_count(&self, region: Region) -> usize {
        self.locations.iter().filter(|l| l.region == region).count()
    }

    /// The location at grid position `x`, if `x` is a grid point.
    pub fn location_at(&self, x: &[f64]) -> Option<&LocationSummary> {
        self.grid.snap(x).map(|i| &self.locations[i])
    }

    /// Sheet-count patterns of the non-separable edges with multiplicities,
    /// sorted.
    pub fn sheet_patterns(&self) -> Vec<((usize, usize), usize)> {
        let mut m = std::collections::BTreeMap::new();
        for e in &self.edges {
            if let Some(s) = e.sheets {
                *m.entry(s).or_insert(0) += 1;
            }
        }
        m.into_iter().collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let tags: Vec<String> = self.tags.iter().map(|t| t.to_string()).collect();
        writeln!(w, "identification report").unwrap();
        writeln!(w, "scenario: {}", self.scenario).unwrap();
        writeln!(w, "tags: {}", tags.join(" ")).unwrap();
        writeln!(w, "base grid: {}", self.grid.describe()).unwrap();
        writeln!(w, "shadow: {}", self.shadow).unwrap();
        writeln!(w, "seed: {}", self.seed).unwrap();
        writeln!(w, "samples: {} ({} unplaced)", self.samples, self.unplaced).unwrap();
        writeln!(w, "classes: {}", self.classes).unwrap();
        writeln!(
            w,
            "note: separability verdicts are heuristic; they come from finite probing, not proofs"
        )
        .unwrap();
        writeln!(w).unwrap();
        writeln!(w, "regions:").unwrap();
        for r in Region::ALL {
            writeln!(w, "  {}: {}", r, self.region_count(r)).unwrap();
        }
        writeln!(w).unwrap();
        let count = |k: VerdictKind| self.edges.iter().filter(|e| e.verdict == k).count();
        writeln!(w, "class pairs: {}", self.edges.len()).unwrap();
        for k in [VerdictKind::Separated, VerdictKind::NonSeparable, VerdictKind::Unknown] {
            writeln!(w, "  {}: {}", k, count(k)).unwrap();
        }
        writeln!(w, "sheet counts of non-separable pairs (negative side/positive side):").unwrap();
        for ((a, b), m) in self.sheet_patterns() {
            writeln!(w, "  {a}/{b}: {m}").unwrap();
        }
        writeln!(w, "quotient_diagnostic: {}", self.diagnostic).unwrap();
        if self.diagnostic == QuotientDiagnostic::BranchingDetected {
            writeln!(
                w,
                "note: the Hausdorff quotient branches here; removing the branching lines from one side or the other gives different manifolds"
            )
            .unwrap();
        }
        writeln!(w).unwrap();
        writeln!(w, "locations with more than one class or undecided:").unwrap();
        for l in &self.locations {
            if l.classes < 2 && l.region != Region::Unknown {
                continue;
            }
            let reps: Vec<String> = l.representatives.iter().map(|r| r.to_string()).collect();
            writeln!(
                w,
                "  {} classes={} quotient={} region={} reps={}",
                fmt_point(&l.position),
                l.classes,
                l.quotient_classes,
                l.region,
                reps.join(" | ")
            )
            .unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_positions_hit_exact_values() {
        let g = BaseGrid::new(vec![-2.0, -2.0], vec![2.0, 2.0], vec![41, 41]).unwrap();
        assert_eq!(g.len(), 1681);
        let i = g.snap(&[0.5, 1.0]).unwrap();
        assert_eq!(g.position(i), vec![0.5, 1.0]);
        assert_eq!(g.snap(&[0.55, 1.0]), None);
        assert_eq!(g.snap(&[2.1, 1.0]), None);
        for k in [0, 17, 1680] {
            assert_eq!(g.flat_index(&g.multi_index(k)), k);
        }
        assert_eq!(g.offset(i, &[5, -5]).map(|j| g.position(j)), Some(vec![1.0, 0.5]));
        assert_eq!(g.offset(0, &[-1, 0]), None);
    }

    #[test]
    fn sides_split_by_the_flow_line() {
        assert_eq!(side(&[1.0, 0.0], &[0, -5]), Some(false));
        assert_eq!(side(&[1.0, 0.0], &[3, 5]), Some(true));
        assert_eq!(side(&[1.0, 0.0], &[5, 0]), None);
        assert_eq!(side(&[2.0], &[-5]), Some(false));
    }

    #[test]
    fn grid_rejects_degenerate_axes() {
        assert!(BaseGrid::new(vec![0.0], vec![0.0], vec![3]).is_err());
        assert!(BaseGrid::new(vec![0.0], vec![1.0], vec![1]).is_err());
        assert!(BaseGrid::new(vec![0.0], vec![1.0, 2.0], vec![3]).is_err());
    }
}
