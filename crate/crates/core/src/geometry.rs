//! The manifold `M` as an open subset of `R^n`, vector fields on it, and the
//! tagged-point space `R x M` on which the extended field `d/ds x X` acts.

use std::fmt;

use crate::expr::{EvalError, Expression, Predicate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("point {0:?} is outside the domain")]
    OutsideDomain(Vec<f64>),
    #[error("point has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid specification: {0}")]
    Invalid(String),
}

/// An open subset of `R^n` given by a membership predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpec {
    dim: usize,
    inside: Predicate,
    margin_hint: Option<Expression>,
}

impl ManifoldSpec {
    /// Builds the manifold, rejecting predicates that are not syntactically
    /// open and expressions referring to variables beyond `dim`.
    pub fn new(
        dim: usize,
        inside: Predicate,
        margin_hint: Option<Expression>,
    ) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::Invalid("dimension must be positive".into()));
        }
        if let Some(violation) = inside.openness_violation() {
            return Err(GeometryError::Invalid(format!(
                "membership predicate must describe an open set: {violation}"
            )));
        }
        if inside.uses_time() {
            return Err(GeometryError::Invalid("membership predicate may not use `t`".into()));
        }
        if inside.max_variable() > dim {
            return Err(GeometryError::Invalid(format!(
                "membership predicate uses x{} in dimension {dim}",
                inside.max_variable()
            )));
        }
        if let Some(m) = &margin_hint {
            if m.max_variable() > dim || m.uses_time() {
                return Err(GeometryError::Invalid(format!(
                    "margin hint `{m}` must only use x1..x{dim}"
                )));
            }
        }
        Ok(ManifoldSpec {
            dim,
            inside,
            margin_hint,
        })
    }

    /// All of `R^n`.
    pub fn euclidean(dim: usize) -> Self {
        ManifoldSpec {
            dim,
            inside: Predicate::Const(true),
            margin_hint: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inside(&self) -> &Predicate {
        &self.inside
    }

    pub fn margin_hint(&self) -> Option<&Expression> {
        self.margin_hint.as_ref()
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), GeometryError> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            })
        }
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool, GeometryError> {
        self.check_dim(x)?;
        Ok(self.inside.evaluate(x)?)
    }

    /// Lower bound on the distance from `x` to the complement, if the
    /// manifold carries a margin hint.
    pub fn margin(&self, x: &[f64]) -> Option<Result<f64, EvalError>> {
        self.margin_hint.as_ref().map(|m| m.evaluate(x, 0.0))
    }
}

/// An autonomous vector field `X` on `M`, optionally with its closed-form flow.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldSpec {
    manifold: ManifoldSpec,
    rhs: Vec<Expression>,
    oracle_flow: Option<Vec<Expression>>,
}

impl VectorFieldSpec {
    pub fn new(
        manifold: ManifoldSpec,
        rhs: Vec<Expression>,
        oracle_flow: Option<Vec<Expression>>,
    ) -> Result<Self, GeometryError> {
        let n = manifold.dim();
        if rhs.len() != n {
            return Err(GeometryError::Invalid(format!(
                "field has {} components in dimension {n}",
                rhs.len()
            )));
        }
        for (i, e) in rhs.iter().enumerate() {
            if e.uses_time() {
                return Err(GeometryError::Invalid(format!(
                    "component {} of the field depends on `t`; fields are autonomous",
                    i + 1
                )));
            }
            if e.max_variable() > n {
                return Err(GeometryError::Invalid(format!(
                    "component {} uses x{} in dimension {n}",
                    i + 1,
                    e.max_variable()
                )));
            }
        }
        if let Some(oracle) = &oracle_flow {
            if oracle.len() != n {
                return Err(GeometryError::Invalid(format!(
                    "oracle flow has {} components in dimension {n}",
                    oracle.len()
                )));
            }
            if let Some(e) = oracle.iter().find(|e| e.max_variable() > n) {
                return Err(GeometryError::Invalid(format!("oracle component `{e}` uses too many variables")));
            }
        }
        let field = VectorFieldSpec {
            manifold,
            rhs,
            oracle_flow,
        };
        field.check_evaluable()?;
        Ok(field)
    }

    /// The field must evaluate at every sampled point of `M`; a lattice over
    /// `[-2, 2]^n` is probed.
    fn check_evaluable(&self) -> Result<(), GeometryError> {
        let n = self.dim();
        let per_axis: usize = match n {
            1 => 41,
            2 => 21,
            3 => 9,
            _ => 3,
        };
        let total = per_axis.pow(n.min(6) as u32);
        let mut x = vec![0.0; n];
        for idx in 0..total {
            let mut rem = idx;
            for xi in x.iter_mut() {
                let k = rem % per_axis;
                rem /= per_axis;
                *xi = -2.0 + 4.0 * k as f64 / (per_axis - 1) as f64;
            }
            // Points where the predicate itself fails are simply not in M.
            if self.manifold.inside.evaluate(&x).unwrap_or(false) {
                if let Err(e) = self.eval_into(&x, &mut vec![0.0; n]) {
                    return Err(GeometryError::Invalid(format!(
                        "field does not evaluate at {x:?} inside the domain: {e}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    pub fn rhs(&self) -> &[Expression] {
        &self.rhs
    }

    pub fn oracle_flow(&self) -> Option<&[Expression]> {
        self.oracle_flow.as_deref()
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool, GeometryError> {
        self.manifold.contains(x)
    }

    /// `X(x)`; errors with `OutsideDomain` when `x` is not in `M`.
    pub fn field_at(&self, x: &[f64]) -> Result<Vec<f64>, GeometryError> {
        if !self.contains(x)? {
            return Err(GeometryError::OutsideDomain(x.to_vec()));
        }
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x, &mut out)?;
        Ok(out)
    }

    /// Evaluates the right-hand side without a membership check. The
    /// integrator uses this at Runge-Kutta stage points.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<(), EvalError> {
        for (o, e) in out.iter_mut().zip(&self.rhs) {
            *o = e.evaluate(x, 0.0)?;
        }
        Ok(())
    }

    /// Closed-form `Fl_t(x)` when the scenario supplies one.
    pub fn oracle_at(&self, x: &[f64], t: f64) -> Option<Result<Vec<f64>, EvalError>> {
        self.oracle_flow
            .as_ref()
            .map(|o| o.iter().map(|e| e.evaluate(x, t)).collect())
    }
}

/// A point `(s, x)` of `R x M`, written `s:x1,x2,...`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaggedPoint {
    pub s: f64,
    pub x: Vec<f64>,
}

impl TaggedPoint {
    pub fn new(s: f64, x: Vec<f64>) -> Self {
        TaggedPoint { s, x }
    }
}

/// Parses a comma-separated coordinate list such as `-1,0.5`.
pub fn parse_coords(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|c| {
            let c = c.trim();
            c.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid coordinate `{c}`"))
        })
        .collect()
}

impl std::str::FromStr for TaggedPoint {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let (s, x) = text
            .split_once(':')
            .ok_or_else(|| format!("expected `s:x1,...,xn`, got `{text}`"))?;
        let s = s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("invalid tag `{}`", s.trim()))?;
        Ok(TaggedPoint { s, x: parse_coords(x)? })
    }
}

impl fmt::Display for TaggedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.s)?;
        for (i, v) in self.x.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// One end of an existence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowEnd {
    /// The trajectory leaves `M` (or blows up) at this signed time.
    Finite(f64),
    /// No escape was found up to the given horizon.
    Unbounded { horizon: f64 },
}

impl WindowEnd {
    pub fn finite(self) -> Option<f64> {
        match self {
            WindowEnd::Finite(t) => Some(t),
            WindowEnd::Unbounded { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowQuality {
    CertifiedByOracle,
    NumericallyEstimated,
}

/// The open interval `(t_minus, t_plus)` of times for which the flow through
/// a point is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceWindow {
    pub t_minus: WindowEnd,
    pub t_plus: WindowEnd,
    pub quality: WindowQuality,
}

impl fmt::Display for WindowEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowEnd::Finite(t) => write!(f, "{t}"),
            WindowEnd::Unbounded { horizon } => write!(f, "inf@{horizon}"),
        }
    }
}

impl fmt::Display for ExistenceWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lower = match self.t_minus {
            WindowEnd::Unbounded { horizon } => format!("-inf@{horizon}"),
            end => end.to_string(),
        };
        let quality = match self.quality {
            WindowQuality::CertifiedByOracle => "certified_by_oracle",
            WindowQuality::NumericallyEstimated => "numerically_estimated",
        };
        write!(f, "({lower}, {}) [{quality}]", self.t_plus)
    }
}
