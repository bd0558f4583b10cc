//! Discrete measures on a fiber and their disintegrations over a finite base.
//!
//! A [`FiberedMeasure`] stores a base probability `σ = Σ σ_i δ_{ω_i}` and one
//! probability measure per base atom. With an atomic base each atom carries its
//! own chart, so coordinates of the fiber over `ω_i` are expressed in that chart
//! and chart transitions are isometries of the fiber space (see [`ChartAtlas`]).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::space::{ChartAtlas, FiberSpace, Point};

/// Tolerance on the total mass of user-provided weight vectors.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Tolerance when matching a computed base marginal against `σ`.
pub const MARGINAL_TOL: f64 = 1e-9;

pub const DEFAULT_CHART: &str = "default";

/// A finitely supported probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Builds a probability measure from nonnegative masses.
    ///
    /// Masses are renormalized to sum to one, zero-mass atoms are dropped and
    /// atoms at bitwise-identical points are merged in first-occurrence order.
    pub fn new(space: &FiberSpace, points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { index, value: w });
            }
        }
        for p in &points {
            space.check_point(p)?;
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::EmptySupport);
        }

        let mut index: HashMap<_, usize> = HashMap::with_capacity(points.len());
        let mut merged_points = Vec::with_capacity(points.len());
        let mut merged_weights: Vec<f64> = Vec::with_capacity(points.len());
        for (p, w) in points.into_iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            match index.entry(p.bit_key()) {
                std::collections::hash_map::Entry::Occupied(e) => merged_weights[*e.get()] += w,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(merged_points.len());
                    merged_points.push(p);
                    merged_weights.push(w);
                }
            }
        }
        for w in &mut merged_weights {
            *w /= total;
        }
        Ok(DiscreteMeasure {
            points: merged_points,
            weights: merged_weights,
        })
    }

    pub fn dirac(space: &FiberSpace, point: Point) -> Result<Self> {
        Self::new(space, vec![point], vec![1.0])
    }

    /// Convenience constructor for measures on the real line.
    pub fn on_line(points: &[f64], weights: &[f64]) -> Result<Self> {
        let line = FiberSpace::real_line(0.0)?;
        Self::new(
            &line,
            points.iter().map(|&t| Point::Real(t)).collect(),
            weights.to_vec(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// Real coordinates, for measures on the real line.
    pub fn reals(&self) -> Option<Vec<f64>> {
        self.points.iter().map(Point::as_real).collect()
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub(crate) fn map_points(&self, f: impl Fn(&Point) -> Point) -> DiscreteMeasure {
        DiscreteMeasure {
            points: self.points.iter().map(f).collect(),
            weights: self.weights.clone(),
        }
    }
}

/// The base probability `σ` over opaque atom labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMeasure {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl BaseMeasure {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                found: weights.len(),
            });
        }
        if labels.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidWeight { index, value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(BaseMeasure { labels, weights })
    }

    /// `n` atoms labelled `prefix0, prefix1, …` with equal weights.
    pub fn uniform(n: usize, prefix: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySupport);
        }
        let mut w = vec![1.0 / n as f64; n];
        let head: f64 = w[..n - 1].iter().sum();
        w[n - 1] = 1.0 - head;
        Self::new((0..n).map(|i| format!("{prefix}{i}")).collect(), w)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A probability measure on the bundle, stored through its disintegration.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberedMeasure {
    base: BaseMeasure,
    space: FiberSpace,
    fibers: Vec<DiscreteMeasure>,
    chart_id: String,
}

impl FiberedMeasure {
    pub fn new(base: BaseMeasure, space: FiberSpace, fibers: Vec<DiscreteMeasure>) -> Result<Self> {
        Self::with_chart(base, space, fibers, DEFAULT_CHART)
    }

    pub fn with_chart(
        base: BaseMeasure,
        space: FiberSpace,
        fibers: Vec<DiscreteMeasure>,
        chart_id: &str,
    ) -> Result<Self> {
        if fibers.len() != base.len() {
            return Err(Error::LengthMismatch {
                expected: base.len(),
                found: fibers.len(),
            });
        }
        for fiber in &fibers {
            for p in fiber.points() {
                space.check_point(p)?;
            }
        }
        Ok(FiberedMeasure {
            base,
            space,
            fibers,
            chart_id: chart_id.to_string(),
        })
    }

    /// The same fiber measure `μ` over every base atom (`μ ⊗ σ` in one chart).
    pub fn constant(base: BaseMeasure, space: FiberSpace, fiber: DiscreteMeasure) -> Result<Self> {
        let fibers = vec![fiber; base.len()];
        Self::new(base, space, fibers)
    }

    pub fn base(&self) -> &BaseMeasure {
        &self.base
    }

    pub fn space(&self) -> &FiberSpace {
        &self.space
    }

    pub fn fibers(&self) -> &[DiscreteMeasure] {
        &self.fibers
    }

    pub fn fiber(&self, i: usize) -> &DiscreteMeasure {
        &self.fibers[i]
    }

    pub fn chart_id(&self) -> &str {
        &self.chart_id
    }

    pub fn sigma(&self) -> &[f64] {
        self.base.weights()
    }

    /// Base marginal implied by the fibers; equals `σ` by construction.
    pub fn base_marginal(&self) -> Vec<f64> {
        self.fibers
            .iter()
            .zip(self.base.weights())
            .map(|(f, s)| s * f.weights().iter().sum::<f64>())
            .collect()
    }

    /// Flattens to `(base label, point, joint mass)` records.
    pub fn flatten(&self) -> Vec<(String, Point, f64)> {
        let mut out = Vec::new();
        for ((label, s), fiber) in self
            .base
            .labels()
            .iter()
            .zip(self.base.weights())
            .zip(&self.fibers)
        {
            for (p, w) in fiber.iter() {
                out.push((label.clone(), p.clone(), s * w));
            }
        }
        out
    }

    /// Checks that `other` lives over the same base and fiber geometry.
    pub fn check_same_base(&self, other: &FiberedMeasure) -> Result<()> {
        if self.base.labels() != other.base.labels() {
            return Err(Error::BaseMismatch("base labels differ".into()));
        }
        for (i, (a, b)) in self
            .base
            .weights()
            .iter()
            .zip(other.base.weights())
            .enumerate()
        {
            if (a - b).abs() > WEIGHT_TOL {
                return Err(Error::BaseMismatch(format!(
                    "σ differs at atom {i}: {a} vs {b}"
                )));
            }
        }
        if !self.space.same_geometry(&other.space) {
            return Err(Error::BaseMismatch(format!(
                "fiber spaces differ ({} vs {})",
                self.space.kind_name(),
                other.space.kind_name()
            )));
        }
        if self.chart_id != other.chart_id {
            return Err(Error::BaseMismatch(format!(
                "charts differ ({} vs {})",
                self.chart_id, other.chart_id
            )));
        }
        Ok(())
    }
}

/// Groups `(label, point, mass)` records into a fibered measure over `base`.
///
/// Fails with [`Error::MarginalMismatch`] unless the total mass per atom matches
/// `σ` within [`MARGINAL_TOL`] (relative to the total record mass).
pub fn build_fibered(
    base: &BaseMeasure,
    space: &FiberSpace,
    records: &[(String, Point, f64)],
) -> Result<FiberedMeasure> {
    let mut points: Vec<Vec<Point>> = vec![Vec::new(); base.len()];
    let mut masses: Vec<Vec<f64>> = vec![Vec::new(); base.len()];
    let lookup: HashMap<&str, usize> = base
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut total = 0.0;
    for (index, (label, point, mass)) in records.iter().enumerate() {
        let i = *lookup
            .get(label.as_str())
            .ok_or_else(|| Error::UnknownBaseLabel(label.clone()))?;
        if !mass.is_finite() || *mass < 0.0 {
            return Err(Error::InvalidWeight {
                index,
                value: *mass,
            });
        }
        points[i].push(point.clone());
        masses[i].push(*mass);
        total += mass;
    }
    if total <= 0.0 {
        return Err(Error::EmptySupport);
    }
    for (i, m) in masses.iter().enumerate() {
        let found = m.iter().sum::<f64>() / total;
        let expected = base.weights()[i];
        if (found - expected).abs() > MARGINAL_TOL {
            return Err(Error::MarginalMismatch {
                label: base.labels()[i].clone(),
                found,
                expected,
            });
        }
    }
    let fibers = points
        .into_iter()
        .zip(masses)
        .map(|(p, m)| DiscreteMeasure::new(space, p, m))
        .collect::<Result<Vec<_>>>()?;
    FiberedMeasure::new(base.clone(), space.clone(), fibers)
}

/// Maps every fiber through its atom's isometry and relabels the chart.
pub fn apply_chart_change(
    m: &FiberedMeasure,
    atlas: &ChartAtlas,
    new_chart_id: &str,
) -> Result<FiberedMeasure> {
    let mut fibers = Vec::with_capacity(m.fibers.len());
    for (i, fiber) in m.fibers.iter().enumerate() {
        let map = atlas.get(i)?;
        map.validate(&m.space, i)?;
        fibers.push(fiber.map_points(|p| map.apply(p)));
    }
    FiberedMeasure::with_chart(m.base.clone(), m.space.clone(), fibers, new_chart_id)
}

/// `δ_{y0} ⊗ σ`: the basepoint in every fiber.
pub fn reference_measure(base: &BaseMeasure, space: &FiberSpace) -> Result<FiberedMeasure> {
    let dirac = DiscreteMeasure::dirac(space, space.basepoint().clone())?;
    FiberedMeasure::constant(base.clone(), space.clone(), dirac)
}

/// Per-atom `p`-th moment of each fiber about the basepoint.
pub fn moment_p(m: &FiberedMeasure, p: f64) -> Result<Vec<f64>> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("p = {p} must be in [1, ∞)")));
    }
    let y0 = m.space.basepoint();
    Ok(m.fibers
        .iter()
        .map(|f| f.iter().map(|(t, w)| w * m.space.cost(y0, t, p)).sum())
        .collect())
}
