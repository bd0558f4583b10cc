//! Fiberwise displacement interpolation.
//!
//! For `p > 1` each fiber moves along straight lines of an optimal plan: the
//! plan atom `(t, s, mass)` sits at `(1−τ)t + τs` at time `τ`. For `p = 1` the
//! linear mixture `(1−τ)𝔪₀ + τ𝔪₁` is a geodesic on any fiber space.

use crate::disint::scrmk;
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, FiberedMeasure};
use crate::ot::{check_p, ot_1d, ot_lp, TransportPlan};
use crate::space::{FiberKind, FiberSpace, Point};

#[derive(Debug, Clone)]
enum Interpolation {
    Displacement(Vec<TransportPlan>),
    Mixture,
}

/// A geodesic between two fibered measures over the same base.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    start: FiberedMeasure,
    end: FiberedMeasure,
    p: f64,
    interpolation: Interpolation,
}

impl GeodesicPath {
    pub fn new(m0: &FiberedMeasure, m1: &FiberedMeasure, p: f64) -> Result<Self> {
        m0.check_same_base(m1)?;
        check_p(p)?;
        let space = m0.space();
        let interpolation = if p == 1.0 {
            Interpolation::Mixture
        } else {
            let plans = match space.kind() {
                FiberKind::Real1D => m0
                    .fibers()
                    .iter()
                    .zip(m1.fibers())
                    .map(|(a, b)| ot_1d(a, b, p).map(|(_, plan)| plan))
                    .collect::<Result<Vec<_>>>()?,
                FiberKind::Euclidean { .. } => m0
                    .fibers()
                    .iter()
                    .zip(m1.fibers())
                    .map(|(a, b)| ot_lp(a, b, space, p).map(|(_, plan, _)| plan))
                    .collect::<Result<Vec<_>>>()?,
                FiberKind::Matrix { .. } => {
                    return Err(Error::NonGeodesicFiberSpace("matrix"));
                }
            };
            Interpolation::Displacement(plans)
        };
        Ok(GeodesicPath {
            start: m0.clone(),
            end: m1.clone(),
            p,
            interpolation,
        })
    }

    pub fn start(&self) -> &FiberedMeasure {
        &self.start
    }

    pub fn end(&self) -> &FiberedMeasure {
        &self.end
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Per-fiber plans used for displacement interpolation (`p > 1`).
    pub fn plans(&self) -> Option<&[TransportPlan]> {
        match &self.interpolation {
            Interpolation::Displacement(plans) => Some(plans),
            Interpolation::Mixture => None,
        }
    }

    /// The interpolant at time `τ ∈ [0, 1]`. Endpoints are returned unchanged.
    pub fn at(&self, tau: f64) -> Result<FiberedMeasure> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::InvalidParameter(format!("τ = {tau} outside [0, 1]")));
        }
        if tau == 0.0 {
            return Ok(self.start.clone());
        }
        if tau == 1.0 {
            return Ok(self.end.clone());
        }
        let space = self.start.space();
        let fibers = match &self.interpolation {
            Interpolation::Mixture => self
                .start
                .fibers()
                .iter()
                .zip(self.end.fibers())
                .map(|(a, b)| mixture(space, a, b, tau))
                .collect::<Result<Vec<_>>>()?,
            Interpolation::Displacement(plans) => plans
                .iter()
                .map(|plan| displace(space, plan, tau))
                .collect::<Result<Vec<_>>>()?,
        };
        FiberedMeasure::with_chart(
            self.start.base().clone(),
            space.clone(),
            fibers,
            self.start.chart_id(),
        )
    }
}

fn mixture(space: &FiberSpace, a: &DiscreteMeasure, b: &DiscreteMeasure, tau: f64) -> Result<DiscreteMeasure> {
    let points = a.points().iter().chain(b.points()).cloned().collect();
    let weights = a
        .weights()
        .iter()
        .map(|w| (1.0 - tau) * w)
        .chain(b.weights().iter().map(|w| tau * w))
        .collect();
    DiscreteMeasure::new(space, points, weights)
}

fn displace(space: &FiberSpace, plan: &TransportPlan, tau: f64) -> Result<DiscreteMeasure> {
    let mut points = Vec::with_capacity(plan.entries.len());
    let mut weights = Vec::with_capacity(plan.entries.len());
    for &(i, j, mass) in &plan.entries {
        points.push(lerp(&plan.row_points[i], &plan.col_points[j], tau));
        weights.push(mass);
    }
    DiscreteMeasure::new(space, points, weights)
}

fn lerp(a: &Point, b: &Point, tau: f64) -> Point {
    match (a, b) {
        (Point::Real(s), Point::Real(t)) => Point::Real((1.0 - tau) * s + tau * t),
        (Point::Vector(u), Point::Vector(v)) => Point::Vector(
            u.iter()
                .zip(v)
                .map(|(x, y)| (1.0 - tau) * x + tau * y)
                .collect(),
        ),
        _ => unreachable!("interpolation on non-geodesic points"),
    }
}

/// The interpolant at `τ` of the fiberwise geodesic from `m0` to `m1`.
pub fn geodesic_point(m0: &FiberedMeasure, m1: &FiberedMeasure, tau: f64, p: f64) -> Result<FiberedMeasure> {
    GeodesicPath::new(m0, m1, p)?.at(tau)
}

/// Largest deviation from the geodesic identity over pairs of times.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicReport {
    /// `𝒟𝒦_{p,q}(𝔪₀, 𝔪₁)`.
    pub distance: f64,
    pub max_deviation: f64,
    /// Time pair attaining the maximum.
    pub worst_pair: (f64, f64),
}

/// `max |𝒟𝒦_{p,q}(𝔪_{τ₁}, 𝔪_{τ₂}) − |τ₁−τ₂|·𝒟𝒦_{p,q}(𝔪₀, 𝔪₁)|` over `taus`.
pub fn verify_geodesic(
    m0: &FiberedMeasure,
    m1: &FiberedMeasure,
    taus: &[f64],
    p: f64,
    q: f64,
) -> Result<GeodesicReport> {
    let path = GeodesicPath::new(m0, m1, p)?;
    let distance = scrmk(m0, m1, p, q)?.value;
    let points = taus.iter().map(|&t| path.at(t)).collect::<Result<Vec<_>>>()?;
    let mut report = GeodesicReport {
        distance,
        max_deviation: 0.0,
        worst_pair: (0.0, 0.0),
    };
    for a in 0..taus.len() {
        for b in a + 1..taus.len() {
            let d = scrmk(&points[a], &points[b], p, q)?.value;
            let dev = (d - (taus[a] - taus[b]).abs() * distance).abs();
            if dev > report.max_deviation {
                report.max_deviation = dev;
                report.worst_pair = (taus[a], taus[b]);
            }
        }
    }
    Ok(report)
}
