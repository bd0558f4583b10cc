//! Barycenters of fibered measures.
//!
//! For inputs `𝔐 = (𝔪_k)` over a shared base and weights `Λ` in the open
//! simplex, the barycenter functional is
//! `𝔅^{p,q,κ}(𝔫) = Σ_k λ_k 𝒟𝒦_{p,q}(𝔪_k, 𝔫)^κ` with `0⁰ := 0`.
//!
//! With `κ = p = q` the functional splits into independent per-fiber
//! problems, solved exactly by [`solve_fiberwise`]. For `p < q < ∞`,
//! [`solve_general_q`] runs a projected subgradient method over weights on a
//! fixed support grid and reports a duality-gap bound. Minimizers need not be
//! unique (already for `p = 1` on the line); the solvers return one of them.

mod dual;
mod fixed;
mod nonunique;
mod subgradient;

use std::collections::HashSet;

use rayon::prelude::*;

pub use dual::{classical_dual, dual_objective, BarycenterDualCertificate, CONSTRAINT_TOL};
pub use fixed::solve_fixed_support;
pub use nonunique::{interval_midpoints, nonunique_instance, tent, NonuniqueReport};
pub use subgradient::{solve_general_q, GeneralQSolution, SubgradientOptions};

use crate::disint::{check_q, scrmk};
use crate::error::{Error, Result};
use crate::measure::{BaseMeasure, DiscreteMeasure, FiberedMeasure, WEIGHT_TOL};
use crate::ot::{check_p, sorted_order};
use crate::space::{FiberSpace, Point};

/// Inputs, weights and exponents of a barycenter problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycenterProblem {
    inputs: Vec<FiberedMeasure>,
    lambdas: Vec<f64>,
    p: f64,
    q: f64,
    kappa: f64,
}

impl BarycenterProblem {
    pub fn new(inputs: Vec<FiberedMeasure>, lambdas: Vec<f64>, p: f64, q: f64, kappa: f64) -> Result<Self> {
        if inputs.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a barycenter needs at least two inputs, got {}",
                inputs.len()
            )));
        }
        check_lambdas(&lambdas, inputs.len())?;
        check_p(p)?;
        check_q(q)?;
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("κ = {kappa} must be finite and ≥ 0")));
        }
        for m in &inputs[1..] {
            inputs[0].check_same_base(m)?;
        }
        Ok(BarycenterProblem {
            inputs,
            lambdas,
            p,
            q,
            kappa,
        })
    }

    pub fn inputs(&self) -> &[FiberedMeasure] {
        &self.inputs
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Number of inputs `K`.
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn base(&self) -> &BaseMeasure {
        self.inputs[0].base()
    }

    pub fn space(&self) -> &FiberSpace {
        self.inputs[0].space()
    }

    pub fn sigma(&self) -> &[f64] {
        self.inputs[0].sigma()
    }

    fn fibers(&self) -> usize {
        self.base().len()
    }

    fn require_kappa_p(&self) -> Result<()> {
        if self.kappa != self.p {
            return Err(Error::InvalidParameter(format!(
                "solvers and certificates need κ = p (κ = {}, p = {})",
                self.kappa, self.p
            )));
        }
        Ok(())
    }

    fn require_q_p(&self) -> Result<()> {
        self.require_kappa_p()?;
        if self.q != self.p {
            return Err(Error::InvalidParameter(format!(
                "the fiberwise solver needs q = p (p = {}, q = {})",
                self.p, self.q
            )));
        }
        Ok(())
    }

    /// Wraps per-fiber measures into a fibered measure over the problem base.
    fn assemble(&self, fibers: Vec<DiscreteMeasure>) -> Result<FiberedMeasure> {
        let first = &self.inputs[0];
        FiberedMeasure::with_chart(first.base().clone(), first.space().clone(), fibers, first.chart_id())
    }
}

pub(crate) fn check_lambdas(lambdas: &[f64], k: usize) -> Result<()> {
    if lambdas.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: lambdas.len(),
        });
    }
    for (index, &value) in lambdas.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidWeight { index, value });
        }
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// `𝔅^{p,q,κ}(𝔫) = Σ_k λ_k 𝒟𝒦_{p,q}(𝔪_k, 𝔫)^κ` with `0⁰ := 0`.
pub fn objective(problem: &BarycenterProblem, n: &FiberedMeasure) -> Result<f64> {
    let mut total = 0.0;
    for (m, &lambda) in problem.inputs.iter().zip(&problem.lambdas) {
        let d = scrmk(m, n, problem.p, problem.q)?.value;
        let term = if d == 0.0 { 0.0 } else { d.powf(problem.kappa) };
        total += lambda * term;
    }
    Ok(total)
}

/// Validates one candidate grid per base atom: nonempty, inside the fiber
/// space, without repeated points.
pub(crate) fn check_grid(problem: &BarycenterProblem, grid: &[Vec<Point>]) -> Result<()> {
    if grid.len() != problem.fibers() {
        return Err(Error::LengthMismatch {
            expected: problem.fibers(),
            found: grid.len(),
        });
    }
    for (i, g) in grid.iter().enumerate() {
        if g.is_empty() {
            return Err(Error::InvalidParameter(format!("empty support grid on fiber {i}")));
        }
        let mut seen = HashSet::with_capacity(g.len());
        for point in g {
            problem.space().check_point(point)?;
            if !seen.insert(point.bit_key()) {
                return Err(Error::InvalidParameter(format!(
                    "support grid on fiber {i} repeats the point {point}"
                )));
            }
        }
    }
    Ok(())
}

/// Exact barycenter for `q = κ = p`.
///
/// Without a grid the fibers must be one-dimensional and are solved through
/// quantile functions: at every level `t` the barycenter quantile minimizes
/// `x ↦ Σ_k λ_k |x − F_k⁻¹(t)|^p` (weighted mean for `p = 2`, lowest weighted
/// median for `p = 1`, derivative bisection otherwise). With a grid the
/// fixed-support linear program of [`solve_fixed_support`] is solved instead.
pub fn solve_fiberwise(
    problem: &BarycenterProblem,
    grid: Option<&[Vec<Point>]>,
) -> Result<(FiberedMeasure, f64)> {
    problem.require_q_p()?;
    if let Some(grid) = grid {
        return solve_fixed_support(problem, grid);
    }
    if !problem.space().is_real_line() {
        return Err(Error::UnsupportedFiberKind(format!(
            "{} fibers need a candidate support grid",
            problem.space().kind_name()
        )));
    }
    let fibers = (0..problem.fibers())
        .into_par_iter()
        .map(|i| {
            let views: Vec<&DiscreteMeasure> = problem.inputs.iter().map(|m| m.fiber(i)).collect();
            quantile_barycenter(&views, &problem.lambdas, problem.p)
        })
        .collect::<Result<Vec<_>>>()?;
    let bary = problem.assemble(fibers)?;
    let value = objective(problem, &bary)?;
    Ok((bary, value))
}

fn quantile_barycenter(measures: &[&DiscreteMeasure], lambdas: &[f64], p: f64) -> Result<DiscreteMeasure> {
    let sorted: Vec<(Vec<f64>, Vec<f64>)> = measures
        .iter()
        .map(|mu| {
            let xs = mu.reals().expect("real line fibers");
            let order = sorted_order(&xs);
            (
                order.iter().map(|&j| xs[j]).collect(),
                order.iter().map(|&j| mu.weights()[j]).collect(),
            )
        })
        .collect();
    let k = measures.len();
    let mut pos = vec![0usize; k];
    let mut rest: Vec<f64> = sorted.iter().map(|(_, w)| w[0]).collect();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut levels = vec![0.0; k];
    'sweep: loop {
        let mass = rest.iter().copied().fold(f64::INFINITY, f64::min);
        for j in 0..k {
            levels[j] = sorted[j].0[pos[j]];
        }
        points.push(Point::Real(levelwise_argmin(&levels, lambdas, p)));
        weights.push(mass);
        for j in 0..k {
            rest[j] -= mass;
            if rest[j] <= 0.0 {
                pos[j] += 1;
                if pos[j] == sorted[j].0.len() {
                    break 'sweep;
                }
                rest[j] = sorted[j].1[pos[j]];
            }
        }
    }
    DiscreteMeasure::new(&FiberSpace::real_line(0.0)?, points, weights)
}

/// `argmin_x Σ_k λ_k |x − y_k|^p`, the smallest minimizer when `p = 1`.
pub(crate) fn levelwise_argmin(ys: &[f64], lambdas: &[f64], p: f64) -> f64 {
    let total: f64 = lambdas.iter().sum();
    if p == 2.0 {
        return ys.iter().zip(lambdas).map(|(y, l)| l * y).sum::<f64>() / total;
    }
    let order = sorted_order(ys);
    if p == 1.0 {
        let mut cum = 0.0;
        for &j in &order {
            cum += lambdas[j];
            if cum >= 0.5 * total {
                return ys[j];
            }
        }
        return ys[*order.last().unwrap()];
    }
    let slope = |x: f64| -> f64 {
        ys.iter()
            .zip(lambdas)
            .map(|(y, l)| {
                let d = x - y;
                l * d.signum() * d.abs().powf(p - 1.0)
            })
            .sum()
    };
    let (mut lo, mut hi) = (ys[order[0]], ys[*order.last().unwrap()]);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
