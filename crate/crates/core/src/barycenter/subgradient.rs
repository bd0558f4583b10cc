//! Projected subgradient method for `𝔅^{p,q,p}` with `p ≤ q < ∞` over
//! fibered measures on a fixed support grid.
//!
//! With `f_k(ω) = mk_p(𝔪_k^ω, 𝔫^ω)^p` and `r = q/p` the objective is
//! `Σ_k λ_k ‖f_k‖_{L^r(σ)}`. Each `f_k(ω)` is convex in the grid weights of
//! `𝔫^ω` with subgradient the column potential `v_{k,ω}` of the optimal
//! transport from `𝔪_k^ω`, and `‖·‖_{L^r}` has gradient `σ_i ζ_k(i)` with the
//! Hölder-optimal `ζ_k`. The iterates start at the `q = p` fixed-support
//! optimum and take normalized steps of length `a/(b+t)` followed by a
//! Euclidean projection onto each fiber simplex.

use std::collections::HashSet;

use rayon::prelude::*;

use super::dual::{dual_objective, BarycenterDualCertificate};
use super::fixed::{fixed_support_weights, grid_measure};
use super::{check_grid, objective, BarycenterProblem};
use crate::disint::{conjugate, lq_norm, optimal_zeta};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, FiberedMeasure};
use crate::ot::{c_transform, ot_lp};
use crate::space::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgradientOptions {
    pub iterations: usize,
    /// Step length `a/(b+t)` at iteration `t`.
    pub step_a: f64,
    pub step_b: f64,
    /// Fail with [`Error::NotConverged`] when the gap bound exceeds this.
    pub gap_tolerance: Option<f64>,
}

impl Default for SubgradientOptions {
    fn default() -> Self {
        SubgradientOptions {
            iterations: 2000,
            step_a: 1.0,
            step_b: 10.0,
            gap_tolerance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralQSolution {
    /// Best iterate found.
    pub barycenter: FiberedMeasure,
    /// Its objective `𝔅^{p,q,p}`.
    pub value: f64,
    /// `value − dual`, with the dual certificate below.
    pub gap_bound: f64,
    pub dual: f64,
    pub certificate: BarycenterDualCertificate,
    pub iterations: usize,
}

/// Per-iterate data: fiber costs `f[k][i]` and the row potentials of every
/// optimal transport from `𝔪_k^{ω_i}` to the candidate fiber.
struct Evaluation {
    value: f64,
    costs: Vec<Vec<f64>>,
    potentials: Vec<Vec<Vec<f64>>>,
}

/// Approximate minimizer of `𝔅^{p,q,p}` among measures supported on `grid`.
pub fn solve_general_q(
    problem: &BarycenterProblem,
    grid: &[Vec<Point>],
    options: SubgradientOptions,
) -> Result<GeneralQSolution> {
    problem.require_kappa_p()?;
    let (p, q) = (problem.p(), problem.q());
    if !(q >= p) || q == f64::INFINITY {
        return Err(Error::InvalidParameter(format!(
            "the subgradient solver needs p ≤ q < ∞ (p = {p}, q = {q})"
        )));
    }
    if !(options.step_a > 0.0) || !(options.step_b >= 0.0) {
        return Err(Error::InvalidParameter("step schedule must be positive".into()));
    }
    check_grid(problem, grid)?;
    let r = q / p;
    let sigma = problem.sigma();

    let mut w = fixed_support_weights(problem, grid)?;
    let mut eval = evaluate(problem, grid, &w)?;
    let mut best = (eval.value, w.clone());
    let mut done = 0;
    for t in 0..options.iterations {
        done = t + 1;
        let zetas: Vec<Vec<f64>> = eval.costs.iter().map(|f| optimal_zeta(f, sigma, r)).collect();
        let mut g: Vec<Vec<f64>> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let mut gi = vec![0.0; grid[i].len()];
                for (k, m) in problem.inputs().iter().enumerate() {
                    let scale = problem.lambdas()[k] * sigma[i] * zetas[k][i];
                    if scale == 0.0 {
                        continue;
                    }
                    // The column potential on the grid is −Φ^{d^p}.
                    let transform = c_transform(&eval.potentials[k][i], m.fiber(i).points(), &grid[i], problem.space(), p, 1.0);
                    for (x, t) in gi.iter_mut().zip(transform) {
                        *x -= scale * t;
                    }
                }
                let mean = gi.iter().sum::<f64>() / gi.len() as f64;
                gi.iter_mut().for_each(|x| *x -= mean);
                gi
            })
            .collect();
        let norm = g.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            break;
        }
        let step = options.step_a / (options.step_b + t as f64) / norm;
        for (wi, gi) in w.iter_mut().zip(g.iter_mut()) {
            for (x, d) in wi.iter_mut().zip(gi.iter()) {
                *x -= step * d;
            }
            project_simplex(wi);
        }
        eval = evaluate(problem, grid, &w)?;
        if eval.value < best.0 {
            best = (eval.value, w.clone());
        }
    }

    let barycenter = grid_measure(problem, grid, &best.1)?;
    let value = objective(problem, &barycenter)?;
    let best_eval = evaluate(problem, grid, &best.1)?;
    let mut certificate = assemble_certificate(problem, grid, &best_eval, r)?;
    let mut dual = dual_objective(problem, &certificate)?;
    if best.1 != w {
        let last = assemble_certificate(problem, grid, &eval, r)?;
        let last_dual = dual_objective(problem, &last)?;
        if last_dual > dual {
            certificate = last;
            dual = last_dual;
        }
    }
    let gap_bound = value - dual;
    if let Some(tol) = options.gap_tolerance {
        if gap_bound > tol {
            return Err(Error::NotConverged {
                value,
                gap: gap_bound,
                best: Box::new(barycenter),
            });
        }
    }
    Ok(GeneralQSolution {
        barycenter,
        value,
        gap_bound,
        dual,
        certificate,
        iterations: done,
    })
}

fn evaluate(problem: &BarycenterProblem, grid: &[Vec<Point>], w: &[Vec<f64>]) -> Result<Evaluation> {
    let space = problem.space();
    let p = problem.p();
    let per_fiber: Vec<Vec<(f64, Vec<f64>)>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let candidate = DiscreteMeasure::new(space, grid[i].clone(), w[i].clone())?;
            problem
                .inputs()
                .iter()
                .map(|m| ot_lp(m.fiber(i), &candidate, space, p).map(|(c, _, d)| (c, d.phi)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let k = problem.len();
    let mut costs = vec![Vec::with_capacity(grid.len()); k];
    let mut potentials = vec![Vec::with_capacity(grid.len()); k];
    for fiber in per_fiber {
        for (kk, (c, phi)) in fiber.into_iter().enumerate() {
            costs[kk].push(c);
            potentials[kk].push(phi);
        }
    }
    let r = problem.q() / p;
    let value = costs
        .iter()
        .zip(problem.lambdas())
        .map(|(f, l)| l * lq_norm(f, problem.sigma(), r))
        .sum();
    Ok(Evaluation {
        value,
        costs,
        potentials,
    })
}

/// Certificate `ξ_k = λ_k·φ_k^{d^p}` from the LP potentials of an iterate,
/// on the union of the grid and the input supports, projected onto the
/// constraint.
fn assemble_certificate(
    problem: &BarycenterProblem,
    grid: &[Vec<Point>],
    eval: &Evaluation,
    r: f64,
) -> Result<BarycenterDualCertificate> {
    let sigma = problem.sigma();
    let support: Vec<Vec<Point>> = (0..grid.len())
        .map(|i| {
            let mut seen = HashSet::new();
            let mut pts = Vec::new();
            let inputs = problem.inputs().iter().flat_map(|m| m.fiber(i).points());
            for point in grid[i].iter().chain(inputs) {
                if seen.insert(point.bit_key()) {
                    pts.push(point.clone());
                }
            }
            pts
        })
        .collect();
    let r_conj = conjugate(r);
    let zeta: Vec<Vec<f64>> = eval
        .costs
        .iter()
        .map(|f| {
            let mut z = optimal_zeta(f, sigma, r);
            let norm = lq_norm(&z, sigma, r_conj);
            if norm > 1.0 {
                z.iter_mut().for_each(|x| *x /= norm);
            }
            z
        })
        .collect();
    let xi = problem
        .inputs()
        .iter()
        .zip(problem.lambdas())
        .enumerate()
        .map(|(k, (m, &lambda))| {
            (0..grid.len())
                .map(|i| {
                    c_transform(&eval.potentials[k][i], m.fiber(i).points(), &support[i], problem.space(), problem.p(), 1.0)
                        .into_iter()
                        .map(|x| lambda * x)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut cert = BarycenterDualCertificate { zeta, support, xi };
    cert.project();
    Ok(cert)
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(w: &mut [f64]) {
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &x) in sorted.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    w.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}
