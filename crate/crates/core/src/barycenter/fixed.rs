//! Fixed-support barycenters for `q = κ = p` as one linear program per fiber.
//!
//! On fiber `ω` with grid `{g_1, …, g_G}` the program is
//! `min Σ_k λ_k Σ_{a,g} d(a,g)^p π_k(a,g)` over `π_k ≥ 0`, `w ≥ 0` with
//! `Σ_g π_k(a,g) = 𝔪_k^ω(a)` and `Σ_a π_k(a,g) = w_g` for every `k`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rayon::prelude::*;

use super::{check_grid, objective, BarycenterProblem};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, FiberedMeasure};
use crate::space::{FiberSpace, Point};

/// Exact minimizer of `𝔅^{p,p,p}` among fibered measures supported on `grid`
/// (one candidate list per base atom), with its objective.
pub fn solve_fixed_support(problem: &BarycenterProblem, grid: &[Vec<Point>]) -> Result<(FiberedMeasure, f64)> {
    problem.require_q_p()?;
    let weights = fixed_support_weights(problem, grid)?;
    let bary = grid_measure(problem, grid, &weights)?;
    let value = objective(problem, &bary)?;
    Ok((bary, value))
}

/// Optimal grid weights, one vector per fiber.
pub(crate) fn fixed_support_weights(problem: &BarycenterProblem, grid: &[Vec<Point>]) -> Result<Vec<Vec<f64>>> {
    check_grid(problem, grid)?;
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let fibers: Vec<&DiscreteMeasure> = problem.inputs().iter().map(|m| m.fiber(i)).collect();
            fiber_lp(&fibers, problem.lambdas(), &grid[i], problem.space(), problem.p())
        })
        .collect()
}

fn fiber_lp(
    fibers: &[&DiscreteMeasure],
    lambdas: &[f64],
    grid: &[Point],
    space: &FiberSpace,
    p: f64,
) -> Result<Vec<f64>> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = grid.iter().map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for (mu, &lambda) in fibers.iter().zip(lambdas) {
        let vars: Vec<Vec<_>> = mu
            .points()
            .iter()
            .map(|a| {
                grid.iter()
                    .map(|g| lp.add_var(lambda * space.cost(a, g, p), (0.0, f64::INFINITY)))
                    .collect()
            })
            .collect();
        for (row, &mass) in vars.iter().zip(mu.weights()) {
            lp.add_constraint(row.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, mass);
        }
        for (g, &wg) in w.iter().enumerate() {
            let mut col: Vec<_> = vars.iter().map(|row| (row[g], 1.0)).collect();
            col.push((wg, -1.0));
            lp.add_constraint(col, ComparisonOp::Eq, 0.0);
        }
    }
    let solution = lp.solve().map_err(|e| Error::LpFailure(e.to_string()))?;
    Ok(w.iter().map(|&v| solution[v].max(0.0)).collect())
}

/// The fibered measure with the given weights on the grid.
pub(crate) fn grid_measure(problem: &BarycenterProblem, grid: &[Vec<Point>], weights: &[Vec<f64>]) -> Result<FiberedMeasure> {
    let fibers = grid
        .iter()
        .zip(weights)
        .map(|(g, w)| DiscreteMeasure::new(problem.space(), g.clone(), w.clone()))
        .collect::<Result<Vec<_>>>()?;
    problem.assemble(fibers)
}
