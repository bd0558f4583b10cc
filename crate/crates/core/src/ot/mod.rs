//! Exact optimal transport on a single fiber.
//!
//! [`ot_1d`] builds the monotone coupling on the real line, [`ot_lp`] solves the
//! transport linear program by network simplex and returns dual potentials,
//! and [`c_transform`] evaluates the (scaled) `d^p`-transform of a potential.

mod simplex;

pub(crate) use simplex::{solve_dense, solve_transport};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::space::{power, FiberSpace, Point, PointKey};

/// Default bound on the number of cost entries `m·n` of one LP.
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// A coupling of two discrete measures, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub row_points: Vec<Point>,
    pub col_points: Vec<Point>,
    /// `(row, col, mass)` triples with positive mass.
    pub entries: Vec<(usize, usize, f64)>,
    /// `Σ mass · d(row, col)^p`.
    pub cost: f64,
}

impl TransportPlan {
    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.row_points.len()];
        for &(i, _, m) in &self.entries {
            s[i] += m;
        }
        s
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.col_points.len()];
        for &(_, j, m) in &self.entries {
            s[j] += m;
        }
        s
    }
}

/// Dual potentials `(φ, ψ)` on the supports of `μ` and `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberDualPair {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl FiberDualPair {
    /// `−∫φ dμ − ∫ψ dν`.
    pub fn value(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
        -mu.integrate(&self.phi) - nu.integrate(&self.psi)
    }

    /// Largest `−φ(t) − ψ(s) − d(t,s)^p` over support pairs, with its position.
    pub fn max_violation(
        &self,
        mu: &DiscreteMeasure,
        nu: &DiscreteMeasure,
        space: &FiberSpace,
        p: f64,
    ) -> (f64, usize, usize) {
        max_violation(&self.phi, &self.psi, mu.points(), nu.points(), space, p)
    }
}

pub(crate) fn max_violation(
    phi: &[f64],
    psi: &[f64],
    rows: &[Point],
    cols: &[Point],
    space: &FiberSpace,
    p: f64,
) -> (f64, usize, usize) {
    let mut worst = (f64::NEG_INFINITY, 0, 0);
    for (i, t) in rows.iter().enumerate() {
        for (j, s) in cols.iter().enumerate() {
            let excess = -phi[i] - psi[j] - space.cost(t, s, p);
            if excess > worst.0 {
                worst = (excess, i, j);
            }
        }
    }
    worst
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p = {p} must lie in [1, ∞)")))
    }
}

/// Monotone (quantile) coupling of two measures on the real line.
///
/// Returns `mk_p(μ, ν)^p` and the plan from the north-west-corner sweep over
/// the sorted supports. Ties in position keep input order.
pub fn ot_1d(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<(f64, TransportPlan)> {
    check_p(p)?;
    let xs = mu
        .reals()
        .ok_or_else(|| Error::UnsupportedFiberKind("ot_1d needs real-line measures".into()))?;
    let ys = nu
        .reals()
        .ok_or_else(|| Error::UnsupportedFiberKind("ot_1d needs real-line measures".into()))?;
    let (entries, cost) = monotone_sweep(&xs, mu.weights(), &ys, nu.weights(), p);
    Ok((
        cost,
        TransportPlan {
            row_points: mu.points().to_vec(),
            col_points: nu.points().to_vec(),
            entries,
            cost,
        },
    ))
}

pub(crate) fn sorted_order(xs: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    order
}

fn monotone_sweep(
    xs: &[f64],
    a: &[f64],
    ys: &[f64],
    b: &[f64],
    p: f64,
) -> (Vec<(usize, usize, f64)>, f64) {
    let ox = sorted_order(xs);
    let oy = sorted_order(ys);
    let mut entries = Vec::with_capacity(xs.len() + ys.len());
    let mut cost = 0.0;
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a[ox[0]], b[oy[0]]);
    while i < ox.len() && j < oy.len() {
        let (r, c) = (ox[i], oy[j]);
        let mass = ra.min(rb);
        if mass > 0.0 {
            entries.push((r, c, mass));
            cost += mass * power((xs[r] - ys[c]).abs(), p);
        }
        if ra <= rb {
            rb -= ra;
            i += 1;
            if i < ox.len() {
                ra = a[ox[i]];
            }
        } else {
            ra -= rb;
            j += 1;
            if j < oy.len() {
                rb = b[oy[j]];
            }
        }
    }
    (entries, cost)
}

/// Options for the LP solver.
#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Maximum number of cost entries `m·n`.
    pub size_cap: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

/// Exact transport by network simplex, with optimal dual potentials.
///
/// The returned potentials satisfy `−φ(t) − ψ(s) ≤ d(t,s)^p` on all support
/// pairs, are normalized by `ψ(first atom of ν) = 0`, and `φ` is the
/// `d^p`-transform of `ψ`.
pub fn ot_lp(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    space: &FiberSpace,
    p: f64,
) -> Result<(f64, TransportPlan, FiberDualPair)> {
    ot_lp_with(mu, nu, space, p, LpOptions::default())
}

pub fn ot_lp_with(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    space: &FiberSpace,
    p: f64,
    options: LpOptions,
) -> Result<(f64, TransportPlan, FiberDualPair)> {
    check_p(p)?;
    let (m, n) = (mu.len(), nu.len());
    let entries = m.saturating_mul(n);
    if entries > options.size_cap {
        return Err(Error::SizeCapExceeded {
            entries,
            cap: options.size_cap,
        });
    }
    if mu == nu {
        let plan = TransportPlan {
            row_points: mu.points().to_vec(),
            col_points: nu.points().to_vec(),
            entries: mu.weights().iter().enumerate().map(|(i, &w)| (i, i, w)).collect(),
            cost: 0.0,
        };
        let duals = FiberDualPair {
            phi: vec![0.0; m],
            psi: vec![0.0; n],
        };
        return Ok((0.0, plan, duals));
    }

    let cost = cost_matrix(mu.points(), nu.points(), space, p);
    let sol = solve_dense(mu.weights(), nu.weights(), &cost)?;
    let plan_entries: Vec<(usize, usize, f64)> = sol
        .flow
        .iter()
        .enumerate()
        .filter(|(_, &f)| f > 0.0)
        .map(|(k, &f)| (k / n, k % n, f))
        .collect();
    let total: f64 = plan_entries.iter().map(|&(i, j, f)| f * cost[i * n + j]).sum();

    let shift = sol.col_potential[0];
    let psi: Vec<f64> = sol.col_potential.iter().map(|v| -(v - shift)).collect();
    let phi = c_transform(&psi, nu.points(), mu.points(), space, p, 1.0);
    Ok((
        total,
        TransportPlan {
            row_points: mu.points().to_vec(),
            col_points: nu.points().to_vec(),
            entries: plan_entries,
            cost: total,
        },
        FiberDualPair { phi, psi },
    ))
}

pub(crate) fn cost_matrix(rows: &[Point], cols: &[Point], space: &FiberSpace, p: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(rows.len() * cols.len());
    for t in rows {
        for s in cols {
            c.push(space.cost(t, s, p));
        }
    }
    c
}

/// `s ↦ max_{t ∈ from} (−λ·d(t,s)^p − φ(t))`, evaluated at every `s ∈ to`.
///
/// With `λ = 1` this is the `d^p`-transform `φ^{d^p}`; applied fiber by fiber
/// it realizes `S_{λ,p}` on discrete supports.
pub fn c_transform(
    phi: &[f64],
    from: &[Point],
    to: &[Point],
    space: &FiberSpace,
    p: f64,
    lambda: f64,
) -> Vec<f64> {
    to.iter()
        .map(|s| {
            from.iter()
                .zip(phi)
                .map(|(t, f)| -lambda * space.cost(t, s, p) - f)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// `mk_p(μ, ν)`: closed form on the real line, network simplex otherwise.
pub fn fiber_mk(mu: &DiscreteMeasure, nu: &DiscreteMeasure, space: &FiberSpace, p: f64) -> Result<f64> {
    Ok(fiber_cost(mu, nu, space, p, LpOptions::default())?.powf(1.0 / p))
}

/// `mk_p(μ, ν)^p` through the fastest exact route.
pub(crate) fn fiber_cost(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    space: &FiberSpace,
    p: f64,
    options: LpOptions,
) -> Result<f64> {
    // Solve one fixed orientation so that the cost is bitwise symmetric.
    let (mu, nu) = if ordered_key(nu) < ordered_key(mu) { (nu, mu) } else { (mu, nu) };
    if space.is_real_line() {
        Ok(ot_1d(mu, nu, p)?.0)
    } else {
        Ok(ot_lp_with(mu, nu, space, p, options)?.0)
    }
}

fn ordered_key(mu: &DiscreteMeasure) -> (Vec<PointKey>, Vec<u64>) {
    (
        mu.points().iter().map(Point::bit_key).collect(),
        mu.weights().iter().map(|w| w.to_bits()).collect(),
    )
}
