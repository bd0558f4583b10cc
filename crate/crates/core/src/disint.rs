//! The disintegrated `(p, q)` Monge–Kantorovich metric and its dual.
//!
//! For fibered measures `𝔪, 𝔫` over the same base `σ`,
//! `𝒟𝒦_{p,q}(𝔪, 𝔫) = ‖ω ↦ mk_p(𝔪^ω, 𝔫^ω)‖_{L^q(σ)}`.
//!
//! For `p ≤ q < ∞` and `r = q/p` with Hölder conjugate `r'`, the `p`-th power
//! of the distance is the supremum of
//! `−Σ_i σ_i ζ_i (∫Φ d𝔪^{ω_i} + ∫Ψ d𝔫^{ω_i})` over fiberwise admissible
//! `(Φ, Ψ)` and `ζ ≥ 0` with `‖ζ‖_{L^{r'}(σ)} ≤ 1`. [`certify`] assembles a
//! maximizer from per-fiber LP potentials and [`optimal_zeta`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::FiberedMeasure;
use crate::ot::{
    self, check_p, fiber_cost, ot_lp_with, solve_transport, FiberDualPair, LpOptions,
    TransportPlan,
};
use crate::space::Point;

/// Relative slack allowed in `−Φ(u) − Ψ(v) ≤ d(u,v)^p`.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;
/// Slack allowed on `‖ζ‖_{L^{r'}(σ)} ≤ 1`.
pub const ZETA_NORM_TOL: f64 = 1e-12;

/// Per-fiber distances and their `L^q(σ)` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct DisintDistanceReport {
    pub per_fiber: Vec<f64>,
    pub value: f64,
    pub p: f64,
    pub q: f64,
}

/// `‖f‖_{L^q(σ)}`; for `q = ∞` the maximum over atoms with positive weight.
pub fn lq_norm(values: &[f64], sigma: &[f64], q: f64) -> f64 {
    if q == f64::INFINITY {
        values
            .iter()
            .zip(sigma)
            .filter(|(_, &s)| s > 0.0)
            .map(|(v, _)| v.abs())
            .fold(0.0, f64::max)
    } else if q == 1.0 {
        values.iter().zip(sigma).map(|(v, s)| s * v.abs()).sum()
    } else {
        values
            .iter()
            .zip(sigma)
            .map(|(v, s)| s * v.abs().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

/// Hölder conjugate exponent.
pub fn conjugate(r: f64) -> f64 {
    if r == 1.0 {
        f64::INFINITY
    } else if r == f64::INFINITY {
        1.0
    } else {
        r / (r - 1.0)
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q = {q} must lie in [1, ∞]")))
    }
}

/// Per-fiber `mk_p^p`, solved in parallel; output order follows the base atoms.
pub(crate) fn fiber_costs(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    p: f64,
    options: LpOptions,
) -> Result<Vec<f64>> {
    m.check_same_base(n)?;
    check_p(p)?;
    let space = m.space();
    (0..m.fibers().len())
        .into_par_iter()
        .map(|i| fiber_cost(m.fiber(i), n.fiber(i), space, p, options))
        .collect()
}

/// `𝒟𝒦_{p,q}(𝔪, 𝔫)` with its per-fiber distances.
pub fn scrmk(m: &FiberedMeasure, n: &FiberedMeasure, p: f64, q: f64) -> Result<DisintDistanceReport> {
    scrmk_with(m, n, p, q, LpOptions::default())
}

pub fn scrmk_with(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    p: f64,
    q: f64,
    options: LpOptions,
) -> Result<DisintDistanceReport> {
    check_q(q)?;
    let costs = fiber_costs(m, n, p, options)?;
    let per_fiber: Vec<f64> = costs.iter().map(|c| c.powf(1.0 / p)).collect();
    let value = lq_norm(&per_fiber, m.sigma(), q);
    Ok(DisintDistanceReport {
        per_fiber,
        value,
        p,
        q,
    })
}

/// Coupling of two fibered measures that never moves mass between fibers.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPlan {
    /// Base atom of each row / column of `plan`.
    pub row_fiber: Vec<usize>,
    pub col_fiber: Vec<usize>,
    pub plan: TransportPlan,
}

/// `𝔆_p(𝔪, 𝔫)`: one LP over couplings of the flattened measures in which
/// off-fiber pairs are excluded.
pub fn cp_cost(m: &FiberedMeasure, n: &FiberedMeasure, p: f64) -> Result<(f64, JointPlan)> {
    cp_cost_with(m, n, p, LpOptions::default())
}

pub fn cp_cost_with(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    p: f64,
    options: LpOptions,
) -> Result<(f64, JointPlan)> {
    m.check_same_base(n)?;
    check_p(p)?;
    let space = m.space();
    let sigma = m.sigma();

    let mut rows: Vec<Point> = Vec::new();
    let mut row_fiber = Vec::new();
    let mut a = Vec::new();
    let mut cols: Vec<Point> = Vec::new();
    let mut col_fiber = Vec::new();
    let mut b = Vec::new();
    let mut arcs = Vec::new();
    for (i, s) in sigma.iter().enumerate() {
        let row0 = rows.len();
        let col0 = cols.len();
        for (t, w) in m.fiber(i).iter() {
            rows.push(t.clone());
            row_fiber.push(i);
            a.push(s * w);
        }
        for (u, w) in n.fiber(i).iter() {
            cols.push(u.clone());
            col_fiber.push(i);
            b.push(s * w);
        }
        for r in row0..rows.len() {
            for c in col0..cols.len() {
                arcs.push((r, c, space.cost(&rows[r], &cols[c], p)));
            }
        }
    }
    if arcs.len() > options.size_cap {
        return Err(Error::SizeCapExceeded {
            entries: arcs.len(),
            cap: options.size_cap,
        });
    }
    let sol = solve_transport(&a, &b, &arcs)?;
    let entries: Vec<(usize, usize, f64)> = arcs
        .iter()
        .zip(&sol.flow)
        .filter(|(_, &f)| f > 0.0)
        .map(|(&(r, c, _), &f)| (r, c, f))
        .collect();
    let value = sol.cost;
    Ok((
        value,
        JointPlan {
            row_fiber,
            col_fiber,
            plan: TransportPlan {
                row_points: rows,
                col_points: cols,
                entries,
                cost: value,
            },
        },
    ))
}

/// Maximizer of `Σ σ_i ζ_i f_i` over `ζ ≥ 0`, `‖ζ‖_{L^{r'}(σ)} ≤ 1`.
///
/// `r = 1` gives `ζ ≡ 1`; `1 < r < ∞` gives `ζ_i = (f_i/‖f‖_r)^{r−1}`; `r = ∞`
/// puts `1/σ_i` on the first atom attaining `max f`. When `f ≡ 0` every
/// admissible `ζ` is optimal and `ζ ≡ 1` is returned.
pub fn optimal_zeta(f: &[f64], sigma: &[f64], r: f64) -> Vec<f64> {
    let positive = f.iter().zip(sigma).any(|(&v, &s)| v > 0.0 && s > 0.0);
    if r == 1.0 || !positive {
        return vec![1.0; f.len()];
    }
    if r == f64::INFINITY {
        let mut best = None;
        for (i, (&v, &s)) in f.iter().zip(sigma).enumerate() {
            if s > 0.0 && best.is_none_or(|b: usize| v > f[b]) {
                best = Some(i);
            }
        }
        let mut zeta = vec![0.0; f.len()];
        if let Some(i) = best {
            zeta[i] = 1.0 / sigma[i];
        }
        return zeta;
    }
    let norm = lq_norm(f, sigma, r);
    f.iter().map(|v| (v / norm).powf(r - 1.0)).collect()
}

/// One optimal coupling and dual pair per fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberCoupling {
    pub cost: f64,
    pub plan: TransportPlan,
    pub duals: FiberDualPair,
}

/// Solves every fiber by LP, returning plans and potentials.
pub fn couple(m: &FiberedMeasure, n: &FiberedMeasure, p: f64) -> Result<Vec<FiberCoupling>> {
    couple_with(m, n, p, LpOptions::default())
}

pub fn couple_with(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    p: f64,
    options: LpOptions,
) -> Result<Vec<FiberCoupling>> {
    m.check_same_base(n)?;
    check_p(p)?;
    let space = m.space();
    (0..m.fibers().len())
        .into_par_iter()
        .map(|i| {
            let (cost, plan, duals) = ot_lp_with(m.fiber(i), n.fiber(i), space, p, options)?;
            Ok(FiberCoupling { cost, plan, duals })
        })
        .collect()
}

/// Dual variables `(ζ, Φ, Ψ)`, with `Φ`, `Ψ` tabulated on each fiber's support.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub zeta: Vec<f64>,
    pub phi: Vec<Vec<f64>>,
    pub psi: Vec<Vec<f64>>,
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// `𝒟𝒦_{p,q}^p`.
    pub primal: f64,
    pub dual: f64,
    /// Set for `q = ∞`, where the duality formula is used outside its proven range.
    pub heuristic: bool,
}

/// Validates `cert` and returns `−Σ_i σ_i ζ_i (∫Φ d𝔪^{ω_i} + ∫Ψ d𝔫^{ω_i})`.
///
/// `ζ` must be nonnegative with `‖ζ‖_{L^{r'}(σ)} ≤ 1` for `r = q/p`, and
/// `(Φ, Ψ)` must be admissible on every same-fiber support pair.
pub fn dual_value(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    cert: &DualCertificate,
    p: f64,
    q: f64,
) -> Result<f64> {
    m.check_same_base(n)?;
    check_p(p)?;
    check_q(q)?;
    if q < p {
        return Err(Error::InvalidParameter(format!(
            "duality needs p ≤ q (p = {p}, q = {q})"
        )));
    }
    let k = m.fibers().len();
    for (field, len) in [
        ("zeta", cert.zeta.len()),
        ("phi", cert.phi.len()),
        ("psi", cert.psi.len()),
    ] {
        if len != k {
            return Err(Error::InvalidParameter(format!(
                "certificate {field} has {len} entries for {k} fibers"
            )));
        }
    }
    validate_zeta(&cert.zeta, m.sigma(), conjugate(q / p))?;
    let space = m.space();
    for i in 0..k {
        let (mi, ni) = (m.fiber(i), n.fiber(i));
        if cert.phi[i].len() != mi.len() || cert.psi[i].len() != ni.len() {
            return Err(Error::InvalidParameter(format!(
                "certificate tables on fiber {i} do not match the supports"
            )));
        }
        for (r, t) in mi.points().iter().enumerate() {
            for (c, s) in ni.points().iter().enumerate() {
                let cost = space.cost(t, s, p);
                let excess = -cert.phi[i][r] - cert.psi[i][c] - cost;
                if excess > ADMISSIBILITY_TOL * (1.0 + cost) {
                    return Err(Error::InadmissibleCertificate {
                        fiber: i,
                        row: r,
                        col: c,
                        excess,
                    });
                }
            }
        }
    }
    Ok(-(0..k)
        .map(|i| {
            m.sigma()[i]
                * cert.zeta[i]
                * (m.fiber(i).integrate(&cert.phi[i]) + n.fiber(i).integrate(&cert.psi[i]))
        })
        .sum::<f64>())
}

pub(crate) fn validate_zeta(zeta: &[f64], sigma: &[f64], r_conj: f64) -> Result<()> {
    if let Some((i, z)) = zeta.iter().enumerate().find(|(_, z)| !(**z >= 0.0) || !z.is_finite()) {
        return Err(Error::InvalidZeta(format!("entry {i} = {z} is not a nonnegative number")));
    }
    let norm = lq_norm(zeta, sigma, r_conj);
    if norm > 1.0 + ZETA_NORM_TOL {
        return Err(Error::InvalidZeta(format!(
            "‖ζ‖ = {norm} exceeds 1 in L^{r_conj}(σ)"
        )));
    }
    Ok(())
}

/// Assembles a maximizing certificate from per-fiber LP potentials and the
/// Hölder-optimal `ζ`.
pub fn certify(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    p: f64,
    q: f64,
) -> Result<(DualCertificate, CertificateReport)> {
    check_q(q)?;
    if q < p {
        return Err(Error::InvalidParameter(format!(
            "duality needs p ≤ q (p = {p}, q = {q})"
        )));
    }
    let fibers = couple(m, n, p)?;
    let costs: Vec<f64> = fibers.iter().map(|f| f.cost).collect();
    let r = q / p;
    let mut zeta = optimal_zeta(&costs, m.sigma(), r);
    // Rounding in the power can push the norm a hair above one.
    let norm = lq_norm(&zeta, m.sigma(), conjugate(r));
    if norm > 1.0 {
        zeta.iter_mut().for_each(|z| *z /= norm);
    }
    let (phi, psi) = fibers.into_iter().map(|f| (f.duals.phi, f.duals.psi)).unzip();
    let cert = DualCertificate { zeta, phi, psi };
    let dual = dual_value(m, n, &cert, p, q)?;
    let primal = lq_norm(&costs, m.sigma(), r);
    Ok((
        cert,
        CertificateReport {
            primal,
            dual,
            heuristic: q == f64::INFINITY,
        },
    ))
}

/// `Φ = Ψ^{d^p}` fiber by fiber; the resulting pair is admissible.
pub fn tighten(
    m: &FiberedMeasure,
    n: &FiberedMeasure,
    psi: &[Vec<f64>],
    p: f64,
) -> Vec<Vec<f64>> {
    (0..m.fibers().len())
        .map(|i| {
            ot::c_transform(&psi[i], n.fiber(i).points(), m.fiber(i).points(), m.space(), p, 1.0)
        })
        .collect()
}
