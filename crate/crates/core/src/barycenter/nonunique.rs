//! A `p = 1` barycenter problem on the line with two distinct minimizers.
//!
//! With `K` even, `λ_k = 1/K`, `μ_k` uniform on `[−2, −1]` for even `k` and
//! on `[1, 2]` for odd `k` (indices `1..=K`), both intervals are classical
//! `mk_1`-barycenters with cost `3/2`. Optimality of both is certified by the
//! 1-Lipschitz potential [`tent`] through `φ_k = ∓φ/K`. Lifting everything to
//! constant fibers over a base gives the same picture for `𝒟𝒦_{1,q}`.

use super::dual::{classical_dual, dual_objective, BarycenterDualCertificate};
use super::{objective, BarycenterProblem};
use crate::error::{Error, Result};
use crate::measure::{BaseMeasure, DiscreteMeasure, FiberedMeasure};
use crate::ot::fiber_mk;
use crate::space::{FiberSpace, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct NonuniqueReport {
    /// Atoms per interval.
    pub atoms: usize,
    /// Number of inputs `K`.
    pub inputs: usize,
    pub q: f64,
    /// `𝔅^{1,q,1}(ν₀⊗σ)`.
    pub objective_nu0: f64,
    /// `𝔅^{1,q,1}(ν₁⊗σ)`.
    pub objective_nu1: f64,
    /// Classical dual value of the tent potentials.
    pub classical_dual: f64,
    /// The same potentials lifted to a fibered certificate.
    pub lifted_dual: f64,
    /// `mk_1(ν₀, ν₁)`.
    pub mk1: f64,
}

/// `n` equal atoms at the midpoints of a uniform partition of `[a, b]`.
pub fn interval_midpoints(a: f64, b: f64, n: usize) -> Result<DiscreteMeasure> {
    if n == 0 || !(b > a) {
        return Err(Error::InvalidParameter(format!("cannot discretize [{a}, {b}] with {n} atoms")));
    }
    let h = (b - a) / n as f64;
    let points: Vec<f64> = (0..n).map(|j| a + (j as f64 + 0.5) * h).collect();
    DiscreteMeasure::on_line(&points, &vec![1.0; n])
}

/// Piecewise-linear 1-Lipschitz potential: `−4−t` on `[−4, −2)`, `t` on
/// `[−2, 2)`, `4−t` on `[2, 4]`, zero elsewhere.
pub fn tent(t: f64) -> f64 {
    if (-4.0..-2.0).contains(&t) {
        -4.0 - t
    } else if (-2.0..2.0).contains(&t) {
        t
    } else if (2.0..=4.0).contains(&t) {
        4.0 - t
    } else {
        0.0
    }
}

/// Evaluates the instance with `atoms` midpoints per interval, `inputs`
/// measures (even) and a base of `fibers` uniform atoms.
pub fn nonunique_instance(atoms: usize, inputs: usize, fibers: usize, q: f64) -> Result<NonuniqueReport> {
    if inputs < 2 || !inputs.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "the number of inputs must be even and at least 2, got {inputs}"
        )));
    }
    let line = FiberSpace::real_line(0.0)?;
    let nu0 = interval_midpoints(-2.0, -1.0, atoms)?;
    let nu1 = interval_midpoints(1.0, 2.0, atoms)?;
    let base = BaseMeasure::uniform(fibers, "w")?;
    let lift = |mu: &DiscreteMeasure| FiberedMeasure::constant(base.clone(), line.clone(), mu.clone());

    // Index k runs over 1..=K: even k sits on ν₀, odd k on ν₁.
    let mus: Vec<DiscreteMeasure> = (1..=inputs)
        .map(|k| if k % 2 == 0 { nu0.clone() } else { nu1.clone() })
        .collect();
    let lambdas = vec![1.0 / inputs as f64; inputs];
    let problem = BarycenterProblem::new(
        mus.iter().map(lift).collect::<Result<Vec<_>>>()?,
        lambdas.clone(),
        1.0,
        q,
        1.0,
    )?;

    let support: Vec<Point> = nu0.points().iter().chain(nu1.points()).cloned().collect();
    let k = inputs as f64;
    let phis: Vec<Vec<f64>> = (1..=inputs)
        .map(|idx| {
            let sign = if idx % 2 == 0 { -1.0 } else { 1.0 };
            support
                .iter()
                .map(|s| sign * tent(s.as_real().expect("real support")) / k)
                .collect()
        })
        .collect();
    let classical = classical_dual(&mus, &lambdas, 1.0, &line, &support, &phis)?;
    let cert = BarycenterDualCertificate::lift_classical(fibers, &support, &phis);
    Ok(NonuniqueReport {
        atoms,
        inputs,
        q,
        objective_nu0: objective(&problem, &lift(&nu0)?)?,
        objective_nu1: objective(&problem, &lift(&nu1)?)?,
        classical_dual: classical,
        lifted_dual: dual_objective(&problem, &cert)?,
        mk1: fiber_mk(&nu0, &nu1, &line, 1.0)?,
    })
}
