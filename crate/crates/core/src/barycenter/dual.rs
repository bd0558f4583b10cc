//! Dual certificates for `κ = p`.
//!
//! A certificate holds, for every input `k`, weights `ζ_k ≥ 0` on the base
//! with `‖ζ_k‖_{L^{r'}(σ)} ≤ 1` (`r = q/p`) and a function `ξ_k` tabulated on
//! a finite evaluation support in every fiber, subject to
//! `Σ_k ζ_k(ω) ξ_k(v) = 0`. Its value
//! `−Σ_k Σ_i σ_i ζ_k(ω_i) ∫ S_{λ_k,p}ξ_k d𝔪_k^{ω_i}`
//! bounds `𝔅^{p,q,p}(𝔫)` from below for every `𝔫` whose fibers live on the
//! evaluation support.

use std::collections::HashSet;

use super::{check_lambdas, BarycenterProblem};
use crate::disint::{conjugate, validate_zeta};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::ot::{c_transform, check_p};
use crate::space::{FiberSpace, Point};

/// Largest admissible `|Σ_k ζ_k ξ_k|` at an evaluation point.
pub const CONSTRAINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BarycenterDualCertificate {
    /// `zeta[k][i]`: weight of input `k` on base atom `i`.
    pub zeta: Vec<Vec<f64>>,
    /// Evaluation support of each fiber.
    pub support: Vec<Vec<Point>>,
    /// `xi[k][i][j]`: value of `ξ_k` at `support[i][j]`.
    pub xi: Vec<Vec<Vec<f64>>>,
}

impl BarycenterDualCertificate {
    /// `ζ_k ≡ 1`, `ξ_k ≡ 0`; its value is `0`.
    pub fn zero(k: usize, support: Vec<Vec<Point>>) -> Self {
        let n = support.len();
        let xi = vec![support.iter().map(|s| vec![0.0; s.len()]).collect(); k];
        BarycenterDualCertificate {
            zeta: vec![vec![1.0; n]; k],
            support,
            xi,
        }
    }

    /// Lifts classical potentials `φ_k` on a shared support to every one of
    /// `fibers` base atoms, with `ζ_k ≡ 1`.
    pub fn lift_classical(fibers: usize, support: &[Point], phis: &[Vec<f64>]) -> Self {
        BarycenterDualCertificate {
            zeta: vec![vec![1.0; fibers]; phis.len()],
            support: vec![support.to_vec(); fibers],
            xi: phis.iter().map(|phi| vec![phi.clone(); fibers]).collect(),
        }
    }

    /// Orthogonal projection of `(ξ_k)` onto `Σ_k ζ_k ξ_k ≡ 0`, point by point.
    pub fn project(&mut self) {
        for i in 0..self.support.len() {
            let z2: f64 = self.zeta.iter().map(|z| z[i] * z[i]).sum();
            if z2 == 0.0 {
                continue;
            }
            for j in 0..self.support[i].len() {
                let s: f64 = (0..self.zeta.len()).map(|k| self.zeta[k][i] * self.xi[k][i][j]).sum();
                for k in 0..self.zeta.len() {
                    self.xi[k][i][j] -= self.zeta[k][i] * s / z2;
                }
            }
        }
    }

    /// Worst `|Σ_k ζ_k ξ_k|` as `(fiber, point, residual)`.
    pub fn max_residual(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.support.len() {
            for j in 0..self.support[i].len() {
                let s: f64 = (0..self.zeta.len()).map(|k| self.zeta[k][i] * self.xi[k][i][j]).sum();
                if s.abs() > worst.2 {
                    worst = (i, j, s.abs());
                }
            }
        }
        worst
    }

    pub fn check_constraint(&self) -> Result<()> {
        let (fiber, point, residual) = self.max_residual();
        if residual > CONSTRAINT_TOL || residual.is_nan() {
            return Err(Error::ConstraintViolation {
                fiber,
                point,
                residual,
            });
        }
        Ok(())
    }

    fn check_shape(&self, k: usize, fibers: usize, space: &FiberSpace) -> Result<()> {
        let expect = |expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(Error::LengthMismatch { expected, found })
            }
        };
        expect(k, self.zeta.len())?;
        expect(k, self.xi.len())?;
        expect(fibers, self.support.len())?;
        for (i, s) in self.support.iter().enumerate() {
            let mut seen = HashSet::with_capacity(s.len());
            for point in s {
                space.check_point(point)?;
                if !seen.insert(point.bit_key()) {
                    return Err(Error::InvalidParameter(format!(
                        "evaluation support on fiber {i} repeats the point {point}"
                    )));
                }
            }
        }
        for kk in 0..k {
            expect(fibers, self.zeta[kk].len())?;
            expect(fibers, self.xi[kk].len())?;
            for i in 0..fibers {
                expect(self.support[i].len(), self.xi[kk][i].len())?;
                if let Some(v) = self.xi[kk][i].iter().find(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter(format!("non-finite ξ value {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Value of a barycenter dual certificate for `κ = p ≤ q`.
pub fn dual_objective(problem: &BarycenterProblem, cert: &BarycenterDualCertificate) -> Result<f64> {
    problem.require_kappa_p()?;
    let (p, q) = (problem.p(), problem.q());
    if q < p {
        return Err(Error::InvalidParameter(format!(
            "duality needs p ≤ q (p = {p}, q = {q})"
        )));
    }
    let space = problem.space();
    let sigma = problem.sigma();
    cert.check_shape(problem.len(), sigma.len(), space)?;
    let r_conj = conjugate(q / p);
    for zeta in &cert.zeta {
        validate_zeta(zeta, sigma, r_conj)?;
    }
    cert.check_constraint()?;

    let mut total = 0.0;
    for (k, (m, &lambda)) in problem.inputs().iter().zip(problem.lambdas()).enumerate() {
        for (i, &s) in sigma.iter().enumerate() {
            let z = cert.zeta[k][i];
            if z == 0.0 {
                continue;
            }
            let fiber = m.fiber(i);
            let transform = c_transform(&cert.xi[k][i], &cert.support[i], fiber.points(), space, p, lambda);
            total += s * z * fiber.integrate(&transform);
        }
    }
    Ok(-total)
}

/// `−Σ_k ∫ φ_k^{λ_k d^p} dμ_k` for potentials `φ_k` tabulated on `support`
/// with `Σ_k φ_k ≡ 0`; a lower bound for the classical barycenter cost
/// `Σ_k λ_k mk_p(μ_k, ν)^p` over `ν` supported on `support`.
pub fn classical_dual(
    mus: &[DiscreteMeasure],
    lambdas: &[f64],
    p: f64,
    space: &FiberSpace,
    support: &[Point],
    phis: &[Vec<f64>],
) -> Result<f64> {
    check_p(p)?;
    check_lambdas(lambdas, mus.len())?;
    if phis.len() != mus.len() {
        return Err(Error::LengthMismatch {
            expected: mus.len(),
            found: phis.len(),
        });
    }
    for phi in phis {
        if phi.len() != support.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                found: phi.len(),
            });
        }
    }
    for point in support {
        space.check_point(point)?;
    }
    for j in 0..support.len() {
        let s: f64 = phis.iter().map(|phi| phi[j]).sum();
        if s.abs() > CONSTRAINT_TOL || s.is_nan() {
            return Err(Error::ConstraintViolation {
                fiber: 0,
                point: j,
                residual: s.abs(),
            });
        }
    }
    let mut total = 0.0;
    for ((mu, &lambda), phi) in mus.iter().zip(lambdas).zip(phis) {
        let transform = c_transform(phi, support, mu.points(), space, p, lambda);
        total += mu.integrate(&transform);
    }
    Ok(-total)
}
