//! Sliced `(p, q)` Monge–Kantorovich distances on ℝ^d and the isometric
//! embedding `μ ↦ 𝔪_μ` into the trivial bundle `𝕊^{d−1} × ℝ`, whose fiber over
//! a direction `ω` is the pushforward of `μ` under `x ↦ ⟨x, ω⟩`.
//!
//! The continuous direction measure is replaced by a finite weighted
//! [`DirectionSet`]. A finite set only gives a pseudometric: distinct measures
//! can have identical projections on every chosen direction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::disint::{check_q, lq_norm};
use crate::error::{Error, Result};
use crate::measure::{BaseMeasure, DiscreteMeasure, FiberedMeasure, WEIGHT_TOL};
use crate::ot::{check_p, sorted_order};
use crate::space::{FiberKind, FiberSpace, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DirectionSet {
    pub fn new(directions: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::EmptySupport);
        }
        if directions.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: directions.len(),
                found: weights.len(),
            });
        }
        let d = directions[0].len();
        for (i, w) in directions.iter().enumerate() {
            if w.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: w.len(),
                });
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "direction {i} has norm {norm}"
                )));
            }
        }
        for (index, &w) in weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidWeight { index, value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(DirectionSet {
            directions,
            weights,
        })
    }

    fn uniform(directions: Vec<Vec<f64>>) -> Result<Self> {
        let n = directions.len();
        let weights = BaseMeasure::uniform(n, "")?.weights().to_vec();
        Self::new(directions, weights)
    }

    /// `±e_1, …, ±e_d` with equal weights, ordered `e_1..e_d, −e_1..−e_d`.
    pub fn axes(d: usize) -> Result<Self> {
        let mut dirs = Vec::with_capacity(2 * d);
        for sign in [1.0, -1.0] {
            for i in 0..d {
                let mut e = vec![0.0; d];
                e[i] = sign;
                dirs.push(e);
            }
        }
        Self::uniform(dirs)
    }

    /// `n` equally spaced angles `2πk/n` on the unit circle.
    pub fn uniform_circle(n: usize) -> Result<Self> {
        let dirs = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        Self::uniform(dirs)
    }

    /// `n` seeded uniform random directions on `𝕊^{d−1}`.
    pub fn random_sphere(d: usize, n: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dirs = Vec::with_capacity(n);
        while dirs.len() < n {
            let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                dirs.push(g.into_iter().map(|x| x / norm).collect());
            }
        }
        Self::uniform(dirs)
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

fn vectors(mu: &DiscreteMeasure, d: usize) -> Result<Vec<&[f64]>> {
    mu.points()
        .iter()
        .map(|p| match p {
            Point::Vector(v) if v.len() == d => Ok(v.as_slice()),
            Point::Vector(v) => Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            }),
            other => Err(Error::PointOutsideSpace(other.to_string())),
        })
        .collect()
}

fn project(v: &[f64], dir: &[f64]) -> f64 {
    v.iter().zip(dir).map(|(x, w)| x * w).sum()
}

/// The fibered measure over directions whose fiber at `ω` is `⟨·, ω⟩_♯ μ`.
pub fn slice_embed(mu: &DiscreteMeasure, dirs: &DirectionSet) -> Result<FiberedMeasure> {
    let pts = vectors(mu, dirs.dim())?;
    let line = FiberSpace::real_line(0.0)?;
    let fibers = dirs
        .directions()
        .iter()
        .map(|dir| {
            let proj = pts.iter().map(|v| Point::Real(project(v, dir))).collect();
            DiscreteMeasure::new(&line, proj, mu.weights().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..dirs.len()).map(|i| format!("dir{i}")).collect();
    let base = BaseMeasure::new(labels, dirs.weights().to_vec())?;
    FiberedMeasure::new(base, line, fibers)
}

/// Sliced distance `‖ω ↦ mk_p(⟨·,ω⟩_♯μ, ⟨·,ω⟩_♯ν)‖_{L^q(dirs)}`.
///
/// Computed directly from sorted projections, without building fibered
/// measures, so it can be checked against the embedding.
pub fn sliced_mk(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64, q: f64, dirs: &DirectionSet) -> Result<f64> {
    check_p(p)?;
    check_q(q)?;
    let d = dirs.dim();
    let (xs, ys) = (vectors(mu, d)?, vectors(nu, d)?);
    let per_dir: Vec<f64> = dirs
        .directions()
        .iter()
        .map(|dir| {
            let a: Vec<f64> = xs.iter().map(|v| project(v, dir)).collect();
            let b: Vec<f64> = ys.iter().map(|v| project(v, dir)).collect();
            quantile_distance(&a, mu.weights(), &b, nu.weights(), p)
        })
        .collect();
    Ok(lq_norm(&per_dir, dirs.weights(), q))
}

/// `mk_p` between two weighted samples on the line by merging their quantile
/// functions: `(∫_0^1 |F⁻¹(s) − G⁻¹(s)|^p ds)^{1/p}`.
fn quantile_distance(a: &[f64], wa: &[f64], b: &[f64], wb: &[f64], p: f64) -> f64 {
    let oa = sorted_order(a);
    let ob = sorted_order(b);
    let (mut i, mut j) = (0, 0);
    let (mut ca, mut cb) = (wa[oa[0]], wb[ob[0]]);
    let mut level = 0.0f64;
    let mut total = 0.0;
    while i < oa.len() && j < ob.len() {
        let next = ca.min(cb);
        let gap = (a[oa[i]] - b[ob[j]]).abs();
        total += (next - level).max(0.0) * gap.powf(p);
        level = next;
        if ca <= cb {
            i += 1;
            if i < oa.len() {
                ca += wa[oa[i]];
            }
        } else {
            j += 1;
            if j < ob.len() {
                cb += wb[ob[j]];
            }
        }
    }
    total.powf(1.0 / p)
}

/// Whether a fiber space is Euclidean of dimension `d`.
pub fn is_euclidean(space: &FiberSpace, d: usize) -> bool {
    matches!(space.kind(), FiberKind::Euclidean { dim } if *dim == d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disint::scrmk;

    fn plane() -> FiberSpace {
        FiberSpace::euclidean(vec![0.0, 0.0]).unwrap()
    }

    fn measure(points: &[[f64; 2]], weights: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::new(
            &plane(),
            points.iter().map(|p| Point::Vector(p.to_vec())).collect(),
            weights.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn embed_dirac_on_axes() {
        let mu = measure(&[[1.0, 0.0]], &[1.0]);
        let dirs = DirectionSet::axes(2).unwrap();
        let m = slice_embed(&mu, &dirs).unwrap();
        // Directions are (1,0), (0,1), (−1,0), (0,−1).
        let got: Vec<f64> = m.fibers().iter().map(|f| f.points()[0].as_real().unwrap()).collect();
        assert_eq!(got, vec![1.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn embed_two_points() {
        let mu = measure(&[[0.0, 0.0], [1.0, 1.0]], &[0.5, 0.5]);
        let dirs = DirectionSet::new(vec![vec![1.0, 0.0]], vec![1.0]).unwrap();
        let m = slice_embed(&mu, &dirs).unwrap();
        assert_eq!(m.fiber(0), &DiscreteMeasure::on_line(&[0.0, 1.0], &[0.5, 0.5]).unwrap());
    }

    #[test]
    fn fibers_are_probabilities() {
        let mu = measure(&[[0.3, -2.0], [1.0, 1.0], [4.0, 0.5]], &[0.2, 0.3, 0.5]);
        let m = slice_embed(&mu, &DirectionSet::random_sphere(2, 9, 3).unwrap()).unwrap();
        for f in m.fibers() {
            assert!((f.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dirac_pair_on_axes() {
        // Per-direction distances (1, 0, 1, 0) with weights 1/4 each.
        let mu = measure(&[[0.0, 0.0]], &[1.0]);
        let nu = measure(&[[1.0, 0.0]], &[1.0]);
        let dirs = DirectionSet::axes(2).unwrap();
        let v = sliced_mk(&mu, &nu, 2.0, 2.0, &dirs).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        let w = scrmk(&slice_embed(&mu, &dirs).unwrap(), &slice_embed(&nu, &dirs).unwrap(), 2.0, 2.0)
            .unwrap()
            .value;
        assert!((v - w).abs() < 1e-15);
        assert_eq!(sliced_mk(&mu, &mu, 1.0, 1.0, &dirs).unwrap(), 0.0);
    }

    #[test]
    fn circle_directions_are_unit() {
        let dirs = DirectionSet::uniform_circle(16).unwrap();
        assert_eq!(dirs.len(), 16);
        assert!((dirs.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let mu = measure(&[[0.0, 0.0]], &[1.0]);
        let dirs = DirectionSet::axes(3).unwrap();
        assert!(matches!(
            slice_embed(&mu, &dirs),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }
}
