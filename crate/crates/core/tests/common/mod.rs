#![allow(dead_code)]

use fiberot::{BaseMeasure, DiscreteMeasure, FiberSpace, FiberedMeasure, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

pub fn base(rng: &mut ChaCha8Rng, n: usize) -> BaseMeasure {
    let mut w = weights(rng, n);
    let head: f64 = w[..n - 1].iter().sum();
    w[n - 1] = 1.0 - head;
    BaseMeasure::new((0..n).map(|i| format!("w{i}")).collect(), w).unwrap()
}

pub fn line() -> FiberSpace {
    FiberSpace::real_line(0.0).unwrap()
}

pub fn plane() -> FiberSpace {
    FiberSpace::euclidean(vec![0.0, 0.0]).unwrap()
}

/// Six points on a cycle with the shortest-path metric; rotations and
/// reflections of the cycle are isometries.
pub fn cycle() -> FiberSpace {
    let n = 6;
    let d = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = (i as i64 - j as i64).unsigned_abs() as usize;
                    k.min(n - k) as f64
                })
                .collect()
        })
        .collect();
    FiberSpace::matrix(d, 0).unwrap()
}

pub fn point(rng: &mut ChaCha8Rng, space: &FiberSpace) -> Point {
    match space.kind() {
        fiberot::FiberKind::Real1D => Point::Real(rng.random_range(-3.0..3.0)),
        fiberot::FiberKind::Euclidean { dim } => {
            Point::Vector((0..*dim).map(|_| rng.random_range(-3.0..3.0)).collect())
        }
        fiberot::FiberKind::Matrix { size, .. } => Point::Index(rng.random_range(0..*size)),
    }
}

pub fn measure(rng: &mut ChaCha8Rng, space: &FiberSpace, max_atoms: usize) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_atoms);
    let pts = (0..n).map(|_| point(rng, space)).collect();
    DiscreteMeasure::new(space, pts, weights(rng, n)).unwrap()
}

pub fn fibered(rng: &mut ChaCha8Rng, base: &BaseMeasure, space: &FiberSpace, max_atoms: usize) -> FiberedMeasure {
    let fibers = (0..base.len()).map(|_| measure(rng, space, max_atoms)).collect();
    FiberedMeasure::new(base.clone(), space.clone(), fibers).unwrap()
}

/// Three fibered measures over a common random base.
pub fn triple(rng: &mut ChaCha8Rng, space: &FiberSpace, max_fibers: usize, max_atoms: usize) -> [FiberedMeasure; 3] {
    let n = rng.random_range(1..=max_fibers);
    let b = base(rng, n);
    [
        fibered(rng, &b, space, max_atoms),
        fibered(rng, &b, space, max_atoms),
        fibered(rng, &b, space, max_atoms),
    ]
}

pub fn rotation(angle: f64) -> Vec<f64> {
    let (s, c) = angle.sin_cos();
    vec![c, -s, s, c]
}
