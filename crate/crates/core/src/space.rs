//! Fiber spaces, their points, and the isometries used as chart transitions.

use std::fmt;

use crate::error::{Error, Result};

/// A point of a fiber space.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Real(f64),
    Vector(Vec<f64>),
    Index(usize),
}

impl Point {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Point::Real(t) => Some(*t),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Point::Vector(v) => Some(v),
            _ => None,
        }
    }

    /// Key used to merge duplicate atoms. Equality is bitwise.
    pub(crate) fn bit_key(&self) -> PointKey {
        match self {
            Point::Real(t) => PointKey::Real(t.to_bits()),
            Point::Vector(v) => PointKey::Vector(v.iter().map(|x| x.to_bits()).collect()),
            Point::Index(i) => PointKey::Index(*i),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(t) => write!(f, "{t}"),
            Point::Vector(v) => write!(f, "{v:?}"),
            Point::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum PointKey {
    Real(u64),
    Vector(Vec<u64>),
    Index(usize),
}

/// Metric structure of the fiber.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberKind {
    Real1D,
    Euclidean { dim: usize },
    /// Finite metric space given by its distance matrix (row-major, n×n).
    Matrix { size: usize, distances: Vec<f64> },
}

/// A fiber space together with its basepoint `y0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpace {
    kind: FiberKind,
    basepoint: Point,
}

const MATRIX_TOL: f64 = 1e-12;

impl FiberSpace {
    pub fn real_line(y0: f64) -> Result<Self> {
        let space = FiberSpace {
            kind: FiberKind::Real1D,
            basepoint: Point::Real(y0),
        };
        space.check_point(&space.basepoint)?;
        Ok(space)
    }

    pub fn euclidean(y0: Vec<f64>) -> Result<Self> {
        if y0.is_empty() {
            return Err(Error::InvalidParameter("euclidean dimension must be positive".into()));
        }
        let space = FiberSpace {
            kind: FiberKind::Euclidean { dim: y0.len() },
            basepoint: Point::Vector(y0),
        };
        space.check_point(&space.basepoint)?;
        Ok(space)
    }

    /// Finite metric space. Rows of `distances` must form a valid metric.
    pub fn matrix(distances: Vec<Vec<f64>>, y0: usize) -> Result<Self> {
        let size = distances.len();
        if size == 0 {
            return Err(Error::InvalidDistanceMatrix("empty matrix".into()));
        }
        let mut flat = Vec::with_capacity(size * size);
        for (i, row) in distances.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        validate_metric(size, &flat)?;
        let space = FiberSpace {
            kind: FiberKind::Matrix {
                size,
                distances: flat,
            },
            basepoint: Point::Index(y0),
        };
        space.check_point(&space.basepoint)?;
        Ok(space)
    }

    pub fn kind(&self) -> &FiberKind {
        &self.kind
    }

    pub fn basepoint(&self) -> &Point {
        &self.basepoint
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FiberKind::Real1D => "real1d",
            FiberKind::Euclidean { .. } => "euclidean",
            FiberKind::Matrix { .. } => "matrix",
        }
    }

    pub fn is_real_line(&self) -> bool {
        matches!(self.kind, FiberKind::Real1D)
    }

    /// True when both spaces carry the same metric (basepoints may differ).
    pub fn same_geometry(&self, other: &FiberSpace) -> bool {
        self.kind == other.kind
    }

    pub fn check_point(&self, point: &Point) -> Result<()> {
        match (&self.kind, point) {
            (FiberKind::Real1D, Point::Real(t)) if t.is_finite() => Ok(()),
            (FiberKind::Euclidean { dim }, Point::Vector(v)) => {
                if v.len() != *dim {
                    Err(Error::DimensionMismatch {
                        expected: *dim,
                        found: v.len(),
                    })
                } else if v.iter().all(|x| x.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::PointOutsideSpace(point.to_string()))
                }
            }
            (FiberKind::Matrix { size, .. }, Point::Index(i)) if i < size => Ok(()),
            _ => Err(Error::PointOutsideSpace(point.to_string())),
        }
    }

    /// Distance between two points already known to lie in the space.
    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        match (&self.kind, a, b) {
            (FiberKind::Real1D, Point::Real(s), Point::Real(t)) => (s - t).abs(),
            (FiberKind::Euclidean { .. }, Point::Vector(u), Point::Vector(v)) => u
                .iter()
                .zip(v)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            (FiberKind::Matrix { size, distances }, Point::Index(i), Point::Index(j)) => {
                distances[i * size + j]
            }
            _ => panic!("point kind does not match fiber space {}", self.kind_name()),
        }
    }

    /// `d(a, b)^p`, with the common exponents computed without `powf`.
    pub fn cost(&self, a: &Point, b: &Point, p: f64) -> f64 {
        power(self.distance(a, b), p)
    }
}

pub(crate) fn power(d: f64, p: f64) -> f64 {
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        d.powf(p)
    }
}

fn validate_metric(n: usize, d: &[f64]) -> Result<()> {
    for i in 0..n {
        if d[i * n + i] != 0.0 {
            return Err(Error::InvalidDistanceMatrix(format!(
                "nonzero diagonal entry at {i}"
            )));
        }
        for j in 0..n {
            let dij = d[i * n + j];
            if !dij.is_finite() || dij < 0.0 {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "entry ({i}, {j}) = {dij} is not a nonnegative number"
                )));
            }
            if dij != d[j * n + i] {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "asymmetric entries at ({i}, {j})"
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let via = d[i * n + k] + d[k * n + j];
                if d[i * n + j] > via + MATRIX_TOL * (1.0 + via) {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "triangle inequality fails for ({i}, {k}, {j})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// An isometry of a fiber space, used as one chart transition.
#[derive(Debug, Clone, PartialEq)]
pub enum Isometry {
    Identity,
    /// `t ↦ center + sign·(t − center)` on the real line, `sign = ±1`.
    Reflection { sign: f64, center: f64 },
    /// Orthogonal matrix acting on ℝ^d (row-major).
    Orthogonal { dim: usize, matrix: Vec<f64> },
    /// Distance-preserving permutation of a finite metric space.
    Permutation(Vec<usize>),
}

impl Isometry {
    pub fn apply(&self, point: &Point) -> Point {
        match (self, point) {
            (Isometry::Identity, _) => point.clone(),
            (Isometry::Reflection { sign, center }, Point::Real(t)) => {
                Point::Real(center + sign * (t - center))
            }
            (Isometry::Orthogonal { dim, matrix }, Point::Vector(v)) => Point::Vector(
                (0..*dim)
                    .map(|r| (0..*dim).map(|c| matrix[r * dim + c] * v[c]).sum())
                    .collect(),
            ),
            (Isometry::Permutation(perm), Point::Index(i)) => Point::Index(perm[*i]),
            _ => panic!("isometry does not act on point {point}"),
        }
    }

    /// Checks that the map acts on `space` and preserves its distances.
    pub fn validate(&self, space: &FiberSpace, atom: usize) -> Result<()> {
        let fail = |reason: String| Err(Error::NotAnIsometry { atom, reason });
        match (self, space.kind()) {
            (Isometry::Identity, _) => Ok(()),
            (Isometry::Reflection { sign, center }, FiberKind::Real1D) => {
                if (*sign != 1.0 && *sign != -1.0) || !center.is_finite() {
                    return fail(format!("reflection sign {sign} must be ±1"));
                }
                Ok(())
            }
            (Isometry::Orthogonal { dim, matrix }, FiberKind::Euclidean { dim: d }) => {
                if dim != d || matrix.len() != d * d {
                    return fail(format!("matrix is not {d}×{d}"));
                }
                for a in 0..*d {
                    for b in 0..*d {
                        let dot: f64 = (0..*d).map(|r| matrix[r * d + a] * matrix[r * d + b]).sum();
                        let target = if a == b { 1.0 } else { 0.0 };
                        if (dot - target).abs() > 1e-10 {
                            return fail(format!("columns {a}, {b} are not orthonormal"));
                        }
                    }
                }
                Ok(())
            }
            (Isometry::Permutation(perm), FiberKind::Matrix { size, distances }) => {
                if perm.len() != *size {
                    return fail(format!("permutation has {} entries, expected {size}", perm.len()));
                }
                let mut seen = vec![false; *size];
                for &j in perm {
                    if j >= *size || seen[j] {
                        return fail("not a permutation".into());
                    }
                    seen[j] = true;
                }
                for i in 0..*size {
                    for j in 0..*size {
                        if distances[i * size + j] != distances[perm[i] * size + perm[j]] {
                            return fail(format!("distance ({i}, {j}) not preserved"));
                        }
                    }
                }
                Ok(())
            }
            _ => fail(format!("map does not act on {} fibers", space.kind_name())),
        }
    }
}

/// One isometry per base atom: the chart transition into a new chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartAtlas {
    maps: Vec<Isometry>,
}

impl ChartAtlas {
    pub fn new(maps: Vec<Isometry>, space: &FiberSpace) -> Result<Self> {
        for (atom, map) in maps.iter().enumerate() {
            map.validate(space, atom)?;
        }
        Ok(ChartAtlas { maps })
    }

    pub fn identity(atoms: usize) -> Self {
        ChartAtlas {
            maps: vec![Isometry::Identity; atoms],
        }
    }

    pub fn maps(&self) -> &[Isometry] {
        &self.maps
    }

    pub fn get(&self, atom: usize) -> Result<&Isometry> {
        self.maps.get(atom).ok_or(Error::MissingChartEntry(atom))
    }
}
