//! JSON documents for fibered and discrete measures.
//!
//! A fibered document has the top-level keys `base`, `fiber_space`, `fibers`
//! and the optional `chart_id` and `atlas`:
//!
//! ```json
//! {"base": {"atoms": ["a", "b"], "weights": [0.5, 0.5]},
//!  "fiber_space": {"kind": "real1d", "y0": 0.0},
//!  "fibers": [{"points": [0.0], "weights": [1.0]},
//!             {"points": [3.0], "weights": [1.0]}]}
//! ```
//!
//! A discrete document has `fiber_space`, `points` and `weights` only.
//! Points are numbers on `real1d`, arrays of `dim` numbers on `euclidean` and
//! row indices of `distances` on `matrix`. When `atlas` is present, fiber `i`
//! is written in its own chart and is mapped into `chart_id` by `atlas[i]`.

use fiberot::{
    apply_chart_change, ChartAtlas, DiscreteMeasure, FiberKind, FiberSpace, FiberedMeasure, Isometry, Point,
};
use fiberot::BaseMeasure;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::report::{num, nums};

const DEFAULT_CHART: &str = "default";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberedDoc {
    base: BaseDoc,
    fiber_space: SpaceDoc,
    fibers: Vec<FiberDoc>,
    #[serde(default)]
    chart_id: Option<String>,
    #[serde(default)]
    atlas: Option<Vec<IsometryDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseDoc {
    atoms: Vec<String>,
    weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SpaceDoc {
    kind: String,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    distances: Option<Vec<Vec<f64>>>,
    y0: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberDoc {
    points: Vec<Value>,
    weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscreteDoc {
    fiber_space: SpaceDoc,
    points: Vec<Value>,
    weights: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum IsometryDoc {
    Identity,
    Reflection { sign: f64, center: f64 },
    Orthogonal { matrix: Vec<Vec<f64>> },
    Permutation { perm: Vec<usize> },
}

/// A parsed input document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Fibered(FiberedMeasure),
    Discrete { space: FiberSpace, measure: DiscreteMeasure },
}

/// Parses either document form, telling them apart by the `base` key.
pub fn parse_input(text: &str) -> CliResult<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::schema("document", e))?;
    let Value::Object(map) = &value else {
        return Err(CliError::schema("document", "expected a JSON object"));
    };
    if map.contains_key("base") {
        let doc: FiberedDoc = serde_json::from_str(text).map_err(|e| CliError::schema("document", e))?;
        fibered_from_doc(doc).map(Document::Fibered)
    } else {
        let doc: DiscreteDoc = serde_json::from_str(text).map_err(|e| CliError::schema("document", e))?;
        let space = space_from_doc(&doc.fiber_space)?;
        let measure = fiber_from_doc(&space, &doc.points, &doc.weights, "")?;
        Ok(Document::Discrete { space, measure })
    }
}

pub fn parse_fibered(text: &str) -> CliResult<FiberedMeasure> {
    match parse_input(text)? {
        Document::Fibered(m) => Ok(m),
        Document::Discrete { .. } => Err(CliError::schema("base", "a fibered document needs a base")),
    }
}

pub fn parse_discrete(text: &str) -> CliResult<(FiberSpace, DiscreteMeasure)> {
    match parse_input(text)? {
        Document::Discrete { space, measure } => Ok((space, measure)),
        Document::Fibered(_) => Err(CliError::schema("base", "expected a discrete document without a base")),
    }
}

fn fibered_from_doc(doc: FiberedDoc) -> CliResult<FiberedMeasure> {
    let base = BaseMeasure::new(doc.base.atoms, doc.base.weights).map_err(|e| CliError::schema("base", e))?;
    let space = space_from_doc(&doc.fiber_space)?;
    if doc.fibers.len() != base.len() {
        return Err(CliError::schema(
            "fibers",
            format!("{} fibers for {} base atoms", doc.fibers.len(), base.len()),
        ));
    }
    let fibers = doc
        .fibers
        .iter()
        .enumerate()
        .map(|(i, f)| fiber_from_doc(&space, &f.points, &f.weights, &format!("fibers[{i}].")))
        .collect::<CliResult<Vec<_>>>()?;
    let chart = doc.chart_id.as_deref().unwrap_or(DEFAULT_CHART);
    match doc.atlas {
        None => FiberedMeasure::with_chart(base, space, fibers, chart).map_err(|e| CliError::schema("fibers", e)),
        Some(maps) => {
            if maps.len() != base.len() {
                return Err(CliError::schema(
                    "atlas",
                    format!("{} maps for {} base atoms", maps.len(), base.len()),
                ));
            }
            let maps = maps.into_iter().map(isometry_from_doc).collect::<CliResult<Vec<_>>>()?;
            let atlas = ChartAtlas::new(maps, &space).map_err(|e| CliError::schema("atlas", e))?;
            let local = FiberedMeasure::new(base, space, fibers).map_err(|e| CliError::schema("fibers", e))?;
            apply_chart_change(&local, &atlas, chart).map_err(|e| CliError::schema("atlas", e))
        }
    }
}

fn isometry_from_doc(doc: IsometryDoc) -> CliResult<Isometry> {
    Ok(match doc {
        IsometryDoc::Identity => Isometry::Identity,
        IsometryDoc::Reflection { sign, center } => Isometry::Reflection { sign, center },
        IsometryDoc::Orthogonal { matrix } => {
            let dim = matrix.len();
            if matrix.iter().any(|row| row.len() != dim) {
                return Err(CliError::schema("atlas", "orthogonal matrix must be square"));
            }
            Isometry::Orthogonal {
                dim,
                matrix: matrix.concat(),
            }
        }
        IsometryDoc::Permutation { perm } => Isometry::Permutation(perm),
    })
}

pub(crate) fn space_from_doc(doc: &SpaceDoc) -> CliResult<FiberSpace> {
    let field = "fiber_space";
    let y0_field = "fiber_space.y0";
    let space = match doc.kind.as_str() {
        "real1d" => {
            let y0 = doc.y0.as_f64().ok_or_else(|| CliError::schema(y0_field, "expected a number"))?;
            FiberSpace::real_line(y0)
        }
        "euclidean" => {
            let y0 = float_array(&doc.y0, y0_field)?;
            if let Some(dim) = doc.dim {
                if dim != y0.len() {
                    return Err(CliError::schema(
                        y0_field,
                        format!("basepoint has dimension {}, expected {dim}", y0.len()),
                    ));
                }
            }
            FiberSpace::euclidean(y0)
        }
        "matrix" => {
            let distances = doc
                .distances
                .clone()
                .ok_or_else(|| CliError::schema("fiber_space.distances", "required for matrix fibers"))?;
            let y0 = index(&doc.y0, y0_field)?;
            FiberSpace::matrix(distances, y0)
        }
        other => {
            return Err(CliError::schema(
                "fiber_space.kind",
                format!("unknown kind {other:?}, expected real1d, euclidean or matrix"),
            ))
        }
    };
    space.map_err(|e| CliError::schema(field, e))
}

fn fiber_from_doc(space: &FiberSpace, points: &[Value], weights: &[f64], prefix: &str) -> CliResult<DiscreteMeasure> {
    if points.len() != weights.len() {
        return Err(CliError::schema(
            format!("{prefix}weights"),
            format!("{} weights for {} points", weights.len(), points.len()),
        ));
    }
    let points = points
        .iter()
        .enumerate()
        .map(|(j, v)| parse_point(space, v, &format!("{prefix}points[{j}]")))
        .collect::<CliResult<Vec<_>>>()?;
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(CliError::schema(format!("{prefix}weights"), format!("weights sum to {sum}, expected 1")));
    }
    DiscreteMeasure::new(space, points, weights.to_vec()).map_err(|e| CliError::schema(format!("{prefix}points"), e))
}

/// A point of `space` in its JSON form.
pub fn parse_point(space: &FiberSpace, value: &Value, field: &str) -> CliResult<Point> {
    let point = match space.kind() {
        FiberKind::Real1D => Point::Real(value.as_f64().ok_or_else(|| CliError::schema(field, "expected a number"))?),
        FiberKind::Euclidean { .. } => Point::Vector(float_array(value, field)?),
        FiberKind::Matrix { .. } => Point::Index(index(value, field)?),
    };
    space.check_point(&point).map_err(|e| CliError::schema(field, e))?;
    Ok(point)
}

fn float_array(value: &Value, field: &str) -> CliResult<Vec<f64>> {
    value
        .as_array()
        .and_then(|xs| xs.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
        .ok_or_else(|| CliError::schema(field, "expected an array of numbers"))
}

fn index(value: &Value, field: &str) -> CliResult<usize> {
    value
        .as_u64()
        .map(|i| i as usize)
        .ok_or_else(|| CliError::schema(field, "expected a nonnegative integer index"))
}

pub fn point_json(point: &Point) -> Value {
    match point {
        Point::Real(t) => num(*t),
        Point::Vector(v) => nums(v),
        Point::Index(i) => Value::from(*i),
    }
}

pub fn space_json(space: &FiberSpace) -> Value {
    let mut map = serde_json::Map::new();
    match space.kind() {
        FiberKind::Real1D => {
            map.insert("kind".into(), "real1d".into());
        }
        FiberKind::Euclidean { dim } => {
            map.insert("kind".into(), "euclidean".into());
            map.insert("dim".into(), Value::from(*dim));
        }
        FiberKind::Matrix { size, distances } => {
            map.insert("kind".into(), "matrix".into());
            let rows: Vec<Value> = distances.chunks(*size).map(nums).collect();
            map.insert("distances".into(), Value::Array(rows));
        }
    }
    map.insert("y0".into(), point_json(space.basepoint()));
    Value::Object(map)
}

fn fiber_json(measure: &DiscreteMeasure) -> Value {
    serde_json::json!({
        "points": measure.points().iter().map(point_json).collect::<Vec<_>>(),
        "weights": nums(measure.weights()),
    })
}

/// The fibered document of `m`; parsing it gives back `m`.
pub fn fibered_json(m: &FiberedMeasure) -> Value {
    let mut map = serde_json::Map::new();
    map.insert(
        "base".into(),
        serde_json::json!({"atoms": m.base().labels(), "weights": nums(m.base().weights())}),
    );
    map.insert("fiber_space".into(), space_json(m.space()));
    map.insert("fibers".into(), Value::Array(m.fibers().iter().map(fiber_json).collect()));
    if m.chart_id() != DEFAULT_CHART {
        map.insert("chart_id".into(), m.chart_id().into());
    }
    Value::Object(map)
}

pub fn discrete_json(space: &FiberSpace, measure: &DiscreteMeasure) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("fiber_space".into(), space_json(space));
    let Value::Object(fiber) = fiber_json(measure) else { unreachable!() };
    map.extend(fiber);
    Value::Object(map)
}
