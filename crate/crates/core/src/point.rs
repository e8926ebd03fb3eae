use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::spaces::Space;

/// A point of one of the supported spaces.
///
/// Coordinate points carry a representation-class flag: maps that branch on
/// whether their argument is an exact rational read it instead of testing
/// floating-point values. Samplers produce `rational = false` (a uniformly
/// sampled real is irrational almost surely); explicit probe constructors
/// choose the flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    Coords {
        xs: Vec<f64>,
        #[serde(default)]
        rational: bool,
    },
    /// A point of a weighted tree: on edge `edge`, at `offset` from the
    /// edge's first endpoint.
    Tree { edge: usize, offset: f64 },
    /// An eventually constant sequence: explicit prefix, then `tail` forever.
    Seq { prefix: Vec<f64>, tail: f64 },
}

impl Point {
    pub fn coords(xs: Vec<f64>) -> Self {
        Point::Coords { xs, rational: false }
    }

    pub fn rational_coords(xs: Vec<f64>) -> Self {
        Point::Coords { xs, rational: true }
    }

    pub fn scalar(x: f64) -> Self {
        Point::coords(vec![x])
    }

    pub fn rational_scalar(x: f64) -> Self {
        Point::rational_coords(vec![x])
    }

    pub fn seq(prefix: Vec<f64>, tail: f64) -> Self {
        Point::Seq { prefix, tail }
    }

    pub fn tree(edge: usize, offset: f64) -> Self {
        Point::Tree { edge, offset }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Point::Coords { xs, .. } if xs.len() == 1 => Some(xs[0]),
            _ => None,
        }
    }

    pub fn as_coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords { xs, .. } => Some(xs),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Point::Coords { rational: true, .. })
    }

    /// Compact display used in witness columns.
    pub fn describe(&self) -> String {
        match self {
            Point::Coords { xs, rational } => {
                let body = xs
                    .iter()
                    .map(|v| format!("{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                if *rational {
                    format!("({body})q")
                } else {
                    format!("({body})")
                }
            }
            Point::Tree { edge, offset } => format!("edge{edge}@{offset}"),
            Point::Seq { prefix, tail } => {
                let body = prefix
                    .iter()
                    .map(|v| format!("{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                format!("[{body};{tail}...]")
            }
        }
    }
}

/// A nonempty finite list of points, all validated against one space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSet {
    pub space_kind: String,
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn new(space: &Space, points: Vec<Point>) -> CoreResult<Self> {
        if points.is_empty() {
            return Err(CoreError::EmptySet);
        }
        for p in &points {
            space.check_point(p)?;
        }
        Ok(PointSet {
            space_kind: space.kind_name().to_string(),
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl std::ops::Deref for PointSet {
    type Target = [Point];
    fn deref(&self) -> &[Point] {
        &self.points
    }
}
