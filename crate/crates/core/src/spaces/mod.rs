//! Concrete bounded metric spaces.
//!
//! Every space provides a distance, a seeded uniform sampler, and a bounded
//! domain; covers, centers, and two-ball regularity oracles are optional and
//! reported through `CoreError::Unsupported` / `OracleRefused` when absent.

mod euclid;
mod interval;
mod lp;
mod maxnorm;
mod seq;
mod tree;

pub use euclid::{min_enclosing_ball, Euclidean};
pub use interval::Interval;
pub use lp::Lp;
pub use maxnorm::MaxNorm;
pub use seq::SeqSpace;
pub use tree::TreeSpace;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CoreError, CoreResult};
use crate::metric::CoverDescriptor;
use crate::point::Point;

/// Published constants used by the acceptance checks; `None` means no value
/// is tabulated for the space.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefConstants {
    pub kappa: Option<f64>,
    pub normal_coeff: Option<f64>,
}

/// Output of a two-ball regularity oracle: a covering center for the lens
/// `B(x,(1+mu)r) ∩ B(y,k(1+mu)r)` together with the covering ratio the
/// construction guarantees for this configuration.
#[derive(Clone, Debug)]
pub struct RegularityPoint {
    pub z: Point,
    pub alpha: f64,
}

#[derive(Clone, Debug)]
pub enum Space {
    Interval(Interval),
    MaxNorm(MaxNorm),
    Euclidean(Euclidean),
    Lp(Lp),
    Tree(TreeSpace),
    Seq(SeqSpace),
}

impl Space {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Interval(_) => "interval",
            Space::MaxNorm(_) => "max_norm",
            Space::Euclidean(_) => "euclidean",
            Space::Lp(_) => "lp",
            Space::Tree(_) => "tree",
            Space::Seq(_) => "seq",
        }
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        match self {
            Space::Interval(s) => s.check_point(p),
            Space::MaxNorm(s) => s.check_point(p),
            Space::Euclidean(s) => s.check_point(p),
            Space::Lp(s) => s.check_point(p),
            Space::Tree(s) => s.check_point(p),
            Space::Seq(s) => s.check_point(p),
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> CoreResult<f64> {
        match self {
            Space::Interval(s) => s.distance(a, b),
            Space::MaxNorm(s) => s.distance(a, b),
            Space::Euclidean(s) => s.distance(a, b),
            Space::Lp(s) => s.distance(a, b),
            Space::Tree(s) => s.distance(a, b),
            Space::Seq(s) => s.distance(a, b),
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        match self {
            Space::Interval(s) => s.sample(rng),
            Space::MaxNorm(s) => s.sample(rng),
            Space::Euclidean(s) => s.sample(rng),
            Space::Lp(s) => s.sample(rng),
            Space::Tree(s) => s.sample(rng),
            Space::Seq(s) => s.sample(rng),
        }
    }

    /// Sample a domain point of `B(center, r)`; `None` when rejection fails.
    pub fn sample_in_ball(
        &self,
        center: &Point,
        r: f64,
        rng: &mut ChaCha8Rng,
    ) -> Option<Point> {
        match self {
            Space::Interval(s) => s.sample_in_ball(center, r, rng),
            Space::MaxNorm(s) => s.sample_in_ball(center, r, rng),
            Space::Euclidean(s) => s.sample_in_ball(center, r, rng),
            Space::Lp(s) => s.sample_in_ball(center, r, rng),
            Space::Tree(s) => s.sample_in_ball(center, r, rng),
            Space::Seq(s) => s.sample_in_ball(center, r, rng),
        }
    }

    /// Deterministic structured points mixed into sampled pair families.
    pub fn probes(&self) -> Vec<Point> {
        match self {
            Space::Interval(s) => s.probes(),
            Space::MaxNorm(s) => s.probes(),
            Space::Euclidean(s) => s.probes(),
            Space::Lp(s) => s.probes(),
            Space::Tree(s) => s.probes(),
            Space::Seq(s) => s.probes(),
        }
    }

    pub fn diameter_bound(&self) -> f64 {
        match self {
            Space::Interval(s) => s.hi - s.lo,
            Space::MaxNorm(s) => s.diameter_bound(),
            Space::Euclidean(s) => 2.0 * s.radius,
            Space::Lp(s) => 2.0 * s.radius,
            Space::Tree(s) => s.diameter_bound(),
            Space::Seq(s) => s.diameter_bound(),
        }
    }

    pub fn reference_constants(&self) -> RefConstants {
        match self {
            Space::Interval(_) => RefConstants {
                kappa: Some(2.0),
                normal_coeff: Some(0.5),
            },
            Space::MaxNorm(s) => RefConstants {
                kappa: Some(if s.dim() >= 2 { 1.0 } else { 2.0 }),
                normal_coeff: Some(0.5),
            },
            Space::Euclidean(s) => {
                let n = s.dim as f64;
                RefConstants {
                    kappa: Some(std::f64::consts::SQRT_2),
                    normal_coeff: Some((n / (2.0 * (n + 1.0))).sqrt()),
                }
            }
            Space::Lp(s) => RefConstants {
                kappa: if (s.p - 2.0).abs() < 1e-12 {
                    Some(std::f64::consts::SQRT_2)
                } else {
                    None
                },
                normal_coeff: None,
            },
            Space::Tree(_) => RefConstants {
                kappa: Some(2.0),
                normal_coeff: Some(0.5),
            },
            Space::Seq(_) => RefConstants {
                kappa: Some(1.0),
                normal_coeff: Some(0.5),
            },
        }
    }

    pub fn cover(&self, pts: &[Point]) -> CoreResult<CoverDescriptor> {
        if pts.is_empty() {
            return Err(CoreError::EmptySet);
        }
        match self {
            Space::Interval(s) => s.cover(pts),
            Space::MaxNorm(s) => s.cover(pts),
            Space::Euclidean(s) => s.cover(pts),
            Space::Lp(_) => Err(CoreError::unsupported("lp", "admissible cover")),
            Space::Tree(s) => s.cover(pts),
            Space::Seq(s) => s.cover(pts),
        }
    }

    /// Center oracle: a point minimizing the farthest distance to `pts`,
    /// following each space's canonical selection rule.
    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        if pts.is_empty() {
            return Err(CoreError::EmptySet);
        }
        match self {
            Space::Interval(s) => s.center(pts),
            Space::MaxNorm(s) => s.center(pts),
            Space::Euclidean(s) => s.center(pts),
            Space::Lp(s) => s.center(pts),
            Space::Tree(s) => s.center(pts),
            Space::Seq(s) => s.center(pts),
        }
    }

    /// Two-ball regularity oracle for the lens
    /// `B(x,(1+mu)r) ∩ B(y,k(1+mu)r)` under the separation
    /// `d(x,y) >= (1-mu)r`. Refusal means the space offers no covering
    /// guarantee at this `k`.
    pub fn regularity_point(
        &self,
        x: &Point,
        y: &Point,
        r: f64,
        k: f64,
        mu: f64,
    ) -> CoreResult<RegularityPoint> {
        if r <= 0.0 {
            return Err(CoreError::Domain("regularity: r must be positive".into()));
        }
        if k < 1.0 {
            return Err(CoreError::Domain("regularity: k must be >= 1".into()));
        }
        if !(0.0 < mu && mu < 1.0) {
            return Err(CoreError::Domain("regularity: mu must lie in (0,1)".into()));
        }
        let d = self.distance(x, y)?;
        if d < (1.0 - mu) * r - 1e-12 {
            return Err(CoreError::Domain(format!(
                "regularity: separation {d} below (1-mu)r = {}",
                (1.0 - mu) * r
            )));
        }
        match self {
            Space::Interval(s) => s.regularity_point(x, y, r, k, mu),
            Space::MaxNorm(s) => s.regularity_point(x, y, r, k, mu),
            Space::Euclidean(s) => s.regularity_point(x, y, r, k, mu),
            Space::Lp(s) => s.regularity_point(x, y, r, k, mu),
            Space::Tree(s) => s.regularity_point(x, y, r, k, mu),
            Space::Seq(_) => Err(CoreError::OracleRefused(
                "seq space has no two-ball covering guarantee".into(),
            )),
        }
    }

    /// Worst-case covering ratio the oracle can promise at `(k, mu)`,
    /// independent of the configuration; `None` means refusal.
    pub fn regularity_alpha(&self, k: f64, mu: f64) -> Option<f64> {
        match self {
            Space::Interval(_) | Space::Tree(_) => {
                let a = (k * (1.0 + mu) + 2.0 * mu) / 2.0;
                (a < 1.0 - 1e-9).then_some(a)
            }
            Space::MaxNorm(s) => {
                if s.dim() == 1 {
                    let a = (k * (1.0 + mu) + 2.0 * mu) / 2.0;
                    return (a < 1.0 - 1e-9).then_some(a);
                }
                if k > 1.0 + 1e-12 {
                    return None;
                }
                let a = (k * (1.0 + mu)).max((k * (1.0 + mu) + 2.0 * mu) / 2.0);
                (a < 1.0 - 1e-9).then_some(a)
            }
            Space::Euclidean(_) => euclid::alpha_worst(k, mu),
            Space::Lp(s) => {
                if (s.p - 2.0).abs() < 1e-12 {
                    euclid::alpha_worst(k, mu)
                } else {
                    None
                }
            }
            Space::Seq(_) => None,
        }
    }

    /// Candidate extreme points of the lens `B(x,r1) ∩ B(y,r2)`, clipped to
    /// the domain and filtered by membership. Used to make escape detection
    /// and falsification deterministic instead of purely sampled.
    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        let candidates = match self {
            Space::Interval(s) => s.lens_extremes(x, y, r1, r2),
            Space::MaxNorm(s) => s.lens_extremes(x, y, r1, r2),
            Space::Euclidean(s) => s.lens_extremes(x, y, r1, r2),
            Space::Lp(s) => s.lens_extremes(x, y, r1, r2),
            Space::Tree(s) => s.lens_extremes(x, y, r1, r2),
            Space::Seq(s) => s.lens_extremes(x, y, r1, r2),
        };
        candidates
            .into_iter()
            .filter(|p| {
                self.check_point(p).is_ok()
                    && self.distance(p, x).map(|d| d <= r1 + 1e-9).unwrap_or(false)
                    && self.distance(p, y).map(|d| d <= r2 + 1e-9).unwrap_or(false)
            })
            .collect()
    }
}
