use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, CoreResult};
use crate::metric::CoverDescriptor;
use crate::point::Point;
use crate::spaces::RegularityPoint;

/// A closed real interval `[lo, hi]` with the usual metric.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> CoreResult<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CoreError::InvalidConfig(format!(
                "interval endpoints must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    fn scalar_of(&self, p: &Point) -> CoreResult<f64> {
        p.as_scalar()
            .ok_or_else(|| CoreError::mismatch("interval", format!("expected scalar, got {p:?}")))
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        let x = self.scalar_of(p)?;
        if x < self.lo - 1e-9 || x > self.hi + 1e-9 {
            return Err(CoreError::mismatch(
                "interval",
                format!("{x} outside [{}, {}]", self.lo, self.hi),
            ));
        }
        Ok(())
    }

    pub fn distance(&self, a: &Point, b: &Point) -> CoreResult<f64> {
        Ok((self.scalar_of(a)? - self.scalar_of(b)?).abs())
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        Point::scalar(rng.gen_range(self.lo..=self.hi))
    }

    pub fn sample_in_ball(&self, c: &Point, r: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
        let x = c.as_scalar()?;
        let lo = (x - r).max(self.lo);
        let hi = (x + r).min(self.hi);
        (lo <= hi).then(|| Point::scalar(rng.gen_range(lo..=hi)))
    }

    pub fn probes(&self) -> Vec<Point> {
        let w = self.hi - self.lo;
        let values = [
            self.hi,
            self.lo + 0.5 * w,
            self.lo,
            self.hi - 1e-3 * w,
            self.hi - 1e-6 * w,
        ];
        let mut out = Vec::with_capacity(10);
        for v in values {
            out.push(Point::rational_scalar(v));
            out.push(Point::scalar(v));
        }
        out
    }

    pub fn cover(&self, pts: &[Point]) -> CoreResult<CoverDescriptor> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in pts {
            let x = self.scalar_of(p)?;
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Ok(CoverDescriptor::Interval { lo, hi })
    }

    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in pts {
            let x = self.scalar_of(p)?;
            lo = lo.min(x);
            hi = hi.max(x);
        }
        Ok(Point::scalar(0.5 * (lo + hi)))
    }

    /// Midpoint of the clipped lens; the covering ratio for the worst
    /// admissible separation is `(k(1+mu) + 2mu)/2`.
    pub fn regularity_point(
        &self,
        x: &Point,
        y: &Point,
        r: f64,
        k: f64,
        mu: f64,
    ) -> CoreResult<RegularityPoint> {
        let worst = (k * (1.0 + mu) + 2.0 * mu) / 2.0;
        if worst >= 1.0 - 1e-9 {
            return Err(CoreError::OracleRefused(format!(
                "interval lens ratio {worst} >= 1 at k={k}, mu={mu}"
            )));
        }
        let xv = self.scalar_of(x)?;
        let yv = self.scalar_of(y)?;
        let r1 = (1.0 + mu) * r;
        let r2 = k * (1.0 + mu) * r;
        let lo = (xv - r1).max(yv - r2).max(self.lo);
        let hi = (xv + r1).min(yv + r2).min(self.hi);
        let (z, alpha) = if lo > hi {
            // empty lens: containment is vacuous
            (0.5 * (xv + yv), 0.0)
        } else {
            (0.5 * (lo + hi), (hi - lo) / (2.0 * r))
        };
        Ok(RegularityPoint {
            z: Point::scalar(z.clamp(self.lo, self.hi)),
            alpha,
        })
    }

    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        let (Some(xv), Some(yv)) = (x.as_scalar(), y.as_scalar()) else {
            return Vec::new();
        };
        let lo = (xv - r1).max(yv - r2).max(self.lo);
        let hi = (xv + r1).min(yv + r2).min(self.hi);
        if lo > hi {
            return Vec::new();
        }
        vec![Point::scalar(lo), Point::scalar(hi)]
    }
}
