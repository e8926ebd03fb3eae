use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, CoreResult};
use crate::metric::CoverDescriptor;
use crate::point::Point;
use crate::spaces::RegularityPoint;

/// A box in R^n with the max-norm metric.
#[derive(Clone, Debug)]
pub struct MaxNorm {
    pub bounds: Vec<(f64, f64)>,
}

impl MaxNorm {
    pub fn new(bounds: Vec<(f64, f64)>) -> CoreResult<Self> {
        if bounds.is_empty() || bounds.iter().any(|(a, b)| !(a < b)) {
            return Err(CoreError::InvalidConfig(
                "max-norm bounds must be nonempty with lo < hi per axis".into(),
            ));
        }
        Ok(MaxNorm { bounds })
    }

    pub fn unit(dim: usize) -> Self {
        MaxNorm {
            bounds: vec![(-1.0, 1.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn coords_of<'a>(&self, p: &'a Point) -> CoreResult<&'a [f64]> {
        match p.as_coords() {
            Some(xs) if xs.len() == self.dim() => Ok(xs),
            _ => Err(CoreError::mismatch(
                "max_norm",
                format!("expected {} coordinates", self.dim()),
            )),
        }
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        let xs = self.coords_of(p)?;
        for (x, (lo, hi)) in xs.iter().zip(&self.bounds) {
            if *x < lo - 1e-9 || *x > hi + 1e-9 {
                return Err(CoreError::mismatch(
                    "max_norm",
                    format!("{x} outside [{lo}, {hi}]"),
                ));
            }
        }
        Ok(())
    }

    pub fn distance(&self, a: &Point, b: &Point) -> CoreResult<f64> {
        let (xa, xb) = (self.coords_of(a)?, self.coords_of(b)?);
        Ok(xa
            .iter()
            .zip(xb)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max))
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        Point::coords(
            self.bounds
                .iter()
                .map(|(lo, hi)| rng.gen_range(*lo..=*hi))
                .collect(),
        )
    }

    pub fn sample_in_ball(&self, c: &Point, r: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
        let xs = c.as_coords()?;
        let mut out = Vec::with_capacity(xs.len());
        for (x, (lo, hi)) in xs.iter().zip(&self.bounds) {
            let a = (x - r).max(*lo);
            let b = (x + r).min(*hi);
            if a > b {
                return None;
            }
            out.push(rng.gen_range(a..=b));
        }
        Some(Point::coords(out))
    }

    pub fn probes(&self) -> Vec<Point> {
        let n = self.dim();
        let mut out = Vec::new();
        let center: Vec<f64> = self.bounds.iter().map(|(a, b)| 0.5 * (a + b)).collect();
        out.push(Point::coords(center.clone()));
        if n <= 4 {
            for mask in 0..(1u32 << n) {
                let corner: Vec<f64> = self
                    .bounds
                    .iter()
                    .enumerate()
                    .map(|(i, (a, b))| if mask >> i & 1 == 1 { *b } else { *a })
                    .collect();
                out.push(Point::coords(corner));
            }
        } else {
            for i in 0..n {
                let mut p = center.clone();
                p[i] = self.bounds[i].0;
                out.push(Point::coords(p.clone()));
                p[i] = self.bounds[i].1;
                out.push(Point::coords(p));
            }
        }
        out
    }

    pub fn diameter_bound(&self) -> f64 {
        self.bounds
            .iter()
            .map(|(a, b)| b - a)
            .fold(0.0, f64::max)
    }

    pub fn cover(&self, pts: &[Point]) -> CoreResult<CoverDescriptor> {
        let (lo, hi) = self.bounding_box(pts)?;
        Ok(CoverDescriptor::Box { lo, hi })
    }

    fn bounding_box(&self, pts: &[Point]) -> CoreResult<(Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for p in pts {
            for (i, x) in self.coords_of(p)?.iter().enumerate() {
                lo[i] = lo[i].min(*x);
                hi[i] = hi[i].max(*x);
            }
        }
        Ok((lo, hi))
    }

    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        let (lo, hi) = self.bounding_box(pts)?;
        Ok(Point::coords(
            lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect(),
        ))
    }

    /// Box-lens midpoint. Only `k <= 1` admits a covering ratio below 1 in
    /// dimension two and higher: for `k > 1` the lens keeps a full side of
    /// length `2(1+mu)r` along the non-separated axes.
    pub fn regularity_point(
        &self,
        x: &Point,
        y: &Point,
        r: f64,
        k: f64,
        mu: f64,
    ) -> CoreResult<RegularityPoint> {
        if self.dim() >= 2 && k > 1.0 + 1e-12 {
            return Err(CoreError::OracleRefused(format!(
                "max-norm lens has no covering guarantee for k = {k} > 1"
            )));
        }
        let r1 = (1.0 + mu) * r;
        let r2 = k * (1.0 + mu) * r;
        let (xs, ys) = (self.coords_of(x)?, self.coords_of(y)?);
        let mut z = Vec::with_capacity(xs.len());
        let mut half_side: f64 = 0.0;
        for ((xi, yi), (lo, hi)) in xs.iter().zip(ys).zip(&self.bounds) {
            let a = (xi - r1).max(yi - r2).max(*lo);
            let b = (xi + r1).min(yi + r2).min(*hi);
            if a > b {
                // empty lens: vacuous containment
                return Ok(RegularityPoint {
                    z: x.clone(),
                    alpha: 0.0,
                });
            }
            z.push(0.5 * (a + b));
            half_side = half_side.max(0.5 * (b - a));
        }
        Ok(RegularityPoint {
            z: Point::coords(z),
            alpha: half_side / r,
        })
    }

    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        let (Some(xs), Some(ys)) = (x.as_coords(), y.as_coords()) else {
            return Vec::new();
        };
        let n = self.dim();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for ((xi, yi), (blo, bhi)) in xs.iter().zip(ys).zip(&self.bounds) {
            let a = (xi - r1).max(yi - r2).max(*blo);
            let b = (xi + r1).min(yi + r2).min(*bhi);
            if a > b {
                return Vec::new();
            }
            lo.push(a);
            hi.push(b);
        }
        let mut out = Vec::new();
        if n <= 4 {
            for mask in 0..(1u32 << n) {
                let corner: Vec<f64> = (0..n)
                    .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                    .collect();
                out.push(Point::coords(corner));
            }
        } else {
            let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
            for i in 0..n {
                let mut p = mid.clone();
                p[i] = lo[i];
                out.push(Point::coords(p.clone()));
                p[i] = hi[i];
                out.push(Point::coords(p));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_is_max_coordinate_gap() {
        let s = MaxNorm::new(vec![(0.0, 4.0), (0.0, 4.0)]).unwrap();
        let a = Point::coords(vec![0.0, 0.0]);
        let b = Point::coords(vec![2.0, 1.0]);
        assert_eq!(s.distance(&a, &b).unwrap(), 2.0);
    }

    #[test]
    fn refuses_regularity_above_one() {
        let s = MaxNorm::unit(2);
        let x = Point::coords(vec![0.0, 0.0]);
        let y = Point::coords(vec![0.5, 0.0]);
        assert!(s.regularity_point(&x, &y, 0.5, 1.1, 0.05).is_err());
        assert!(s.regularity_point(&x, &y, 0.5, 1.0, 0.05).is_ok());
    }
}
