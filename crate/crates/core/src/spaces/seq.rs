use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, CoreResult};
use crate::metric::CoverDescriptor;
use crate::point::Point;

/// Eventually constant real sequences under the sup metric: the minimal
/// sequence model closed under head insertion. `value_lo..value_hi` bounds
/// the sampler only; iterations may leave the box.
#[derive(Clone, Debug)]
pub struct SeqSpace {
    pub value_lo: f64,
    pub value_hi: f64,
    pub max_prefix: usize,
}

impl SeqSpace {
    pub fn new(value_lo: f64, value_hi: f64, max_prefix: usize) -> CoreResult<Self> {
        if !(value_lo < value_hi) {
            return Err(CoreError::InvalidConfig(
                "seq space needs value_lo < value_hi".into(),
            ));
        }
        Ok(SeqSpace {
            value_lo,
            value_hi,
            max_prefix,
        })
    }

    fn parts_of<'a>(&self, p: &'a Point) -> CoreResult<(&'a [f64], f64)> {
        match p {
            Point::Seq { prefix, tail } => Ok((prefix, *tail)),
            _ => Err(CoreError::mismatch("seq", "expected a sequence point".to_string())),
        }
    }

    pub fn check_point(&self, p: &Point) -> CoreResult<()> {
        let (prefix, tail) = self.parts_of(p)?;
        if prefix.iter().any(|v| !v.is_finite()) || !tail.is_finite() {
            return Err(CoreError::mismatch("seq", "non-finite entries".to_string()));
        }
        Ok(())
    }

    pub fn coord(p: &Point, i: usize) -> f64 {
        match p {
            Point::Seq { prefix, tail } => prefix.get(i).copied().unwrap_or(*tail),
            _ => f64::NAN,
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> CoreResult<f64> {
        let (pa, ta) = self.parts_of(a)?;
        let (pb, tb) = self.parts_of(b)?;
        let mut d = (ta - tb).abs();
        for i in 0..pa.len().max(pb.len()) {
            let va = pa.get(i).copied().unwrap_or(ta);
            let vb = pb.get(i).copied().unwrap_or(tb);
            d = d.max((va - vb).abs());
        }
        Ok(d)
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        let len = rng.gen_range(0..=self.max_prefix);
        let prefix = (0..len)
            .map(|_| rng.gen_range(self.value_lo..=self.value_hi))
            .collect();
        Point::seq(prefix, rng.gen_range(self.value_lo..=self.value_hi))
    }

    pub fn sample_in_ball(&self, c: &Point, r: f64, rng: &mut ChaCha8Rng) -> Option<Point> {
        let (prefix, tail) = match c {
            Point::Seq { prefix, tail } => (prefix, *tail),
            _ => return None,
        };
        let new_prefix: Vec<f64> = prefix
            .iter()
            .map(|v| rng.gen_range((v - r)..=(v + r)))
            .collect();
        let new_tail = rng.gen_range((tail - r)..=(tail + r));
        Some(Point::seq(new_prefix, new_tail))
    }

    pub fn probes(&self) -> Vec<Point> {
        vec![
            Point::seq(vec![], 0.0),
            Point::seq(vec![1.0], 0.0),
            Point::seq(vec![1.0, 1.0], 0.0),
            Point::seq(vec![], 1.0),
            Point::seq(vec![0.5, -0.5], 0.25),
        ]
    }

    pub fn diameter_bound(&self) -> f64 {
        self.value_hi - self.value_lo
    }

    pub fn cover(&self, pts: &[Point]) -> CoreResult<CoverDescriptor> {
        let max_len = pts
            .iter()
            .map(|p| match p {
                Point::Seq { prefix, .. } => prefix.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        for p in pts {
            self.check_point(p)?;
        }
        let mut lo = Vec::with_capacity(max_len);
        let mut hi = Vec::with_capacity(max_len);
        for i in 0..max_len {
            let vals = pts.iter().map(|p| Self::coord(p, i));
            lo.push(vals.clone().fold(f64::INFINITY, f64::min));
            hi.push(vals.fold(f64::NEG_INFINITY, f64::max));
        }
        let tails = pts.iter().map(|p| match p {
            Point::Seq { tail, .. } => *tail,
            _ => f64::NAN,
        });
        let tail_lo = tails.clone().fold(f64::INFINITY, f64::min);
        let tail_hi = tails.fold(f64::NEG_INFINITY, f64::max);
        Ok(CoverDescriptor::SeqBox {
            lo,
            hi,
            tail_lo,
            tail_hi,
        })
    }

    /// Radius-minimal center, selected at the lexicographic lower extreme
    /// of the minimizer box. Coordinatewise the minimizers at radius
    /// R = (max gap)/2 form the box `[max_i - R, min_i + R]`; this oracle
    /// canonically returns every lower endpoint (including the tail), which
    /// is the selection rule the orbit-center solver inherits on this
    /// space. Radius is exactly half the largest coordinate gap.
    pub fn center(&self, pts: &[Point]) -> CoreResult<Point> {
        for p in pts {
            self.check_point(p)?;
        }
        let max_len = pts
            .iter()
            .map(|p| match p {
                Point::Seq { prefix, .. } => prefix.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        let mut gap: f64 = 0.0;
        let mut maxes = Vec::with_capacity(max_len);
        for i in 0..max_len {
            let lo = pts
                .iter()
                .map(|p| Self::coord(p, i))
                .fold(f64::INFINITY, f64::min);
            let hi = pts
                .iter()
                .map(|p| Self::coord(p, i))
                .fold(f64::NEG_INFINITY, f64::max);
            gap = gap.max(hi - lo);
            maxes.push(hi);
        }
        let tail_lo = pts
            .iter()
            .map(|p| match p {
                Point::Seq { tail, .. } => *tail,
                _ => f64::NAN,
            })
            .fold(f64::INFINITY, f64::min);
        let tail_hi = pts
            .iter()
            .map(|p| match p {
                Point::Seq { tail, .. } => *tail,
                _ => f64::NAN,
            })
            .fold(f64::NEG_INFINITY, f64::max);
        gap = gap.max(tail_hi - tail_lo);
        let radius = 0.5 * gap;
        let tail = tail_hi - radius;
        let mut prefix: Vec<f64> = maxes.into_iter().map(|hi| hi - radius).collect();
        // trim entries that already equal the tail constant
        while prefix.last().is_some_and(|v| *v == tail) {
            prefix.pop();
        }
        Ok(Point::seq(prefix, tail))
    }

    pub fn lens_extremes(&self, x: &Point, y: &Point, r1: f64, r2: f64) -> Vec<Point> {
        let (Ok((px, tx)), Ok((py, ty))) = (self.parts_of(x), self.parts_of(y)) else {
            return Vec::new();
        };
        let len = px.len().max(py.len()) + 1;
        let mut lo = Vec::with_capacity(len);
        let mut hi = Vec::with_capacity(len);
        let mut widest = (0usize, f64::NEG_INFINITY);
        for i in 0..len {
            let cx = px.get(i).copied().unwrap_or(tx);
            let cy = py.get(i).copied().unwrap_or(ty);
            let a = (cx - r1).max(cy - r2);
            let b = (cx + r1).min(cy + r2);
            if a > b {
                return Vec::new();
            }
            if b - a > widest.1 {
                widest = (i, b - a);
            }
            lo.push(a);
            hi.push(b);
        }
        let tl = (tx - r1).max(ty - r2);
        let th = (tx + r1).min(ty + r2);
        if tl > th {
            return Vec::new();
        }
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let tmid = 0.5 * (tl + th);
        let mut u = mid.clone();
        let mut v = mid;
        u[widest.0] = hi[widest.0];
        v[widest.0] = lo[widest.0];
        vec![Point::seq(u, tmid), Point::seq(v, tmid)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn distance_ignores_prefix_padding() {
        let s = SeqSpace::new(-2.0, 2.0, 6).unwrap();
        let mut rng = rng_from(2);
        for _ in 0..1000 {
            let a = s.sample(&mut rng);
            let b = s.sample(&mut rng);
            let d = s.distance(&a, &b).unwrap();
            // pad a's prefix with its tail constant
            if let Point::Seq { prefix, tail } = &a {
                let mut padded = prefix.clone();
                padded.extend([*tail; 3]);
                let a2 = Point::seq(padded, *tail);
                assert_eq!(s.distance(&a2, &b).unwrap(), d);
            }
        }
    }

    #[test]
    fn center_is_radius_minimal_at_lower_extreme() {
        let s = SeqSpace::new(-4.0, 4.0, 8).unwrap();
        // heads of ones with growing run length, tail zero
        let pts: Vec<Point> = (2..=5).map(|n| Point::seq(vec![1.0; n], 0.0)).collect();
        let c = s.center(&pts).unwrap();
        let radius = pts
            .iter()
            .map(|p| s.distance(&c, p).unwrap())
            .fold(0.0, f64::max);
        // pairwise gaps are 1, so the optimal covering radius is 1/2
        assert!((radius - 0.5).abs() < 1e-12);
        if let Point::Seq { prefix, tail } = &c {
            assert_eq!(prefix.len(), 5);
            assert!(prefix.iter().all(|v| (*v - 0.5).abs() < 1e-12));
            assert!((*tail - (-0.5)).abs() < 1e-12);
        } else {
            panic!("center must be a sequence point");
        }
    }
}
